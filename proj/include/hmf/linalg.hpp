#pragma once

// Dense exact linear algebra over Q.

#include "hmf/arith.hpp"

#include <optional>
#include <vector>

namespace hmf {

using RatMatrix = std::vector<std::vector<Rat>>;

struct Echelon {
    RatMatrix rows;            // reduced row echelon form, zero rows dropped
    std::vector<std::size_t> pivots;
};

/// Reduced row echelon form of a row-major matrix.
inline Echelon rref(RatMatrix m)
{
    Echelon out;
    if (m.empty())
        return out;
    const std::size_t cols = m[0].size();
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < m.size(); ++c) {
        std::size_t piv = r;
        while (piv < m.size() && m[piv][c] == 0)
            ++piv;
        if (piv == m.size())
            continue;
        std::swap(m[r], m[piv]);
        const Rat inv = 1 / m[r][c];
        for (auto& v : m[r])
            v *= inv;
        for (std::size_t i = 0; i < m.size(); ++i) {
            if (i == r || m[i][c] == 0)
                continue;
            const Rat f = m[i][c];
            for (std::size_t j = c; j < cols; ++j)
                m[i][j] -= f * m[r][j];
        }
        out.pivots.push_back(c);
        ++r;
    }
    m.resize(r);
    out.rows = std::move(m);
    return out;
}

inline std::size_t rank(const RatMatrix& m) { return rref(m).pivots.size(); }

/// Basis of {x : A x = 0} for an r x n matrix A.
inline RatMatrix nullspace(const RatMatrix& a, std::size_t n)
{
    auto e = rref(a);
    std::vector<bool> is_pivot(n, false);
    for (auto p : e.pivots)
        is_pivot[p] = true;
    RatMatrix basis;
    for (std::size_t free = 0; free < n; ++free) {
        if (is_pivot[free])
            continue;
        std::vector<Rat> v(n, Rat(0));
        v[free] = 1;
        for (std::size_t i = 0; i < e.pivots.size(); ++i)
            v[e.pivots[i]] = -e.rows[i][free];
        basis.push_back(std::move(v));
    }
    return basis;
}

/// Unique solution of A x = b (A is r x n, r >= n); nullopt if inconsistent or underdetermined.
inline std::optional<std::vector<Rat>> solve_unique(const RatMatrix& a, const std::vector<Rat>& b)
{
    if (a.empty())
        return std::nullopt;
    const std::size_t n = a[0].size();
    RatMatrix aug = a;
    for (std::size_t i = 0; i < aug.size(); ++i)
        aug[i].push_back(b[i]);
    auto e = rref(aug);
    if (e.pivots.size() != n)
        return std::nullopt; // rank deficient or pivot in the b column
    for (std::size_t i = 0; i < n; ++i)
        if (e.pivots[i] != i)
            return std::nullopt;
    std::vector<Rat> x(n);
    for (std::size_t i = 0; i < n; ++i)
        x[i] = e.rows[i][n];
    return x;
}

} // namespace hmf
