#pragma once

// Special values zeta_F(1-k) of the Dedekind zeta function.
//
// The exact route restricts the Hilbert Eisenstein series E_k to the diagonal.
// With delta a totally positive generator of the different, f |_k diag(1, delta)
// is a form for SL_2(O), whose diagonal restriction is a level-one elliptic form
// of weight 2k with q^n-coefficient (up to a common scalar)
//
//     sum_{mu in O+, Tr(mu/delta) = n} c((mu), E_k)          (n >= 1)
//
// and constant term c(0, E_k) = zeta_F(1-k)/4. Matching the n >= 1 coefficients
// against a basis of M_2k(SL_2(Z)) pins the constant term exactly.
//
// The numeric route evaluates zeta(k) L(k, chi_D) at high precision and applies
// the functional equation; it shares nothing with the exact route.

#include "hmf/linalg.hpp"
#include "hmf/numeric.hpp"
#include "hmf/quadfield.hpp"

#include <map>
#include <mutex>
#include <utility>
#include <vector>

namespace hmf {

struct EllipticQExpansion {
    int weight = 0;
    std::vector<Rat> coeffs; // q^0 .. q^N
};

inline EllipticQExpansion elliptic_eisenstein(int k, std::size_t N)
{
    if (k < 4 || k % 2)
        throw DomainError("level-one Eisenstein series need even weight >= 4");
    EllipticQExpansion e{k, std::vector<Rat>(N + 1, Rat(0))};
    const Rat scale = Rat(-2 * k) / bernoulli(static_cast<std::size_t>(k));
    e.coeffs[0] = 1;
    for (std::size_t n = 1; n <= N; ++n) {
        Int sigma = 0;
        for (std::size_t m = 1; m <= n; ++m)
            if (n % m == 0)
                sigma += ipow(Int(static_cast<unsigned long>(m)), static_cast<unsigned long>(k - 1));
        e.coeffs[n] = scale * sigma;
    }
    return e;
}

inline EllipticQExpansion series_mul(const EllipticQExpansion& a, const EllipticQExpansion& b)
{
    const std::size_t N = std::min(a.coeffs.size(), b.coeffs.size());
    EllipticQExpansion out{a.weight + b.weight, std::vector<Rat>(N, Rat(0))};
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = 0; i + j < N; ++j)
            out.coeffs[i + j] += a.coeffs[i] * b.coeffs[j];
    return out;
}

/// E_4^a E_6^b with 4a + 6b = weight: a basis of M_weight(SL_2(Z)).
inline std::vector<EllipticQExpansion> level_one_basis(int weight, std::size_t N)
{
    std::vector<EllipticQExpansion> out;
    const auto e4 = elliptic_eisenstein(4, N), e6 = elliptic_eisenstein(6, N);
    EllipticQExpansion one{0, std::vector<Rat>(N + 1, Rat(0))};
    one.coeffs[0] = 1;
    for (int b = 0; 6 * b <= weight; ++b) {
        int rest = weight - 6 * b;
        if (rest % 4)
            continue;
        EllipticQExpansion m = one;
        for (int i = 0; i < rest / 4; ++i)
            m = series_mul(m, e4);
        for (int i = 0; i < b; ++i)
            m = series_mul(m, e6);
        m.weight = weight;
        out.push_back(std::move(m));
    }
    return out;
}

/// Totally positive mu in O with Tr(mu delta') = n D, i.e. Tr(mu/delta) = n.
inline std::vector<QuadElem> trace_slice(const FieldContext& ctx, long n)
{
    require_exact_engine(ctx);
    const QuadElem& delta = ctx.different_generator;
    const QuadElem delta_c = conj(ctx, delta);
    auto [d1, d2] = embed(ctx, delta);
    const long double target = static_cast<long double>(n) * ctx.D;
    std::vector<QuadElem> out;
    // mu delta' + mu' delta = nD with every term positive
    scan_positive_box(ctx, target / d2 * (1 + 1e-12L), target / d1 * (1 + 1e-12L), [&](std::int64_t x, std::int64_t y) {
        QuadElem mu{Rat(x), Rat(y)};
        if (trace(ctx, mul(ctx, mu, delta_c)) != n * ctx.D)
            return;
        if (is_totally_positive(ctx, mu))
            out.push_back(mu);
    });
    return out;
}

/// q^1..q^N coefficients of the diagonal restriction of E_k (index 0 unused).
inline std::vector<Rat> diagonal_restriction(const FieldContext& ctx, int k, std::size_t N)
{
    std::vector<Rat> r(N + 1, Rat(0));
    for (std::size_t n = 1; n <= N; ++n)
        for (auto& mu : trace_slice(ctx, static_cast<long>(n)))
            r[n] += divisor_power_sum(ctx, ideal_from_element(ctx, mu), static_cast<unsigned long>(k - 1));
    return r;
}

inline Rat zeta_special(const FieldContext& ctx, int k)
{
    require_exact_engine(ctx);
    if (k < 2 || k % 2)
        throw DomainError("zeta_special needs even k >= 2");
    static std::mutex mu;
    static std::map<std::pair<std::int64_t, int>, Rat> cache;
    {
        std::lock_guard lock(mu);
        if (auto it = cache.find({ctx.d, k}); it != cache.end())
            return it->second;
    }
    const int weight = 2 * k;
    const std::size_t dim = level_one_basis(weight, 1).size();
    const std::size_t N = dim + 3;
    const auto basis = level_one_basis(weight, N);
    const auto r = diagonal_restriction(ctx, k, N);
    RatMatrix a(N, std::vector<Rat>(dim));
    std::vector<Rat> rhs(N);
    for (std::size_t n = 1; n <= N; ++n) {
        for (std::size_t j = 0; j < dim; ++j)
            a[n - 1][j] = basis[j].coeffs[n];
        rhs[n - 1] = r[n];
    }
    auto x = solve_unique(a, rhs);
    if (!x)
        throw InternalError("diagonal restriction is not a level-one form (d=" + std::to_string(ctx.d) +
                            ", k=" + std::to_string(k) + ")");
    Rat constant = 0;
    for (std::size_t j = 0; j < dim; ++j)
        constant += (*x)[j] * basis[j].coeffs[0];
    Rat value = 4 * constant;
    value.canonicalize();
    std::lock_guard lock(mu);
    cache.emplace(std::make_pair(ctx.d, k), value);
    return value;
}

/// zeta_F(1-k) = (2/pi) (D/4pi^2)^{k-1/2} Gamma(k)^2 zeta(k) L(k, chi_D), k even.
/// The Dirichlet series is summed through Hurwitz zeta values, so the only
/// error is the Euler-Maclaurin remainder (far below 2^-200 for k <= 40).
inline Real zeta_special_numeric(std::int64_t D, int k)
{
    if (k < 2 || k % 2)
        throw DomainError("zeta_special_numeric needs even k >= 2");
    return functional_factor(D, k) * riemann_zeta(k) * quadratic_l_value(D, k);
}

inline Real zeta_special_numeric(const FieldContext& ctx, int k) { return zeta_special_numeric(ctx.D, k); }

struct LBoundPair {
    int k = 0;
    std::int64_t D = 0;
    Real lower;
    Real upper;
};

/// Character-independent bounds on |L(1-k, psi)|:
/// F zeta(4k)/zeta(k)^2 <= |L(1-k, psi)| <= F zeta(k)^2, F = functional_factor(D, k).
inline LBoundPair l_bounds(std::int64_t D, int k)
{
    if (k < 2)
        throw DomainError("l_bounds needs k >= 2");
    const Real f = functional_factor(D, k);
    const Real zk = riemann_zeta(k);
    return {k, D, f * riemann_zeta(4L * k) / (zk * zk), f * zk * zk};
}

/// The same bounds with the weight-uniform estimates 1 < zeta(k) <= pi^2/6 and
/// zeta(4k) > 1: F (6/pi^2)^2 <= |L(1-k, psi)| <= F (pi^2/6)^2. For D = 5 these
/// are the constants 72/pi^5 and pi^3/18 times (5/4pi^2)^{k-1/2} Gamma(k)^2.
inline LBoundPair l_bounds_uniform(std::int64_t D, int k)
{
    if (k < 2)
        throw DomainError("l_bounds needs k >= 2");
    const Real f = functional_factor(D, k);
    const Real pi = real_pi();
    const Real z2 = pi * pi / 6;
    return {k, D, f / (z2 * z2), f * z2 * z2};
}

} // namespace hmf
