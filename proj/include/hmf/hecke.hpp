#pragma once

// Hecke operators, eigenform extraction and eigenform tests.
//
// For a normalized eigenform of weight k the coefficients are multiplicative on
// coprime ideals and satisfy c(p^{e+1}) = c(p) c(p^e) - N(p)^{k-1} c(p^{e-1}).

#include "hmf/forms.hpp"

#include <cmath>
#include <optional>
#include <string>
#include <vector>

namespace hmf {

inline std::vector<PrimeIdeal> primes_up_to_norm(const FieldContext& ctx, std::int64_t bound)
{
    std::vector<PrimeIdeal> out;
    for (auto p : primes_up_to(bound))
        for (auto& P : primes_above(ctx, p))
            if (P.norm() <= bound)
                out.push_back(P);
    std::sort(out.begin(), out.end(), [](auto& l, auto& r) { return l.ideal.key() < r.ideal.key(); });
    return out;
}

/// c(m, T_p f) = c(mp, f) + N(p)^{k-1} c(m/p, f); the constant term scales by 1 + N(p)^{k-1}.
inline Expansion hecke_operator(const Expansion& f, const PrimeIdeal& P, std::int64_t bound)
{
    if (bound < 1 || bound * P.norm() > f.bound())
        throw DomainError("T_p needs bound * N(p) <= " + std::to_string(f.bound()) + ", got bound " +
                          std::to_string(bound) + " with N(p) = " + std::to_string(P.norm()));
    const FieldContext& ctx = *f.ctx;
    const CoeffNumber scale(Rat(ipow(Int(P.norm()), static_cast<unsigned long>(f.weight - 1))));
    auto idx = ideal_index(ctx, bound);
    std::vector<CoeffNumber> c;
    c.reserve(idx->ideals.size());
    for (auto& m : idx->ideals) {
        CoeffNumber v = f.coeff(ideal_mul(ctx, m, P.ideal));
        if (divides(P.ideal, m))
            v += scale * f.coeff(ideal_div(ctx, m, P.ideal));
        c.push_back(std::move(v));
    }
    return detail::make_expansion(ctx, f.weight, f.constant_term * (CoeffNumber(1) + scale), std::move(c), idx);
}

struct EigenCheck {
    bool ok = true;
    std::optional<IdealHNF> witness;
    std::string relation; // the violated relation, empty when ok
    CoeffNumber lhs, rhs; // both sides of the violated relation

    explicit operator bool() const { return ok; }
};

/// Checks the Hecke relations for f / c(O, f) at every ideal within the bound.
inline EigenCheck is_normalized_eigenform(const Expansion& f, int k, std::int64_t bound)
{
    if (bound > f.bound())
        throw DomainError("eigenform check bound exceeds the expansion's bound");
    const FieldContext& ctx = *f.ctx;
    EigenCheck out;
    const IdealHNF unit{};
    if (f.unit_coeff().is_zero()) {
        out.ok = false;
        out.witness = unit;
        out.relation = "c(O) = 0, so f is not a multiple of a normalized eigenform";
        return out;
    }
    const CoeffNumber c0 = f.unit_coeff();
    auto c = [&](const IdealHNF& m) { return f.coeff(m) / c0; };
    const auto n = f.index->prefix(bound);
    for (std::size_t i = 1; i < n; ++i) {
        const IdealHNF& m = f.index->ideals[i];
        const auto fac = factor_ideal(ctx, m);
        if (fac.size() == 1) {
            const auto& [P, e] = fac.front();
            if (e < 2)
                continue;
            const IdealHNF pe1 = ideal_pow(ctx, P.ideal, e - 1);
            const IdealHNF pe2 = ideal_pow(ctx, P.ideal, e - 2);
            const CoeffNumber np(Rat(ipow(Int(P.norm()), static_cast<unsigned long>(k - 1))));
            const CoeffNumber expected = c(P.ideal) * c(pe1) - np * c(pe2);
            if (c(m) != expected) {
                out.ok = false;
                out.lhs = c(m);
                out.rhs = expected;
                out.witness = m;
                out.relation = "c(" + m.str() + ") != c(p) c(p^" + std::to_string(e - 1) + ") - N(p)^" +
                               std::to_string(k - 1) + " c(p^" + std::to_string(e - 2) + ") for p = " + P.ideal.str();
                return out;
            }
            continue;
        }
        // m = a * (m/a) with a the full power of one prime
        const auto& [P, e] = fac.front();
        const IdealHNF a = ideal_pow(ctx, P.ideal, e);
        const IdealHNF rest = ideal_div(ctx, m, a);
        const CoeffNumber expected = c(a) * c(rest);
        if (c(m) != expected) {
            out.ok = false;
            out.lhs = c(m);
            out.rhs = expected;
            out.witness = m;
            out.relation = "c(" + m.str() + ") != c(" + a.str() + ") c(" + rest.str() + ")";
            return out;
        }
    }
    return out;
}

inline EigenCheck is_normalized_eigenform(const Expansion& f) { return is_normalized_eigenform(f, f.weight, f.bound()); }

struct EigenformRecord {
    Expansion expansion;
    int weight = 0;
    Int coeff_disc = 1;
    std::string label;
};

class UnsupportedDimension : public DomainError {
public:
    using DomainError::DomainError;
};

namespace detail {

/// Matrix of T_P on span(basis): T g_i = sum_j m[i][j] g_j, read off from the
/// coefficients of norm <= limit.
inline RatMatrix hecke_matrix(const std::vector<Expansion>& basis, const PrimeIdeal& P, std::int64_t limit)
{
    const std::size_t dim = basis.size();
    const std::size_t n = basis.front().index->prefix(limit);
    RatMatrix a(n, std::vector<Rat>(dim));
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t j = 0; j < dim; ++j)
            a[r][j] = basis[j].coeffs[r].rational();
    if (rank(a) != dim)
        throw InternalError("coefficient map of the cusp basis is not injective on ideals of norm <= " +
                            std::to_string(limit));
    RatMatrix m;
    for (auto& g : basis) {
        const Expansion tg = hecke_operator(g, P, limit);
        std::vector<Rat> rhs(n);
        for (std::size_t r = 0; r < n; ++r)
            rhs[r] = tg.coeffs[r].rational();
        auto x = solve_unique(a, rhs);
        if (!x)
            throw InternalError("cusp space is not stable under T_p");
        m.push_back(std::move(*x));
    }
    return m;
}

inline Expansion normalized(const Expansion& f)
{
    if (f.unit_coeff().is_zero())
        throw InternalError("eigenform with vanishing first coefficient");
    return scale(CoeffNumber(1) / f.unit_coeff(), f);
}

} // namespace detail

/// Normalized cuspidal eigenforms of weight k (D = 5), labelled h<k>, h<k>'.
/// With two forms, h<k> is the one with the larger T_(2) eigenvalue under
/// sqrt(m) > 0, and h<k>' its conjugate.
inline std::vector<EigenformRecord> eigenforms(const FieldContext& ctx, int k, std::int64_t bound)
{
    constexpr std::int64_t kRankNorm = 50;
    const std::int64_t limit = std::min(kRankNorm, bound / 4);
    if (limit < 4)
        throw DomainError("eigenform extraction needs bound >= 16");
    const auto cusp = cusp_subspace(monomial_basis(ctx, k, bound));
    const std::string label = "h" + std::to_string(k);
    std::vector<EigenformRecord> out;
    if (cusp.size() > 2)
        throw UnsupportedDimension("cusp space of weight " + std::to_string(k) + " has dimension " +
                                   std::to_string(cusp.size()) + "; only dimensions <= 2 are supported");
    if (cusp.size() == 1) {
        Expansion f = detail::normalized(cusp.front());
        out.push_back({f, k, f.coeff_disc, label});
    } else if (cusp.size() == 2) {
        const PrimeIdeal two = primes_above(ctx, 2).front();
        const RatMatrix m = detail::hecke_matrix(cusp, two, limit);
        // eigenvalues of m (row action v^T m = lambda v^T): x^2 - t x + n
        const Rat t = m[0][0] + m[1][1];
        const Rat n = m[0][0] * m[1][1] - m[0][1] * m[1][0];
        Rat disc = t * t - 4 * n;
        disc.canonicalize();
        if (disc <= 0)
            throw UnsupportedDimension("T_(2) does not split the weight " + std::to_string(k) + " cusp space");
        // sqrt(disc) = r sqrt(sf) with sf squarefree
        const Int num = disc.get_num() * disc.get_den();
        auto [s, sf] = square_split(num);
        const Rat r = Rat(s) / disc.get_den();
        for (int sgn : {1, -1}) {
            const CoeffNumber lambda(t / 2, sgn * r / 2, sf);
            CoeffNumber v0 = CoeffNumber(m[1][0]), v1 = lambda - CoeffNumber(m[0][0]);
            if (v0.is_zero() && v1.is_zero()) {
                v0 = lambda - CoeffNumber(m[1][1]);
                v1 = CoeffNumber(m[0][1]);
            }
            Expansion f = detail::normalized(add(scale(v0, cusp[0]), scale(v1, cusp[1])));
            out.push_back({f, k, f.coeff_disc, sgn > 0 ? label : label + "'"});
        }
    }
    for (auto& rec : out) {
        auto chk = is_normalized_eigenform(rec.expansion);
        if (!chk)
            throw InternalError("extracted form " + rec.label + " fails the Hecke relations: " + chk.relation);
    }
    return out;
}

struct RamanujanReport {
    bool ok = true;
    bool cuspidal = true;
    double max_ratio = 0; // max over primes and embeddings of |c(p)| / (2 N(p)^{(k-1)/2 + 7/64})
    std::optional<IdealHNF> worst;
    std::vector<IdealHNF> violations;
};

/// |c(p, f)| <= 2 N(p)^{(k-1)/2 + 7/64} at every prime within the bound, in both embeddings.
inline RamanujanReport ramanujan_check(const EigenformRecord& f, bool cuspidal)
{
    const Expansion& e = f.expansion;
    RamanujanReport rep;
    rep.cuspidal = cuspidal && e.is_cuspidal();
    const long double expo = (f.weight - 1) / 2.0L + 7.0L / 64;
    for (auto& P : primes_up_to_norm(*e.ctx, e.bound())) {
        const long double cap = 2 * std::pow(static_cast<long double>(P.norm()), expo);
        auto [a, b] = e.coeff(P.ideal).embeddings();
        const double ratio = static_cast<double>(std::max(std::fabs(a), std::fabs(b)) / cap);
        if (ratio > rep.max_ratio) {
            rep.max_ratio = ratio;
            rep.worst = P.ideal;
        }
        if (ratio > 1)
            rep.violations.push_back(P.ideal);
    }
    rep.ok = rep.cuspidal && rep.violations.empty();
    return rep;
}

} // namespace hmf
