#pragma once

// Independent re-evaluation of exclusion certificates.
//
// Numeric rules are recomputed at 400 bits with a fixed-precision type and
// boost::math's zeta and tgamma, sharing no code with the 200-bit evaluation
// in search.hpp (which sums Hurwitz zeta values and uses exact factorials).
// Exact rules are recomputed from exact zeta values and expansions.

#include "hmf/search.hpp"

#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/special_functions/zeta.hpp>
#include <boost/multiprecision/mpfr.hpp>

#include <map>
#include <string>

namespace hmf {

struct CertVerdict {
    bool confirmed = false;
    std::string detail;

    explicit operator bool() const { return confirmed; }
};

namespace certcheck {

using R = boost::multiprecision::number<boost::multiprecision::mpfr_float_backend<121>>; // > 400 bits

inline R pi() { return boost::math::constants::pi<R>(); }

inline R zeta(int k)
{
    static std::map<int, R> cache;
    auto it = cache.find(k);
    if (it == cache.end())
        it = cache.emplace(k, boost::math::zeta(R(k))).first;
    return it->second;
}

/// (2/pi) (D/4pi^2)^{k-1/2} Gamma(k)^2
inline R archimedean(std::int64_t D, int k)
{
    const R g = boost::math::tgamma(R(k));
    return 2 / pi() * pow(R(D) / (4 * pi() * pi()), R(k) - R(0.5)) * g * g;
}

inline R lower_uniform(std::int64_t D, int k) { return archimedean(D, k) * pow(6 / (pi() * pi()), 2); }
inline R upper_uniform(std::int64_t D, int k) { return archimedean(D, k) * pow(pi() * pi() / 6, 2); }
inline R lower_sharp(std::int64_t D, int k) { return archimedean(D, k) * zeta(4 * k) / (zeta(k) * zeta(k)); }
inline R upper_sharp(std::int64_t D, int k) { return archimedean(D, k) * zeta(k) * zeta(k); }

inline R p2(int e) { return pow(R(2), e); }

inline R class_bound(std::int64_t D)
{
    const R d(D);
    const R h = sqrt(d) * (log(d) / 2 + 1) / (2 * log((sqrt(d) + sqrt(d - 4)) / 2));
    const R hp = floor(2 * h);
    return hp < 2 ? R(2) : hp;
}

struct Sides {
    R lhs, rhs;
};

inline std::optional<Sides> numeric_sides(const ExclusionCertificate& c)
{
    const auto& t = c.triple;
    const std::int64_t D = t.D;
    const int k1 = t.k1, k2 = t.k2;
    if (c.rule == rules::kUnequalWeight) {
        const R r = lower_uniform(D, k1) / upper_uniform(D, k2);
        const R lhs = r > 1 ? R((1 - 1 / r) * lower_uniform(D, k1 + k2) / upper_uniform(D, k2)) : R(0);
        return Sides{lhs, R(1)};
    }
    if (c.rule == rules::kEqualWeightInert) {
        const R up = upper_sharp(D, k1);
        return Sides{pow(R(4), 2 - 2 * k1) * lower_sharp(D, 2 * k1) / (up * up), 1 - pow(R(4), -k1)};
    }
    if (c.rule == rules::kRamifiedSplit) {
        const R a = p2(k1) * sin(pi() / class_bound(D));
        return Sides{a * lower_sharp(D, 2 * k1) / upper_sharp(D, k1), p2(2 * k1 - 1) + p2(k1 - 1)};
    }
    if (c.rule == rules::kConstantTermSize)
        return Sides{lower_uniform(D, k1), R(4)};
    if (c.rule == rules::kRamifiedTwo)
        return Sides{p2(k2 - 1) * (p2(k1) - 1), 4 / lower_uniform(D, k1)};
    if (c.rule == rules::kSplitTwo)
        return Sides{4 / upper_uniform(D, k1), R(0)};
    if (c.rule == rules::kInertCoefficient) {
        const R lhs = pow(R(4), k2 - 1) * (pow(R(4), k1) - 1);
        if (D == 5) {
            // E_k1 at (2), (3) (both inert) and the different (norm 5): 1 + N^{k1-1}
            const R c2 = 1 + pow(R(4), k1 - 1), c3 = 1 + pow(R(9), k1 - 1), cd = 1 + pow(R(5), k1 - 1);
            const Rat z = zeta_special(*shared_field(5), k1);
            const R inv = R(4) * R(z.get_den().get_str()) / R(z.get_num().get_str());
            const R e = R(k2) - R(25) / 32;
            const R spread = abs(2 - c2) * 2 * pow(R(2), e) + 2 * pow(R(3), e) +
                             4 * pow(R(5), R(k2 - 1) / 2 + R(7) / 64);
            return Sides{lhs, inv * inv - inv * (c3 + 2 * cd) + abs(inv) * spread};
        }
        const R x = 4 / lower_uniform(D, k1);
        const R e = R(k2 - 1) + R(7) / 32;
        const R s3 = 1 + pow(R(3), k1 - 1);
        return Sides{lhs, x * x + x * ((3 + pow(R(4), k1 - 1)) * 2 * pow(R(2), e) + 5 * pow(R(3), e) + s3 * s3)};
    }
    return std::nullopt;
}

inline bool agrees(const std::string& stated, const R& value)
{
    R s;
    try {
        s = R(stated);
    } catch (...) {
        return false;
    }
    const R scale = abs(value) > 1 ? R(abs(value)) : R(1);
    return abs(s - value) <= scale * R("1e-35");
}

inline CertVerdict check_exact(const ExclusionCertificate& c, const CoeffNumber& lhs, const CoeffNumber& rhs)
{
    if (parse_coeff(c.lhs) != lhs || parse_coeff(c.rhs) != rhs)
        return {false, "stated sides " + c.lhs + ", " + c.rhs + " differ from recomputed " + lhs.str() + ", " + rhs.str()};
    if (c.holds == Holds::LessEqual) {
        if (!lhs.is_rational() || !rhs.is_rational())
            return {false, "ordering of irrational values"};
        if (lhs.rational() <= rhs.rational())
            return {false, "relation holds: " + lhs.str() + " <= " + rhs.str()};
        return {true, "exact: " + lhs.str() + " > " + rhs.str()};
    }
    const bool equal = lhs == rhs;
    if (c.holds == Holds::Equal ? equal : !equal)
        return {false, "relation holds exactly"};
    return {true, "exact: " + lhs.str() + (equal ? " == " : " != ") + rhs.str()};
}

inline const FieldContext& golden_field(const CandidateTriple& t)
{
    if (t.D != 5)
        throw DomainError("exact certificates are only issued for D=5");
    return *shared_field(5);
}

inline CertVerdict check_hecke(const ExclusionCertificate& c)
{
    if (!c.witness)
        return {false, "missing witness ideal"};
    const auto& t = c.triple;
    const FieldContext& ctx = golden_field(t);
    const std::int64_t bound = std::max<std::int64_t>(100, c.witness->norm());
    std::vector<EigenformRecord> hs;
    if (t.kind == PairKind::EisEis) {
        hs.push_back(eisenstein_record(ctx, t.k2, bound));
    } else {
        for (auto& r : eigenforms(ctx, t.k2, bound))
            if (std::find(c.forms.begin(), c.forms.end(), r.label) != c.forms.end())
                hs.push_back(std::move(r));
    }
    if (hs.empty() || hs.size() != std::max<std::size_t>(c.forms.size(), 1))
        return {false, "certificate forms do not match the eigenforms of weight " + std::to_string(t.k2)};
    const EigenformRecord f = eisenstein_record(ctx, t.k1, bound);
    std::string detail;
    for (std::size_t i = 0; i < hs.size(); ++i) {
        const Expansion p = product(f.expansion, hs[i].expansion, bound);
        const Expansion q = scale(CoeffNumber(1) / p.unit_coeff(), p);
        const EigenCheck chk = is_normalized_eigenform(q, t.k1 + t.k2, c.witness->norm());
        if (chk.ok || !chk.witness || !(*chk.witness == *c.witness))
            return {false, hs[i].label + ": no violation at the stated witness"};
        if (i == 0) {
            auto v = check_exact(c, chk.lhs, chk.rhs);
            if (!v)
                return v;
            detail = v.detail;
        }
    }
    return {true, detail + " at " + c.witness->str()};
}

} // namespace certcheck

/// Re-evaluates a certificate from its triple and rule alone and confirms the
/// stated sides and the direction of the violation.
inline CertVerdict recheck(const ExclusionCertificate& c)
{
    using namespace certcheck;
    const auto& t = c.triple;
    try {
        if (auto sides = numeric_sides(c)) {
            if (c.holds != Holds::LessEqual)
                return {false, "numeric rule with a non-inequality relation"};
            if (!agrees(c.lhs, sides->lhs) || !agrees(c.rhs, sides->rhs))
                return {false, "stated sides do not match the 400-bit re-evaluation"};
            const R margin = sides->rhs - sides->lhs;
            if (!(margin < -(abs(sides->rhs) + 1) * R("1e-100")))
                return {false, "inequality is not violated at 400 bits"};
            return {true, "400-bit margin " + margin.str(20, std::ios_base::scientific)};
        }
        if (c.rule == rules::kHeckeRelation || c.rule == rules::kZeroFirstCoefficient)
            return check_hecke(c);
        const FieldContext& ctx = golden_field(t);
        if (c.rule == rules::kConstantTermRelation) {
            auto [l, r] = constant_term_relation(ctx, t.k1, t.k2);
            return check_exact(c, CoeffNumber(l), CoeffNumber(r));
        }
        if (c.rule == rules::kInertRelation) {
            auto [l, r] = inert_relation(ctx, t.k1);
            return check_exact(c, CoeffNumber(l), CoeffNumber(r));
        }
        if (c.rule == rules::kConstantIntegrality) {
            const Rat q = 4 / zeta_special(ctx, t.k1);
            return check_exact(c, CoeffNumber(Rat(q.get_den())), CoeffNumber(1));
        }
        if (c.rule == rules::kEmptyCuspSpace) {
            const auto dim = cusp_subspace(monomial_basis(ctx, t.k2, 60)).size();
            return check_exact(c, CoeffNumber(1), CoeffNumber(static_cast<long>(dim)));
        }
        return {false, "no re-evaluator for rule " + c.rule};
    } catch (const std::exception& e) {
        return {false, std::string("re-evaluation failed: ") + e.what()};
    }
}

} // namespace hmf
