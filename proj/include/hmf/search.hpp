#pragma once

// Classification of eigenform product identities g = f h.
//
// Two families of candidates. Eisenstein x Eisenstein: both factors have a
// constant term, so comparing constant terms and the coefficients at (2)
// forces exact relations between L-values; the size of L(1-k) then bounds the
// weights. Eisenstein x cusp form: 4/zeta_F(1-k1) must be an algebraic integer,
// which bounds k1, and the coefficient at (4) bounds k2.
//
// Every candidate outside the final list gets an ExclusionCertificate with the
// two sides of the violated (in)equality, so it can be re-checked independently.

#include "hmf/hecke.hpp"
#include "hmf/numeric.hpp"
#include "hmf/specialvalues.hpp"

#include <json.hpp>

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

namespace hmf {

enum class PairKind { EisEis, EisCusp };

inline std::string kind_name(PairKind k) { return k == PairKind::EisEis ? "EisEis" : "EisCusp"; }

inline PairKind parse_kind(const std::string& s)
{
    if (s == "EisEis")
        return PairKind::EisEis;
    if (s == "EisCusp")
        return PairKind::EisCusp;
    throw DomainError("unknown candidate kind " + s);
}

/// For EisCusp, k1 is the Eisenstein weight and k2 the cusp form weight.
struct CandidateTriple {
    std::int64_t D = 0;
    PairKind kind = PairKind::EisEis;
    int k1 = 0;
    int k2 = 0;

    auto key() const { return std::make_tuple(D, kind, k1, k2); }
    friend bool operator==(const CandidateTriple& a, const CandidateTriple& b) { return a.key() == b.key(); }
    friend bool operator<(const CandidateTriple& a, const CandidateTriple& b) { return a.key() < b.key(); }
};

/// The relation lhs ~ rhs an identity would force; the certificate shows it fails.
enum class Holds { LessEqual, Equal, NotEqual };

inline std::string holds_name(Holds h)
{
    switch (h) {
    case Holds::LessEqual:
        return "le";
    case Holds::Equal:
        return "eq";
    case Holds::NotEqual:
        return "ne";
    }
    return "";
}

inline Holds parse_holds(const std::string& s)
{
    if (s == "le")
        return Holds::LessEqual;
    if (s == "eq")
        return Holds::Equal;
    if (s == "ne")
        return Holds::NotEqual;
    throw DomainError("unknown relation " + s);
}

struct ExclusionCertificate {
    CandidateTriple triple;
    std::string rule;
    Holds holds = Holds::LessEqual;
    std::string lhs;    // rational "p/q", quadratic "u+v*sqrt(m)" or a decimal
    std::string rhs;
    std::string margin; // rhs - lhs
    std::vector<std::string> forms;
    std::optional<IdealHNF> witness;
};

namespace rules {
inline constexpr const char* kUnequalWeight = "unequal-weight-bound";
inline constexpr const char* kEqualWeightInert = "equal-weight-inert-bound";
inline constexpr const char* kRamifiedSplit = "ramified-split-bound";
inline constexpr const char* kConstantTermRelation = "constant-term-relation";
inline constexpr const char* kInertRelation = "inert-relation";
inline constexpr const char* kConstantTermSize = "constant-term-size";
inline constexpr const char* kConstantIntegrality = "eisenstein-constant-integrality";
inline constexpr const char* kInertCoefficient = "inert-coefficient-bound";
inline constexpr const char* kRamifiedTwo = "ramified-two-bound";
inline constexpr const char* kSplitTwo = "split-two-contradiction";
inline constexpr const char* kEmptyCuspSpace = "empty-cusp-space";
inline constexpr const char* kHeckeRelation = "hecke-relation";
inline constexpr const char* kZeroFirstCoefficient = "zero-first-coefficient";
} // namespace rules

// ---------------------------------------------------------------------------
// Numeric bounds

/// A numeric inequality lhs <= rhs that an identity would force.
struct BoundEval {
    Real lhs;
    Real rhs;

    /// lhs exceeds rhs by more than the evaluation error.
    bool violated() const
    {
        PrecisionScope scope;
        const Real tol = (abs(rhs) + 1) * pow(Real(2), Real(-120));
        return lhs - rhs > tol;
    }
};

inline std::string decimal(const Real& x) { return real_to_string(x, 40); }

/// Splitting of (2): -1 inert, 0 ramified, 1 split.
inline int two_type(std::int64_t D) { return kronecker(D, 2); }

/// Upper bound for h+: h+ <= 2h, h = sqrt(D) L(1, chi_D) / (2 log eps) with
/// L(1, chi_D) <= (log D)/2 + 1 and eps >= (sqrt(D) + sqrt(D - 4))/2.
inline Int narrow_class_bound(std::int64_t D)
{
    PrecisionScope scope;
    const Real d = D;
    const Real l1 = log(d) / 2 + 1;
    const Real eps = (sqrt(d) + sqrt(d - 4)) / 2;
    const Real h = sqrt(d) * l1 / (2 * log(eps));
    const Real hp = floor(2 * h);
    Int out(hp.convert_to<long>());
    return out < 2 ? Int(2) : out;
}

/// |L(1-k1)/L(1-k2)| > 1 (k1 > k2) and then, from
/// 1/L(1-k1) + 1/L(1-k2) = 1/L(1-k1-k2),
///   1 >= (1 - |L2/L1|) |Lg| / |L2| >= (1 - 1/r) lo(Lg) / up(L2),  r = lo(L1)/up(L2).
/// Uses the weight-uniform estimates; lhs is 0 while r <= 1.
inline BoundEval unequal_weight_bound(std::int64_t D, int k1, int k2)
{
    if (k1 <= k2)
        throw DomainError("unequal_weight_bound needs k1 > k2");
    PrecisionScope scope;
    const auto b1 = l_bounds_uniform(D, k1), b2 = l_bounds_uniform(D, k2), bg = l_bounds_uniform(D, k1 + k2);
    const Real r = b1.lower / b2.upper;
    Real lhs = 0;
    if (r > 1)
        lhs = (1 - 1 / r) * bg.lower / b2.upper;
    return {lhs, Real(1)};
}

/// (2) inert, k1 = k2 = k: 4^{2-2k} |L(1-2k)| / (|L(1-k)|^2) = 1 - 4^{-k}.
inline BoundEval equal_weight_inert_bound(std::int64_t D, int k)
{
    PrecisionScope scope;
    const auto bk = l_bounds(D, k), bg = l_bounds(D, 2 * k);
    const Real lhs = pow(Real(4), Real(2 - 2 * k)) * bg.lower / (bk.upper * bk.upper);
    return {lhs, 1 - pow(Real(4), Real(-k))};
}

/// (2) ramified or split, k1 = k2 = k: |B| / |L(1-2k)| = |A| / |L(1-k)| with
/// |B| <= 2^{2k-1} + 2^{k-1} and B != 0, so A != 0 and |A| >= 2^k sin(pi/h+).
inline BoundEval ramified_split_bound(std::int64_t D, int k)
{
    PrecisionScope scope;
    const auto bk = l_bounds(D, k), bg = l_bounds(D, 2 * k);
    const Real hmax = to_real(narrow_class_bound(D));
    const Real amin = pow(Real(2), Real(k)) * sin(real_pi() / hmax);
    const Real lhs = amin * bg.lower / bk.upper;
    return {lhs, pow(Real(2), Real(2 * k - 1)) + pow(Real(2), Real(k - 1))};
}

/// 4/L(1-k1) is a nonzero algebraic integer, and the bound holds for every
/// conjugate, so |L(1-k1)| <= 4 is necessary.
inline BoundEval constant_term_size(std::int64_t D, int k1)
{
    PrecisionScope scope;
    return {l_bounds_uniform(D, k1).lower, Real(4)};
}

/// (2) = p^2 ramified: 2^{k2-1} |1 - chi 2^{k1}| = |1/c0| <= 4/lo(L(1-k1)).
inline BoundEval ramified_two_bound(std::int64_t D, int k1, int k2)
{
    PrecisionScope scope;
    const Real lhs = pow(Real(2), Real(k2 - 1)) * (pow(Real(2), Real(k1)) - 1);
    return {lhs, 4 / l_bounds_uniform(D, k1).lower};
}

/// (2) = p p' split: the coefficient relations force 1/c0 = 0, but |1/c0| >= 4/up(L(1-k1)).
inline BoundEval split_two_contradiction(std::int64_t D, int k1)
{
    PrecisionScope scope;
    return {4 / l_bounds_uniform(D, k1).upper, Real(0)};
}

/// (2) inert, D != 5: 4^{k2-1}(4^{k1} - 1) = 1/c0^2 + c((2),h)(2 - c((2),f))/c0 - (c((3),h) + c((3),f))/c0,
/// bounded with |1/c0| <= 4/lo(L(1-k1)), |2 - c((2),f)| <= 3 + 4^{k1-1},
/// |c((3),f)| <= (1 + 3^{k1-1})^2 and the cuspidal coefficient bounds.
inline BoundEval inert_coefficient_bound_general(std::int64_t D, int k1, int k2)
{
    PrecisionScope scope;
    const Real x = 4 / l_bounds_uniform(D, k1).lower;
    const Real e = Real(k2 - 1) + Real(7) / 32;
    const Real c2h = 2 * pow(Real(2), e);
    const Real c3h = 5 * pow(Real(3), e);
    const Real c2f = 3 + pow(Real(4), Real(k1 - 1));
    const Real s3 = 1 + pow(Real(3), Real(k1 - 1));
    const Real c3f = s3 * s3;
    const Real lhs = pow(Real(4), Real(k2 - 1)) * (pow(Real(4), Real(k1)) - 1);
    return {lhs, x * x + x * (c2f * c2h + c3h + c3f)};
}

/// Exact Eisenstein data at (2), (3) and the different for the D = 5 bound.
struct EisensteinData {
    Rat c0, c2, c3, cd;
};

inline EisensteinData eisenstein_data(const FieldContext& ctx, int k1)
{
    const Expansion f = eisenstein(ctx, k1, 9);
    return {f.constant_term.rational(), f.coeff(ideal_from_element(ctx, QuadElem(2))).rational(),
            f.coeff(ideal_from_element(ctx, QuadElem(3))).rational(), f.coeff(different_ideal(ctx)).rational()};
}

/// D = 5: from the coefficients at (2) and (4),
///   4^{k2-1}(4^{k1} - 1) = 1/c0^2 + (1/c0)((2 - c((2),f)) c((2),h) - c((3),h) - 2 c(d,h) - c((3),f) - 2 c(d,f)),
/// bounded with |c((2),h)| <= 2*2^{k2-25/32}, |c((3),h)| <= 2*3^{k2-25/32}, |c(d,h)| <= 2*5^{(k2-1)/2+7/64}.
inline BoundEval inert_coefficient_bound_d5(const EisensteinData& f, int k1, int k2)
{
    PrecisionScope scope;
    const Real inv = to_real(1 / f.c0);
    const Real e = Real(k2) - Real(25) / 32;
    const Real c2h = 2 * pow(Real(2), e);
    const Real c3h = 2 * pow(Real(3), e);
    const Real cdh = 2 * pow(Real(5), Real(k2 - 1) / 2 + Real(7) / 64);
    const Real spread = to_real(Rat(abs(2 - f.c2))) * c2h + c3h + 2 * cdh;
    const Real lhs = pow(Real(4), Real(k2 - 1)) * (pow(Real(4), Real(k1)) - 1);
    const Real rhs = inv * inv - inv * to_real(Rat(f.c3 + 2 * f.cd)) + abs(inv) * spread;
    return {lhs, rhs};
}

/// Largest k2 <= limit where the D = 5 inequality holds; it must then fail for
/// every larger k2 up to the limit (the left side grows like 4^{k2}, the right
/// like 5^{k2/2}).
inline int cusp_case_k2_cutoff(const FieldContext& ctx, int k1, int limit = 200)
{
    const auto data = eisenstein_data(ctx, k1);
    int cutoff = 0;
    for (int k2 = 2; k2 <= limit; k2 += 2)
        if (!inert_coefficient_bound_d5(data, k1, k2).violated())
            cutoff = k2;
    return cutoff;
}

inline ExclusionCertificate bound_certificate(const CandidateTriple& t, const char* rule, const BoundEval& b)
{
    return {t, rule, Holds::LessEqual, decimal(b.lhs), decimal(b.rhs), decimal(b.rhs - b.lhs), {}, std::nullopt};
}

inline ExclusionCertificate exact_certificate(const CandidateTriple& t, const char* rule, Holds holds,
                                              const CoeffNumber& lhs, const CoeffNumber& rhs)
{
    return {t, rule, holds, lhs.str(), rhs.str(), (rhs - lhs).str(), {}, std::nullopt};
}

// ---------------------------------------------------------------------------
// Exact relations for D = 5 (any certified field)

/// 1/zeta_F(1-k1) + 1/zeta_F(1-k2) = 1/zeta_F(1-k1-k2).
inline std::pair<Rat, Rat> constant_term_relation(const FieldContext& ctx, int k1, int k2)
{
    Rat lhs = 1 / zeta_special(ctx, k1) + 1 / zeta_special(ctx, k2);
    Rat rhs = 1 / zeta_special(ctx, k1 + k2);
    lhs.canonicalize();
    rhs.canonicalize();
    return {lhs, rhs};
}

/// (2) inert, equal weights: (4^{2k-1} - 4^{k-1}) / zeta_F(1-2k) = 4 / zeta_F(1-k)^2.
inline std::pair<Rat, Rat> inert_relation(const FieldContext& ctx, int k)
{
    if (two_type(ctx.D) != -1)
        throw DomainError("inert relation needs (2) inert");
    const Int a = ipow(Int(4), static_cast<unsigned long>(2 * k - 1)) - ipow(Int(4), static_cast<unsigned long>(k - 1));
    const Rat z = zeta_special(ctx, k);
    Rat lhs = a / zeta_special(ctx, 2 * k);
    Rat rhs = 4 / (z * z);
    lhs.canonicalize();
    rhs.canonicalize();
    return {lhs, rhs};
}

/// k1 passing the size bound and with 4/zeta_F(1-k1) an integer.
inline std::vector<int> cusp_case_k1_filter(const FieldContext& ctx, int max_k1)
{
    std::vector<int> out;
    for (int k1 = 2; k1 <= max_k1; k1 += 2) {
        if (constant_term_size(ctx.D, k1).violated())
            continue;
        if (is_integer(4 / zeta_special(ctx, k1)))
            out.push_back(k1);
    }
    return out;
}


// ---------------------------------------------------------------------------
// Exact adjudication

class InconclusiveCheck : public DomainError {
public:
    using DomainError::DomainError;
};

struct IdentityCheck {
    bool pass = false;
    CoeffNumber scalar; // f h = scalar * g
    std::string g_label;
    EigenCheck failure;
};

inline EigenformRecord eisenstein_record(const FieldContext& ctx, int k, std::int64_t bound)
{
    Expansion e = eisenstein(ctx, k, bound);
    return {e, k, 1, "E" + std::to_string(k)};
}

/// Decides whether f h is a multiple of a normalized eigenform of weight k and,
/// if so, which one.
inline IdentityCheck verify_identity(int k, const EigenformRecord& f, const EigenformRecord& h, std::int64_t bound)
{
    constexpr std::int64_t kMinBound = 16; // reaches (4) = (2)^2
    if (bound < kMinBound)
        throw InconclusiveCheck("bound " + std::to_string(bound) + " is too small for a conclusive Hecke check (need >= " +
                                std::to_string(kMinBound) + ")");
    if (f.weight + h.weight != k)
        throw DomainError("weights " + std::to_string(f.weight) + " + " + std::to_string(h.weight) +
                          " do not add up to " + std::to_string(k));
    IdentityCheck out;
    const Expansion p = product(f.expansion, h.expansion, bound);
    if (p.unit_coeff().is_zero()) {
        out.failure.ok = false;
        out.failure.witness = IdealHNF{};
        out.failure.relation = "c(O, f h) = 0";
        return out;
    }
    const Expansion q = scale(CoeffNumber(1) / p.unit_coeff(), p);
    out.failure = is_normalized_eigenform(q, k, bound);
    if (!out.failure)
        return out;
    const FieldContext& ctx = *p.ctx;
    std::vector<EigenformRecord> basis{eisenstein_record(ctx, k, bound)};
    if (ctx.D == 5)
        for (auto& r : eigenforms(ctx, k, bound))
            basis.push_back(std::move(r));
    for (auto& g : basis) {
        if (g.expansion.constant_term == q.constant_term && g.expansion.coeffs == q.coeffs) {
            out.pass = true;
            out.scalar = p.unit_coeff();
            out.g_label = g.label;
            return out;
        }
    }
    throw InconclusiveCheck("f h satisfies the Hecke relations up to norm " + std::to_string(bound) +
                            " but matches no eigenform of weight " + std::to_string(k));
}

struct Identity {
    std::string g;
    CoeffNumber scalar;
    std::string f;
    std::string h;
    std::int64_t bound = 0;
};

struct IdentityReport {
    std::int64_t D = 0;
    int max_weight = 0;
    std::int64_t bound = 0;
    std::vector<Identity> identities;
    std::vector<ExclusionCertificate> exclusions;
};

namespace detail {

inline ExclusionCertificate hecke_certificate(const CandidateTriple& t, const EigenCheck& c,
                                              std::vector<std::string> forms)
{
    ExclusionCertificate cert;
    cert.triple = t;
    cert.forms = std::move(forms);
    cert.witness = c.witness;
    if (c.witness && c.witness->is_unit_ideal()) {
        cert.rule = rules::kZeroFirstCoefficient;
        cert.holds = Holds::NotEqual;
        cert.lhs = "0";
        cert.rhs = "0";
        cert.margin = "0";
        return cert;
    }
    cert.rule = rules::kHeckeRelation;
    cert.holds = Holds::Equal;
    cert.lhs = c.lhs.str();
    cert.rhs = c.rhs.str();
    cert.margin = (c.rhs - c.lhs).str();
    return cert;
}

} // namespace detail

/// Complete classification over weights 2..max_weight (D = 5).
inline IdentityReport classify(const FieldContext& ctx, int max_weight, std::int64_t bound)
{
    require_exact_engine(ctx);
    if (ctx.D != 5)
        throw DomainError("exact classification is implemented for D=5; use the bound scan for D=" +
                          std::to_string(ctx.D));
    IdentityReport rep{ctx.D, max_weight, bound, {}, {}};
    std::map<int, EigenformRecord> eis;
    auto eis_at = [&](int k) -> const EigenformRecord& {
        auto it = eis.find(k);
        if (it == eis.end())
            it = eis.emplace(k, eisenstein_record(ctx, k, bound)).first;
        return it->second;
    };
    auto exclude = [&](ExclusionCertificate c) { rep.exclusions.push_back(std::move(c)); };

    for (int k1 = 2; k1 + 2 <= max_weight; k1 += 2) {
        for (int k2 = 2; k2 <= k1 && k1 + k2 <= max_weight; k2 += 2) {
            const CandidateTriple t{ctx.D, PairKind::EisEis, k1, k2};
            const BoundEval b = k1 != k2 ? unequal_weight_bound(ctx.D, k1, k2) : equal_weight_inert_bound(ctx.D, k1);
            if (b.violated()) {
                exclude(bound_certificate(t, k1 != k2 ? rules::kUnequalWeight : rules::kEqualWeightInert, b));
                continue;
            }
            auto [l, r] = constant_term_relation(ctx, k1, k2);
            if (l != r) {
                exclude(exact_certificate(t, rules::kConstantTermRelation, Holds::Equal, CoeffNumber(l), CoeffNumber(r)));
                continue;
            }
            if (k1 == k2) {
                auto [il, ir] = inert_relation(ctx, k1);
                if (il != ir) {
                    exclude(exact_certificate(t, rules::kInertRelation, Holds::Equal, CoeffNumber(il), CoeffNumber(ir)));
                    continue;
                }
            }
            const auto& f = eis_at(k1);
            const auto& h = eis_at(k2);
            auto v = verify_identity(k1 + k2, f, h, bound);
            if (v.pass)
                rep.identities.push_back({v.g_label, v.scalar, f.label, h.label, bound});
            else
                exclude(detail::hecke_certificate(t, v.failure, {h.label}));
        }
    }

    std::map<int, int> cutoff;
    std::map<int, std::vector<EigenformRecord>> cusp;
    for (int k1 = 2; k1 + 2 <= max_weight; k1 += 2) {
        for (int k2 = 2; k1 + k2 <= max_weight; k2 += 2) {
            const CandidateTriple t{ctx.D, PairKind::EisCusp, k1, k2};
            const BoundEval size = constant_term_size(ctx.D, k1);
            if (size.violated()) {
                exclude(bound_certificate(t, rules::kConstantTermSize, size));
                continue;
            }
            const Rat inv = 4 / zeta_special(ctx, k1);
            if (!is_integer(inv)) {
                exclude(exact_certificate(t, rules::kConstantIntegrality, Holds::Equal, CoeffNumber(Rat(inv.get_den())),
                                          CoeffNumber(1)));
                continue;
            }
            if (!cutoff.count(k1))
                cutoff[k1] = cusp_case_k2_cutoff(ctx, k1);
            if (k2 > cutoff[k1]) {
                exclude(bound_certificate(t, rules::kInertCoefficient,
                                          inert_coefficient_bound_d5(eisenstein_data(ctx, k1), k1, k2)));
                continue;
            }
            if (!cusp.count(k2))
                cusp[k2] = eigenforms(ctx, k2, bound);
            const auto& forms = cusp[k2];
            if (forms.empty()) {
                exclude(exact_certificate(t, rules::kEmptyCuspSpace, Holds::LessEqual, CoeffNumber(1), CoeffNumber(0)));
                continue;
            }
            const auto& f = eis_at(k1);
            std::optional<EigenCheck> first_failure;
            std::vector<std::string> labels;
            bool any_pass = false;
            for (auto& h : forms) {
                labels.push_back(h.label);
                auto v = verify_identity(k1 + k2, f, h, bound);
                if (v.pass) {
                    any_pass = true;
                    rep.identities.push_back({v.g_label, v.scalar, f.label, h.label, bound});
                } else if (!first_failure) {
                    first_failure = v.failure;
                }
            }
            if (!any_pass)
                exclude(detail::hecke_certificate(t, *first_failure, labels));
        }
    }
    std::sort(rep.exclusions.begin(), rep.exclusions.end(),
              [](auto& a, auto& b) { return a.triple < b.triple; });
    return rep;
}

// ---------------------------------------------------------------------------
// Bound-only scan over discriminants

inline bool is_fundamental_discriminant(std::int64_t D)
{
    if (D <= 1)
        return false;
    if (D % 4 == 1)
        return is_squarefree(D);
    if (D % 4 != 0)
        return false;
    const std::int64_t m = D / 4;
    return (m % 4 == 2 || m % 4 == 3) && is_squarefree(m);
}

struct BoundsReport {
    std::int64_t dmin = 0;
    std::int64_t dmax = 0;
    int max_weight = 0;
    std::vector<ExclusionCertificate> exclusions;
    std::vector<CandidateTriple> unresolved;
};

/// Candidate triples of even weights with k1 + k2 <= max_weight, excluded by
/// the numeric bounds alone (any narrow class group, any characters).
inline BoundsReport bounds_scan(std::int64_t dmin, std::int64_t dmax, int max_weight)
{
    BoundsReport rep{dmin, dmax, max_weight, {}, {}};
    std::optional<std::map<int, EisensteinData>> d5;
    for (std::int64_t D = std::max<std::int64_t>(dmin, 5); D <= dmax; ++D) {
        if (!is_fundamental_discriminant(D))
            continue;
        const int two = two_type(D);
        for (int k1 = 2; k1 + 2 <= max_weight; k1 += 2)
            for (int k2 = 2; k2 <= k1 && k1 + k2 <= max_weight; k2 += 2) {
                const CandidateTriple t{D, PairKind::EisEis, k1, k2};
                const char* rule = k1 != k2 ? rules::kUnequalWeight
                                   : two == -1 ? rules::kEqualWeightInert
                                               : rules::kRamifiedSplit;
                const BoundEval b = k1 != k2 ? unequal_weight_bound(D, k1, k2)
                                    : two == -1 ? equal_weight_inert_bound(D, k1)
                                                : ramified_split_bound(D, k1);
                if (b.violated())
                    rep.exclusions.push_back(bound_certificate(t, rule, b));
                else
                    rep.unresolved.push_back(t);
            }
        for (int k1 = 2; k1 + 2 <= max_weight; k1 += 2)
            for (int k2 = 2; k1 + k2 <= max_weight; k2 += 2) {
                const CandidateTriple t{D, PairKind::EisCusp, k1, k2};
                const BoundEval size = constant_term_size(D, k1);
                if (size.violated()) {
                    rep.exclusions.push_back(bound_certificate(t, rules::kConstantTermSize, size));
                    continue;
                }
                const char* rule;
                BoundEval b;
                if (two == 1) {
                    rule = rules::kSplitTwo;
                    b = split_two_contradiction(D, k1);
                } else if (two == 0) {
                    rule = rules::kRamifiedTwo;
                    b = ramified_two_bound(D, k1, k2);
                } else if (D == 5) {
                    if (!d5)
                        d5.emplace();
                    if (!d5->count(k1))
                        d5->emplace(k1, eisenstein_data(*shared_field(5), k1));
                    rule = rules::kInertCoefficient;
                    b = inert_coefficient_bound_d5(d5->at(k1), k1, k2);
                } else {
                    rule = rules::kInertCoefficient;
                    b = inert_coefficient_bound_general(D, k1, k2);
                }
                if (b.violated())
                    rep.exclusions.push_back(bound_certificate(t, rule, b));
                else
                    rep.unresolved.push_back(t);
            }
    }
    return rep;
}

// ---------------------------------------------------------------------------
// JSON

inline nlohmann::json triple_to_json(const CandidateTriple& t)
{
    return {{"D", t.D}, {"kind", kind_name(t.kind)}, {"k1", t.k1}, {"k2", t.k2}};
}

inline nlohmann::json to_json(const ExclusionCertificate& c)
{
    nlohmann::json j = triple_to_json(c.triple);
    j["rule"] = c.rule;
    j["holds"] = holds_name(c.holds);
    j["lhs"] = c.lhs;
    j["rhs"] = c.rhs;
    j["margin"] = c.margin;
    if (!c.forms.empty())
        j["forms"] = c.forms;
    if (c.witness)
        j["witness"] = {c.witness->norm(), c.witness->a, c.witness->b, c.witness->c};
    return j;
}

inline ExclusionCertificate certificate_from_json(const nlohmann::json& j)
{
    ExclusionCertificate c;
    c.triple = {j.at("D").get<std::int64_t>(), parse_kind(j.at("kind").get<std::string>()), j.at("k1").get<int>(),
                j.at("k2").get<int>()};
    c.rule = j.at("rule").get<std::string>();
    c.holds = parse_holds(j.at("holds").get<std::string>());
    c.lhs = j.at("lhs").get<std::string>();
    c.rhs = j.at("rhs").get<std::string>();
    c.margin = j.value("margin", std::string());
    if (j.contains("forms"))
        c.forms = j.at("forms").get<std::vector<std::string>>();
    if (j.contains("witness")) {
        const auto& w = j.at("witness");
        c.witness = IdealHNF{w.at(1).get<std::int64_t>(), w.at(2).get<std::int64_t>(), w.at(3).get<std::int64_t>()};
    }
    return c;
}

inline nlohmann::json to_json(const IdentityReport& r)
{
    nlohmann::json ids = nlohmann::json::array(), ex = nlohmann::json::array();
    for (auto& i : r.identities)
        ids.push_back({{"g", i.g}, {"scalar", i.scalar.str()}, {"f", i.f}, {"h", i.h}, {"bound", i.bound}});
    for (auto& c : r.exclusions)
        ex.push_back(to_json(c));
    return {{"D", r.D}, {"max_weight", r.max_weight}, {"bound", r.bound}, {"identities", ids}, {"exclusions", ex}};
}

inline nlohmann::json to_json(const BoundsReport& r)
{
    nlohmann::json ex = nlohmann::json::array(), un = nlohmann::json::array();
    for (auto& c : r.exclusions)
        ex.push_back(to_json(c));
    for (auto& t : r.unresolved)
        un.push_back(triple_to_json(t));
    return {{"dmin", r.dmin}, {"dmax", r.dmax}, {"max_weight", r.max_weight}, {"exclusions", ex}, {"unresolved", un}};
}

} // namespace hmf
