#include "hmf/certcheck.hpp"
#include "hmf/search.hpp"

#include <gtest/gtest.h>

#include <set>

using namespace hmf;

namespace {

const IdentityReport& golden_report()
{
    static const IdentityReport rep = classify(*shared_field(5), 20, 200);
    return rep;
}

std::set<std::pair<int, int>> unequal_survivors(std::int64_t D, int max_weight)
{
    std::set<std::pair<int, int>> out;
    for (int k1 = 4; k1 + 2 <= max_weight; k1 += 2)
        for (int k2 = 2; k2 < k1 && k1 + k2 <= max_weight; k2 += 2)
            if (!unequal_weight_bound(D, k1, k2).violated())
                out.emplace(k1, k2);
    return out;
}

} // namespace

TEST(Search, ConstantTermRelation)
{
    const auto& ctx = *shared_field(5);
    auto [l22, r22] = constant_term_relation(ctx, 2, 2);
    EXPECT_EQ(l22, 60);
    EXPECT_EQ(r22, 60);
    auto [l44, r44] = constant_term_relation(ctx, 4, 4);
    EXPECT_EQ(l44, 120);
    EXPECT_EQ(r44, Rat(120, 361));
    auto [l42, r42] = constant_term_relation(ctx, 4, 2);
    EXPECT_EQ(l42, 90);
    EXPECT_EQ(r42, Rat(630, 67));
}

TEST(Search, InertRelation)
{
    const auto& ctx = *shared_field(5);
    auto [l2, r2] = inert_relation(ctx, 2);
    EXPECT_EQ(l2, 3600);
    EXPECT_EQ(r2, 3600);
    auto [l4, r4] = inert_relation(ctx, 4);
    EXPECT_EQ(l4, Rat((16384 - 64) * 120, 361));
    EXPECT_EQ(r4, 14400);
    auto [l6, r6] = inert_relation(ctx, 6);
    EXPECT_NE(l6, r6);
    EXPECT_THROW(inert_relation(*shared_field(17), 2), DomainError);
}

TEST(Search, UnequalWeightSurvivors)
{
    EXPECT_EQ(unequal_survivors(5, 20), (std::set<std::pair<int, int>>{{4, 2}, {6, 2}, {6, 4}}));
    EXPECT_TRUE(unequal_weight_bound(5, 8, 2).violated());
    EXPECT_THROW(unequal_weight_bound(5, 4, 4), DomainError);
}

TEST(Search, UnequalWeightBoundIsMonotoneInD)
{
    PrecisionScope scope;
    for (auto [k1, k2] : {std::pair{4, 2}, {6, 2}, {6, 4}, {8, 6}, {12, 2}}) {
        Real prev = -1;
        for (std::int64_t D = 5; D <= 400; ++D) {
            if (!is_fundamental_discriminant(D))
                continue;
            const Real lhs = unequal_weight_bound(D, k1, k2).lhs;
            EXPECT_GE(lhs, prev) << D << " " << k1 << " " << k2;
            prev = lhs;
        }
    }
}

TEST(Search, CuspCaseFilters)
{
    const auto& ctx = *shared_field(5);
    EXPECT_EQ(cusp_case_k1_filter(ctx, 18), (std::vector<int>{2, 4}));
    EXPECT_EQ(4 / zeta_special(ctx, 6), Rat(2520, 67));
    EXPECT_EQ(4 / zeta_special(ctx, 8), Rat(480, 361));
    EXPECT_EQ(cusp_case_k2_cutoff(ctx, 2), 10);
    EXPECT_EQ(cusp_case_k2_cutoff(ctx, 4), 8);
    EXPECT_TRUE(inert_coefficient_bound_d5(eisenstein_data(ctx, 2), 2, 12).violated());
    EXPECT_FALSE(inert_coefficient_bound_d5(eisenstein_data(ctx, 2), 2, 10).violated());
}

TEST(Search, InertCoefficientBoundAtRootFiveMatchesClosedForm)
{
    // k1 = 2: 15 * 4^{k2-1} <= 120^2 + 120 (2*3^{k2-25/32} + 5*2^{k2-25/32} + 4*5^{(k2-1)/2+7/64} - 22)
    PrecisionScope scope;
    const auto data = eisenstein_data(*shared_field(5), 2);
    for (int k2 = 2; k2 <= 30; k2 += 2) {
        const Real e = Real(k2) - Real(25) / 32;
        const Real rhs = 14400 + 120 * (2 * pow(Real(3), e) + 3 * 2 * pow(Real(2), e) +
                                        4 * pow(Real(5), Real(k2 - 1) / 2 + Real(7) / 64) - 22);
        const auto b = inert_coefficient_bound_d5(data, 2, k2);
        EXPECT_LT(abs(b.lhs - 15 * pow(Real(4), Real(k2 - 1))), Real("1e-40") * b.lhs);
        EXPECT_LT(abs(b.rhs - rhs), Real("1e-40") * rhs) << k2;
    }
}

TEST(Search, VerifyIdentityExamples)
{
    const auto& ctx = *shared_field(5);
    const auto e2 = eisenstein_record(ctx, 2, 200);
    const auto ee = verify_identity(4, e2, e2, 200);
    EXPECT_TRUE(ee.pass);
    EXPECT_EQ(ee.scalar, CoeffNumber(Rat(1, 60)));
    EXPECT_EQ(ee.g_label, "E4");

    const auto h6 = eigenforms(ctx, 6, 200).front();
    const auto eh = verify_identity(8, e2, h6, 200);
    EXPECT_TRUE(eh.pass);
    EXPECT_EQ(eh.scalar, CoeffNumber(Rat(1, 120)));
    EXPECT_EQ(eh.g_label, "h8");

    for (auto& h10 : eigenforms(ctx, 10, 200)) {
        const auto bad = verify_identity(12, e2, h10, 200);
        EXPECT_FALSE(bad.pass);
        ASSERT_TRUE(bad.failure.witness);
        EXPECT_EQ(bad.failure.witness->norm(), 16);
    }
    EXPECT_THROW(verify_identity(4, e2, e2, 15), InconclusiveCheck);
    EXPECT_THROW(verify_identity(6, e2, e2, 100), DomainError);
}

TEST(Search, IdentitiesHoldAtTwiceTheBound)
{
    const auto& ctx = *shared_field(5);
    const auto e2 = eisenstein(ctx, 2, 400);
    const auto e4 = eisenstein(ctx, 4, 400);
    const auto sq = scale(CoeffNumber(60), product(e2, e2));
    EXPECT_EQ(sq.constant_term, e4.constant_term);
    EXPECT_EQ(sq.coeffs, e4.coeffs);
    const auto h6 = eigenforms(ctx, 6, 400).front().expansion;
    const auto h8 = eigenforms(ctx, 8, 400).front().expansion;
    const auto p = scale(CoeffNumber(120), product(e2, h6));
    EXPECT_TRUE(p.is_cuspidal());
    EXPECT_EQ(p.coeffs, h8.coeffs);
}

TEST(Search, ClassificationIsCompleteWithTwoIdentities)
{
    const auto& rep = golden_report();
    ASSERT_EQ(rep.identities.size(), 2u);
    EXPECT_EQ(rep.identities[0].g, "E4");
    EXPECT_EQ(rep.identities[0].f, "E2");
    EXPECT_EQ(rep.identities[0].h, "E2");
    EXPECT_EQ(rep.identities[1].g, "h8");
    EXPECT_EQ(rep.identities[1].h, "h6");

    std::set<CandidateTriple> expected, seen;
    for (int k1 = 2; k1 + 2 <= 20; k1 += 2)
        for (int k2 = 2; k1 + k2 <= 20; k2 += 2) {
            if (k2 <= k1)
                expected.insert({5, PairKind::EisEis, k1, k2});
            expected.insert({5, PairKind::EisCusp, k1, k2});
        }
    for (auto& c : rep.exclusions)
        EXPECT_TRUE(seen.insert(c.triple).second) << "duplicate " << triple_to_json(c.triple).dump();
    EXPECT_TRUE(seen.insert({5, PairKind::EisEis, 2, 2}).second);
    EXPECT_TRUE(seen.insert({5, PairKind::EisCusp, 2, 6}).second);
    EXPECT_EQ(seen, expected);
}

TEST(Search, NamedExclusions)
{
    std::map<CandidateTriple, ExclusionCertificate> by;
    for (auto& c : golden_report().exclusions)
        by.emplace(c.triple, c);
    for (auto [k1, k2] : {std::pair{4, 4}, {4, 2}, {6, 2}, {6, 4}}) {
        auto& c = by.at({5, PairKind::EisEis, k1, k2});
        EXPECT_NE(c.rule, rules::kUnequalWeight) << k1 << " " << k2;
    }
    EXPECT_EQ(by.at({5, PairKind::EisEis, 8, 2}).rule, rules::kUnequalWeight);
    for (auto [k1, k2] : {std::pair{2, 8}, {4, 6}, {4, 8}, {2, 10}}) {
        auto& c = by.at({5, PairKind::EisCusp, k1, k2});
        EXPECT_TRUE(c.rule == rules::kHeckeRelation || c.rule == rules::kZeroFirstCoefficient) << c.rule;
    }
    EXPECT_EQ(by.at({5, PairKind::EisCusp, 2, 10}).forms, (std::vector<std::string>{"h10", "h10'"}));
    EXPECT_EQ(by.at({5, PairKind::EisCusp, 2, 12}).rule, rules::kInertCoefficient);
    EXPECT_EQ(by.at({5, PairKind::EisCusp, 6, 2}).rule, rules::kConstantIntegrality);
    EXPECT_EQ(by.at({5, PairKind::EisCusp, 2, 4}).rule, rules::kEmptyCuspSpace);
}

TEST(Search, EveryCertificateRechecks)
{
    for (auto& c : golden_report().exclusions) {
        const auto v = recheck(c);
        EXPECT_TRUE(v.confirmed) << to_json(c).dump() << ": " << v.detail;
    }
}

TEST(Search, TamperedCertificatesAreRejected)
{
    std::map<std::string, ExclusionCertificate> one_per_rule;
    for (auto& c : golden_report().exclusions)
        one_per_rule.emplace(c.rule, c);
    ASSERT_GE(one_per_rule.size(), 5u);
    for (auto& [rule, c] : one_per_rule) {
        ExclusionCertificate t = c;
        t.lhs = t.rhs;
        EXPECT_FALSE(recheck(t).confirmed) << rule;
        ExclusionCertificate moved = c;
        moved.triple.k2 += 2;
        const bool uses_k2 = rule == rules::kUnequalWeight || rule == rules::kConstantTermRelation ||
                             rule == rules::kInertCoefficient || rule == rules::kHeckeRelation;
        if (uses_k2) {
            EXPECT_FALSE(recheck(moved).confirmed) << rule;
        }
    }
    ExclusionCertificate unknown = golden_report().exclusions.front();
    unknown.rule = "made-up";
    EXPECT_FALSE(recheck(unknown).confirmed);
}

TEST(Search, CertificateJsonRoundTrip)
{
    for (auto& c : golden_report().exclusions) {
        const auto back = certificate_from_json(to_json(c));
        EXPECT_EQ(to_json(back), to_json(c));
    }
}

TEST(Search, BoundsScanCertificatesRecheck)
{
    const auto rep = bounds_scan(5, 60, 16);
    EXPECT_FALSE(rep.exclusions.empty());
    std::set<CandidateTriple> all;
    for (auto& c : rep.exclusions) {
        EXPECT_TRUE(recheck(c).confirmed) << to_json(c).dump();
        all.insert(c.triple);
    }
    for (auto& t : rep.unresolved)
        EXPECT_TRUE(all.insert(t).second);
    for (auto& t : all)
        EXPECT_TRUE(is_fundamental_discriminant(t.D));
}

TEST(Search, NarrowClassBoundCoversKnownClassNumbers)
{
    // h+ of Q(sqrt d): d=3 -> 2, d=10 -> 2, d=79 -> 6, d=82 -> 4
    EXPECT_GE(narrow_class_bound(12), 2);
    EXPECT_GE(narrow_class_bound(40), 2);
    EXPECT_GE(narrow_class_bound(316), 6);
    EXPECT_GE(narrow_class_bound(328), 4);
    EXPECT_TRUE(is_fundamental_discriminant(5));
    EXPECT_TRUE(is_fundamental_discriminant(8));
    EXPECT_TRUE(is_fundamental_discriminant(12));
    EXPECT_FALSE(is_fundamental_discriminant(16));
    EXPECT_FALSE(is_fundamental_discriminant(20));
    EXPECT_FALSE(is_fundamental_discriminant(9));
}
