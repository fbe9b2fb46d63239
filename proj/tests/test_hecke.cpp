#include "hmf/hecke.hpp"

#include <gtest/gtest.h>

using namespace hmf;

namespace {

struct Ideals {
    FieldPtr ctx = shared_field(5);
    PrimeIdeal two = primes_above(*ctx, 2).front();
    PrimeIdeal three = primes_above(*ctx, 3).front();
    PrimeIdeal five = primes_above(*ctx, 5).front();
    IdealHNF four = ideal_pow(*ctx, two.ideal, 2);
};

const std::vector<EigenformRecord>& forms_of_weight(int k)
{
    static std::map<int, std::vector<EigenformRecord>> cache;
    auto it = cache.find(k);
    if (it == cache.end())
        it = cache.emplace(k, eigenforms(*shared_field(5), k, 200)).first;
    return it->second;
}

CoeffNumber q809(long u, long v) { return CoeffNumber(Rat(u), Rat(v), Int(809)); }

} // namespace

TEST(Hecke, EisensteinSeriesAreEigenvectors)
{
    Ideals I;
    const auto e2 = eisenstein(*I.ctx, 2, 160);
    const auto t2 = hecke_operator(e2, I.two, 40);
    // eigenvalue 1 + N(p)^{k-1} = 5
    for (std::size_t i = 0; i < t2.coeffs.size(); ++i)
        EXPECT_EQ(t2.coeffs[i], 5 * e2.coeffs[i]);
    EXPECT_EQ(t2.constant_term, 5 * e2.constant_term);
    const auto e4 = eisenstein(*I.ctx, 4, 160);
    const auto t3 = hecke_operator(e4, I.three, 16);
    for (std::size_t i = 0; i < t3.coeffs.size(); ++i)
        EXPECT_EQ(t3.coeffs[i], 730 * e4.coeffs[i]);
    EXPECT_THROW(hecke_operator(e2, I.two, 41), DomainError);
}

TEST(Hecke, OperatorsCommute)
{
    Ideals I;
    const auto basis = monomial_basis(*I.ctx, 10, 200);
    for (auto& f : basis) {
        const auto a = hecke_operator(hecke_operator(f, I.two, 50), I.three, 5);
        const auto b = hecke_operator(hecke_operator(f, I.three, 22), I.two, 5);
        EXPECT_EQ(a.constant_term, b.constant_term);
        for (std::size_t i = 0; i < a.coeffs.size(); ++i)
            EXPECT_EQ(a.coeffs[i], b.coeffs[i]);
    }
}

TEST(Hecke, EigenformTables)
{
    Ideals I;
    auto row = [&](const EigenformRecord& r) {
        const auto& e = r.expansion;
        return std::vector<CoeffNumber>{e.coeff(I.two.ideal), e.coeff(I.three.ideal), e.coeff(I.five.ideal),
                                        e.coeff(I.four)};
    };
    const auto& h6 = forms_of_weight(6);
    ASSERT_EQ(h6.size(), 1u);
    EXPECT_EQ(h6[0].label, "h6");
    EXPECT_EQ(row(h6[0]), (std::vector<CoeffNumber>{20, 90, -90, -624}));
    const auto& h8 = forms_of_weight(8);
    ASSERT_EQ(h8.size(), 1u);
    EXPECT_EQ(row(h8[0]), (std::vector<CoeffNumber>{140, 3330, 150, 3216}));
    const auto& h10 = forms_of_weight(10);
    ASSERT_EQ(h10.size(), 2u);
    EXPECT_EQ(h10[0].label, "h10");
    EXPECT_EQ(h10[1].label, "h10'");
    EXPECT_EQ(h10[0].coeff_disc, 809);
    EXPECT_EQ(row(h10[0]), (std::vector<CoeffNumber>{q809(170, 30), q809(22590, -540), q809(570, -60),
                                                     q809(494856, 10200)}));
    EXPECT_EQ(row(h10[1]), (std::vector<CoeffNumber>{q809(170, -30), q809(22590, 540), q809(570, 60),
                                                     q809(494856, -10200)}));
}

TEST(Hecke, WeightTenFormsAreGaloisConjugate)
{
    const auto& h10 = forms_of_weight(10);
    ASSERT_EQ(h10.size(), 2u);
    for (std::size_t i = 0; i < h10[0].expansion.coeffs.size(); ++i)
        EXPECT_EQ(h10[0].expansion.coeffs[i].conj(), h10[1].expansion.coeffs[i]);
}

TEST(Hecke, TracesAgreeWithEisensteinCombination)
{
    // the rational form g = (39624096 E2 E8 - 3971 E10) / 30126852 has c((2), g) = 18087260/119551
    Ideals I;
    const auto e2 = eisenstein(*I.ctx, 2, 60);
    const auto g = scale(CoeffNumber(Rat(1, 30126852)),
                         subtract(scale(CoeffNumber(39624096), product(e2, eisenstein(*I.ctx, 8, 60))),
                                  scale(CoeffNumber(3971), eisenstein(*I.ctx, 10, 60))));
    EXPECT_EQ(g.coeff(I.two.ideal), CoeffNumber(Rat(18087260, 119551)));
}

TEST(Hecke, ConstructedEigenformsSatisfyHeckeRelations)
{
    Ideals I;
    for (int k : {6, 8, 10})
        for (auto& r : forms_of_weight(k)) {
            const auto& f = r.expansion;
            EXPECT_TRUE(is_normalized_eigenform(f));
            EXPECT_EQ(f.unit_coeff(), CoeffNumber(1));
            // independent pass: every prime power and every coprime pair within the bound
            for (auto& P : primes_up_to_norm(*I.ctx, 200)) {
                const CoeffNumber np(Rat(ipow(Int(P.norm()), static_cast<unsigned long>(k - 1))));
                IdealHNF prev{}, cur = P.ideal;
                while (ideal_mul(*I.ctx, cur, P.ideal).norm() <= 200) {
                    const IdealHNF next = ideal_mul(*I.ctx, cur, P.ideal);
                    EXPECT_EQ(f.coeff(next), f.coeff(P.ideal) * f.coeff(cur) - np * f.coeff(prev));
                    prev = cur;
                    cur = next;
                }
            }
            const auto& ideals = f.index->ideals;
            for (auto& m : ideals)
                for (auto& n : ideals)
                    if (m.norm() * n.norm() <= 200 && coprime(*I.ctx, m, n)) {
                        EXPECT_EQ(f.coeff(ideal_mul(*I.ctx, m, n)), f.coeff(m) * f.coeff(n));
                    }
        }
}

TEST(Hecke, RamanujanBoundAtPrimesUpToOneHundred)
{
    for (int k : {6, 8, 10})
        for (auto& r : forms_of_weight(k)) {
            EigenformRecord small = r;
            small.expansion = truncate(r.expansion, 100);
            const auto rep = ramanujan_check(small, true);
            EXPECT_TRUE(rep.ok) << r.label;
            EXPECT_LT(rep.max_ratio, 1.0);
        }
    // Eisenstein series are not cuspidal and break the bound at large primes
    const auto ctx = shared_field(5);
    EigenformRecord e{eisenstein(*ctx, 4, 100), 4, 1, "E4"};
    const auto rep = ramanujan_check(e, false);
    EXPECT_FALSE(rep.ok);
    EXPECT_FALSE(rep.cuspidal);
}

TEST(Hecke, EigenformCheckerRejectsNonEigenforms)
{
    Ideals I;
    const auto e2 = eisenstein(*I.ctx, 2, 100);
    EXPECT_TRUE(is_normalized_eigenform(e2));
    EXPECT_TRUE(is_normalized_eigenform(eisenstein(*I.ctx, 6, 100)));
    // E2 E4 is not an eigenform; the first failure is at (4)
    const auto p = product(e2, eisenstein(*I.ctx, 4, 100));
    const auto chk = is_normalized_eigenform(p, 6, 100);
    EXPECT_FALSE(chk.ok);
    ASSERT_TRUE(chk.witness);
    EXPECT_EQ(*chk.witness, I.four);
    EXPECT_NE(chk.lhs, chk.rhs);
    // vanishing first coefficient
    const auto cusp = cusp_subspace(monomial_basis(*I.ctx, 12, 100));
    const auto zero_first = subtract(scale(cusp[1].unit_coeff(), cusp[0]), scale(cusp[0].unit_coeff(), cusp[1]));
    const auto z = is_normalized_eigenform(zero_first, 12, 100);
    EXPECT_FALSE(z.ok);
    EXPECT_EQ(*z.witness, IdealHNF{});
}

TEST(Hecke, ExtractionPreconditions)
{
    const auto ctx = shared_field(5);
    EXPECT_TRUE(eigenforms(*ctx, 4, 100).empty());
    EXPECT_THROW(eigenforms(*ctx, 12, 100), UnsupportedDimension);
    EXPECT_THROW(eigenforms(*ctx, 6, 15), DomainError);
}
