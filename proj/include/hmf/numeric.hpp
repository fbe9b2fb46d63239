#pragma once

// Multiprecision reals for the analytic side: Hurwitz/Riemann zeta by
// Euler-Maclaurin and the factors of the L-value functional equation.

#include "hmf/arith.hpp"

#include <boost/math/constants/constants.hpp>
#include <boost/multiprecision/mpfr.hpp>

#include <cmath>
#include <cstdlib>
#include <string>
#include <vector>

namespace hmf {

using Real = boost::multiprecision::mpfr_float;

/// Working precision in bits; HMF_PRECISION_BITS overrides the default of 200.
inline unsigned precision_bits()
{
    if (const char* env = std::getenv("HMF_PRECISION_BITS")) {
        char* end = nullptr;
        long v = std::strtol(env, &end, 10);
        if (end != env && v >= 64 && v <= 100000)
            return static_cast<unsigned>(v);
    }
    return 200;
}

inline unsigned bits_to_digits10(unsigned bits) { return static_cast<unsigned>(std::ceil(bits * 0.30102999566398)) + 1; }

/// Sets the default mpfr precision for the lifetime of the scope.
class PrecisionScope {
public:
    explicit PrecisionScope(unsigned bits = precision_bits()) : saved_(Real::default_precision())
    {
        Real::default_precision(bits_to_digits10(bits));
    }
    ~PrecisionScope() { Real::default_precision(saved_); }
    PrecisionScope(const PrecisionScope&) = delete;
    PrecisionScope& operator=(const PrecisionScope&) = delete;

private:
    unsigned saved_;
};

inline Real to_real(const Rat& q) { return Real(q.get_mpq_t()); }
inline Real to_real(const Int& z) { return Real(z.get_mpz_t()); }

inline Real real_pi() { return boost::math::constants::pi<Real>(); }

inline Rat factorial(unsigned long n)
{
    Int r;
    mpz_fac_ui(r.get_mpz_t(), n);
    return Rat(r);
}

/// Bernoulli numbers B_0..B_n (B_1 = -1/2) from sum_{j<=m} C(m+1, j) B_j = 0.
inline const std::vector<Rat>& bernoulli_table(std::size_t n)
{
    static thread_local std::vector<Rat> table{Rat(1)};
    while (table.size() <= n) {
        const std::size_t m = table.size();
        Rat acc = 0;
        Int binom = 1; // C(m+1, j)
        for (std::size_t j = 0; j < m; ++j) {
            acc += binom * table[j];
            binom = binom * static_cast<unsigned long>(m + 1 - j) / static_cast<unsigned long>(j + 1);
        }
        Rat b = -acc / static_cast<long>(m + 1);
        b.canonicalize();
        table.push_back(b);
    }
    return table;
}

inline Rat bernoulli(std::size_t n) { return bernoulli_table(n)[n]; }

/// zeta(s, a) = sum_{n>=0} (n + a)^{-s} for integer s >= 2 and a > 0.
inline Real hurwitz_zeta(long s, const Real& a)
{
    constexpr long kDirect = 100;
    constexpr long kTerms = 60;
    Real sum = 0;
    for (long n = 0; n < kDirect; ++n)
        sum += pow(a + n, Real(-s));
    const Real x = a + kDirect;
    sum += pow(x, Real(1 - s)) / (s - 1) + pow(x, Real(-s)) / 2;
    const auto& bern = bernoulli_table(2 * kTerms);
    // term_j = B_2j/(2j)! * s(s+1)...(s+2j-2) * x^{-s-2j+1}
    Real rising = s; // s(s+1)...(s+2j-2)
    Real xpow = pow(x, Real(-s - 1));
    const Real xinv2 = 1 / (x * x);
    Real fact = 2; // (2j)!
    for (long j = 1; j <= kTerms; ++j) {
        sum += to_real(bern[static_cast<std::size_t>(2 * j)]) / fact * rising * xpow;
        rising *= Real(s + 2 * j - 1) * Real(s + 2 * j);
        xpow *= xinv2;
        fact *= Real(2 * j + 1) * Real(2 * j + 2);
    }
    return sum;
}

inline Real riemann_zeta(long s) { return hurwitz_zeta(s, Real(1)); }

/// L(s, chi_D) = D^{-s} sum_{a=1}^{D} chi_D(a) zeta(s, a/D).
inline Real quadratic_l_value(std::int64_t D, long s)
{
    Real sum = 0;
    for (std::int64_t a = 1; a < D; ++a) {
        int chi = kronecker(D, a);
        if (chi == 0)
            continue;
        Real h = hurwitz_zeta(s, Real(a) / Real(D));
        sum += chi > 0 ? h : Real(-h);
    }
    return sum * pow(Real(D), Real(-s));
}

/// (2/pi) (D/4pi^2)^{k-1/2} Gamma(k)^2: the archimedean factor relating L(1-k) and L(k).
inline Real functional_factor(std::int64_t D, long k)
{
    const Real pi = real_pi();
    const Real g = to_real(factorial(static_cast<unsigned long>(k - 1)));
    return 2 / pi * pow(Real(D) / (4 * pi * pi), Real(k) - Real(1) / 2) * g * g;
}

inline std::string real_to_string(const Real& x, int digits = 40)
{
    return x.str(digits, std::ios_base::scientific);
}

} // namespace hmf
