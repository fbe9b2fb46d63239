#pragma once

// Integer and rational helpers shared by the exact modules.

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace hmf {

using Int = mpz_class;
using Rat = mpq_class;

/// Raised when an input lies outside the domain an operation supports.
class DomainError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raised when an internal consistency check fails; always a bug.
class InternalError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

inline Rat make_rat(const Int& num, const Int& den = 1)
{
    Rat r(num, den);
    r.canonicalize();
    return r;
}

/// "p/q" in lowest terms with q > 0; integers print without a denominator.
inline std::string rat_to_string(const Rat& r)
{
    Rat c = r;
    c.canonicalize();
    if (c.get_den() == 1)
        return c.get_num().get_str();
    return c.get_num().get_str() + "/" + c.get_den().get_str();
}

inline Rat parse_rat(const std::string& s)
{
    Rat r;
    if (s.empty() || r.set_str(s, 10) != 0)
        throw DomainError("not a rational number: '" + s + "'");
    if (r.get_den() == 0)
        throw DomainError("zero denominator: '" + s + "'");
    r.canonicalize();
    return r;
}

inline bool is_integer(const Rat& r) { return r.get_den() == 1; }

inline Int floor_div(const Int& a, const Int& b)
{
    Int q;
    mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return q;
}

inline Int isqrt(const Int& n)
{
    if (n < 0)
        throw DomainError("isqrt of negative number");
    Int r;
    mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
    return r;
}

inline Int ipow(const Int& base, unsigned long e)
{
    Int r;
    mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
    return r;
}

inline Rat rpow(const Rat& base, long e)
{
    if (e < 0) {
        if (base == 0)
            throw DomainError("zero to a negative power");
        return rpow(1 / base, -e);
    }
    Rat r = 1;
    Rat b = base;
    unsigned long k = static_cast<unsigned long>(e);
    while (k) {
        if (k & 1UL)
            r *= b;
        b *= b;
        k >>= 1;
    }
    return r;
}

inline bool is_prime(std::int64_t n)
{
    if (n < 2)
        return false;
    for (std::int64_t p = 2; p * p <= n; ++p)
        if (n % p == 0)
            return false;
    return true;
}

inline std::vector<std::int64_t> primes_up_to(std::int64_t n)
{
    std::vector<std::int64_t> out;
    if (n < 2)
        return out;
    std::vector<bool> sieve(static_cast<std::size_t>(n + 1), true);
    for (std::int64_t p = 2; p <= n; ++p) {
        if (!sieve[static_cast<std::size_t>(p)])
            continue;
        out.push_back(p);
        for (std::int64_t q = p * p; q <= n; q += p)
            sieve[static_cast<std::size_t>(q)] = false;
    }
    return out;
}

/// Trial-division factorization of |n|, primes ascending.
inline std::vector<std::pair<std::int64_t, int>> factor_int(std::int64_t n)
{
    std::vector<std::pair<std::int64_t, int>> out;
    if (n < 0)
        n = -n;
    for (std::int64_t p = 2; p * p <= n; ++p) {
        int e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        if (e)
            out.emplace_back(p, e);
    }
    if (n > 1)
        out.emplace_back(n, 1);
    return out;
}

inline bool is_squarefree(std::int64_t n)
{
    for (auto& [p, e] : factor_int(n))
        if (e > 1)
            return false;
    return n != 0;
}

/// Writes a positive integer as s^2 * m with m squarefree; returns {s, m}.
inline std::pair<Int, Int> square_split(const Int& n)
{
    if (n <= 0)
        throw DomainError("square_split needs a positive integer");
    Int rest = n, s = 1, m = 1;
    for (Int p = 2; p * p <= rest; ++p) {
        int e = 0;
        while (mpz_divisible_p(rest.get_mpz_t(), p.get_mpz_t())) {
            rest /= p;
            ++e;
        }
        for (int i = 0; i < e / 2; ++i)
            s *= p;
        if (e % 2)
            m *= p;
    }
    m *= rest;
    return {s, m};
}

/// Kronecker symbol (D/p) for an odd or even prime p.
inline int kronecker(std::int64_t D, std::int64_t p)
{
    return mpz_kronecker_si(Int(D).get_mpz_t(), p);
}

inline std::int64_t to_i64(const Int& z)
{
    if (!z.fits_slong_p())
        throw DomainError("integer exceeds 64-bit range: " + z.get_str());
    return z.get_si();
}

} // namespace hmf
