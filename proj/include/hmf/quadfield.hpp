#pragma once

// Exact arithmetic in a real quadratic field F = Q(sqrt d) and its ring of
// integers O = Z[w]: elements, units, ideals in Hermite normal form, prime
// splitting, and totally positive generators.

#include "hmf/arith.hpp"

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

namespace hmf {

enum class OmegaKind {
    Golden, // w = (1 + sqrt d)/2, d = 1 mod 4
    RootD   // w = sqrt d
};

/// x + y*w with rational coordinates; elements of O have integral x and y.
struct QuadElem {
    Rat x;
    Rat y;

    QuadElem() = default;
    QuadElem(Rat x_, Rat y_) : x(std::move(x_)), y(std::move(y_))
    {
        x.canonicalize();
        y.canonicalize();
    }
    QuadElem(long v) : x(v), y(0) {}

    bool is_integral() const { return is_integer(x) && is_integer(y); }
    bool is_zero() const { return x == 0 && y == 0; }

    friend bool operator==(const QuadElem& a, const QuadElem& b) { return a.x == b.x && a.y == b.y; }
    friend QuadElem operator+(const QuadElem& a, const QuadElem& b) { return {a.x + b.x, a.y + b.y}; }
    friend QuadElem operator-(const QuadElem& a, const QuadElem& b) { return {a.x - b.x, a.y - b.y}; }
    friend QuadElem operator-(const QuadElem& a) { return {-a.x, -a.y}; }
    friend QuadElem operator*(const Rat& s, const QuadElem& a) { return {s * a.x, s * a.y}; }
};

struct FieldContext {
    std::int64_t d = 0;
    std::int64_t D = 0;
    OmegaKind omega_kind = OmegaKind::Golden;
    // w^2 = omega_trace * w - omega_norm
    std::int64_t omega_trace = 0;
    std::int64_t omega_norm = 0;
    QuadElem fundamental_unit;
    int unit_norm = 0;
    bool narrow_class_one = false;
    // Generator of the totally positive units (eps0^2 or eps0), > 1.
    QuadElem tp_unit;
    // Totally positive canonical generator of the different; set only once certified.
    QuadElem different_generator;
};

/// The Z-module aZ + (b + c w)Z; c | a, c | b, 0 <= b < a.
struct IdealHNF {
    std::int64_t a = 1;
    std::int64_t b = 0;
    std::int64_t c = 1;

    std::int64_t norm() const { return a * c; }
    auto key() const { return std::make_tuple(norm(), a, b, c); }
    bool is_unit_ideal() const { return a == 1 && c == 1; }

    friend bool operator==(const IdealHNF&, const IdealHNF&) = default;
    friend auto operator<=>(const IdealHNF& l, const IdealHNF& r) { return l.key() <=> r.key(); }
    std::string str() const
    {
        return "[" + std::to_string(norm()) + "," + std::to_string(a) + "," + std::to_string(b) + "," +
               std::to_string(c) + "]";
    }
};

struct IdealHash {
    std::size_t operator()(const IdealHNF& m) const noexcept
    {
        std::size_t h = std::hash<std::int64_t>{}(m.a);
        h = h * 1000003u ^ std::hash<std::int64_t>{}(m.b);
        h = h * 1000003u ^ std::hash<std::int64_t>{}(m.c);
        return h;
    }
};

struct PrimeIdeal {
    IdealHNF ideal;
    std::int64_t p = 0;
    int residue_degree = 1;
    bool ramified = false;

    std::int64_t norm() const { return ideal.norm(); }
    friend bool operator==(const PrimeIdeal& l, const PrimeIdeal& r) { return l.ideal == r.ideal; }
};

class NotNarrowClassOne : public DomainError {
public:
    using DomainError::DomainError;
};

inline const char* const kUncertifiedField = "field not certified narrow-class-one with norm -1 unit";

inline void require_exact_engine(const FieldContext& ctx)
{
    if (!ctx.narrow_class_one || ctx.unit_norm != -1)
        throw DomainError(std::string(kUncertifiedField) + " (d=" + std::to_string(ctx.d) + ")");
}

// ---------------------------------------------------------------------------
// Element arithmetic

inline QuadElem mul(const FieldContext& ctx, const QuadElem& a, const QuadElem& b)
{
    Rat yy = a.y * b.y;
    return {a.x * b.x - ctx.omega_norm * yy, a.x * b.y + a.y * b.x + ctx.omega_trace * yy};
}

inline QuadElem conj(const FieldContext& ctx, const QuadElem& e) { return {e.x + ctx.omega_trace * e.y, -e.y}; }

inline Rat norm(const FieldContext& ctx, const QuadElem& e)
{
    return e.x * e.x + ctx.omega_trace * e.x * e.y + ctx.omega_norm * e.y * e.y;
}

inline Rat trace(const FieldContext& ctx, const QuadElem& e) { return 2 * e.x + ctx.omega_trace * e.y; }

inline QuadElem inverse(const FieldContext& ctx, const QuadElem& e)
{
    Rat n = norm(ctx, e);
    if (n == 0)
        throw DomainError("inverse of zero element");
    return (1 / n) * conj(ctx, e);
}

inline QuadElem divide(const FieldContext& ctx, const QuadElem& a, const QuadElem& b)
{
    return mul(ctx, a, inverse(ctx, b));
}

inline QuadElem power(const FieldContext& ctx, QuadElem base, long e)
{
    if (e < 0) {
        base = inverse(ctx, base);
        e = -e;
    }
    QuadElem r(1);
    while (e) {
        if (e & 1)
            r = mul(ctx, r, base);
        base = mul(ctx, base, base);
        e >>= 1;
    }
    return r;
}

/// The element as p + q*sqrt(d).
inline std::pair<Rat, Rat> root_form(const FieldContext& ctx, const QuadElem& e)
{
    if (ctx.omega_kind == OmegaKind::Golden)
        return {e.x + e.y / 2, e.y / 2};
    return {e.x, e.y};
}

/// Exact sign of e under the fixed embedding (sqrt d > 0).
inline int sign(const FieldContext& ctx, const QuadElem& e)
{
    auto [p, q] = root_form(ctx, e);
    int sp = sgn(p), sq = sgn(q);
    if (sq == 0)
        return sp;
    if (sp == 0 || sp == sq)
        return sq;
    Rat lhs = p * p, rhs = q * q * ctx.d;
    if (lhs == rhs)
        return 0;
    return lhs > rhs ? sp : sq;
}

inline bool is_totally_positive(const FieldContext& ctx, const QuadElem& e)
{
    return sign(ctx, e) > 0 && sign(ctx, conj(ctx, e)) > 0;
}

/// Floating approximations of the two embeddings; for box bounds only.
inline std::pair<long double, long double> embed(const FieldContext& ctx, const QuadElem& e)
{
    auto [p, q] = root_form(ctx, e);
    long double pd = p.get_d(), qd = q.get_d();
    long double s = std::sqrt(static_cast<long double>(ctx.d));
    return {pd + qd * s, pd - qd * s};
}

inline std::string elem_to_string(const QuadElem& e)
{
    return "(" + rat_to_string(e.x) + ")+(" + rat_to_string(e.y) + ")w";
}

// ---------------------------------------------------------------------------
// Ideals

namespace detail {

struct Vec2 {
    Int x, y;
};

inline void require_integral(const QuadElem& e)
{
    if (!e.is_integral())
        throw DomainError("element is not in O: " + elem_to_string(e));
}

/// HNF of the Z-lattice spanned by integral coordinate vectors.
inline IdealHNF hnf_of_lattice(std::vector<Vec2> rows)
{
    Int a = 0;
    std::optional<Vec2> pivot;
    for (auto& r : rows) {
        if (r.y == 0) {
            a = gcd(a, r.x);
            continue;
        }
        if (!pivot) {
            pivot = r;
            continue;
        }
        // Combine pivot and r into one row with y = gcd and one with y = 0.
        Int g, s, t;
        mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), pivot->y.get_mpz_t(), r.y.get_mpz_t());
        Vec2 top{s * pivot->x + t * r.x, g};
        Int zero_x = (r.y / g) * pivot->x - (pivot->y / g) * r.x;
        a = gcd(a, zero_x);
        pivot = top;
    }
    if (!pivot || a == 0)
        throw DomainError("lattice is not of full rank");
    a = abs(a);
    Int c = pivot->y, b = pivot->x;
    if (c < 0) {
        c = -c;
        b = -b;
    }
    Int br;
    mpz_fdiv_r(br.get_mpz_t(), b.get_mpz_t(), a.get_mpz_t());
    return IdealHNF{to_i64(a), to_i64(br), to_i64(c)};
}

} // namespace detail

/// Z-basis {a, b + c w} of the ideal.
inline std::pair<QuadElem, QuadElem> ideal_basis(const IdealHNF& m)
{
    return {QuadElem(Rat(m.a), Rat(0)), QuadElem(Rat(m.b), Rat(m.c))};
}

/// The O-ideal generated by the given integral elements.
inline IdealHNF ideal_from_generators(const FieldContext& ctx, const std::vector<QuadElem>& gens)
{
    std::vector<detail::Vec2> rows;
    const QuadElem w(Rat(0), Rat(1));
    for (auto& g : gens) {
        detail::require_integral(g);
        if (g.is_zero())
            continue;
        QuadElem gw = mul(ctx, g, w);
        rows.push_back({g.x.get_num(), g.y.get_num()});
        rows.push_back({gw.x.get_num(), gw.y.get_num()});
    }
    if (rows.empty())
        throw DomainError("zero ideal");
    return detail::hnf_of_lattice(std::move(rows));
}

inline IdealHNF ideal_from_element(const FieldContext& ctx, const QuadElem& g)
{
    if (g.is_zero())
        throw DomainError("zero ideal");
    return ideal_from_generators(ctx, {g});
}

inline bool contains(const IdealHNF& m, const QuadElem& e)
{
    if (!e.is_integral())
        return false;
    Int x = e.x.get_num(), y = e.y.get_num();
    if (!mpz_divisible_ui_p(y.get_mpz_t(), static_cast<unsigned long>(m.c)))
        return false;
    Int rest = x - Int(m.b) * (y / m.c);
    return mpz_divisible_ui_p(rest.get_mpz_t(), static_cast<unsigned long>(m.a));
}

inline IdealHNF ideal_mul(const FieldContext& ctx, const IdealHNF& m, const IdealHNF& n)
{
    auto [m1, m2] = ideal_basis(m);
    auto [n1, n2] = ideal_basis(n);
    return ideal_from_generators(ctx, {mul(ctx, m1, n1), mul(ctx, m1, n2), mul(ctx, m2, n1), mul(ctx, m2, n2)});
}

inline IdealHNF ideal_conj(const FieldContext& ctx, const IdealHNF& m)
{
    auto [m1, m2] = ideal_basis(m);
    return ideal_from_generators(ctx, {m1, conj(ctx, m2)});
}

/// n | m, i.e. m is contained in n.
inline bool divides(const IdealHNF& n, const IdealHNF& m)
{
    auto [m1, m2] = ideal_basis(m);
    return contains(n, m1) && contains(n, m2);
}

inline IdealHNF ideal_gcd(const FieldContext& ctx, const IdealHNF& m, const IdealHNF& n)
{
    auto [m1, m2] = ideal_basis(m);
    auto [n1, n2] = ideal_basis(n);
    return ideal_from_generators(ctx, {m1, m2, n1, n2});
}

inline bool coprime(const FieldContext& ctx, const IdealHNF& m, const IdealHNF& n)
{
    return ideal_gcd(ctx, m, n).is_unit_ideal();
}

/// m / n for n | m, computed as m * conj(n) / N(n).
inline IdealHNF ideal_div(const FieldContext& ctx, const IdealHNF& m, const IdealHNF& n)
{
    if (!divides(n, m))
        throw DomainError("ideal " + n.str() + " does not divide " + m.str());
    auto [p1, p2] = ideal_basis(ideal_mul(ctx, m, ideal_conj(ctx, n)));
    Rat inv = Rat(1, 1) / Rat(n.norm());
    return ideal_from_generators(ctx, {inv * p1, inv * p2});
}

// ---------------------------------------------------------------------------
// Primes

inline std::vector<PrimeIdeal> primes_above(const FieldContext& ctx, std::int64_t p)
{
    if (!is_prime(p))
        throw DomainError(std::to_string(p) + " is not prime");
    // roots of X^2 - t X + n mod p
    std::vector<std::int64_t> roots;
    const std::int64_t t = ((ctx.omega_trace % p) + p) % p;
    const std::int64_t n = ((ctx.omega_norm % p) + p) % p;
    for (std::int64_t r = 0; r < p && roots.size() < 2; ++r) {
        __int128 v = (__int128)r * r - (__int128)t * r + n;
        if (v % p == 0)
            roots.push_back(r);
    }
    const QuadElem w(Rat(0), Rat(1));
    auto above = [&](std::int64_t r) { return ideal_from_generators(ctx, {QuadElem(p), w - QuadElem(r)}); };
    std::vector<PrimeIdeal> out;
    if (ctx.D % p == 0) {
        out.push_back({above(roots.at(0)), p, 1, true});
    } else if (roots.size() == 2) {
        out.push_back({above(roots[0]), p, 1, false});
        out.push_back({above(roots[1]), p, 1, false});
        std::sort(out.begin(), out.end(), [](auto& l, auto& r) { return l.ideal < r.ideal; });
    } else {
        out.push_back({IdealHNF{p, 0, p}, p, 2, false});
    }
    return out;
}

inline std::vector<std::pair<PrimeIdeal, int>> factor_ideal(const FieldContext& ctx, const IdealHNF& m)
{
    std::vector<std::pair<PrimeIdeal, int>> out;
    IdealHNF rest = m;
    for (auto& [p, _] : factor_int(m.norm())) {
        for (auto& P : primes_above(ctx, p)) {
            int e = 0;
            while (divides(P.ideal, rest)) {
                rest = ideal_div(ctx, rest, P.ideal);
                ++e;
            }
            if (e)
                out.emplace_back(P, e);
        }
    }
    if (!rest.is_unit_ideal())
        throw InternalError("incomplete factorization of " + m.str());
    return out;
}

inline IdealHNF ideal_pow(const FieldContext& ctx, const IdealHNF& m, int e)
{
    IdealHNF r;
    for (int i = 0; i < e; ++i)
        r = ideal_mul(ctx, r, m);
    return r;
}

inline std::vector<IdealHNF> divisors(const FieldContext& ctx, const IdealHNF& m)
{
    std::vector<IdealHNF> out{IdealHNF{}};
    for (auto& [P, e] : factor_ideal(ctx, m)) {
        std::vector<IdealHNF> next;
        for (auto& base : out) {
            IdealHNF cur = base;
            next.push_back(cur);
            for (int i = 0; i < e; ++i) {
                cur = ideal_mul(ctx, cur, P.ideal);
                next.push_back(cur);
            }
        }
        out = std::move(next);
    }
    std::sort(out.begin(), out.end());
    return out;
}

/// sum over divisors r of m of N(r)^s, from the prime factorization.
inline Int divisor_power_sum(const FieldContext& ctx, const IdealHNF& m, unsigned long s)
{
    Int total = 1;
    for (auto& [P, e] : factor_ideal(ctx, m)) {
        const Int q = ipow(Int(P.norm()), s);
        Int local = 1, term = 1;
        for (int i = 0; i < e; ++i) {
            term *= q;
            local += term;
        }
        total *= local;
    }
    return total;
}

inline std::vector<IdealHNF> ideals_up_to_norm(const FieldContext& ctx, std::int64_t B)
{
    if (B < 1)
        throw DomainError("norm bound must be >= 1");
    std::vector<PrimeIdeal> primes;
    for (auto p : primes_up_to(B))
        for (auto& P : primes_above(ctx, p))
            if (P.norm() <= B)
                primes.push_back(P);
    std::vector<IdealHNF> out;
    std::function<void(std::size_t, const IdealHNF&)> walk = [&](std::size_t from, const IdealHNF& cur) {
        out.push_back(cur);
        for (std::size_t i = from; i < primes.size(); ++i) {
            if (cur.norm() * primes[i].norm() > B)
                continue;
            walk(i, ideal_mul(ctx, cur, primes[i].ideal));
        }
    };
    walk(0, IdealHNF{});
    std::sort(out.begin(), out.end());
    return out;
}

// ---------------------------------------------------------------------------
// Lattice scans and totally positive generators

/// Calls visit(x, y) for every x + y w in O with 0 < e < hi1 and 0 < e' < hi2,
/// plus possibly a few points just outside; callers filter exactly.
template <class Visit>
void scan_positive_box(const FieldContext& ctx, long double hi1, long double hi2, Visit&& visit)
{
    const long double sd = std::sqrt(static_cast<long double>(ctx.D));
    const long double w1 = ctx.omega_kind == OmegaKind::Golden
                               ? (1 + std::sqrt(static_cast<long double>(ctx.d))) / 2
                               : std::sqrt(static_cast<long double>(ctx.d));
    const long double w2 = ctx.omega_trace - w1;
    // e - e' = y * sqrt(D)
    const auto ylo = static_cast<std::int64_t>(std::floor(-hi2 / sd)) - 1;
    const auto yhi = static_cast<std::int64_t>(std::ceil(hi1 / sd)) + 1;
    for (std::int64_t y = ylo; y <= yhi; ++y) {
        long double lo = std::max(-y * w1, -y * w2);
        long double hi = std::min(hi1 - y * w1, hi2 - y * w2);
        if (hi < lo - 2)
            continue;
        auto xlo = static_cast<std::int64_t>(std::floor(lo)) - 1;
        auto xhi = static_cast<std::int64_t>(std::ceil(hi)) + 1;
        for (std::int64_t x = xlo; x <= xhi; ++x)
            visit(x, y);
    }
}

/// Unique e * u^k with 1 <= e/e' < u^2, u the totally positive fundamental unit.
inline QuadElem canonical_rep(const FieldContext& ctx, QuadElem g)
{
    if (!is_totally_positive(ctx, g))
        throw DomainError("canonical_rep needs a totally positive element: " + elem_to_string(g));
    const QuadElem& u = ctx.tp_unit;
    const QuadElem u_inv = conj(ctx, u);
    const QuadElem u2 = mul(ctx, u, u);
    // e >= e' iff y >= 0, since e - e' = y sqrt(D)
    while (g.y < 0)
        g = mul(ctx, g, u);
    while (sign(ctx, mul(ctx, u2, conj(ctx, g)) - g) <= 0)
        g = mul(ctx, g, u_inv);
    return g;
}

inline QuadElem tp_generator(const FieldContext& ctx, const IdealHNF& m)
{
    const long double N = static_cast<long double>(m.norm());
    const long double eps = embed(ctx, ctx.fundamental_unit).first;
    const long double slack = 1 + 1e-9L;
    // Some unit multiple of any generator g has |g| < sqrt(N) eps0 and |g'| <= sqrt(N).
    const long double r1 = std::sqrt(N) * eps * slack + 1e-9L;
    const long double r2 = std::sqrt(N) * slack + 1e-9L;
    const long double sd = std::sqrt(static_cast<long double>(ctx.D));
    auto [beta1, beta2] = embed(ctx, QuadElem(Rat(m.b), Rat(m.c)));
    // g = i a + j (b + c w);  g - g' = j c sqrt(D)
    const auto jmax = static_cast<std::int64_t>(std::ceil((r1 + r2) / (m.c * sd))) + 1;
    const long double est = static_cast<long double>(2 * jmax + 1) * (2 * r2 / m.a + 3);
    if (est > 5e8L)
        throw DomainError("generator search too large for d=" + std::to_string(ctx.d));
    for (std::int64_t j = -jmax; j <= jmax; ++j) {
        long double lo = std::max((-r1 - j * beta1) / m.a, (-r2 - j * beta2) / m.a);
        long double hi = std::min((r1 - j * beta1) / m.a, (r2 - j * beta2) / m.a);
        if (hi < lo - 2)
            continue;
        for (auto i = static_cast<std::int64_t>(std::floor(lo)) - 1; i <= static_cast<std::int64_t>(std::ceil(hi)) + 1;
             ++i) {
            QuadElem g(Rat(i * m.a + j * m.b), Rat(j * m.c));
            Rat n = norm(ctx, g);
            if (abs(n) != m.norm())
                continue;
            if (n < 0) {
                if (ctx.unit_norm != -1)
                    continue;
                g = mul(ctx, g, ctx.fundamental_unit);
            }
            if (sign(ctx, g) < 0)
                g = -g;
            return canonical_rep(ctx, g);
        }
    }
    throw NotNarrowClassOne("no totally positive generator for ideal " + m.str() + " (d=" + std::to_string(ctx.d) +
                            ")");
}

// ---------------------------------------------------------------------------
// Field construction

namespace detail {

/// Smallest unit > 1, from the continued fraction of w.
inline QuadElem fundamental_unit(std::int64_t d, std::int64_t t, std::int64_t n, bool golden)
{
    const Int dd = d;
    const Int r = isqrt(dd);
    Int P = golden ? 1 : 0, Q = golden ? 2 : 1;
    Int p_prev = 1, q_prev = 0, p_cur, q_cur;
    for (int step = 0; step < 1000000; ++step) {
        Int a = floor_div(P + r, Q);
        if (step == 0) {
            p_cur = a;
            q_cur = 1;
        } else {
            Int p_next = a * p_cur + p_prev, q_next = a * q_cur + q_prev;
            p_prev = p_cur;
            q_prev = q_cur;
            p_cur = p_next;
            q_cur = q_next;
        }
        Int nrm = p_cur * p_cur - t * p_cur * q_cur + n * q_cur * q_cur;
        if (nrm == 1 || nrm == -1)
            return QuadElem(Rat(p_cur - q_cur * t), Rat(q_cur));
        P = a * Q - P;
        Q = (dd - P * P) / Q;
    }
    throw InternalError("continued fraction did not reach a unit for d=" + std::to_string(d));
}

} // namespace detail

/// The ideal of norm D generated by sqrt(d) (or 2 sqrt(d)).
inline IdealHNF different_ideal(const FieldContext& ctx)
{
    const QuadElem w(Rat(0), Rat(1));
    const QuadElem root = ctx.omega_kind == OmegaKind::Golden ? Rat(2) * w - QuadElem(1) : Rat(2) * w;
    return ideal_from_element(ctx, root);
}

inline FieldContext make_field(std::int64_t d)
{
    if (d <= 1 || !is_squarefree(d))
        throw DomainError("invalid field: d=" + std::to_string(d) + " must be a squarefree integer > 1");
    FieldContext ctx;
    ctx.d = d;
    if (d % 4 == 1) {
        ctx.D = d;
        ctx.omega_kind = OmegaKind::Golden;
        ctx.omega_trace = 1;
        ctx.omega_norm = (1 - d) / 4;
    } else {
        ctx.D = 4 * d;
        ctx.omega_kind = OmegaKind::RootD;
        ctx.omega_trace = 0;
        ctx.omega_norm = -d;
    }
    ctx.fundamental_unit =
        detail::fundamental_unit(d, ctx.omega_trace, ctx.omega_norm, ctx.omega_kind == OmegaKind::Golden);
    ctx.unit_norm = norm(ctx, ctx.fundamental_unit) > 0 ? 1 : -1;
    ctx.tp_unit = ctx.unit_norm == -1 ? mul(ctx, ctx.fundamental_unit, ctx.fundamental_unit) : ctx.fundamental_unit;
    if (ctx.unit_norm != -1)
        return ctx; // h+ = 2h > 1

    // Every ideal class meets an ideal of norm <= sqrt(D)/2, so principality of the
    // primes below that bound certifies h = 1, and N(eps0) = -1 gives h+ = h.
    try {
        const auto minkowski = static_cast<std::int64_t>(std::floor(std::sqrt(static_cast<long double>(ctx.D)) / 2));
        for (auto p : primes_up_to(minkowski))
            for (auto& P : primes_above(ctx, p))
                (void)tp_generator(ctx, P.ideal);
        ctx.different_generator = tp_generator(ctx, different_ideal(ctx));
        ctx.narrow_class_one = true;
    } catch (const NotNarrowClassOne&) {
        ctx.narrow_class_one = false;
    }
    return ctx;
}

} // namespace hmf
