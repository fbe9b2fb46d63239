#pragma once

// Hilbert modular forms of parallel weight and full level, stored as truncated
// Fourier expansions indexed by integral ideals.
//
// With narrow class number one, the coefficient at mu in O+ depends only on the
// ideal (mu): totally positive units have norm 1. A product f*h has coefficient
//
//   c(m, fh) = c0(f) c(m, h) + c(m, f) c0(h) + sum_{mu1 + mu2 = mu} c((mu1), f) c((mu2), h)
//
// where mu generates m and mu1, mu2 run over totally positive elements. Both
// components of a decomposition are smaller than mu in each embedding, so
// N(mu_i) < N(mu) and truncation at a norm bound is closed under products.

#include "hmf/coeff.hpp"
#include "hmf/linalg.hpp"
#include "hmf/quadfield.hpp"
#include "hmf/specialvalues.hpp"

#include <json.hpp>

#include <array>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace hmf {

using FieldPtr = std::shared_ptr<const FieldContext>;

/// One shared, immutable context per d.
inline FieldPtr shared_field(std::int64_t d)
{
    static std::mutex mu;
    static std::map<std::int64_t, FieldPtr> fields;
    std::lock_guard lock(mu);
    auto it = fields.find(d);
    if (it == fields.end())
        it = fields.emplace(d, std::make_shared<const FieldContext>(make_field(d))).first;
    return it->second;
}

/// All ideals of norm <= bound in key order, with reverse lookup.
struct IdealIndex {
    std::int64_t d = 0;
    std::int64_t bound = 0;
    std::vector<IdealHNF> ideals;
    std::unordered_map<IdealHNF, std::size_t, IdealHash> position;

    std::optional<std::size_t> find(const IdealHNF& m) const
    {
        auto it = position.find(m);
        if (it == position.end())
            return std::nullopt;
        return it->second;
    }
    std::size_t at(const IdealHNF& m) const
    {
        auto p = find(m);
        if (!p)
            throw DomainError("ideal " + m.str() + " beyond norm bound " + std::to_string(bound));
        return *p;
    }
    /// Number of ideals with norm <= b (a prefix, since keys start with the norm).
    std::size_t prefix(std::int64_t b) const
    {
        std::size_t n = 0;
        while (n < ideals.size() && ideals[n].norm() <= b)
            ++n;
        return n;
    }
};

using IndexPtr = std::shared_ptr<const IdealIndex>;

inline IndexPtr ideal_index(const FieldContext& ctx, std::int64_t bound)
{
    static std::mutex mu;
    static std::map<std::pair<std::int64_t, std::int64_t>, IndexPtr> cache;
    std::lock_guard lock(mu);
    auto key = std::make_pair(ctx.d, bound);
    if (auto it = cache.find(key); it != cache.end())
        return it->second;
    auto idx = std::make_shared<IdealIndex>();
    idx->d = ctx.d;
    idx->bound = bound;
    idx->ideals = ideals_up_to_norm(ctx, bound);
    for (std::size_t i = 0; i < idx->ideals.size(); ++i)
        idx->position.emplace(idx->ideals[i], i);
    cache.emplace(key, idx);
    return idx;
}

struct Expansion {
    FieldPtr ctx;
    int weight = 0;
    Int coeff_disc = 1;
    CoeffNumber constant_term;
    std::vector<CoeffNumber> coeffs; // aligned with index->ideals
    IndexPtr index;

    std::int64_t bound() const { return index->bound; }
    const CoeffNumber& coeff(const IdealHNF& m) const { return coeffs.at(index->at(m)); }
    const CoeffNumber& unit_coeff() const { return coeffs.at(0); }
    bool is_cuspidal() const { return constant_term.is_zero(); }
};

namespace detail {

inline Int disc_of(const CoeffNumber& c, const Int& acc)
{
    if (c.is_rational())
        return acc;
    if (acc != 1 && acc != c.m())
        throw DomainError("expansion mixes coefficient fields");
    return c.m();
}

inline Expansion make_expansion(const FieldContext& ctx, int weight, CoeffNumber constant, std::vector<CoeffNumber> coeffs,
                                IndexPtr index)
{
    Expansion e;
    e.ctx = shared_field(ctx.d);
    e.weight = weight;
    e.coeff_disc = disc_of(constant, 1);
    for (auto& c : coeffs)
        e.coeff_disc = disc_of(c, e.coeff_disc);
    e.constant_term = std::move(constant);
    e.coeffs = std::move(coeffs);
    e.index = std::move(index);
    return e;
}

} // namespace detail

inline Expansion truncate(const Expansion& f, std::int64_t bound)
{
    if (bound > f.bound())
        throw DomainError("cannot extend expansion from bound " + std::to_string(f.bound()) + " to " +
                          std::to_string(bound));
    if (bound == f.bound())
        return f;
    auto idx = ideal_index(*f.ctx, bound);
    std::vector<CoeffNumber> c(f.coeffs.begin(), f.coeffs.begin() + static_cast<std::ptrdiff_t>(idx->ideals.size()));
    return detail::make_expansion(*f.ctx, f.weight, f.constant_term, std::move(c), idx);
}

/// Eisenstein series E_k: c(m) = sum_{r | m} N(r)^{k-1}, constant term zeta_F(1-k)/4.
inline Expansion eisenstein(const FieldContext& ctx, int k, std::int64_t bound)
{
    require_exact_engine(ctx);
    if (k % 2)
        throw DomainError("the space of odd weight " + std::to_string(k) + " is zero");
    if (k < 2)
        throw DomainError("Eisenstein series need weight >= 2");
    auto idx = ideal_index(ctx, bound);
    std::vector<CoeffNumber> c;
    c.reserve(idx->ideals.size());
    for (auto& m : idx->ideals)
        c.emplace_back(Rat(divisor_power_sum(ctx, m, static_cast<unsigned long>(k - 1))));
    return detail::make_expansion(ctx, k, CoeffNumber(zeta_special(ctx, k) / 4), std::move(c), idx);
}

/// All (mu1, mu2) in O+ x O+ with mu1 + mu2 = mu.
inline std::vector<std::pair<QuadElem, QuadElem>> decompositions(const FieldContext& ctx, const QuadElem& mu)
{
    if (!mu.is_integral() || !is_totally_positive(ctx, mu))
        throw DomainError("decompositions need a totally positive integer, got " + elem_to_string(mu));
    auto [hi1, hi2] = embed(ctx, mu);
    std::vector<std::pair<QuadElem, QuadElem>> out;
    scan_positive_box(ctx, hi1, hi2, [&](std::int64_t x, std::int64_t y) {
        QuadElem mu1{Rat(x), Rat(y)};
        if (!is_totally_positive(ctx, mu1))
            return;
        QuadElem mu2 = mu - mu1;
        if (!is_totally_positive(ctx, mu2))
            return;
        out.emplace_back(std::move(mu1), std::move(mu2));
    });
    return out;
}

/// For each ideal of norm <= bound: index pairs ((mu1), (mu2)) over decompositions
/// of its canonical generator.
struct ProductPlan {
    IndexPtr index;
    std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>> pairs;
};

inline std::shared_ptr<const ProductPlan> product_plan(const FieldContext& ctx, std::int64_t bound)
{
    static std::mutex mu;
    static std::map<std::pair<std::int64_t, std::int64_t>, std::shared_ptr<const ProductPlan>> cache;
    auto key = std::make_pair(ctx.d, bound);
    {
        std::lock_guard lock(mu);
        if (auto it = cache.find(key); it != cache.end())
            return it->second;
    }
    auto plan = std::make_shared<ProductPlan>();
    plan->index = ideal_index(ctx, bound);
    plan->pairs.resize(plan->index->ideals.size());
    for (std::size_t i = 0; i < plan->index->ideals.size(); ++i) {
        const QuadElem gen = tp_generator(ctx, plan->index->ideals[i]);
        for (auto& [mu1, mu2] : decompositions(ctx, gen)) {
            const auto i1 = plan->index->at(ideal_from_element(ctx, mu1));
            const auto i2 = plan->index->at(ideal_from_element(ctx, mu2));
            plan->pairs[i].emplace_back(static_cast<std::uint32_t>(i1), static_cast<std::uint32_t>(i2));
        }
    }
    std::lock_guard lock(mu);
    return cache.emplace(key, std::move(plan)).first->second;
}

inline void require_same_field(const Expansion& f, const Expansion& h)
{
    if (f.ctx->d != h.ctx->d)
        throw DomainError("expansions over different fields (d=" + std::to_string(f.ctx->d) +
                          ", d=" + std::to_string(h.ctx->d) + ")");
}

inline Expansion product(const Expansion& f, const Expansion& h, std::int64_t bound)
{
    require_same_field(f, h);
    if (bound > f.bound() || bound > h.bound())
        throw DomainError("product bound " + std::to_string(bound) + " exceeds a factor's bound");
    const FieldContext& ctx = *f.ctx;
    auto plan = product_plan(ctx, bound);
    const std::size_t n = plan->index->ideals.size();
    std::vector<CoeffNumber> c(n);
    for (std::size_t i = 0; i < n; ++i) {
        CoeffNumber acc = f.constant_term * h.coeffs[i] + f.coeffs[i] * h.constant_term;
        for (auto [i1, i2] : plan->pairs[i])
            acc += f.coeffs[i1] * h.coeffs[i2];
        c[i] = std::move(acc);
    }
    return detail::make_expansion(ctx, f.weight + h.weight, f.constant_term * h.constant_term, std::move(c),
                                  plan->index);
}

inline Expansion product(const Expansion& f, const Expansion& h)
{
    return product(f, h, std::min(f.bound(), h.bound()));
}

inline Expansion add(const Expansion& f, const Expansion& h)
{
    require_same_field(f, h);
    if (f.weight != h.weight)
        throw DomainError("cannot add weights " + std::to_string(f.weight) + " and " + std::to_string(h.weight));
    const std::int64_t b = std::min(f.bound(), h.bound());
    auto idx = ideal_index(*f.ctx, b);
    std::vector<CoeffNumber> c(idx->ideals.size());
    for (std::size_t i = 0; i < c.size(); ++i)
        c[i] = f.coeffs[i] + h.coeffs[i];
    return detail::make_expansion(*f.ctx, f.weight, f.constant_term + h.constant_term, std::move(c), idx);
}

inline Expansion scale(const CoeffNumber& s, const Expansion& f)
{
    std::vector<CoeffNumber> c(f.coeffs.size());
    for (std::size_t i = 0; i < c.size(); ++i)
        c[i] = s * f.coeffs[i];
    return detail::make_expansion(*f.ctx, f.weight, s * f.constant_term, std::move(c), f.index);
}

inline Expansion subtract(const Expansion& f, const Expansion& h) { return add(f, scale(CoeffNumber(-1), h)); }

/// Sum of coefficient_i * forms_i, all of one weight.
inline Expansion linear_combination(const std::vector<CoeffNumber>& coefficients, const std::vector<Expansion>& forms)
{
    if (forms.empty() || coefficients.size() != forms.size())
        throw DomainError("linear combination needs matching non-empty lists");
    Expansion acc = scale(coefficients[0], forms[0]);
    for (std::size_t i = 1; i < forms.size(); ++i)
        acc = add(acc, scale(coefficients[i], forms[i]));
    return acc;
}

/// (constant term, c(m) in key order) as rationals.
inline std::vector<Rat> coefficient_vector(const Expansion& f, std::size_t count)
{
    std::vector<Rat> v;
    v.reserve(count + 1);
    v.push_back(f.constant_term.rational());
    for (std::size_t i = 0; i < count; ++i)
        v.push_back(f.coeffs.at(i).rational());
    return v;
}

class BasisFailure : public DomainError {
public:
    using DomainError::DomainError;
};

/// Exponents (a, b, c) of E2^a E6^b E10^c with 2a + 6b + 10c = k, a descending.
inline std::vector<std::array<int, 3>> monomial_exponents(int k)
{
    std::vector<std::array<int, 3>> out;
    for (int a = k / 2; a >= 0; --a)
        for (int b = (k - 2 * a) / 6; b >= 0; --b) {
            int rest = k - 2 * a - 6 * b;
            if (rest % 10 == 0)
                out.push_back({a, b, rest / 10});
        }
    return out;
}

/// Monomials in E2, E6, E10 of weight k: a basis of M_k for D = 5 and even k < 20.
inline std::vector<Expansion> monomial_basis(const FieldContext& ctx, int k, std::int64_t bound)
{
    if (ctx.D != 5)
        throw DomainError("monomial basis is only available for D=5");
    if (k % 2 || k < 2 || k >= 20)
        throw DomainError("monomial basis needs even 2 <= k < 20, got " + std::to_string(k));
    const Expansion e2 = eisenstein(ctx, 2, bound), e6 = eisenstein(ctx, 6, bound), e10 = eisenstein(ctx, 10, bound);
    std::map<std::array<int, 3>, Expansion> memo;
    std::function<Expansion(std::array<int, 3>)> build = [&](std::array<int, 3> ex) -> Expansion {
        if (auto it = memo.find(ex); it != memo.end())
            return it->second;
        Expansion r;
        if (ex[0] + ex[1] + ex[2] == 1)
            r = ex[0] ? e2 : ex[1] ? e6 : e10;
        else {
            std::array<int, 3> rest = ex;
            const Expansion* factor = nullptr;
            if (rest[2]) {
                --rest[2];
                factor = &e10;
            } else if (rest[1]) {
                --rest[1];
                factor = &e6;
            } else {
                --rest[0];
                factor = &e2;
            }
            r = product(build(rest), *factor, bound);
        }
        memo.emplace(ex, r);
        return r;
    };
    std::vector<Expansion> out;
    RatMatrix rows;
    for (auto& ex : monomial_exponents(k)) {
        out.push_back(build(ex));
        rows.push_back(coefficient_vector(out.back(), out.back().coeffs.size()));
    }
    if (rank(rows) != out.size())
        throw BasisFailure("monomials of weight " + std::to_string(k) + " are dependent up to bound " +
                           std::to_string(bound));
    return out;
}

/// Echelonized basis of the forms in span(basis) with zero constant term.
inline std::vector<Expansion> cusp_subspace(const std::vector<Expansion>& basis)
{
    if (basis.empty())
        return {};
    const std::size_t n = basis.front().coeffs.size();
    RatMatrix constants{std::vector<Rat>()};
    for (auto& f : basis)
        constants[0].push_back(f.constant_term.rational());
    RatMatrix rows;
    for (auto& w : nullspace(constants, basis.size())) {
        std::vector<CoeffNumber> cw(w.begin(), w.end());
        rows.push_back(coefficient_vector(linear_combination(cw, basis), n));
    }
    auto ech = rref(rows);
    std::vector<Expansion> out;
    const Expansion& ref = basis.front();
    for (auto& row : ech.rows) {
        std::vector<CoeffNumber> c(row.begin() + 1, row.end());
        out.push_back(detail::make_expansion(*ref.ctx, ref.weight, CoeffNumber(row[0]), std::move(c), ref.index));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Canonical JSON

inline nlohmann::json coeff_to_json(const CoeffNumber& c)
{
    auto pair = [](const Rat& r) {
        Rat q = r;
        q.canonicalize();
        return nlohmann::json::array({q.get_num().get_str(), q.get_den().get_str()});
    };
    return nlohmann::json::array({pair(c.u()), pair(c.v())});
}

inline CoeffNumber coeff_from_json(const nlohmann::json& j, const Int& disc)
{
    auto rat = [](const nlohmann::json& p) {
        if (!p.is_array() || p.size() != 2)
            throw DomainError("rational must be a [num, den] pair");
        Rat r(Int(p[0].get<std::string>()), Int(p[1].get<std::string>()));
        if (r.get_den() == 0)
            throw DomainError("zero denominator");
        r.canonicalize();
        return r;
    };
    if (!j.is_array() || j.size() != 2)
        throw DomainError("coefficient must be a pair of rationals");
    return CoeffNumber(rat(j[0]), rat(j[1]), disc);
}

inline nlohmann::json to_json(const Expansion& f)
{
    nlohmann::json coeffs = nlohmann::json::array();
    for (std::size_t i = 0; i < f.coeffs.size(); ++i) {
        const auto& m = f.index->ideals[i];
        coeffs.push_back({{"ideal", {m.norm(), m.a, m.b, m.c}}, {"value", coeff_to_json(f.coeffs[i])}});
    }
    return {{"d", f.ctx->d},
            {"weight", f.weight},
            {"coeff_disc", f.coeff_disc.get_si()},
            {"bound", f.bound()},
            {"constant_term", coeff_to_json(f.constant_term)},
            {"coeffs", std::move(coeffs)}};
}

/// Single-line canonical form: sorted keys, no whitespace.
inline std::string serialize(const Expansion& f) { return to_json(f).dump(); }

inline Expansion from_json(const nlohmann::json& j)
{
    const auto d = j.at("d").get<std::int64_t>();
    const FieldPtr ctx = shared_field(d);
    const Int disc = j.at("coeff_disc").get<std::int64_t>();
    const auto bound = j.at("bound").get<std::int64_t>();
    auto idx = ideal_index(*ctx, bound);
    const auto& arr = j.at("coeffs");
    if (arr.size() != idx->ideals.size())
        throw DomainError("expansion file is not dense up to its bound");
    std::vector<CoeffNumber> c;
    c.reserve(arr.size());
    for (std::size_t i = 0; i < arr.size(); ++i) {
        const auto& id = arr[i].at("ideal");
        const auto& m = idx->ideals[i];
        if (id.size() != 4 || id[0].get<std::int64_t>() != m.norm() || id[1].get<std::int64_t>() != m.a ||
            id[2].get<std::int64_t>() != m.b || id[3].get<std::int64_t>() != m.c)
            throw DomainError("expansion file ideal list does not match the field's ideals at position " +
                              std::to_string(i));
        c.push_back(coeff_from_json(arr[i].at("value"), disc));
    }
    return detail::make_expansion(*ctx, j.at("weight").get<int>(), coeff_from_json(j.at("constant_term"), disc),
                                  std::move(c), idx);
}

inline Expansion parse_expansion(const std::string& text) { return from_json(nlohmann::json::parse(text)); }

} // namespace hmf
