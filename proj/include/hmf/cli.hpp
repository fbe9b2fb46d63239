#pragma once

// Command-line front end. run() is the whole program minus main(), so tests
// can drive it with captured streams.
//
// Exit codes: 0 success, 1 negative verdict (eigencheck fail, unconfirmed
// certificate), 2 domain error, 64 usage error, 70 internal error.

#include "hmf/cache.hpp"
#include "hmf/certcheck.hpp"
#include "hmf/hecke.hpp"
#include "hmf/search.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

namespace hmf::cli {

inline constexpr int kExitVerdict = 1;
inline constexpr int kExitDomain = 2;
inline constexpr int kExitUsage = 64;
inline constexpr int kExitInternal = 70;

inline std::string read_text(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw DomainError("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_text(const std::string& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out || !(out << text << '\n'))
        throw DomainError("cannot write " + path);
}

/// Writes to path, or to the stream when no path was given.
inline void emit(const std::string& path, const std::string& text, std::ostream& out)
{
    if (path.empty())
        out << text << '\n';
    else
        write_text(path, text);
}

inline Expansion cached_eisenstein(const FieldContext& ctx, int k, std::int64_t bound, const std::string& cache_dir,
                                   std::ostream& err)
{
    const auto cache = ExpansionCache::from_env(cache_dir);
    const CacheKey key{ctx.d, "eis", "k" + std::to_string(k)};
    if (cache) {
        try {
            if (auto hit = cache->get(key, bound))
                return *hit;
        } catch (const CacheCorruption& e) {
            err << "warning: " << e.what() << "; recomputing\n";
        }
    }
    Expansion e = eisenstein(ctx, k, bound);
    if (cache)
        cache->put(key, e);
    return e;
}

/// "c1*A+c2*B-C": rational coefficients (default 1) times named inputs.
inline std::vector<std::pair<Rat, std::string>> parse_combination(const std::string& spec)
{
    static const std::regex term(R"(\s*([+-]?)\s*(?:([0-9]+(?:/[0-9]+)?)\s*\*\s*)?([A-Za-z_][A-Za-z0-9_]*)\s*)");
    std::vector<std::pair<Rat, std::string>> out;
    auto it = spec.cbegin();
    std::smatch m;
    while (it != spec.cend()) {
        if (!std::regex_search(it, spec.cend(), m, term, std::regex_constants::match_continuous))
            throw DomainError("cannot parse combination at '" + std::string(it, spec.cend()) + "'");
        if (!out.empty() && m[1].length() == 0)
            throw DomainError("missing + or - before '" + m[3].str() + "'");
        Rat c = m[2].matched ? parse_rat(m[2].str()) : Rat(1);
        if (m[1].str() == "-")
            c = -c;
        out.emplace_back(c, m[3].str());
        it = m[0].second;
    }
    if (out.empty())
        throw DomainError("empty combination");
    return out;
}

inline std::string file_label(const std::string& label)
{
    std::string s;
    for (char ch : label)
        s += ch == '\'' ? std::string("prime") : std::string(1, ch);
    return s;
}

inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Hilbert modular forms over real quadratic fields: expansions, eigenforms and product identities"};
    app.require_subcommand(1);
    std::string cache_dir;
    app.add_option("--cache-dir", cache_dir, "Expansion cache directory (default: $HMF_CACHE)");

    std::int64_t d = 5, bound = 200, dmin = 5, dmax = 1000;
    int k = 2, max_weight = 20;
    bool numeric = false;
    std::string out_path, lhs_path, rhs_path, spec, out_dir, form_path, certs_path;
    std::vector<std::string> inputs;
    std::optional<std::int64_t> opt_bound;

    auto* zeta = app.add_subcommand("zeta", "Exact zeta_F(1-k) (or its numeric value)");
    zeta->add_option("--d", d, "Squarefree d > 1, F = Q(sqrt d)")->required();
    zeta->add_option("--k", k, "Even weight k >= 2")->required();
    zeta->add_flag("--numeric", numeric, "Evaluate through the functional equation instead");

    auto* eis = app.add_subcommand("eis", "Eisenstein series expansion");
    eis->add_option("--d", d)->required();
    eis->add_option("--k", k)->required();
    eis->add_option("--bound", bound, "Norm bound");
    eis->add_option("--out", out_path);

    auto* prod = app.add_subcommand("product", "Product of two expansion files");
    prod->add_option("--lhs", lhs_path)->required();
    prod->add_option("--rhs", rhs_path)->required();
    prod->add_option("--bound", opt_bound);
    prod->add_option("--out", out_path);

    auto* comb = app.add_subcommand("combine", "Rational linear combination of expansion files");
    comb->add_option("--spec", spec, "e.g. \"5360/60*A-7/60*B\"")->required();
    comb->add_option("--in", inputs, "NAME=file")->required();
    comb->add_option("--out", out_path);

    auto* eig = app.add_subcommand("eigenforms", "Normalized cuspidal eigenforms (D=5)");
    eig->add_option("--d", d)->required();
    eig->add_option("--k", k)->required();
    eig->add_option("--bound", bound);
    eig->add_option("--out-dir", out_dir)->required();

    auto* eigc = app.add_subcommand("eigencheck", "Check the Hecke relations of an expansion file");
    eigc->add_option("--form", form_path)->required();
    eigc->add_option("--weight", k)->required();
    eigc->add_option("--bound", opt_bound);

    auto* srch = app.add_subcommand("search", "Classify eigenform product identities (D=5)");
    srch->add_option("--d", d)->required();
    srch->add_option("--max-weight", max_weight);
    srch->add_option("--bound", bound);
    srch->add_option("--out", out_path);

    auto* bnds = app.add_subcommand("bounds", "Bound-only exclusion scan over fundamental discriminants");
    bnds->add_option("--dmin", dmin);
    bnds->add_option("--dmax", dmax);
    bnds->add_option("--max-weight", max_weight);
    bnds->add_option("--out", out_path);

    auto* ver = app.add_subcommand("verify", "Re-evaluate exclusion certificates at 400 bits");
    ver->add_option("--certs", certs_path)->required();

    std::reverse(args.begin(), args.end());
    try {
        app.parse(args);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kExitUsage;
    }

    try {
        if (*zeta) {
            auto ctx = shared_field(d);
            if (numeric) {
                PrecisionScope scope;
                out << real_to_string(zeta_special_numeric(*ctx, k), 40) << '\n';
            } else {
                out << rat_to_string(zeta_special(*ctx, k)) << '\n';
            }
        } else if (*eis) {
            auto ctx = shared_field(d);
            emit(out_path, serialize(cached_eisenstein(*ctx, k, bound, cache_dir, err)), out);
        } else if (*prod) {
            const Expansion f = parse_expansion(read_text(lhs_path));
            const Expansion h = parse_expansion(read_text(rhs_path));
            const std::int64_t b = opt_bound.value_or(std::min(f.bound(), h.bound()));
            emit(out_path, serialize(product(f, h, b)), out);
        } else if (*comb) {
            std::map<std::string, Expansion> named;
            for (auto& in : inputs) {
                const auto eq = in.find('=');
                if (eq == std::string::npos || eq == 0)
                    throw DomainError("--in expects NAME=file, got " + in);
                named.emplace(in.substr(0, eq), parse_expansion(read_text(in.substr(eq + 1))));
            }
            std::vector<CoeffNumber> cs;
            std::vector<Expansion> fs;
            for (auto& [c, name] : parse_combination(spec)) {
                auto it = named.find(name);
                if (it == named.end())
                    throw DomainError("no input named " + name);
                cs.emplace_back(c);
                fs.push_back(it->second);
            }
            emit(out_path, serialize(linear_combination(cs, fs)), out);
        } else if (*eig) {
            auto ctx = shared_field(d);
            std::filesystem::create_directories(out_dir);
            for (auto& r : eigenforms(*ctx, k, bound)) {
                const auto path = std::filesystem::path(out_dir) / (file_label(r.label) + ".json");
                write_text(path.string(), serialize(r.expansion));
                out << r.label << ' ' << path.string() << '\n';
            }
        } else if (*eigc) {
            const Expansion f = parse_expansion(read_text(form_path));
            const auto chk = is_normalized_eigenform(f, k, opt_bound.value_or(f.bound()));
            if (chk) {
                out << "pass\n";
            } else {
                out << "fail witness=" << chk.witness->str() << " relation: " << chk.relation << '\n';
                return kExitVerdict;
            }
        } else if (*srch) {
            auto ctx = shared_field(d);
            const auto rep = classify(*ctx, max_weight, bound);
            const std::string json = to_json(rep).dump();
            if (out_path.empty()) {
                out << json << '\n';
            } else {
                write_text(out_path, json);
                out << nlohmann::json{{"identities", rep.identities.size()}, {"exclusions", rep.exclusions.size()}}.dump()
                    << '\n';
            }
        } else if (*bnds) {
            const auto rep = bounds_scan(dmin, dmax, max_weight);
            const std::string json = to_json(rep).dump();
            if (out_path.empty()) {
                out << json << '\n';
            } else {
                write_text(out_path, json);
                out << nlohmann::json{{"exclusions", rep.exclusions.size()}, {"unresolved", rep.unresolved.size()}}.dump()
                    << '\n';
            }
        } else if (*ver) {
            const auto doc = nlohmann::json::parse(read_text(certs_path));
            std::size_t confirmed = 0, total = 0;
            for (auto& j : doc.at("exclusions")) {
                ++total;
                const auto cert = certificate_from_json(j);
                if (auto v = recheck(cert))
                    ++confirmed;
                else
                    out << "unconfirmed " << triple_to_json(cert.triple).dump() << ' ' << cert.rule << ": " << v.detail
                        << '\n';
            }
            out << "confirmed " << confirmed << " of " << total << '\n';
            if (confirmed != total)
                return kExitVerdict;
        }
    } catch (const DomainError& e) {
        err << "error: " << e.what() << '\n';
        return kExitDomain;
    } catch (const nlohmann::json::exception& e) {
        err << "error: malformed JSON: " << e.what() << '\n';
        return kExitDomain;
    } catch (const std::filesystem::filesystem_error& e) {
        err << "error: " << e.what() << '\n';
        return kExitDomain;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return kExitInternal;
    }
    return 0;
}

inline int run(int argc, char** argv, std::ostream& out = std::cout, std::ostream& err = std::cerr)
{
    return run(std::vector<std::string>(argv + 1, argv + argc), out, err);
}

} // namespace hmf::cli
