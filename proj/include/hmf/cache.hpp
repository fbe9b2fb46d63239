#pragma once

// On-disk expansion cache.
//
//   <dir>/objects/<sha256>.json   canonical expansion files, named by content digest
//   <dir>/index/<key>.json        {"bound": B, "digest": "<sha256>"} per parameter key
//
// A lookup hits when the indexed bound covers the request; the stored object
// is truncated to the requested bound. Files are written to a temporary name
// and renamed, so concurrent writers never expose partial files.

#include "hmf/forms.hpp"

#include <openssl/evp.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <random>
#include <sstream>
#include <string>

namespace hmf {

class CacheCorruption : public DomainError {
public:
    using DomainError::DomainError;
};

inline std::string sha256_hex(const std::string& data)
{
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1)
        throw InternalError("sha256 failed");
    static const char* hex = "0123456789abcdef";
    std::string out;
    for (unsigned i = 0; i < len; ++i) {
        out += hex[md[i] >> 4];
        out += hex[md[i] & 15];
    }
    return out;
}

/// What an expansion was computed from, minus the bound: e.g. {5, "eis", "k4"}.
struct CacheKey {
    std::int64_t d = 0;
    std::string kind;
    std::string detail;

    std::string filename() const
    {
        std::string s = "d" + std::to_string(d) + "-" + kind + "-" + detail;
        for (char& ch : s)
            if (!std::isalnum(static_cast<unsigned char>(ch)) && ch != '-' && ch != '_')
                ch = '_';
        return s + ".json";
    }
};

class ExpansionCache {
public:
    explicit ExpansionCache(std::filesystem::path dir) : dir_(std::move(dir)) {}

    /// --cache-dir if given, else HMF_CACHE, else no cache.
    static std::optional<ExpansionCache> from_env(const std::string& flag)
    {
        if (!flag.empty())
            return ExpansionCache(flag);
        if (const char* env = std::getenv("HMF_CACHE"); env && *env)
            return ExpansionCache(env);
        return std::nullopt;
    }

    const std::filesystem::path& dir() const { return dir_; }

    /// Cached expansion truncated to bound, or nullopt on a miss. Throws
    /// CacheCorruption when the stored object does not match its digest.
    std::optional<Expansion> get(const CacheKey& key, std::int64_t bound) const
    {
        const auto idx = read_file(dir_ / "index" / key.filename());
        if (!idx)
            return std::nullopt;
        nlohmann::json entry;
        try {
            entry = nlohmann::json::parse(*idx);
        } catch (const nlohmann::json::exception&) {
            throw CacheCorruption("unreadable cache index " + key.filename());
        }
        if (entry.value("bound", std::int64_t{0}) < bound)
            return std::nullopt;
        const std::string digest = entry.value("digest", std::string());
        const auto body = read_file(dir_ / "objects" / (digest + ".json"));
        if (!body)
            return std::nullopt;
        if (sha256_hex(*body) != digest)
            throw CacheCorruption("cache object " + digest + " does not match its digest");
        Expansion e = parse_expansion(*body);
        return truncate(e, bound);
    }

    /// Stores f unless a larger bound is already indexed. Returns the digest.
    std::string put(const CacheKey& key, const Expansion& f) const
    {
        const std::string body = serialize(f);
        const std::string digest = sha256_hex(body);
        write_atomic(dir_ / "objects" / (digest + ".json"), body);
        const auto index = dir_ / "index" / key.filename();
        if (auto old = read_file(index)) {
            try {
                auto entry = nlohmann::json::parse(*old);
                if (entry.value("bound", std::int64_t{0}) > f.bound())
                    return digest;
            } catch (const nlohmann::json::exception&) {
                // overwrite a damaged index entry
            }
        }
        const nlohmann::json entry{{"bound", f.bound()}, {"digest", digest}};
        write_atomic(index, entry.dump());
        return digest;
    }

private:
    static std::optional<std::string> read_file(const std::filesystem::path& p)
    {
        std::ifstream in(p, std::ios::binary);
        if (!in)
            return std::nullopt;
        std::ostringstream ss;
        ss << in.rdbuf();
        return ss.str();
    }

    static void write_atomic(const std::filesystem::path& target, const std::string& body)
    {
        std::filesystem::create_directories(target.parent_path());
        std::random_device rd;
        const auto tmp = target.parent_path() / (".tmp-" + std::to_string(rd()) + "-" + target.filename().string());
        {
            std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
            if (!out)
                throw DomainError("cannot write cache file " + tmp.string());
            out << body;
            if (!out.flush())
                throw DomainError("cannot write cache file " + tmp.string());
        }
        std::filesystem::rename(tmp, target);
    }

    std::filesystem::path dir_;
};

} // namespace hmf
