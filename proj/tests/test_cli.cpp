#include "hmf/cli.hpp"

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>

using namespace hmf;
namespace fs = std::filesystem;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run(std::vector<std::string> args)
{
    std::ostringstream out, err;
    const int code = cli::run(std::move(args), out, err);
    return {code, out.str(), err.str()};
}

class Cli : public ::testing::Test {
protected:
    void SetUp() override
    {
        dir = fs::temp_directory_path() /
              ("hmf-cli-" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) + "-" +
               ::testing::UnitTest::GetInstance()->current_test_info()->name());
        fs::remove_all(dir);
        fs::create_directories(dir);
    }
    void TearDown() override { fs::remove_all(dir); }

    std::string path(const std::string& name) const { return (dir / name).string(); }

    fs::path dir;
};

std::string first_line(const std::string& s) { return s.substr(0, s.find('\n')); }

} // namespace

TEST_F(Cli, ZetaGoldens)
{
    const std::vector<std::pair<std::string, std::string>> golden{
        {"2", "1/30"}, {"4", "1/60"}, {"6", "67/630"}, {"8", "361/120"}, {"10", "412751/1650"}};
    for (auto& [k, value] : golden) {
        const auto r = run({"zeta", "--d", "5", "--k", k});
        EXPECT_EQ(r.code, 0);
        EXPECT_EQ(r.out, value + "\n");
    }
    const auto n = run({"zeta", "--d", "5", "--k", "2", "--numeric"});
    EXPECT_EQ(n.code, 0);
    EXPECT_NEAR(std::stod(n.out), 1.0 / 30, 1e-15);
}

TEST_F(Cli, ErrorsAndExitCodes)
{
    const auto six = run({"zeta", "--d", "6", "--k", "2"});
    EXPECT_EQ(six.code, cli::kExitDomain);
    EXPECT_NE(six.err.find("field not certified narrow-class-one with norm -1 unit"), std::string::npos);
    EXPECT_EQ(run({"zeta", "--d", "4", "--k", "2"}).code, cli::kExitDomain);
    EXPECT_EQ(run({"zeta", "--d", "5", "--k", "3"}).code, cli::kExitDomain);
    EXPECT_EQ(run({"zeta", "--d", "5", "--k", "2", "--bogus"}).code, cli::kExitUsage);
    EXPECT_EQ(run({"zeta", "--k", "2"}).code, cli::kExitUsage);
    EXPECT_EQ(run({}).code, cli::kExitUsage);
    EXPECT_EQ(run({"nonsense"}).code, cli::kExitUsage);
    EXPECT_EQ(run({"product", "--lhs", path("missing.json"), "--rhs", path("missing.json")}).code, cli::kExitDomain);
    EXPECT_EQ(run({"--help"}).code, 0);
}

TEST_F(Cli, EisensteinProductCombineReproducesH6)
{
    ASSERT_EQ(run({"eis", "--d", "5", "--k", "2", "--bound", "60", "--out", path("e2.json")}).code, 0);
    ASSERT_EQ(run({"eis", "--d", "5", "--k", "4", "--bound", "60", "--out", path("e4.json")}).code, 0);
    ASSERT_EQ(run({"eis", "--d", "5", "--k", "6", "--bound", "60", "--out", path("e6.json")}).code, 0);
    ASSERT_EQ(run({"product", "--lhs", path("e2.json"), "--rhs", path("e4.json"), "--out", path("e2e4.json")}).code, 0);
    const auto c = run({"combine", "--spec", "5360/60*A-7/60*B", "--in", "A=" + path("e2e4.json"), "--in",
                        "B=" + path("e6.json"), "--out", path("h6.json")});
    ASSERT_EQ(c.code, 0) << c.err;
    const auto h6 = parse_expansion(cli::read_text(path("h6.json")));
    EXPECT_TRUE(h6.is_cuspidal());
    EXPECT_EQ(h6.unit_coeff(), CoeffNumber(1));
    EXPECT_EQ(h6.coeff(IdealHNF{2, 0, 2}), CoeffNumber(20));

    // stdout mode writes the same canonical text
    const auto direct = run({"eis", "--d", "5", "--k", "2", "--bound", "60"});
    EXPECT_EQ(direct.out, cli::read_text(path("e2.json")));
    EXPECT_EQ(run({"combine", "--spec", "A+C", "--in", "A=" + path("e2.json")}).code, cli::kExitDomain);
    EXPECT_EQ(run({"combine", "--spec", "A+B", "--in", "A=" + path("e2.json"), "--in", "B=" + path("e4.json")}).code,
              cli::kExitDomain);
}

TEST_F(Cli, EigenformsAndEigencheck)
{
    const auto r = run({"eigenforms", "--d", "5", "--k", "10", "--bound", "100", "--out-dir", path("forms")});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("h10 "), std::string::npos);
    EXPECT_NE(r.out.find("h10' "), std::string::npos);
    const auto h10 = parse_expansion(cli::read_text(path("forms/h10.json")));
    EXPECT_EQ(h10.coeff(IdealHNF{2, 0, 2}), CoeffNumber(Rat(170), Rat(30), Int(809)));
    EXPECT_TRUE(fs::exists(path("forms/h10prime.json")));

    const auto ok = run({"eigencheck", "--form", path("forms/h10.json"), "--weight", "10"});
    EXPECT_EQ(ok.code, 0);
    EXPECT_EQ(ok.out, "pass\n");

    ASSERT_EQ(run({"eis", "--d", "5", "--k", "2", "--bound", "100", "--out", path("e2.json")}).code, 0);
    ASSERT_EQ(run({"product", "--lhs", path("e2.json"), "--rhs", path("forms/h10.json"), "--out", path("p.json")}).code,
              0);
    const auto bad = run({"eigencheck", "--form", path("p.json"), "--weight", "12"});
    EXPECT_EQ(bad.code, cli::kExitVerdict);
    EXPECT_EQ(bad.out.rfind("fail witness=[16,4,0,4]", 0), 0u) << bad.out;
    EXPECT_EQ(run({"eigenforms", "--d", "5", "--k", "12", "--out-dir", path("f12")}).code, cli::kExitDomain);
}

TEST_F(Cli, SearchAndVerify)
{
    const auto s = run({"search", "--d", "5", "--max-weight", "20", "--out", path("report.json")});
    ASSERT_EQ(s.code, 0) << s.err;
    const auto summary = nlohmann::json::parse(s.out);
    EXPECT_EQ(summary.at("identities"), 2);
    const auto report = nlohmann::json::parse(cli::read_text(path("report.json")));
    ASSERT_EQ(report.at("identities").size(), 2u);
    EXPECT_EQ(report["identities"][0]["g"], "E4");
    EXPECT_EQ(report["identities"][0]["scalar"], "1/60");
    EXPECT_EQ(report["identities"][1]["g"], "h8");
    EXPECT_EQ(report["identities"][1]["scalar"], "1/120");

    const auto v = run({"verify", "--certs", path("report.json")});
    EXPECT_EQ(v.code, 0) << v.out;
    const std::size_t n = report.at("exclusions").size();
    EXPECT_EQ(v.out, "confirmed " + std::to_string(n) + " of " + std::to_string(n) + "\n");

    auto tampered = report;
    tampered["exclusions"][0]["lhs"] = "123";
    cli::write_text(path("bad.json"), tampered.dump());
    const auto t = run({"verify", "--certs", path("bad.json")});
    EXPECT_EQ(t.code, cli::kExitVerdict);
    EXPECT_NE(t.out.find("unconfirmed"), std::string::npos);

    EXPECT_EQ(run({"search", "--d", "13"}).code, cli::kExitDomain);
    cli::write_text(path("junk.json"), "{not json");
    EXPECT_EQ(run({"verify", "--certs", path("junk.json")}).code, cli::kExitDomain);
}

TEST_F(Cli, BoundsScan)
{
    const auto r = run({"bounds", "--dmin", "5", "--dmax", "40", "--max-weight", "12", "--out", path("b.json")});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto doc = nlohmann::json::parse(cli::read_text(path("b.json")));
    EXPECT_EQ(nlohmann::json::parse(r.out).at("exclusions"), doc.at("exclusions").size());
    EXPECT_GT(doc.at("exclusions").size(), 0u);
    EXPECT_EQ(run({"verify", "--certs", path("b.json")}).code, 0);
}

TEST_F(Cli, CacheHitTruncationAndCorruption)
{
    const std::string cache = path("cache");
    const auto big = run({"--cache-dir", cache, "eis", "--d", "5", "--k", "4", "--bound", "80"});
    ASSERT_EQ(big.code, 0);
    ASSERT_TRUE(fs::exists(fs::path(cache) / "index"));

    // a smaller request is served from the stored object, truncated, and equals a fresh computation
    const auto small = run({"--cache-dir", cache, "eis", "--d", "5", "--k", "4", "--bound", "30"});
    const auto fresh = run({"eis", "--d", "5", "--k", "4", "--bound", "30"});
    EXPECT_EQ(small.out, fresh.out);
    EXPECT_TRUE(small.err.empty());

    ExpansionCache c(cache);
    const CacheKey key{5, "eis", "k4"};
    ASSERT_TRUE(c.get(key, 80));
    EXPECT_FALSE(c.get(key, 81));
    EXPECT_FALSE(c.get(CacheKey{5, "eis", "k6"}, 10));

    // damage the stored object: a warning, then a correct recomputation
    for (auto& entry : fs::directory_iterator(fs::path(cache) / "objects")) {
        std::ofstream out(entry.path(), std::ios::app);
        out << " ";
    }
    EXPECT_THROW(c.get(key, 30), CacheCorruption);
    const auto again = run({"--cache-dir", cache, "eis", "--d", "5", "--k", "4", "--bound", "30"});
    EXPECT_EQ(again.code, 0);
    EXPECT_NE(again.err.find("warning"), std::string::npos);
    EXPECT_EQ(again.out, fresh.out);
}

TEST_F(Cli, SerializationIsBitIdentical)
{
    ASSERT_EQ(run({"eis", "--d", "13", "--k", "2", "--bound", "50", "--out", path("a.json")}).code, 0);
    const std::string text = cli::read_text(path("a.json"));
    EXPECT_EQ(serialize(parse_expansion(text)) + "\n", text);
    EXPECT_EQ(first_line(text).front(), '{');
}

TEST_F(Cli, InstalledBinaryRuns)
{
    const char* bin = std::getenv("HMF_CLI");
    if (!bin)
        GTEST_SKIP() << "HMF_CLI not set";
    const std::string cmd = std::string(bin) + " zeta --d 5 --k 6 > " + path("z.txt");
    ASSERT_EQ(std::system(cmd.c_str()), 0);
    EXPECT_EQ(cli::read_text(path("z.txt")), "67/630\n");
    const std::string bad = std::string(bin) + " zeta --d 6 --k 2 2> " + path("e.txt");
    const int status = std::system(bad.c_str());
    EXPECT_EQ(WEXITSTATUS(status), 2);
}
