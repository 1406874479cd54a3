#include "pptsep/cli.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "pptsep/io.hpp"

using namespace pptsep;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome run(const std::vector<std::string> &args) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path &p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

class Cli : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               ("pptsep_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    std::string path(const std::string &name) const { return (dir_ / name).string(); }

    std::string generate(const std::vector<std::string> &flags, const std::string &name) {
        std::vector<std::string> args{"generate"};
        args.insert(args.end(), flags.begin(), flags.end());
        args.push_back("--out");
        args.push_back(path(name));
        const auto r = run(args);
        EXPECT_EQ(r.code, 0) << r.err;
        return path(name);
    }

    fs::path dir_;
};

}  // namespace

TEST_F(Cli, CheckPptExampleIiPasses) {
    const auto f = generate({"--kind", "example-ii", "--a", "0.3"}, "ii.json");
    const auto r = run({"check-ppt", f});
    EXPECT_EQ(r.code, 0);
    const auto j = io::parse(r.out);
    EXPECT_TRUE(j["overall_ppt"].get<bool>());
}

TEST_F(Cli, CheckPptGhzFailsOnA) {
    const auto f = generate({"--kind", "npt", "--dims", "2", "2", "2", "--state", "ghz", "--p", "0"}, "ghz.json");
    const auto r = run({"check-ppt", f});
    EXPECT_EQ(r.code, 1);
    const auto j = io::parse(r.out);
    EXPECT_FALSE(j["overall_ppt"].get<bool>());
    bool a_failed = false;
    for (const auto &m : j["masks"])
        if (m["mask"] == "A") {
            a_failed = !m["pass"].get<bool>();
            EXPECT_NEAR(m["min_eigenvalue"].get<double>(), -0.5, 1e-10);
        }
    EXPECT_TRUE(a_failed);
}

TEST_F(Cli, CheckPptTruncatedJsonIsInputError) {
    const auto f = generate({"--kind", "example-ii", "--a", "0.3"}, "ii.json");
    const std::string text = slurp(f);
    std::ofstream(path("cut.json")) << text.substr(0, text.size() / 2);
    const auto r = run({"check-ppt", path("cut.json")});
    EXPECT_EQ(r.code, 2);
    EXPECT_TRUE(r.out.empty());
    EXPECT_FALSE(r.err.empty());
}

TEST_F(Cli, DecomposeExampleIFourTerms) {
    const auto f = generate({"--kind", "example-i", "--dims", "2", "2", "4"}, "i.json");
    const auto r = run({"decompose", f, "--out", path("ens.json")});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(io::parse(r.out)["terms"].get<int>(), 4);
    const auto ens = io::ensemble_from_json(io::read_json_file(path("ens.json")));
    EXPECT_EQ(ens.terms.size(), 4u);
}

TEST_F(Cli, DecomposeExampleIiiIsRankMismatch) {
    const auto f = generate({"--kind", "example-iii"}, "iii.json");
    const auto r = run({"decompose", f, "--out", path("ens.json")});
    EXPECT_EQ(r.code, 3);
    EXPECT_EQ(io::parse(r.out)["error"], "RankMismatch");
    EXPECT_FALSE(fs::exists(path("ens.json")));
}

TEST_F(Cli, DecomposeExampleIiWeights) {
    const auto f = generate({"--kind", "example-ii", "--a", "0.3"}, "ii.json");
    const auto r = run({"decompose", f, "--witness", "corner", "--out", path("ens.json")});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto ens = io::ensemble_from_json(io::read_json_file(path("ens.json")));
    ASSERT_EQ(ens.terms.size(), 2u);
    std::vector<double> w{ens.terms[0].p, ens.terms[1].p};
    std::sort(w.begin(), w.end());
    EXPECT_NEAR(w[0], 0.2, 1e-12);
    EXPECT_NEAR(w[1], 0.8, 1e-12);
}

TEST_F(Cli, DecomposeExplicitWitness) {
    const auto f = generate({"--kind", "example-ii", "--a", "0.1"}, "ii.json");
    const auto ok = run({"decompose", f, "--witness", "explicit", "--eA", "[[1.0,0.0],[0.0,0.0]]", "--fB",
                         "[[1.0,0.0],[0.0,0.0]]"});
    EXPECT_EQ(ok.code, 0) << ok.err;
    const auto bad = run({"decompose", f, "--witness", "explicit", "--eA", "[[0.0,0.0],[1.0,0.0]]", "--fB",
                          "[[0.0,0.0],[1.0,0.0]]"});
    EXPECT_EQ(bad.code, 3);
    EXPECT_EQ(io::parse(bad.out)["error"], "NoWitness");
    EXPECT_EQ(run({"decompose", f, "--witness", "explicit"}).code, 2);
}

TEST_F(Cli, DecomposeNptIsPreconditionFailure) {
    const auto f = generate({"--kind", "npt", "--dims", "2", "2", "2", "--seed", "4"}, "npt.json");
    const auto r = run({"decompose", f});
    EXPECT_EQ(r.code, 3);
    EXPECT_EQ(io::parse(r.out)["error"], "NotPptError");
}

TEST_F(Cli, GenerateIsDeterministic) {
    const auto a = generate({"--kind", "canonical", "--dims", "3", "3", "4", "--seed", "7"}, "a.json");
    const auto b = generate({"--kind", "canonical", "--dims", "3", "3", "4", "--seed", "7"}, "b.json");
    EXPECT_EQ(slurp(a), slurp(b));
    EXPECT_EQ(slurp(path("a.truth.json")), slurp(path("b.truth.json")));
    const auto c = generate({"--kind", "canonical", "--dims", "3", "3", "4", "--seed", "8"}, "c.json");
    EXPECT_NE(slurp(a), slurp(c));
}

TEST_F(Cli, GenerateRejectsBadFlags) {
    EXPECT_EQ(run({"generate", "--kind", "example-ii", "--a", "0.7", "--out", path("x.json")}).code, 2);
    EXPECT_EQ(run({"generate", "--kind", "example-ii", "--out", path("x.json")}).code, 2);
    EXPECT_EQ(run({"generate", "--kind", "canonical", "--out", path("x.json")}).code, 2);
    EXPECT_EQ(run({"generate", "--kind", "example-iii", "--dims", "2", "2", "3", "--out", path("x.json")}).code, 2);
    EXPECT_EQ(run({"generate", "--kind", "bogus", "--out", path("x.json")}).code, 2);
    EXPECT_EQ(run({"generate", "--kind", "npt", "--dims", "2", "2", "2", "--p", "2", "--out", path("x.json")}).code,
              2);
    EXPECT_FALSE(fs::exists(path("x.json")));
}

TEST_F(Cli, VerifyDecomposeOutput) {
    const auto f = generate({"--kind", "canonical", "--dims", "2", "3", "2", "--seed", "1"}, "c.json");
    ASSERT_EQ(run({"decompose", f, "--out", path("ens.json")}).code, 0);
    const auto r = run({"verify", f, path("ens.json")});
    EXPECT_EQ(r.code, 0) << r.err;
    EXPECT_TRUE(io::parse(r.out)["pass"].get<bool>());
}

TEST_F(Cli, VerifyEqualWeightEnsembleFails) {
    const auto f = generate({"--kind", "example-ii", "--a", "0.3"}, "ii.json");
    std::ofstream(path("ens.json")) << R"({"schema_version": "1", "dims": [2, 2, 2], "terms": [
      {"p": 0.5, "vecA": [[1.0, 0.0], [0.0, 0.0]], "vecB": [[1.0, 0.0], [0.0, 0.0]],
       "vecC": [[0.7071067811865476, 0.0], [0.7071067811865476, 0.0]]},
      {"p": 0.5, "vecA": [[1.0, 0.0], [0.0, 0.0]], "vecB": [[1.0, 0.0], [0.0, 0.0]],
       "vecC": [[0.7071067811865476, 0.0], [-0.7071067811865476, 0.0]]}]})";
    const auto r = run({"verify", f, path("ens.json")});
    EXPECT_EQ(r.code, 1);
    EXPECT_GT(io::parse(r.out)["residual"].get<double>(), 0.1);
}

TEST_F(Cli, VerifyBrokenWeightSum) {
    const auto f = generate({"--kind", "example-ii", "--a", "0.3"}, "ii.json");
    ASSERT_EQ(run({"decompose", f, "--out", path("ens.json")}).code, 0);
    auto j = io::read_json_file(path("ens.json"));
    j["terms"][0]["p"] = j["terms"][0]["p"].get<double>() + 0.1;
    std::ofstream(path("edited.json")) << io::dump(j);
    const auto r = run({"verify", f, path("edited.json")});
    EXPECT_EQ(r.code, 1);
    EXPECT_FALSE(io::parse(r.out)["violations"].empty());
    EXPECT_NE(r.err.find("invariant"), std::string::npos);
}

TEST_F(Cli, VerifyDimsMismatchIsInputError) {
    const auto f = generate({"--kind", "example-ii", "--a", "0.3"}, "ii.json");
    const auto g = generate({"--kind", "example-i", "--dims", "2", "2", "3"}, "i.json");
    ASSERT_EQ(run({"decompose", g, "--out", path("ens.json")}).code, 0);
    EXPECT_EQ(run({"verify", f, path("ens.json")}).code, 2);
}

TEST_F(Cli, StdoutIsSingleJsonDocument) {
    const auto f = generate({"--kind", "canonical", "--dims", "2", "2", "2", "--seed", "3"}, "c.json");
    for (const auto &args : std::vector<std::vector<std::string>>{{"check-ppt", f}, {"decompose", f}}) {
        const auto r = run(args);
        EXPECT_NO_THROW(io::parse(r.out));
    }
}

TEST_F(Cli, DecomposeIsDeterministic) {
    const auto f = generate({"--kind", "canonical", "--dims", "3", "3", "3", "--seed", "2"}, "c.json");
    const auto r1 = run({"decompose", f, "--seed", "9", "--out", path("e1.json")});
    const auto r2 = run({"decompose", f, "--seed", "9", "--out", path("e2.json")});
    EXPECT_EQ(slurp(path("e1.json")), slurp(path("e2.json")));
}

TEST_F(Cli, UsageErrors) {
    EXPECT_EQ(run({}).code, 2);
    EXPECT_EQ(run({"frobnicate"}).code, 2);
    EXPECT_EQ(run({"decompose", path("nope.json")}).code, 2);
    EXPECT_EQ(run({"decompose", path("nope.json"), "--witness", "sideways"}).code, 2);
    EXPECT_EQ(run({"--help"}).code, 0);
}
