#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cli.hpp"

namespace {

struct Outcome {
  int code;
  std::string out, err;
};

Outcome run(std::vector<std::string> args) {
  args.insert(args.begin(), "ballcone");
  std::ostringstream out, err;
  const int code = ballcone::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string data(const char* name) { return std::string(BALLCONE_DATA_DIR) + "/" + name; }

// scoped environment variable
struct Env {
  std::string name;
  Env(const char* n, const char* v) : name(n) { setenv(n, v, 1); }
  ~Env() { unsetenv(name.c_str()); }
};

std::filesystem::path temp_file(const std::string& name) { return std::filesystem::temp_directory_path() / name; }

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("exit codes") {
    const auto ok = run({"check-convexity", "--scene", data("collinear.json"), "--order", "0,1,2", "--samples", "300"});
    CHECK(ok.code == ballcone::cli::kExitPass);
    const auto j = nlohmann::json::parse(ok.out);
    CHECK(j["schema"] == ballcone::cli::kReportSchema);
    CHECK(j["schema_version"] == ballcone::cli::kReportSchemaVersion);
    CHECK(j["command"] == "check-convexity");
    CHECK(j["verdict"] == "pass");
    CHECK_FALSE(j.contains("timings"));

    const auto bad = run({"check-convexity", "--scene", data("sweep_overlap.json"), "--order", "0,1,2", "--samples", "3333"});
    CHECK(bad.code == ballcone::cli::kExitViolation);
    CHECK(nlohmann::json::parse(bad.out)["verdict"] == "fail");

    CHECK(run({}).code == ballcone::cli::kExitUsage);
    CHECK(run({"check-convexity", "--bogus"}).code == ballcone::cli::kExitUsage);
    CHECK(run({"check-convexity", "--scene", "/nonexistent/scene.json"}).code == ballcone::cli::kExitUsage);
    CHECK(run({"check-convexity", "--scene", data("collinear.json"), "--order", "0,0,1"}).code == ballcone::cli::kExitUsage);
    CHECK(run({"--help"}).code == ballcone::cli::kExitPass);
  }

  TEST_CASE("malformed scene reports line and column") {
    const auto path = temp_file("ballcone_bad_scene.json");
    std::ofstream(path) << "{\n  \"dimension\": 3,\n  \"balls\": [}\n";
    const auto r = run({"enumerate-permutations", "--scene", path.string()});
    CHECK(r.code == ballcone::cli::kExitUsage);
    CHECK(r.err.find(path.string() + ":3:") != std::string::npos);
    std::filesystem::remove(path);
  }

  TEST_CASE("tolerance from flag, environment or default") {
    const std::vector<std::string> base{"enumerate-permutations", "--scene", data("fig1.json"), "--samples", "500"};
    auto config = [](const Outcome& o) { return nlohmann::json::parse(o.out)["config"]; };
    CHECK(config(run(base))["tol_source"] == "default");
    {
      Env e("BALLCONE_TOL", "1e-8");
      const auto c = config(run(base));
      CHECK(c["tol_source"] == "env");
      CHECK(c["tol"] == 1e-8);
      auto flagged = base;
      flagged.insert(flagged.end(), {"--tol", "1e-9"});
      CHECK(config(run(flagged))["tol_source"] == "flag");
    }
    {
      Env e("BALLCONE_TOL", "abc");
      CHECK(run(base).code == ballcone::cli::kExitUsage);
    }
  }

  TEST_CASE("repeated runs are byte-identical, whatever the thread count") {
    const std::vector<std::vector<std::string>> cmds{
        {"enumerate-permutations", "--scene", data("fig1.json"), "--samples", "3000"},
        {"count-components", "--scene", data("fig1.json"), "--samples", "3000"},
        {"check-convexity", "--scene", data("fig1.json"), "--samples", "200"},
        {"probe-flex", "--scene", data("fig1.json"), "--samples", "40"},
        {"trace-curves", "--scene", data("fig1.json"), "--format", "svg", "--resolution", "60", "--region-resolution", "30"},
        {"verify-identities", "--trials", "2"},
        {"generate-scene", "--n", "4", "--seed", "9"},
    };
    for (const auto& c : cmds) {
      const auto a = run(c), b = run(c);
      CHECK_MESSAGE(a.out == b.out, c[0]);
      Env e("BALLCONE_THREADS", "3");
      CHECK_MESSAGE(run(c).out == a.out, c[0]);
    }
  }

  TEST_CASE("artifacts and reports go to their files") {
    const auto svg = temp_file("ballcone_trace.svg"), rep = temp_file("ballcone_trace.json");
    const auto r = run({"trace-curves", "--scene", data("fig1.json"), "--chart", "2", "--center", "0.51,0.18",
                        "--half-width", "0.8", "--order", "1,0,2", "--format", "svg", "--resolution", "80",
                        "--region-resolution", "40", "--out", svg.string(), "--report", rep.string()});
    REQUIRE(r.code == 0);
    std::ifstream in(svg);
    const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    for (const char* colour : {"red", "black", "blue", "green", "gray"})
      CHECK(text.find(std::string("stroke=\"") + colour + "\"") != std::string::npos);
    const auto j = nlohmann::json::parse(std::ifstream(rep));
    CHECK(j["command"] == "trace-curves");
    CHECK(j["artifacts"].size() == 1);
    std::filesystem::remove(svg);
    std::filesystem::remove(rep);
  }

  TEST_CASE("verify identities and generate scene") {
    const auto v = run({"verify-identities", "--trials", "3", "--seed", "42"});
    CHECK(v.code == 0);
    const auto j = nlohmann::json::parse(v.out);
    CHECK(j["result"]["identities"].size() == 6);

    const auto g = run({"generate-scene", "--n", "3", "--layout", "triangle", "--seed", "2"});
    CHECK(g.code == 0);
    CHECK(run({"generate-scene", "--layout", "spiral"}).code == ballcone::cli::kExitUsage);
  }

  TEST_CASE("timings appear only on request") {
    const auto r = run({"verify-identities", "--trials", "1", "--timings"});
    CHECK(nlohmann::json::parse(r.out).contains("timings"));
  }
}
