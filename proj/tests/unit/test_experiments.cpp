#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "json.hpp"

#include "doctest.h"
#include "idsa/error.hpp"
#include "idsa/experiments.hpp"

using namespace idsa;
namespace fs = std::filesystem;

namespace {

auto slurp(const fs::path &p) -> std::string {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

auto scratch(const std::string &name) -> fs::path {
  auto p = fs::temp_directory_path() / ("idsa_unit_" + name);
  fs::remove_all(p);
  return p;
}

auto run_quiet(const std::string &text, const fs::path &dir) -> int {
  auto cfg = parse_config(text, {{"output_dir", dir.string()}});
  std::ostringstream log;
  return run(cfg, log);
}

}  // namespace

TEST_SUITE("experiments") {
  TEST_CASE("exit codes by error group") {
    CHECK(exit_code_for(ConfigError("k", "x")) == kExitConfig);
    CHECK(exit_code_for(InvalidArgument("x")) == kExitConfig);
    CHECK(exit_code_for(IoError("x")) == kExitIo);
    CHECK(exit_code_for(NegativityError("x", 1.0, 2, -1.0)) == kExitSolver);
    CHECK(exit_code_for(std::runtime_error("x")) == kExitSolver);
    const auto rec = nlohmann::json::parse(error_record(NegativityError("neg", 1.5, 2, -1.0)));
    CHECK(rec["kind"] == "negativity");
  }

  TEST_CASE("oracle run writes csv and manifest") {
    const auto dir = scratch("oracle");
    REQUIRE(run_quiet("experiment = oracle\nn_cells = 30\n", dir) == kExitOk);
    CHECK(fs::exists(dir / "oracle.csv"));
    const auto m = nlohmann::json::parse(slurp(dir / "manifest.json"));
    CHECK(m["status"] == "ok");
    CHECK(m["experiment"] == "oracle");
    CHECK(m["parameters"].size() == config_keys().size());
    CHECK(m["outputs"].size() >= 1);
    CHECK(m["results"].contains("J0"));
    CHECK_FALSE(fs::exists(dir / "error.json"));
    fs::remove_all(dir);
  }

  TEST_CASE("runs are byte-identical") {
    const auto a = scratch("det_a"), b = scratch("det_b");
    const std::string text = "experiment = solve-idsa\nn_cells = 40\nt_end = 3\nsnapshot_times = 1, 2\n";
    REQUIRE(run_quiet(text, a) == kExitOk);
    REQUIRE(run_quiet(text, b) == kExitOk);
    CHECK(slurp(a / "profiles.csv") == slurp(b / "profiles.csv"));
    fs::remove_all(a);
    fs::remove_all(b);
  }

  TEST_CASE("solver failure exits 3 with an error record") {
    const auto dir = scratch("fail");
    CHECK(run_quiet("experiment = solve-new\nB = 0\nn_cells = 200\n", dir) == kExitSolver);
    const auto e = nlohmann::json::parse(slurp(dir / "error.json"));
    CHECK(e["kind"] == "normalization-singularity");
    const auto m = nlohmann::json::parse(slurp(dir / "manifest.json"));
    CHECK(m["status"] == "failed");
    fs::remove_all(dir);
  }

  TEST_CASE("atomic write replaces content and leaves no temporary") {
    const auto dir = scratch("atomic");
    fs::create_directories(dir);
    write_atomically((dir / "x.txt").string(), "one");
    write_atomically((dir / "x.txt").string(), "two");
    CHECK(slurp(dir / "x.txt") == "two");
    std::size_t n = 0;
    for ([[maybe_unused]] const auto &entry : fs::directory_iterator(dir)) ++n;
    CHECK(n == 1);
    CHECK_THROWS_AS(write_atomically((dir / "missing" / "y.txt").string(), "z"), IoError);
    fs::remove_all(dir);
  }
}
