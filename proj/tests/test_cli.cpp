#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "sbfi/csv.hpp"
#include "sbfi/scenario.hpp"

using namespace sbfi;
using nlohmann::json;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int exit_code(const std::string& args) {
  const std::string cmd = std::string(SBFI_BINARY) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string config_error(const json& cfg) {
  try {
    run_scenario(cfg);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}

json xstate_trace(double u) {
  return json::parse(R"({
    "kind": "ctime-trace", "gamma": 1.0, "kappa": 0.0, "t_max": 6.0, "step": 0.01,
    "states": {
      "rho": {"XState": {"mu1": 0.25, "mu2": 0.25, "nu": 0.25, "u": )" + std::to_string(u) + R"(, "v": [0.0, 0.125]}},
      "sigma": {"XState": {"mu1": 0.5, "mu2": 0.5, "nu": 0.0, "u": 0.125, "basis": "computational"}},
      "bias": 0.52}})");
}

}  // namespace

TEST_CASE("csv formatting") {
  CHECK(format_csv({{"a", "b"}, {}}) == "a,b\n");
  CHECK(format_csv({{"t"}, {{0.1}}}) == "t\n0.10000000000000001\n");
  CHECK(format_csv({{"x", "y"}, {{1.0, -2.5}}}) == "x,y\n1,-2.5\n");
  CHECK_THROWS_AS(format_csv({{"x", "y"}, {{1.0}}}), std::invalid_argument);
  try {
    emit_csv({{"x"}, {}}, "/nonexistent-dir/file.csv");
    FAIL("expected an I/O error");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()).find("No such file or directory") != std::string::npos);
  }
}

TEST_CASE("state presets") {
  CHECK(parse_state("P2plus").matrix().max_abs_diff(symmetric_projector()) == 0.0);
  CHECK(parse_state("MaxMixed").dim() == 4);
  CHECK(parse_state(json::parse(R"({"MaxMixed": {"qubits": 1}})")).dim() == 2);
  CHECK(parse_state("01").matrix()(1, 1) == Complex(1.0));
  CHECK(parse_state("1").matrix()(1, 1) == Complex(1.0));
  const auto x = parse_state(json::parse(R"({"XState": {"mu1": 0.5, "mu2": 0.5, "nu": 0, "u": 0.125, "basis": "computational"}})"));
  CHECK(x.matrix()(0, 3) == Complex(0.125));
  CHECK_THROWS_AS(parse_state("012"), ConfigError);
  CHECK_THROWS_AS(parse_state("Bell"), ConfigError);
  try {
    parse_state(json::parse(R"({"XState": {"u": 0.5}})"));
    FAIL("expected a bound violation");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("|u| <= sqrt(mu1 mu2)") != std::string::npos);
  }
}

TEST_CASE("config errors name the violated constraint") {
  CHECK(config_error(json::parse(R"({"kind": "discrete-trace", "p": 0.3, "delta": 0.4, "n_max": 3})")).find("delta <= p") !=
        std::string::npos);
  CHECK(config_error(json::parse(R"({"kind": "discrete-trace", "p": 0.3, "delta": 0.1, "varphi": 2, "n_max": 3})"))
            .find("|varphi| <= 1") != std::string::npos);
  CHECK(config_error(json::parse(R"({"kind": "ctime-trace", "gamma": -1, "t_max": 1, "step": 0.1})")).find("gamma > 0") !=
        std::string::npos);
  CHECK(config_error(json::parse(R"({"kind": "ctime-trace", "gamma": 1, "t_max": 1, "step": 0.3})")).find("step must divide") !=
        std::string::npos);
  CHECK(config_error(json::parse(R"({"kind": "witness", "p": 0.1, "r": 0.1, "delta": 0.0, "n_max": 3})")).find("r = 0") !=
        std::string::npos);
  CHECK(config_error(json::parse(R"({"kind": "separable-demo", "a": 0.5})")).find("e^{-4s}") != std::string::npos);
  CHECK(config_error(json::parse(R"({"kind": "bogus"})")).find("unknown kind") != std::string::npos);
  CHECK(config_error(json::parse(R"({"kind": "validate", "colour": 1})")).find("unknown field 'colour'") != std::string::npos);
  CHECK(config_error(json::parse(R"({"p": 0.1})")).find("'kind'") != std::string::npos);
  auto bad = xstate_trace(0.001);
  bad["kappa"] = 0.5;
  CHECK(config_error(bad).find("kappa = 0") != std::string::npos);
}

TEST_CASE("X-state trace") {
  const auto out = run_scenario(xstate_trace(0.001));
  CHECK(out.table.header == std::vector<std::string>{"t", "qmi", "helstrom"});
  REQUIRE(out.table.rows.size() == 601);
  for (std::size_t i = 1; i < out.table.rows.size(); ++i) CHECK(out.table.rows[i][0] > out.table.rows[i - 1][0]);
  CHECK(out.table.rows.back()[0] == 6.0);
  CHECK(format_csv(out.table) == format_csv(run_scenario(xstate_trace(0.001)).table));
}

TEST_CASE("divisibility scan shows the Q = 1/2 boundary") {
  const auto out = run_scenario(json::parse(R"({"kind": "divisibility-scan", "p_points": 4, "delta_points": 21})"));
  const auto& h = out.table.header;
  CHECK(std::vector<std::string>(h.begin(), h.begin() + 6) == std::vector<std::string>{"p", "delta", "Q", "P", "CP", "tensorP"});
  const auto& first = out.table.rows;  // smallest p block
  for (std::size_t j = 0; j < 21; ++j) {
    const double q = first[j][2];
    if (std::abs(q - 0.5) < 0.06) continue;
    CHECK(first[j][5] == (q < 0.5 ? 1.0 : 0.0));
    CHECK(first[j].back() == 1.0);
  }
  // Thread count does not change the output.
  RunOptions four;
  four.threads = 4;
  const auto cfg = json::parse(R"({"kind": "divisibility-scan", "r": 0.1, "p_points": 10, "delta_points": 10})");
  CHECK(format_csv(run_scenario(cfg, four).table) == format_csv(run_scenario(cfg).table));
}

TEST_CASE("other scenarios") {
  const auto d = run_scenario(json::parse(
      R"({"kind": "discrete-trace", "p": 0.2, "delta": 0.1, "varphi": -1, "n_max": 6, "states": {"rho": "P2plus", "sigma": "MaxMixed", "bias": 0.5}})"));
  CHECK(d.table.header.size() == 7);
  CHECK(d.table.rows.size() == 7);
  CHECK(d.table.rows[0][5] == 0.0);
  const auto w = run_scenario(json::parse(R"({"kind": "witness", "p": 0.01, "delta": 0.01, "n_max": 20})"));
  CHECK(w.table.rows.size() == 19);
  CHECK(w.table.rows[0][1] == doctest::Approx(4e-4).epsilon(0.05));
  const auto c = run_scenario(json::parse(R"({"kind": "ctime-trace", "gamma": 1, "kappa": 0.5, "t_max": 1, "step": 0.5})"));
  CHECK(c.table.header == std::vector<std::string>{"t", "lambda", "lambda3", "gamma3", "Gamma"});
}

TEST_CASE("command-line exit codes and determinism") {
  const auto dir = std::filesystem::temp_directory_path() / "sbfi-cli-test";
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  const auto write = [&](const char* name, const std::string& text) {
    std::ofstream(dir / name) << text;
    return (dir / name).string();
  };
  const auto good = write("good.json", R"({"kind": "witness", "p": 0.01, "delta": 0.01, "n_max": 5, "output": "w.csv"})");
  CHECK(exit_code("run " + good + " --out " + (dir / "a").string()) == 0);
  CHECK(exit_code("run " + good + " --out " + (dir / "b").string() + " --threads 2") == 0);
  CHECK(slurp(dir / "a" / "w.csv") == slurp(dir / "b" / "w.csv"));
  CHECK(!slurp(dir / "a" / "w.csv").empty());

  CHECK(exit_code("run " + write("bad.json", R"({"kind": "witness", "p": 0.7, "delta": 0.1, "n_max": 5})")) == 2);
  CHECK(exit_code("run " + write("broken.json", "{not json")) == 2);
  CHECK(exit_code("run " + (dir / "missing.json").string()) == 2);
  CHECK(exit_code("frobnicate") == 2);
  CHECK(exit_code("validate --out " + (dir / "v").string()) == 0);
  CHECK(std::filesystem::exists(dir / "v" / "validate.csv"));
  std::filesystem::remove_all(dir);
}
