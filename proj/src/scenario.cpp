#include "sbfi/scenario.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <optional>
#include <set>
#include <sstream>
#include <thread>

#include "sbfi/correlations.hpp"
#include "sbfi/ctime.hpp"
#include "sbfi/dynamics.hpp"
#include "sbfi/validate.hpp"
#include "sbfi/witness.hpp"

namespace sbfi {

namespace {

using nlohmann::json;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys{"kind", "output", "p0", "p", "r", "delta", "varphi", "gamma", "kappa",
                                          "n_max", "t_max", "step", "states", "p_points", "delta_points", "depth",
                                          "a", "s", "seed"};
  return keys;
}

[[noreturn]] void fail(const std::string& message) { throw ConfigError(message); }

std::optional<double> number(const json& cfg, const char* key) {
  if (!cfg.contains(key)) return std::nullopt;
  const auto& v = cfg.at(key);
  if (!v.is_number()) fail(std::string("'") + key + "' must be a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) fail(std::string("'") + key + "' must be finite");
  return x;
}

double number_or(const json& cfg, const char* key, double fallback) { return number(cfg, key).value_or(fallback); }

double required_number(const json& cfg, const char* key) {
  const auto x = number(cfg, key);
  if (!x) fail(std::string("missing required field '") + key + "'");
  return *x;
}

int integer(const json& cfg, const char* key, std::optional<int> fallback, int min_value) {
  if (!cfg.contains(key)) {
    if (!fallback) fail(std::string("missing required field '") + key + "'");
    return *fallback;
  }
  const auto& v = cfg.at(key);
  if (!v.is_number_integer()) fail(std::string("'") + key + "' must be an integer");
  const auto x = v.get<long long>();
  if (x < min_value || x > 1000000) {
    std::ostringstream os;
    os << "'" << key << "' must satisfy " << min_value << " <= " << key << " <= 1000000 (got " << x << ")";
    fail(os.str());
  }
  return static_cast<int>(x);
}

ChainParams chain(const json& cfg) {
  const double p = required_number(cfg, "p");
  const double r = number_or(cfg, "r", 0.0);
  ChainParams params{number_or(cfg, "p0", 1.0 - 2.0 * p - r), p, r, required_number(cfg, "delta")};
  try {
    params.validate();
  } catch (const std::invalid_argument& e) {
    fail(e.what());
  }
  return params;
}

CollisionModel collision_model(const json& cfg) {
  const double varphi = number_or(cfg, "varphi", -1.0);
  if (std::abs(varphi) > 1.0) fail("|varphi| <= 1");
  return CollisionModel(chain(cfg), varphi);
}

ContinuousModel continuous_model(const json& cfg) {
  const double gamma = required_number(cfg, "gamma");
  const double kappa = number_or(cfg, "kappa", 0.0);
  if (!(gamma > 0.0)) fail("gamma > 0");
  if (kappa < 0.0) fail("kappa >= 0");
  return ContinuousModel(gamma, kappa);
}

std::vector<double> time_grid(const json& cfg) {
  const double t_max = required_number(cfg, "t_max");
  const double step = required_number(cfg, "step");
  if (!(t_max > 0.0)) fail("t_max > 0");
  if (!(step > 0.0) || step > t_max) fail("0 < step <= t_max");
  const auto steps = std::llround(t_max / step);
  if (std::abs(static_cast<double>(steps) * step - t_max) > 1e-9 * t_max) fail("step must divide t_max");
  if (steps > 1000000) fail("t_max / step <= 1000000");
  std::vector<double> times(static_cast<std::size_t>(steps) + 1);
  for (std::size_t i = 0; i < times.size(); ++i) times[i] = t_max * static_cast<double>(i) / static_cast<double>(steps);
  return times;
}

Complex complex_field(const json& x, const char* key) {
  if (!x.contains(key)) return 0.0;
  const auto& v = x.at(key);
  if (v.is_number()) return v.get<double>();
  if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number())
    return {v[0].get<double>(), v[1].get<double>()};
  fail(std::string("XState '") + key + "' must be a number or [re, im]");
}

DensityMatrix basis_state(const std::string& bits) {
  std::size_t index = 0;
  for (char c : bits) {
    if (c != '0' && c != '1') fail("pure state label must contain only 0 and 1 (got '" + bits + "')");
    index = 2 * index + static_cast<std::size_t>(c - '0');
  }
  if (bits.empty() || bits.size() > 2) fail("pure state label must have 1 or 2 qubits (got '" + bits + "')");
  ComplexMatrix m(std::size_t{1} << bits.size());
  m(index, index) = 1.0;
  return DensityMatrix(m);
}

struct States {
  std::optional<DensityMatrix> rho;
  std::optional<DensityMatrix> sigma;
  double bias = 0.5;

  std::optional<HelstromEnsemble> ensemble() const {
    if (!rho || !sigma) return std::nullopt;
    return HelstromEnsemble(bias, *rho, *sigma);
  }
  int tensor_power() const { return rho && rho->dim() == 4 ? 2 : 1; }
};

States states(const json& cfg) {
  States out;
  if (!cfg.contains("states")) return out;
  const auto& s = cfg.at("states");
  if (!s.is_object()) fail("'states' must be an object with 'rho', optional 'sigma' and 'bias'");
  for (const auto& [key, value] : s.items())
    if (key != "rho" && key != "sigma" && key != "bias") fail("unknown field 'states." + key + "'");
  if (!s.contains("rho")) fail("'states' requires 'rho'");
  out.rho = parse_state(s.at("rho"));
  if (s.contains("sigma")) out.sigma = parse_state(s.at("sigma"));
  out.bias = number_or(s, "bias", 0.5);
  if (out.bias < 0.0 || out.bias > 1.0) fail("0 <= bias <= 1");
  if (out.sigma && out.sigma->dim() != out.rho->dim()) fail("rho and sigma must have the same dimension");
  return out;
}

std::string output_name(const json& cfg, const std::string& kind) {
  if (!cfg.contains("output")) return kind + ".csv";
  if (!cfg.at("output").is_string()) fail("'output' must be a string");
  const std::filesystem::path p = cfg.at("output").get<std::string>();
  if (p.empty() || p.has_parent_path() || p.is_absolute()) fail("'output' must be a bare file name");
  return p.string();
}

// Fills rows[i] = f(i) using up to `threads` workers; row order is fixed.
template <class F>
void parallel_rows(std::vector<std::vector<double>>& rows, unsigned threads, F&& f) {
  const std::size_t workers = std::max<std::size_t>(1, std::min<std::size_t>(threads, rows.size()));
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w)
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < rows.size(); i += workers) rows[i] = f(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

std::string kv(const char* key, double v) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "%s=%.17g", key, v);
  return buf;
}

double flag(bool b) { return b ? 1.0 : 0.0; }
double flag(const std::optional<bool>& b) { return b ? flag(*b) : kNaN; }

ScenarioOutput divisibility_scan(const json& cfg, const RunOptions& options) {
  const double r = number_or(cfg, "r", 0.0);
  if (r < 0.0 || r >= 0.5) fail("0 <= r < 1/2");
  const int p_points = integer(cfg, "p_points", 50, 1);
  const int delta_points = integer(cfg, "delta_points", 50, 2);
  DivisibilityOptions div;
  div.depth = integer(cfg, "depth", 40, 2);
  div.throw_on_mismatch = false;

  // alpha = 1 - 2(p + r) stays positive on the open interval.
  const double p_max = (1.0 - 2.0 * r) / 2.0;
  ScenarioOutput out;
  out.file_name = output_name(cfg, "divisibility-scan");
  out.table.header = {"p", "delta", "Q", "P", "CP", "tensorP", "margin_P", "margin_CP", "margin_tensorP",
                      "numeric_P", "numeric_CP", "numeric_tensorP", "consistent"};
  out.table.rows.resize(static_cast<std::size_t>(p_points) * static_cast<std::size_t>(delta_points));
  parallel_rows(out.table.rows, options.threads, [&](std::size_t k) {
    const auto i = static_cast<int>(k) / delta_points;
    const auto j = static_cast<int>(k) % delta_points;
    const double p = p_max * (i + 0.5) / p_points;
    const double delta = p * j / (delta_points - 1);
    const auto params = ChainParams::from_p_r_delta(p, r, delta);
    const auto v = classify_divisibility(params, div);
    return std::vector<double>{p, delta, params.q(), flag(v.P), flag(v.CP), flag(v.tensorP), v.margin_P,
                               v.margin_CP, v.margin_tensorP, flag(v.numeric_P), flag(v.numeric_CP),
                               flag(v.numeric_tensorP), flag(v.consistent(div.band))};
  });
  std::size_t inconsistent = 0;
  for (const auto& row : out.table.rows) inconsistent += row.back() == 0.0;
  out.summary.push_back("grid_points=" + std::to_string(out.table.rows.size()));
  out.summary.push_back("inconsistent_points=" + std::to_string(inconsistent));
  return out;
}

ScenarioOutput discrete_trace(const json& cfg, const RunOptions&) {
  const auto model = collision_model(cfg);
  const int n_max = integer(cfg, "n_max", std::nullopt, 1);
  const auto st = states(cfg);
  if (st.rho && n_max > kMaxExactPathLength) fail("n_max <= 12 when mutual information is requested");
  const auto ensemble = st.ensemble();

  const auto traj = eigenvalues_recurrence(model, n_max);
  ScenarioOutput out;
  out.file_name = output_name(cfg, "discrete-trace");
  out.table.header = {"n", "lambda", "lambda3", "step_lambda", "step_lambda3"};
  if (st.rho) out.table.header.push_back("qmi");
  if (ensemble) out.table.header.push_back("helstrom");

  std::vector<double> times(static_cast<std::size_t>(n_max) + 1);
  for (std::size_t n = 0; n < times.size(); ++n) times[n] = static_cast<double>(n);
  std::optional<HelstromSeries> helstrom;
  if (ensemble) helstrom = helstrom_trajectory(discrete_family(traj), *ensemble, st.tensor_power(), times);

  for (int n = 0; n <= n_max; ++n) {
    const auto k = static_cast<std::size_t>(n);
    double s1 = 1.0, s3 = 1.0;
    if (n > 0) {
      try {
        const auto step = intertwiner(traj, n, n - 1);
        s1 = step[1];
        s3 = step[3];
      } catch (const std::domain_error&) {
        s1 = s3 = kNaN;
      }
    }
    std::vector<double> row{static_cast<double>(n), traj.lam[k], traj.lam3[k], s1, s3};
    if (st.rho)
      row.push_back(st.rho->dim() == 2 ? mutual_information_discrete(model, *st.rho, n)
                                       : mutual_information_two_qubits_discrete(model, *st.rho, n));
    if (helstrom) row.push_back(helstrom->norms[k]);
    out.table.rows.push_back(std::move(row));
  }
  if (helstrom) {
    out.summary.push_back(kv("max_increment", helstrom->max_increment()));
    out.summary.push_back(std::string("revival=") + (helstrom->has_revival() ? "yes" : "no"));
  }
  return out;
}

ScenarioOutput ctime_trace(const json& cfg, const RunOptions&) {
  const auto model = continuous_model(cfg);
  const auto times = time_grid(cfg);
  const auto st = states(cfg);
  if (st.rho && st.rho->dim() == 4 && model.kappa() != 0.0) fail("kappa = 0 for two-qubit mutual information");
  if (st.rho && st.rho->dim() == 2 && !st.sigma) fail("a single-qubit 'rho' requires 'sigma'");

  ScenarioOutput out;
  out.file_name = output_name(cfg, "ctime-trace");
  if (!st.rho) {
    out.table.header = {"t", "lambda", "lambda3", "gamma3", "Gamma"};
    for (double t : times) {
      const auto l = lambda_t(model, t);
      const auto g = rates(model, t);
      out.table.rows.push_back({t, l.lam, l.lam3, g.gamma3, g.big_gamma});
    }
    return out;
  }
  const bool qmi = st.rho->dim() == 4;
  const auto ensemble = st.ensemble();
  std::optional<HelstromSeries> helstrom;
  if (ensemble) helstrom = helstrom_trajectory(continuous_family(model), *ensemble, st.tensor_power(), times);
  out.table.header = {"t"};
  if (qmi) out.table.header.push_back("qmi");
  if (helstrom) out.table.header.push_back("helstrom");
  for (std::size_t i = 0; i < times.size(); ++i) {
    std::vector<double> row{times[i]};
    if (qmi) row.push_back(mutual_information_continuous(model, *st.rho, times[i]));
    if (helstrom) row.push_back(helstrom->norms[i]);
    out.table.rows.push_back(std::move(row));
  }
  if (helstrom) {
    out.summary.push_back(kv("max_increment", helstrom->max_increment()));
    out.summary.push_back(std::string("revival=") + (helstrom->has_revival() ? "yes" : "no"));
  }
  return out;
}

ScenarioOutput witness_scan(const json& cfg, const RunOptions&) {
  const auto model = collision_model(cfg);
  const auto& params = model.params();
  if (params.r != 0.0) fail("r = 0 for the symmetric-projector witness");
  const int n_max = integer(cfg, "n_max", std::nullopt, 2);
  const auto st = states(cfg);
  const auto ensemble = st.ensemble();
  if (st.rho && !ensemble) fail("'states' for a witness scan requires both 'rho' and 'sigma'");

  ScenarioOutput out;
  out.file_name = output_name(cfg, "witness");
  out.table.header = {"n", "witness", "leading_order"};
  std::optional<HelstromSeries> helstrom;
  if (ensemble) {
    out.table.header.push_back("helstrom");
    std::vector<double> times;
    for (int n = 2; n <= n_max; ++n) times.push_back(n);
    helstrom = helstrom_trajectory(discrete_family(eigenvalues_recurrence(model, n_max)), *ensemble,
                                   st.tensor_power(), times);
  }
  const double leading = symmetric_projector_leading_order(params);
  for (int n = 2; n <= n_max; ++n) {
    std::vector<double> row{static_cast<double>(n), symmetric_projector_witness(params, n), leading};
    if (helstrom) row.push_back(helstrom->norms[static_cast<std::size_t>(n - 2)]);
    out.table.rows.push_back(std::move(row));
  }
  return out;
}

ScenarioOutput separable_demo(const json& cfg, const RunOptions&) {
  const double s = number_or(cfg, "s", std::atanh(0.5));
  const double a = required_number(cfg, "a");
  if (!(s > 0.0)) fail("s > 0");
  if (!(a > 0.0) || a > std::exp(-4.0 * s)) fail("0 < a <= e^{-4s}");
  const double t_max = number_or(cfg, "t_max", 3.0);
  const double step = number_or(cfg, "step", 0.005);
  if (!(t_max > s) || !(step > 0.0) || step > t_max) fail("s < t_max and 0 < step <= t_max");

  const auto c = separable_sbfi_construction(a, s, t_max, step);
  ScenarioOutput out;
  out.file_name = output_name(cfg, "separable-demo");
  out.table.header = {"t", "helstrom"};
  for (std::size_t i = 0; i < c.trajectory.times.size(); ++i)
    out.table.rows.push_back({c.trajectory.times[i], c.trajectory.norms[i]});
  const auto q = ensemble_quantumness(c.ensemble);
  out.summary = {kv("mu", c.mu), kv("min_eigenvalue", c.min_eigenvalue),
                 kv("min_partial_transpose_eigenvalue", c.min_partial_transpose_eigenvalue),
                 std::string("ppt=") + (c.ppt ? "yes" : "no"), kv("max_increment_after_s", c.max_increment_after_s),
                 std::string("revival_after_s=") + (c.triggered ? "yes" : "no"), kv("quantumness", q.value)};
  return out;
}

ScenarioOutput validate(const json& cfg, const RunOptions& options) {
  const auto seed = cfg.contains("seed") ? static_cast<std::uint64_t>(integer(cfg, "seed", 0, 0)) : options.seed;
  ScenarioOutput out;
  out.file_name = output_name(cfg, "validate");
  out.table.header = {"check_index", "error", "tolerance", "passed"};
  const auto checks = run_validation(seed);
  for (std::size_t i = 0; i < checks.size(); ++i) {
    const auto& c = checks[i];
    out.table.rows.push_back({static_cast<double>(i), c.error, c.tolerance, flag(c.passed)});
    out.summary.push_back(std::string(c.passed ? "PASS " : "FAIL ") + c.name);
    out.validation_passed = out.validation_passed && c.passed;
  }
  return out;
}

}  // namespace

DensityMatrix parse_state(const json& spec) {
  try {
    if (spec.is_string()) {
      const auto name = spec.get<std::string>();
      if (name == "P2plus") return DensityMatrix(symmetric_projector());
      if (name == "MaxMixed") return DensityMatrix::maximally_mixed(4);
      return basis_state(name);
    }
    if (spec.is_object() && spec.size() == 1 && spec.contains("MaxMixed")) {
      const int qubits = integer(spec.at("MaxMixed"), "qubits", 2, 1);
      if (qubits > 2) fail("MaxMixed qubits must be 1 or 2");
      return DensityMatrix::maximally_mixed(std::size_t{1} << qubits);
    }
    if (spec.is_object() && spec.size() == 1 && spec.contains("XState")) {
      const auto& x = spec.at("XState");
      if (!x.is_object()) fail("'XState' must be an object");
      XStateParams params;
      params.mu1 = number_or(x, "mu1", params.mu1);
      params.mu2 = number_or(x, "mu2", params.mu2);
      params.nu = number_or(x, "nu", params.nu);
      params.u = complex_field(x, "u");
      params.v = complex_field(x, "v");
      const std::string basis = x.value("basis", std::string("sigma1"));
      if (basis != "sigma1" && basis != "computational") fail("XState basis must be 'sigma1' or 'computational'");
      return x_state(params, basis == "sigma1" ? XBasis::Sigma1 : XBasis::Computational);
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    fail(e.what());
  }
  fail("unknown state specification: " + spec.dump());
}

ScenarioOutput run_scenario(const json& config, const RunOptions& options) {
  if (!config.is_object()) fail("config must be a JSON object");
  for (const auto& [key, value] : config.items())
    if (!known_keys().count(key)) fail("unknown field '" + key + "'");
  if (!config.contains("kind") || !config.at("kind").is_string()) fail("missing required string field 'kind'");
  if (options.threads == 0) fail("threads >= 1");
  const auto kind = config.at("kind").get<std::string>();
  if (kind == "divisibility-scan") return divisibility_scan(config, options);
  if (kind == "discrete-trace") return discrete_trace(config, options);
  if (kind == "ctime-trace") return ctime_trace(config, options);
  if (kind == "witness") return witness_scan(config, options);
  if (kind == "separable-demo") return separable_demo(config, options);
  if (kind == "validate") return validate(config, options);
  fail("unknown kind '" + kind +
       "' (expected divisibility-scan, discrete-trace, ctime-trace, witness, separable-demo or validate)");
}

ScenarioOutput run_scenario_file(const std::filesystem::path& path, const RunOptions& options) {
  std::ifstream in(path);
  if (!in) fail("cannot open config '" + path.string() + "'");
  json config;
  try {
    config = json::parse(in);
  } catch (const json::parse_error& e) {
    fail(std::string("config is not valid JSON: ") + e.what());
  }
  return run_scenario(config, options);
}

}  // namespace sbfi
