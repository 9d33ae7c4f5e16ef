// fracequiv: batch front end for tables, verification suites and experiment sweeps.
//
// Exit codes: 0 success, 2 configuration error, 3 check failure, 4 numeric failure.

#include "fracequiv/experiments.hpp"
#include "fracequiv/fracnoise.hpp"
#include "fracequiv/nhbasis.hpp"
#include "fracequiv/report.hpp"
#include "fracequiv/specfun.hpp"
#include "fracequiv/toeplitz.hpp"
#include "fracequiv/verify.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

using namespace fracequiv;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitCheck = 3;
constexpr int kExitNumeric = 4;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string command;
  std::optional<double> hurst;
  std::optional<std::size_t> n;
  std::optional<std::string> n_grid;
  std::size_t count = 0;
  double beta = 1.0;
  double alpha = 1.0;
  double radius = 1.0;
  std::optional<std::uint64_t> seed;
  std::size_t replicates = 200;
  double cutoff_const = 1.0;
  std::string out;
  std::string format;
  int jobs = 1;
  double perturb_ak = 0.0;
  std::string model = "e1";
  std::string function = "smooth";
  std::string separation_case = "alpha_half";
  double theta = 0.0;

  double H() const {
    if (!hurst) throw ConfigError("--hurst is required for '" + command + "'");
    if (!(*hurst > 0.0 && *hurst < 1.0)) throw ConfigError("--hurst must lie in (0,1)");
    return *hurst;
  }
  std::uint64_t require_seed() const {
    if (!seed) throw ConfigError("--seed is required for the stochastic command '" + command + "'");
    return *seed;
  }
  std::size_t require_n() const {
    if (!n || *n == 0) throw ConfigError("--n must be a positive integer");
    return *n;
  }
  std::size_t require_count() const {
    if (count == 0) throw ConfigError("--count must be a positive integer");
    return count;
  }
};

/// "a:b:step" with an additive step, or "a:b:xR" for a geometric ratio R.
std::vector<std::size_t> parse_grid(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
  if (parts.size() != 3) throw ConfigError("--n-grid expects a:b:step or a:b:xR");
  try {
    const std::size_t a = std::stoul(parts[0]);
    const std::size_t b = std::stoul(parts[1]);
    const bool geometric = !parts[2].empty() && parts[2][0] == 'x';
    const std::size_t step = std::stoul(geometric ? parts[2].substr(1) : parts[2]);
    if (a == 0 || b < a || step == 0 || (geometric && step < 2)) throw ConfigError("--n-grid: invalid range");
    std::vector<std::size_t> out;
    for (std::size_t v = a; v <= b; v = geometric ? v * step : v + step) out.push_back(v);
    return out;
  } catch (const std::logic_error&) {
    throw ConfigError("--n-grid: could not parse '" + text + "'");
  }
}

std::vector<std::size_t> grid_or(const RunConfig& c, const std::string& fallback) {
  return parse_grid(c.n_grid ? *c.n_grid : fallback);
}

std::string table_to_json(const std::string& experiment, const RunConfig& c, const std::vector<std::string>& header,
                          const std::vector<std::vector<CsvCell>>& rows) {
  Report r(experiment, c.seed.value_or(0));
  if (c.hurst) r.params()["hurst"] = *c.hurst;
  for (const auto& row : rows) {
    Json m;
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (const auto* d = std::get_if<double>(&row[i])) m[header[i]] = *d;
      else if (const auto* n = std::get_if<long long>(&row[i])) m[header[i]] = *n;
      else m[header[i]] = std::get<std::string>(row[i]);
    }
    r.add_metric(std::move(m));
  }
  return r.dump();
}

void emit(const RunConfig& c, const std::string& text) {
  if (c.out.empty() || c.out == "-") {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream f(c.out, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open output file '" + c.out + "'");
  f << text;
  if (!f) throw std::runtime_error("write failed for '" + c.out + "'");
}

/// Rows collected once and rendered as CSV or as a JSON report.
class Tabular {
 public:
  Tabular(std::string experiment, std::vector<std::string> header)
      : experiment_(std::move(experiment)), header_(header), table_(std::move(header)) {}
  void add(std::vector<CsvCell> row) {
    rows_.push_back(row);
    table_.add_row(std::move(row));
  }
  void write(const RunConfig& c) const {
    const std::string fmt = c.format.empty() ? "csv" : c.format;
    emit(c, fmt == "json" ? table_to_json(experiment_, c, header_, rows_) : table_.str());
  }

 private:
  std::string experiment_;
  std::vector<std::string> header_;
  CsvTable table_;
  std::vector<std::vector<CsvCell>> rows_;
};

long long ll(std::size_t v) { return static_cast<long long>(v); }

int cmd_zeros(const RunConfig& c) {
  const double H = c.H();
  const ZeroTable z = bessel_zeros(H, c.require_count());
  Tabular t("zeros", {"k", "omega", "omega_over_pi_minus_k"});
  for (std::size_t k = 1; k <= z.size(); ++k) {
    const double w = z.omega(static_cast<long>(k));
    t.add({ll(k), w, w / std::numbers::pi - static_cast<double>(k)});
  }
  t.write(c);
  return kExitOk;
}

int cmd_coeffs(const RunConfig& c) {
  const BasisTable table = build_basis_table(c.H(), c.require_count());
  Tabular t("coeffs", {"k", "omega", "a", "sigma", "sign"});
  for (std::size_t k = 0; k <= table.K(); ++k) {
    const long kk = static_cast<long>(k);
    t.add({ll(k), table.omega(kk), table.a(kk), table.sigma(kk), static_cast<long long>(table.sign(kk))});
  }
  t.write(c);
  return kExitOk;
}

int cmd_bounds(const RunConfig& c) {
  const double H = c.H();
  const std::vector<std::size_t> grid = c.n ? std::vector<std::size_t>{c.require_n()} : grid_or(c, "16:256:x4");
  Tabular t("bounds", {"n", "H", "lower_bound", "dense_min", "dense_max", "upper_bound"});
  for (std::size_t n : grid) {
    if (n < 2) throw ConfigError("bounds needs n >= 2");
    const double nan = std::nan("");
    EigenExtremes ex{nan, nan};
    if (n <= 1024) ex = dense_eigen_extremes(ToeplitzCov::fgn(H, n));
    t.add({ll(n), H, eig_lower_bound(H, n), ex.min, ex.max, eig_upper_bound(H, n)});
  }
  t.write(c);
  return kExitOk;
}

int cmd_simulate(const RunConfig& c) {
  const double H = c.H();
  const std::size_t n = c.require_n();
  const std::uint64_t seed = c.require_seed();
  if (c.model == "e1") {
    const double th = c.theta;
    const E1Sample s = simulate_e1(RegressionFunction([th](double) { return th; }), H, n, seed);
    Tabular t("simulate_e1", {"index", "value"});
    for (std::size_t i = 0; i < n; ++i) t.add({ll(i + 1), s.y[i]});
    t.write(c);
  } else if (c.model == "e3") {
    const std::size_t K = c.require_count();
    const BasisTable table = build_basis_table(H, K);
    const NonharmonicSeries theta = rate_test_function(table, K, c.beta, c.radius, seed);
    const E3Sample s = simulate_e3(theta, table, n, seed);
    Tabular t("simulate_e3", {"k", "sigma", "z", "z_prime"});
    for (std::size_t k = 0; k <= K; ++k) t.add({ll(k), table.sigma(static_cast<long>(k)), s.z[k], s.z_prime[k]});
    t.write(c);
  } else {
    throw ConfigError("--model must be e1 or e3");
  }
  return kExitOk;
}

int cmd_rates(const RunConfig& c) {
  const double H = c.H();
  const std::uint64_t seed = c.require_seed();
  const std::vector<std::size_t> grid = grid_or(c, "256:16384:x2");
  RateOptions o;
  o.cutoff_const = c.cutoff_const;
  o.jobs = c.jobs;
  const RiskReport r = rate_experiment(H, c.beta, c.radius, grid, c.replicates, seed, o);
  if (c.format == "json") {
    Report rep("rates", seed);
    rep.params() = Json{{"hurst", H},         {"beta", c.beta},         {"ball_radius", c.radius},
                        {"replicates", r.replicates}, {"cutoff_const", c.cutoff_const}, {"truth_K", r.truth_K}};
    for (std::size_t i = 0; i < grid.size(); ++i)
      rep.add_metric(Json{{"n", grid[i]}, {"M", r.cutoff[i]}, {"mean_risk", r.mean_risk[i]}, {"stderr", r.stderr_risk[i]}});
    rep.add_metric(Json{{"slope", r.fit.slope},
                        {"slope_ci_low", r.fit.ci_low},
                        {"slope_ci_high", r.fit.ci_high},
                        {"expected_slope", r.expected_slope},
                        {"riesz_lower", r.frame.lower},
                        {"riesz_upper", r.frame.upper}});
    emit(c, rep.dump());
    return kExitOk;
  }
  Tabular t("rates", {"n", "M", "mean_risk", "stderr", "slope", "slope_ci_low", "slope_ci_high", "expected_slope"});
  for (std::size_t i = 0; i < grid.size(); ++i)
    t.add({ll(grid[i]), ll(r.cutoff[i]), r.mean_risk[i], r.stderr_risk[i], r.fit.slope, r.fit.ci_low, r.fit.ci_high,
           r.expected_slope});
  t.write(c);
  return kExitOk;
}

int cmd_diagnose(const RunConfig& c) {
  const double H = c.H();
  const std::vector<std::size_t> grid = grid_or(c, "16:512:x2");
  const std::size_t K = c.count == 0 ? 8 : c.count;
  const BasisTable table = build_basis_table(H, std::max<std::size_t>(K, 1));
  NonharmonicSeries theta(table, K);
  std::optional<RegressionFunction> f;
  if (c.function == "smooth") {
    theta = rate_test_function(table, K, c.alpha, c.radius, c.seed.value_or(1));
    f.emplace(theta);
  } else if (c.function == "constant") {
    f.emplace([](double) { return 1.0; });
    theta = analyze([](double) { return 1.0; }, table, K);
  } else if (c.function == "zero") {
    f.emplace([](double) { return 0.0; });
  } else {
    throw ConfigError("--function must be smooth, constant or zero");
  }
  Tabular t("diagnose", {"n", "condition_i", "condition_ii", "projection_distance"});
  for (std::size_t n : grid) {
    const ProjectionResidual r = condition_ii_residual(theta, table, n);
    t.add({ll(n), condition_i_diagnostic(*f, H, n), r.scaled, r.distance});
  }
  t.write(c);
  return kExitOk;
}

int cmd_separation(const RunConfig& c) {
  const double H = c.H();
  SeparationCase which;
  if (c.separation_case == "alpha_half") which = SeparationCase::alpha_half;
  else if (c.separation_case == "alpha_low") which = SeparationCase::alpha_low;
  else throw ConfigError("--case must be alpha_half or alpha_low");
  const std::vector<std::size_t> grid = grid_or(c, "64:1024:x2");
  std::size_t need = 0;
  for (std::size_t n : grid) need = std::max(need, separation_table_size(n, which));
  const BasisTable table = build_basis_table(H, need);
  Tabular t("separation", {"n", "c", "kl_e1", "e3_separation"});
  for (std::size_t n : grid) {
    const SeparationReport s = separation_experiment(H, n, which, table, c.radius / 2.0);
    t.add({ll(n), s.c, s.kl_e1, s.e3_separation});
  }
  t.write(c);
  return kExitOk;
}

int cmd_weighted_mean(const RunConfig& c) {
  const double H = c.H();
  const std::uint64_t seed = c.require_seed();
  const std::size_t n = c.n ? c.require_n() : 1024;
  const WeightedMeanReport w = weighted_mean_experiment(H, n, c.replicates, seed, c.theta, c.jobs);
  Tabular t("weighted_mean", {"n", "replicates", "var_weighted", "var_plain", "ratio", "exact_ratio", "sigma0_sq"});
  t.add({ll(n), ll(w.replicates), w.var_weighted, w.var_plain, w.ratio, w.exact_ratio, w.sigma0_sq});
  t.write(c);
  return kExitOk;
}

int cmd_verify(const RunConfig& c) {
  VerifyOptions o;
  if (c.hurst) o.hurst = c.H();
  o.perturb_ak = c.perturb_ak;
  o.jobs = c.jobs;
  o.seed = c.require_seed();
  o.replicates = c.replicates;
  if (!c.format.empty() && c.format != "json") throw ConfigError("verify writes JSON only");
  const Report r = run_verify(o);
  emit(c, r.dump());
  for (const Check& ch : r.checks())
    if (!ch.pass) std::cerr << "FAIL " << ch.name << " value=" << ch.value << " tolerance=" << ch.tolerance << "\n";
  return r.all_pass() ? kExitOk : kExitCheck;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fractional-noise regression: basis tables, verification and experiment sweeps"};
  app.fallthrough();
  app.require_subcommand(1);
  app.set_config("--config", "", "key=value configuration file (flags take precedence)");

  RunConfig c;
  app.add_option("--hurst", c.hurst, "Hurst index in (0,1)");
  app.add_option("--n", c.n, "number of observations");
  app.add_option("--n-grid", c.n_grid, "n sweep a:b:step (additive) or a:b:xR (geometric)");
  app.add_option("-K,--count", c.count, "number of frequencies / zeros");
  app.add_option("--beta", c.beta, "smoothness of the rate test function");
  app.add_option("--alpha", c.alpha, "smoothness of the diagnose test function");
  app.add_option("--ball-radius", c.radius, "Sobolev ball radius C");
  app.add_option("--seed", c.seed, "master seed (required for stochastic commands)");
  app.add_option("--replicates", c.replicates, "Monte Carlo replicates")->check(CLI::PositiveNumber);
  app.add_option("--cutoff-const", c.cutoff_const, "constant c0 in the cutoff rule")->check(CLI::PositiveNumber);
  app.add_option("--out", c.out, "output path (default stdout)");
  app.add_option("--format", c.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--jobs", c.jobs, "worker threads for replicate loops")->check(CLI::PositiveNumber);
  app.add_option("--perturb-ak", c.perturb_ak, "test only: relative perturbation of every a_k");
  app.add_option("--model", c.model, "simulate: e1 or e3");
  app.add_option("--function", c.function, "diagnose: smooth, constant or zero");
  app.add_option("--case", c.separation_case, "separation: alpha_half or alpha_low");
  app.add_option("--theta", c.theta, "constant regression level for e1 / weighted-mean");

  struct Sub {
    const char* name;
    const char* help;
    int (*run)(const RunConfig&);
  };
  const Sub subs[] = {
      {"zeros", "positive zeros of J_{1-H}", cmd_zeros},
      {"coeffs", "basis table (k, omega_k, a_k, sigma_k)", cmd_coeffs},
      {"bounds", "fGN covariance eigenvalue bounds", cmd_bounds},
      {"simulate", "one draw of experiment E1 or E3", cmd_simulate},
      {"verify", "run the invariant suite (JSON report)", cmd_verify},
      {"rates", "cutoff-estimator risk sweep and fitted slope", cmd_rates},
      {"diagnose", "approximation-condition diagnostics over n", cmd_diagnose},
      {"separation", "discrete vs sequence-model KL of the separating pair", cmd_separation},
      {"weighted-mean", "weighted vs plain mean Monte Carlo", cmd_weighted_mean},
  };
  int (*selected)(const RunConfig&) = nullptr;
  for (const Sub& s : subs) {
    CLI::App* sc = app.add_subcommand(s.name, s.help);
    sc->callback([&selected, &c, s] {
      selected = s.run;
      c.command = s.name;
    });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitConfig;
  }

  try {
    return selected(c);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n" << app.help();
    return kExitConfig;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const NumericError& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumeric;
  }
}
