#include "fracequiv/experiments.hpp"

#include "fracequiv/parallel.hpp"
#include "fracequiv/quadrature.hpp"
#include "fracequiv/toeplitz.hpp"

#include <boost/math/distributions/students_t.hpp>

#include <algorithm>
#include <cmath>
#include <iostream>
#include <numbers>
#include <random>
#include <stdexcept>

namespace fracequiv {

RegressionFunction::RegressionFunction(std::function<double(double)> f, bool symmetric)
    : f_(std::move(f)), symmetric_(symmetric) {
  if (!f_) throw std::invalid_argument("RegressionFunction: empty callable");
}

RegressionFunction::RegressionFunction(NonharmonicSeries series, bool symmetric)
    : series_(std::move(series)), symmetric_(symmetric) {
  const NonharmonicSeries& s = *series_;
  f_ = [s](double t) { return s.evaluate(t).real(); };
}

double RegressionFunction::operator()(double t) const { return f_(t); }

double RegressionFunction::antisymmetry_defect(std::size_t points) const {
  if (points < 2) throw std::invalid_argument("antisymmetry_defect: need at least two points");
  double worst = 0.0;
  for (std::size_t i = 0; i < points; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(points - 1);
    worst = std::max(worst, std::fabs(f_(t) + f_(1.0 - t)));
  }
  return worst;
}

E1Sample simulate_e1(const RegressionFunction& f, const FgnSampler& sampler, Rng& rng, std::uint64_t seed) {
  const std::size_t n = sampler.size();
  E1Sample out{sampler.hurst(), n, seed, sampler.draw(rng)};
  for (std::size_t i = 0; i < n; ++i) out.y[i] += f(static_cast<double>(i + 1) / static_cast<double>(n));
  return out;
}

E1Sample simulate_e1(const RegressionFunction& f, double H, std::size_t n, std::uint64_t seed) {
  FgnSampler sampler(H, n);
  Rng rng = make_rng(seed);
  return simulate_e1(f, sampler, rng, seed);
}

E3Sample simulate_e3(const NonharmonicSeries& theta, const BasisTable& table, std::size_t n, std::uint64_t seed) {
  const std::size_t K = theta.K();
  if (K > table.K()) throw std::invalid_argument("simulate_e3: series longer than table");
  if (n == 0) throw std::invalid_argument("simulate_e3: n must be positive");
  const double noise = std::pow(static_cast<double>(n), table.hurst() - 1.0);
  Rng real_stream = make_rng(split_seed(seed, 0, 0));
  Rng imag_stream = make_rng(split_seed(seed, 1, 0));
  std::normal_distribution<double> normal(0.0, 1.0);
  E3Sample out{table.hurst(), n, K, seed, std::vector<double>(K + 1), std::vector<double>(K + 1, 0.0)};
  for (std::size_t k = 0; k <= K; ++k) {
    const long kk = static_cast<long>(k);
    const double sigma = table.sigma(kk);
    const cplx th = theta.theta(kk);
    out.z[k] = th.real() / sigma + noise * normal(real_stream);
    const double eps = normal(imag_stream);
    if (k > 0) out.z_prime[k] = th.imag() / sigma + noise * eps;
  }
  return out;
}

double e3_kl(const NonharmonicSeries& theta, const NonharmonicSeries& eta, const BasisTable& table, std::size_t n) {
  const NonharmonicSeries d = theta - eta;
  if (d.K() > table.K()) throw std::invalid_argument("e3_kl: series longer than table");
  const double noise_sq = std::pow(static_cast<double>(n), 2.0 * table.hurst() - 2.0);
  std::vector<double> terms(d.K() + 1);
  for (std::size_t k = 0; k <= d.K(); ++k) {
    const long kk = static_cast<long>(k);
    const double s = table.sigma(kk);
    const cplx dk = d.theta(kk);
    const double num = k == 0 ? dk.real() * dk.real() : std::norm(dk);
    terms[k] = num / (2.0 * s * s * noise_sq);
  }
  return pairwise_sum(terms);
}

NonharmonicSeries estimate_cutoff(const E3Sample& sample, const BasisTable& table, std::size_t M) {
  if (M > sample.K) throw std::invalid_argument("estimate_cutoff: M exceeds the sample length");
  NonharmonicSeries out(table, sample.K);
  out.set(0, table.sigma(0) * sample.z[0]);
  for (std::size_t k = 1; k <= M; ++k) {
    const long kk = static_cast<long>(k);
    out.set(kk, table.sigma(kk) * cplx(sample.z[k], sample.z_prime[k]));
  }
  return out;
}

std::size_t default_cutoff(double H, double beta, std::size_t n, double c0) {
  checked_hurst(H);
  if (!(beta > 0.0) || !(c0 > 0.0)) throw std::invalid_argument("default_cutoff: beta and c0 must be positive");
  const double e = (1.0 - H) / (beta + 1.0 - H);
  return static_cast<std::size_t>(std::ceil(c0 * std::pow(static_cast<double>(n), e)));
}

SlopeFit loglog_fit(std::span<const double> x, std::span<const double> y) {
  const std::size_t m = x.size();
  if (m != y.size() || m < 3) throw std::invalid_argument("loglog_fit: need >= 3 paired points");
  std::vector<double> lx(m), ly(m);
  for (std::size_t i = 0; i < m; ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw std::domain_error("loglog_fit: values must be positive");
    lx[i] = std::log(x[i]);
    ly[i] = std::log(y[i]);
  }
  const double mx = pairwise_sum(lx) / static_cast<double>(m);
  const double my = pairwise_sum(ly) / static_cast<double>(m);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  const double slope = sxy / sxx;
  const double intercept = my - slope * mx;
  double rss = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double r = ly[i] - intercept - slope * lx[i];
    rss += r * r;
  }
  const double dof = static_cast<double>(m - 2);
  const double se = std::sqrt(rss / dof / sxx);
  const double q = boost::math::quantile(boost::math::students_t(dof), 0.975);
  return {slope, intercept, se, slope - q * se, slope + q * se};
}

NonharmonicSeries rate_test_function(const BasisTable& table, std::size_t K, double beta, double C,
                                     std::uint64_t seed) {
  NonharmonicSeries theta(table, K);
  Rng rng = make_rng(split_seed(seed, 0x7465737466ULL, 0));
  std::bernoulli_distribution coin(0.5);
  const double decay = -beta - 0.5 - 0.01;
  double norm = 0.0;
  std::vector<double> raw(K + 1);
  for (std::size_t k = 0; k <= K; ++k) {
    const double kk = static_cast<double>(k);
    raw[k] = (coin(rng) ? 1.0 : -1.0) * std::pow(1.0 + kk, decay);
    norm += (k == 0 ? 1.0 : 2.0) * std::pow(1.0 + kk, 2.0 * beta) * raw[k] * raw[k];
  }
  const double scale = C / std::sqrt(norm);
  for (std::size_t k = 0; k <= K; ++k) theta.set(static_cast<long>(k), raw[k] * scale);
  return theta;
}

namespace {

NonharmonicSeries truncate(const NonharmonicSeries& s, const BasisTable& table, std::size_t M) {
  NonharmonicSeries out(table, M);
  for (std::size_t k = 0; k <= M; ++k) out.set(static_cast<long>(k), s.theta(static_cast<long>(k)));
  return out;
}

struct MeanAndError {
  double mean;
  double stderr_;
  double variance;
};

MeanAndError summarize(const std::vector<double>& v) {
  const double m = pairwise_sum(v) / static_cast<double>(v.size());
  std::vector<double> dev(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) dev[i] = (v[i] - m) * (v[i] - m);
  const double var = v.size() > 1 ? pairwise_sum(dev) / static_cast<double>(v.size() - 1) : 0.0;
  return {m, std::sqrt(var / static_cast<double>(v.size())), var};
}

}  // namespace

RiskReport rate_experiment(double H, double beta, double C, std::span<const std::size_t> n_grid,
                           std::size_t replicates, std::uint64_t seed, const RateOptions& options) {
  checked_hurst(H);
  if (!(beta > 0.0) || !(C > 0.0)) throw std::invalid_argument("rate_experiment: beta and C must be positive");
  if (n_grid.size() < 3) throw std::invalid_argument("rate_experiment: need at least three n values");
  if (replicates < 2) throw std::invalid_argument("rate_experiment: need at least two replicates");
  for (std::size_t i = 1; i < n_grid.size(); ++i)
    if (n_grid[i] <= n_grid[i - 1]) throw std::invalid_argument("rate_experiment: n_grid must be increasing");

  const BasisTable table = build_basis_table(H, options.truth_K);
  const NonharmonicSeries truth = rate_test_function(table, options.truth_K, beta, C, seed);

  RiskReport rep;
  rep.H = H;
  rep.beta = beta;
  rep.radius = C;
  rep.seed = seed;
  rep.replicates = replicates;
  rep.truth_K = options.truth_K;
  rep.n_grid.assign(n_grid.begin(), n_grid.end());
  rep.expected_slope = -2.0 * beta * (1.0 - H) / (beta + 1.0 - H);
  rep.frame = riesz_bounds(table, std::min<std::size_t>(50, options.truth_K));

  for (std::size_t g = 0; g < n_grid.size(); ++g) {
    const std::size_t n = n_grid[g];
    const std::size_t M = default_cutoff(H, beta, n, options.cutoff_const);
    if (M >= options.truth_K) throw std::invalid_argument("rate_experiment: cutoff reaches the truth truncation");
    const NonharmonicSeries head = truncate(truth, table, M);
    std::vector<double> tail_terms;
    for (std::size_t k = M + 1; k <= options.truth_K; ++k) tail_terms.push_back(2.0 * std::norm(truth.theta(static_cast<long>(k))));
    const double tail = pairwise_sum(tail_terms);

    const std::vector<double> risks = parallel_map(replicates, options.jobs, [&](std::size_t r) {
      const E3Sample sample = simulate_e3(head, table, n, split_seed(seed, 1 + g, r));
      const NonharmonicSeries est = estimate_cutoff(sample, table, M);
      double acc = std::norm(est.theta(0) - head.theta(0));
      for (std::size_t k = 1; k <= M; ++k) {
        const long kk = static_cast<long>(k);
        acc += 2.0 * std::norm(est.theta(kk) - head.theta(kk));
      }
      return acc + tail;
    });
    const MeanAndError s = summarize(risks);
    rep.cutoff.push_back(M);
    rep.mean_risk.push_back(s.mean);
    rep.stderr_risk.push_back(s.stderr_);
  }
  std::vector<double> xs(rep.n_grid.begin(), rep.n_grid.end());
  rep.fit = loglog_fit(xs, rep.mean_risk);
  return rep;
}

std::vector<double> weighted_mean_weights(double H, std::size_t n) {
  checked_hurst(H);
  if (n < 2) throw std::invalid_argument("weighted_mean_weights: n must be at least 2");
  std::vector<double> w(n, 0.0);
  const double e = 0.5 - H;
  for (std::size_t i = 1; i < n; ++i) {
    const double s = static_cast<double>(i) / static_cast<double>(n);
    w[i - 1] = std::pow(s - s * s, e);
  }
  const double total = pairwise_sum(w);
  for (double& v : w) v /= total;
  return w;
}

double weighted_mean_estimator(const E1Sample& sample) {
  const std::vector<double> w = weighted_mean_weights(sample.H, sample.n);
  std::vector<double> terms(sample.n);
  for (std::size_t i = 0; i < sample.n; ++i) terms[i] = w[i] * sample.y[i];
  return pairwise_sum(terms);
}

WeightedMeanReport weighted_mean_experiment(double H, std::size_t n, std::size_t replicates, std::uint64_t seed,
                                            double theta, int jobs) {
  if (replicates < 2) throw std::invalid_argument("weighted_mean_experiment: need at least two replicates");
  const FgnSampler sampler(H, n);
  const RegressionFunction f([theta](double) { return theta; });
  std::vector<double> weighted(replicates), plain(replicates);
  parallel_for(replicates, jobs, [&](std::size_t r) {
    const std::uint64_t s = split_seed(seed, 0, r);
    Rng rng = make_rng(s);
    const E1Sample sample = simulate_e1(f, sampler, rng, s);
    weighted[r] = weighted_mean_estimator(sample);
    plain[r] = pairwise_sum(sample.y) / static_cast<double>(n);
  });

  const ToeplitzCov cov = ToeplitzCov::fgn(H, n);
  const std::vector<double> w = weighted_mean_weights(H, n);
  const std::vector<double> sw = cov.multiply(w);
  const std::vector<double> ones(n, 1.0);
  const std::vector<double> s1 = cov.multiply(ones);
  double qw = 0.0, q1 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    qw += w[i] * sw[i];
    q1 += s1[i];
  }
  const double nn = static_cast<double>(n);
  const double a0 = build_basis_table(H, 1).a(0);

  WeightedMeanReport rep;
  rep.H = H;
  rep.n = n;
  rep.replicates = replicates;
  rep.seed = seed;
  rep.var_weighted = summarize(weighted).variance;
  rep.var_plain = summarize(plain).variance;
  rep.ratio = rep.var_weighted / rep.var_plain;
  rep.exact_ratio = qw / (q1 / (nn * nn));
  rep.sigma0_sq = a0 * a0;
  return rep;
}

LInterpolator::LInterpolator(double H, std::size_t n) : H_(checked_hurst(H)), n_(n) {
  if (n == 0) throw std::invalid_argument("LInterpolator: n must be positive");
  const auto m = static_cast<Eigen::Index>(n);
  Eigen::MatrixXd cov(m, m);
  const double nn = static_cast<double>(n);
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = 0; j < m; ++j)
      cov(i, j) = fbm_cov(H, static_cast<double>(i + 1) / nn, static_cast<double>(j + 1) / nn);
  llt_.compute(cov);
  if (llt_.info() != Eigen::Success) throw NumericError("LInterpolator: covariance is not positive definite");
  const Eigen::VectorXd d = llt_.matrixLLT().diagonal();
  const double ratio = d.maxCoeff() / d.minCoeff();
  pivot_ratio_ = ratio * ratio;
}

std::vector<double> LInterpolator::operator()(std::span<const double> x, std::span<const double> t) const {
  if (x.size() != n_) throw std::invalid_argument("LInterpolator: x must have n entries");
  const Eigen::VectorXd rhs = Eigen::Map<const Eigen::VectorXd>(x.data(), static_cast<Eigen::Index>(n_));
  const Eigen::VectorXd coef = llt_.solve(rhs);
  const double nn = static_cast<double>(n_);
  std::vector<double> out(t.size());
  for (std::size_t q = 0; q < t.size(); ++q) {
    if (t[q] < 0.0 || t[q] > 1.0) throw std::domain_error("LInterpolator: t must lie in [0,1]");
    double acc = 0.0;
    for (std::size_t j = 0; j < n_; ++j)
      acc += fbm_cov(H_, t[q], static_cast<double>(j + 1) / nn) * coef[static_cast<Eigen::Index>(j)];
    out[q] = acc;
  }
  return out;
}

std::vector<double> interpolate_L(double H, std::size_t n, std::span<const double> x, std::span<const double> t) {
  const LInterpolator L(H, n);
  if (L.ill_conditioned())
    std::cerr << "warning: interpolate_L: Cholesky pivot ratio " << L.pivot_ratio() << " exceeds 1e14\n";
  return L(x, t);
}

double condition_i_diagnostic(const RegressionFunction& f, double H, std::size_t n) {
  checked_hurst(H);
  if (n == 0) throw std::invalid_argument("condition_i_diagnostic: n must be positive");
  const QuadRule& gl = legendre_unit_rule(16);
  const double nn = static_cast<double>(n);
  std::vector<double> terms(n);
  for (std::size_t i = 1; i <= n; ++i) {
    const double a = static_cast<double>(i - 1) / nn;
    double avg = 0.0;
    for (std::size_t q = 0; q < gl.nodes.size(); ++q) avg += gl.weights[q] * f(a + gl.nodes[q] / nn);
    const double d = avg - f(static_cast<double>(i) / nn);
    terms[i - 1] = d * d;
  }
  return std::max(std::pow(nn, 1.0 - 2.0 * H), 1.0) * pairwise_sum(terms);
}

ProjectionResidual condition_ii_residual(const NonharmonicSeries& theta, const BasisTable& table, std::size_t n) {
  if (n == 0) throw std::invalid_argument("condition_ii_residual: n must be positive");
  const RkhsElement F{theta};
  const double norm = rkhs_norm_sq(F, table);
  const double H = table.hurst();
  const double nn = static_cast<double>(n);
  if (norm == 0.0) return {0.0, 0.0, 0.0};

  const auto m = static_cast<Eigen::Index>(n);
  Eigen::MatrixXd cov(m, m);
  Eigen::VectorXd fn(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const double ti = static_cast<double>(i + 1) / nn;
    fn[i] = F(ti);
    for (Eigen::Index j = 0; j < m; ++j) cov(i, j) = fbm_cov(H, ti, static_cast<double>(j + 1) / nn);
  }
  const Eigen::LLT<Eigen::MatrixXd> llt(cov);
  if (llt.info() != Eigen::Success) throw NumericError("condition_ii_residual: covariance factorisation failed");
  const Eigen::VectorXd half = llt.matrixL().solve(fn);
  const double d2 = norm - half.squaredNorm();
  if (d2 < -1e-8 * norm)
    throw ConsistencyError("condition_ii_residual: projection exceeds the RKHS norm (" + std::to_string(d2) + ")");
  const double dist = std::sqrt(std::max(d2, 0.0));
  return {std::pow(nn, 1.0 - H) * dist, dist, norm};
}

std::size_t separation_table_size(std::size_t n, SeparationCase which) {
  if (which == SeparationCase::alpha_half) return 2 * n;
  return static_cast<std::size_t>(std::floor(std::log(static_cast<double>(n)))) + 1 + n;
}

namespace {

// theta coefficients of sin(omega_k (2t - 1)): theta_k = e^{-i omega_k} / (2i).
void add_centered_sine(NonharmonicSeries& s, long k, double amplitude) {
  const cplx add = amplitude * std::exp(cplx(0.0, -s.omega(k))) / cplx(0.0, 2.0);
  s.set(k, s.theta(k) + add);
}

}  // namespace

SeparationReport separation_experiment(double H, std::size_t n, SeparationCase which, const BasisTable& table,
                                       double c) {
  checked_hurst(H);
  if (std::fabs(table.hurst() - H) > 0.0) throw std::invalid_argument("separation_experiment: table built for another H");
  if (n < 2) throw std::invalid_argument("separation_experiment: n must be at least 2");
  const std::size_t need = separation_table_size(n, which);
  if (table.K() < need) throw std::invalid_argument("separation_experiment: table needs " + std::to_string(need) + " zeros");

  const double nn = static_cast<double>(n);
  NonharmonicSeries f0(table, need), f1(table, need);
  if (which == SeparationCase::alpha_half) {
    const double amp = c / std::sqrt(nn);
    add_centered_sine(f0, static_cast<long>(n), amp);
    add_centered_sine(f1, static_cast<long>(2 * n), amp);
  } else {
    const std::size_t kn = need - n;
    const double amp = c * std::pow(nn, H - 1.0) * std::pow(static_cast<double>(kn), 0.5 - H);
    add_centered_sine(f1, static_cast<long>(kn), amp);
    add_centered_sine(f1, static_cast<long>(kn + n), -amp);
  }
  std::vector<double> v(n), w(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i + 1) / nn;
    v[i] = f0.evaluate(t).real();
    w[i] = f1.evaluate(t).real();
  }
  const double kl1 = kl_gaussian_shift(ToeplitzCov::fgn(H, n), MeanShiftPair(std::move(v), std::move(w)));
  return {H, n, which, c, kl1, e3_kl(f0, f1, table, n)};
}

std::vector<double> sobolev_constraint_check(const std::vector<std::function<double(double)>>& derivatives, double H) {
  checked_hurst(H);
  const double e = 0.5 - H;
  const QuadRule& rule = jacobi_unit_rule(128, e, e);
  std::vector<double> out;
  out.reserve(derivatives.size());
  for (const auto& d : derivatives) {
    double acc = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) acc += rule.weights[i] * d(rule.nodes[i]);
    out.push_back(acc);
  }
  return out;
}

std::vector<double> sobolev_constraint_check_fd(const std::function<double(double)>& f, double H, int beta) {
  if (beta < 1 || beta > 4) throw std::invalid_argument("sobolev_constraint_check_fd: beta must be in 1..4");
  static constexpr double kCoef[4] = {4.0 / 5.0, -1.0 / 5.0, 4.0 / 105.0, -1.0 / 280.0};
  constexpr double h = 1e-2;
  auto differentiate = [](std::function<double(double)> g) {
    return std::function<double(double)>([g](double x) {
      double acc = 0.0;
      for (int j = 1; j <= 4; ++j) acc += kCoef[j - 1] * (g(x + j * h) - g(x - j * h));
      return acc / h;
    });
  };
  std::vector<std::function<double(double)>> ds;
  std::function<double(double)> cur = f;
  for (int l = 1; l <= beta; ++l) {
    cur = differentiate(cur);
    ds.push_back(cur);
  }
  return sobolev_constraint_check(ds, H);
}

}  // namespace fracequiv
