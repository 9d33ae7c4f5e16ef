#include "fracequiv/nhbasis.hpp"

#include "fracequiv/parallel.hpp"
#include "fracequiv/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace fracequiv {
namespace {

constexpr cplx kI{0.0, 1.0};

// lambda^H J_{1-H}(lambda), extended to lambda < 0 as an odd function.
double odd_bessel_product(double H, double lambda) {
  if (lambda == 0.0) return 0.0;
  const double m = std::fabs(lambda);
  const double v = std::pow(m, H) * bessel_j(BesselOrder(1.0 - H), m);
  return lambda < 0.0 ? -v : v;
}

// Derivative of odd_bessel_product at a zero omega (even in omega); the
// k = 0 value is the limit lambda^{H-1} J_{1-H}(lambda) -> 2^{H-1} / Gamma(2-H).
double bessel_product_slope(double H, double omega) {
  if (omega == 0.0) return std::pow(2.0, H - 1.0) / std::tgamma(2.0 - H);
  const double m = std::fabs(omega);
  return std::pow(m, H) * bessel_j_prime(BesselOrder(1.0 - H), m);
}

double phi_prefactor(const HurstConfig& cfg, long k) {
  const double base = std::sqrt(std::numbers::pi / cfg.c_H) * std::pow(2.0, cfg.H - 1.0);
  return k == 0 ? base * std::sqrt(2.0 - 2.0 * cfg.H) : base;
}

}  // namespace

HurstConfig HurstConfig::make(double H) {
  checked_hurst(H);
  const double c_h = std::sin(std::numbers::pi * H) * gamma_fn(2.0 * H + 1.0);
  const double base = gamma_fn(1.5 - H) * std::sqrt(c_h);
  return {H, c_h, base / std::sqrt(2.0 - 2.0 * H), base};
}

double c_h_identity_rhs(double H) {
  checked_hurst(H);
  const double g1h = gamma_fn(1.0 - H);
  return std::pow(2.0, 4.0 * H - 3.0) * H * gamma_fn(H + 0.5) * gamma_fn(3.0 - 2.0 * H) /
         ((1.0 - H) * g1h * g1h * gamma_fn(1.5 - H));
}

BasisTable::BasisTable(HurstConfig config, ZeroTable zeros, std::vector<double> a, std::vector<int> sign)
    : config_(config), zeros_(std::move(zeros)), a_(std::move(a)), sign_(std::move(sign)) {
  if (a_.size() != zeros_.size() + 1 || sign_.size() != a_.size())
    throw std::invalid_argument("BasisTable: a and sign must hold K+1 entries");
  for (double v : a_)
    if (!(v > 0.0)) throw std::invalid_argument("BasisTable: a_k must be positive");
}

double BasisTable::a(long k) const {
  const auto m = static_cast<std::size_t>(k < 0 ? -k : k);
  if (m >= a_.size()) throw std::out_of_range("BasisTable::a: index beyond table");
  return a_[m];
}

int BasisTable::sign(long k) const {
  const auto m = static_cast<std::size_t>(k < 0 ? -k : k);
  if (m >= sign_.size()) throw std::out_of_range("BasisTable::sign: index beyond table");
  return sign_[m];
}

double BasisTable::sigma(long k) const {
  if (k < 0) throw std::out_of_range("BasisTable::sigma: k must be nonnegative");
  return k == 0 ? a(0) : a(k) / std::numbers::sqrt2;
}

BasisTable BasisTable::with_perturbed_a(double relative) const {
  std::vector<double> a = a_;
  for (double& v : a) v *= (1.0 + relative);
  return BasisTable(config_, zeros_, std::move(a), sign_);
}

BasisTable build_basis_table(double H, std::size_t K) {
  const HurstConfig cfg = HurstConfig::make(H);
  ZeroTable zeros = bessel_zeros(H, K);
  std::vector<double> a(K + 1);
  std::vector<int> sign(K + 1);
  for (std::size_t k = 0; k <= K; ++k) {
    const long kk = static_cast<long>(k);
    const double inv = phi_prefactor(cfg, kk) * bessel_product_slope(H, zeros.omega(kk));
    a[k] = 1.0 / std::fabs(inv);
    sign[k] = inv < 0.0 ? -1 : 1;
  }
  return BasisTable(cfg, std::move(zeros), std::move(a), std::move(sign));
}

cplx phi_k(const BasisTable& table, long k, double two_lambda) {
  const double H = table.hurst();
  const double omega = table.omega(k);
  const double lambda = 0.5 * two_lambda;
  const double delta = lambda - omega;
  const cplx phase = std::exp(kI * (omega - lambda));
  const double pref = phi_prefactor(table.config(), k);
  if (std::fabs(delta) <= 1e-7 * std::max(1.0, std::fabs(omega)))
    return pref * phase * bessel_product_slope(H, omega);
  return pref * phase * (odd_bessel_product(H, lambda) / delta);
}

NormEstimate phi_norm_sq(const BasisTable& table, long k, double cutoff) {
  const double H = table.hurst();
  const double w = std::fabs(table.omega(k));
  if (cutoff <= 0.0) cutoff = 50.0 * table.omega(static_cast<long>(table.K()));
  if (cutoff <= 2.0 * w + 1.0) throw std::invalid_argument("phi_norm_sq: cutoff too small");
  // ||phi_k||^2 = (m_k / 2) int_R |l| J^2(|l|) / (l - omega_k)^2 dl, m_0 = 2 - 2H, else 1.
  // Folding the negative half onto [0, inf) gives the two denominators below.
  const BesselOrder order(1.0 - H);
  auto folded = [&](double l) {
    const double j = bessel_j(order, l);
    const double num = l * j * j;
    if (k == 0) return 2.0 * num / (l * l);
    return num / ((l - w) * (l - w)) + num / ((l + w) * (l + w));
  };
  const QuadRule& gl = legendre_unit_rule(16);
  const double e = 1.0 - 2.0 * H;
  const QuadRule& near0 = jacobi_unit_rule(24, 0.0, e);

  std::vector<double> edges{0.0, 0.5};
  if (w > 0.0) edges.push_back(w);
  for (double x = 1.0; x < cutoff; x += 1.0) edges.push_back(x);
  edges.push_back(cutoff);
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end(),
                          [](double a, double b) { return std::fabs(a - b) < 1e-9; }),
              edges.end());

  double total = 0.0;
  for (std::size_t p = 0; p + 1 < edges.size(); ++p) {
    const double a = edges[p];
    const double b = edges[p + 1];
    const double h = b - a;
    double part = 0.0;
    if (p == 0) {
      // integrand ~ l^{1-2H} near the origin
      for (std::size_t i = 0; i < near0.nodes.size(); ++i) {
        const double l = h * near0.nodes[i];
        part += near0.weights[i] * folded(l) / std::pow(l, e);
      }
      part *= std::pow(h, e);
    } else {
      for (std::size_t i = 0; i < gl.nodes.size(); ++i) part += gl.weights[i] * folded(a + h * gl.nodes[i]);
    }
    total += h * part;
  }
  // |l| J(l)^2 averages to 1/pi at large l
  const double tail = (1.0 / std::numbers::pi) * (1.0 / (cutoff - w) + 1.0 / (cutoff + w));
  const double m = k == 0 ? 2.0 - 2.0 * H : 1.0;
  return {0.5 * m * (total + tail), 0.5 * m * tail};
}

namespace {

// W(x) = int_0^1 e^{-i x u} (u - u^2)^{1/2-H} du and its x-derivative.
struct WeightTransform {
  cplx value;
  cplx derivative;
};

WeightTransform weight_transform(const QuadRule& rule, double x) {
  cplx v = 0.0, d = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double u = rule.nodes[i];
    const cplx e = std::exp(-kI * (x * u));
    v += rule.weights[i] * e;
    d += rule.weights[i] * (-kI * u) * e;
  }
  return {v, d};
}

}  // namespace

cplx g_k_eval(const BasisTable& table, long k, double s, std::size_t nodes) {
  if (!(s > 0.0 && s < 1.0)) throw std::domain_error("g_k_eval: s must lie in (0,1)");
  const double H = table.hurst();
  const double e = 0.5 - H;
  const double omega = table.omega(k);
  const double two_w = 2.0 * omega;
  const QuadRule& left = jacobi_unit_rule(nodes, 0.0, e);
  cplx inner = 0.0;
  if (s <= 0.5) {
    for (std::size_t i = 0; i < left.nodes.size(); ++i) {
      const double v = left.nodes[i];
      inner += left.weights[i] * std::pow(1.0 - s * v, e) * std::exp(-kI * (two_w * s * v));
    }
    inner *= std::pow(s, 1.0 + e);
  } else {
    const double r = 1.0 - s;
    cplx tail = 0.0;
    for (std::size_t i = 0; i < left.nodes.size(); ++i) {
      const double v = left.nodes[i];
      const double u = 1.0 - r * v;
      tail += left.weights[i] * std::pow(u, e) * std::exp(-kI * (two_w * u));
    }
    tail *= std::pow(r, 1.0 + e);
    inner = weight_transform(jacobi_unit_rule(nodes, e, e), two_w).value - tail;
  }
  return std::pow(s - s * s, e) + kI * two_w * std::exp(kI * (two_w * s)) * inner;
}

Eigen::MatrixXcd biorth_matrix(const BasisTable& table, std::size_t kmax, std::size_t nodes, int jobs) {
  if (kmax > table.K()) throw std::invalid_argument("biorth_matrix: kmax exceeds table");
  const double e = 0.5 - table.hurst();
  const QuadRule& rule = jacobi_unit_rule(nodes, e, e);
  const std::size_t dim = 2 * kmax + 1;
  const long km = static_cast<long>(kmax);

  std::vector<WeightTransform> transforms(dim);
  for (std::size_t i = 0; i < dim; ++i)
    transforms[i] = weight_transform(rule, 2.0 * table.omega(static_cast<long>(i) - km));

  Eigen::MatrixXcd m(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  auto fill_row = [&](std::size_t r) {
    const long k = static_cast<long>(r) - km;
    const double wk = table.omega(k);
    const cplx scale = table.signed_a(k) * std::exp(kI * wk) / table.config().c_prime(k);
    const cplx wk_val = transforms[r].value;
    for (std::size_t c = 0; c < dim; ++c) {
      const double x = 2.0 * table.omega(static_cast<long>(c) - km);
      cplx fg;
      if (c == r) {
        fg = wk_val + x * transforms[r].derivative + kI * x * wk_val;
      } else {
        fg = (-x * transforms[c].value + 2.0 * wk * std::exp(kI * (2.0 * wk - x)) * wk_val) / (2.0 * wk - x);
      }
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = scale * fg;
    }
  };
  const int nthreads = effective_jobs(jobs);
  if (nthreads == 1) {
    for (std::size_t r = 0; r < dim; ++r) fill_row(r);
  } else {
    const auto n = static_cast<long long>(dim);
#pragma omp parallel for num_threads(nthreads) schedule(static)
    for (long long r = 0; r < n; ++r) fill_row(static_cast<std::size_t>(r));
  }
  return m;
}

NonharmonicSeries::NonharmonicSeries(const BasisTable& table, std::size_t K) {
  if (K > table.K()) throw std::invalid_argument("NonharmonicSeries: K exceeds table");
  omegas_.resize(K + 1);
  for (std::size_t k = 0; k <= K; ++k) omegas_[k] = table.omega(static_cast<long>(k));
  theta_.assign(2 * K + 1, cplx{0.0, 0.0});
}

std::size_t NonharmonicSeries::index(long k) const {
  const long K = static_cast<long>(this->K());
  if (k < -K || k > K) throw std::out_of_range("NonharmonicSeries: index beyond truncation");
  return static_cast<std::size_t>(k + K);
}

double NonharmonicSeries::omega(long k) const {
  index(k);
  return k < 0 ? -omegas_[static_cast<std::size_t>(-k)] : omegas_[static_cast<std::size_t>(k)];
}

cplx NonharmonicSeries::theta(long k) const { return theta_[index(k)]; }

void NonharmonicSeries::set(long k, cplx value) {
  if (k == 0) {
    if (std::fabs(value.imag()) > 1e-12 * std::max(1.0, std::abs(value)))
      throw std::invalid_argument("NonharmonicSeries::set: theta_0 must be real");
    theta_[index(0)] = value.real();
    return;
  }
  theta_[index(k)] = value;
  theta_[index(-k)] = std::conj(value);
}

cplx NonharmonicSeries::evaluate(double t) const {
  const long K = static_cast<long>(this->K());
  cplx acc = 0.0;
  for (long k = -K; k <= K; ++k) acc += theta_[static_cast<std::size_t>(k + K)] * std::exp(kI * (2.0 * omega(k) * t));
  return acc;
}

double NonharmonicSeries::sobolev_norm_sq(double alpha) const {
  const long K = static_cast<long>(this->K());
  double acc = 0.0;
  for (long k = -K; k <= K; ++k)
    acc += std::pow(1.0 + std::fabs(static_cast<double>(k)), 2.0 * alpha) * std::norm(theta(k));
  return acc;
}

double NonharmonicSeries::symmetry_defect() const {
  const long K = static_cast<long>(this->K());
  double worst = std::fabs(theta(0).imag());
  for (long k = 1; k <= K; ++k) worst = std::max(worst, std::abs(theta(-k) - std::conj(theta(k))));
  return worst;
}

NonharmonicSeries NonharmonicSeries::operator-(const NonharmonicSeries& other) const {
  if (other.omegas_ != omegas_) throw std::invalid_argument("NonharmonicSeries: incompatible frequencies");
  NonharmonicSeries out = *this;
  for (std::size_t i = 0; i < theta_.size(); ++i) out.theta_[i] -= other.theta_[i];
  return out;
}

NonharmonicSeries NonharmonicSeries::operator+(const NonharmonicSeries& other) const {
  return *this - other.scaled(-1.0);
}

NonharmonicSeries NonharmonicSeries::scaled(double factor) const {
  NonharmonicSeries out = *this;
  for (cplx& v : out.theta_) v *= factor;
  return out;
}

NonharmonicSeries analyze(const std::function<double(double)>& f, const BasisTable& table, std::size_t K,
                          const AnalyzeOptions& options) {
  if (K > table.K()) throw std::invalid_argument("analyze: K exceeds table");
  const double e = 0.5 - table.hurst();
  const long KK = static_cast<long>(K);

  struct Pass {
    std::vector<cplx> inner;  // <f, g_k>, k = -K..K
  };
  auto run = [&](std::size_t nodes) {
    const QuadRule& rule = jacobi_unit_rule(nodes, e, e);
    const QuadRule& gl = legendre_unit_rule(12);
    const std::size_t n = rule.nodes.size();
    std::vector<double> fu(n);
    for (std::size_t j = 0; j < n; ++j) fu[j] = f(rule.nodes[j]);
    // panels [u_j, u_{j+1}] and [u_{n-1}, 1]
    std::vector<double> pts, wts;
    std::vector<std::size_t> panel_start(n + 1);
    for (std::size_t j = 0; j < n; ++j) {
      panel_start[j] = pts.size();
      const double a = rule.nodes[j];
      const double b = j + 1 < n ? rule.nodes[j + 1] : 1.0;
      for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
        pts.push_back(a + (b - a) * gl.nodes[i]);
        wts.push_back((b - a) * gl.weights[i] * f(a + (b - a) * gl.nodes[i]));
      }
    }
    panel_start[n] = pts.size();

    Pass pass;
    pass.inner.resize(2 * K + 1);
    auto one = [&](std::size_t idx) {
      const long k = static_cast<long>(idx) - KK;
      const double two_w = 2.0 * table.omega(k);
      cplx tail = 0.0;  // F_k(u_j) = int_{u_j}^1 f(s) e^{-2 i omega s} ds
      cplx acc = 0.0;
      for (std::size_t jj = n; jj-- > 0;) {
        for (std::size_t p = panel_start[jj]; p < panel_start[jj + 1]; ++p) tail += wts[p] * std::exp(-kI * (two_w * pts[p]));
        const double u = rule.nodes[jj];
        acc += rule.weights[jj] * (fu[jj] - kI * two_w * std::exp(kI * (two_w * u)) * tail);
      }
      pass.inner[idx] = acc;
    };
    const int nthreads = effective_jobs(options.jobs);
    if (nthreads == 1) {
      for (std::size_t idx = 0; idx < 2 * K + 1; ++idx) one(idx);
    } else {
      const auto cnt = static_cast<long long>(2 * K + 1);
#pragma omp parallel for num_threads(nthreads) schedule(dynamic)
      for (long long idx = 0; idx < cnt; ++idx) one(static_cast<std::size_t>(idx));
    }
    return pass;
  };

  const Pass fine = run(options.nodes);
  const Pass check = run(2 * options.nodes);

  std::vector<cplx> raw(2 * K + 1), raw_check(2 * K + 1);
  double scale = 1.0;
  for (long k = -KK; k <= KK; ++k) {
    const std::size_t idx = static_cast<std::size_t>(k + KK);
    const cplx factor = table.signed_a(k) * std::exp(-kI * table.omega(k)) / table.config().c_prime(k);
    raw[idx] = factor * fine.inner[idx];
    raw_check[idx] = factor * check.inner[idx];
    scale = std::max(scale, std::abs(raw[idx]));
  }
  for (long k = -KK; k <= KK; ++k) {
    const std::size_t idx = static_cast<std::size_t>(k + KK);
    if (std::abs(raw[idx] - raw_check[idx]) > options.tolerance * scale)
      throw QuadratureError("analyze: quadrature did not converge for k=" + std::to_string(k), k);
  }

  NonharmonicSeries out(table, K);
  out.set(0, raw[static_cast<std::size_t>(KK)].real());
  for (long k = 1; k <= KK; ++k) {
    const cplx pos = raw[static_cast<std::size_t>(k + KK)];
    const cplx neg = raw[static_cast<std::size_t>(-k + KK)];
    out.set(k, 0.5 * (pos + std::conj(neg)));
  }
  return out;
}

std::vector<double> synthesize(const NonharmonicSeries& series, std::span<const double> t) {
  const long K = static_cast<long>(series.K());
  double mass = 0.0;
  for (long k = -K; k <= K; ++k) mass += std::abs(series.theta(k));
  const double limit = kImaginaryResidue * std::max(1.0, mass);
  std::vector<double> out(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    const cplx v = series.evaluate(t[i]);
    if (std::fabs(v.imag()) > limit)
      throw SymmetryError("synthesize: series is not conjugate-symmetric (imaginary residue " +
                          std::to_string(v.imag()) + ")");
    out[i] = v.real();
  }
  return out;
}

cplx fourier_indicator(double t, double x) {
  if (x == 0.0) return t;
  return (1.0 - std::exp(-kI * (x * t))) / (kI * x);
}

double RkhsElement::operator()(double t) const {
  const long K = static_cast<long>(series.K());
  cplx acc = 0.0;
  for (long k = -K; k <= K; ++k) acc += series.theta(k) * std::conj(fourier_indicator(t, 2.0 * series.omega(k)));
  return acc.real();
}

double rkhs_norm_sq(const RkhsElement& elem, const BasisTable& table) {
  const long K = static_cast<long>(elem.series.K());
  if (elem.series.K() > table.K()) throw std::invalid_argument("rkhs_norm_sq: series longer than table");
  double acc = 0.0;
  for (long k = -K; k <= K; ++k) {
    const double a = table.a(k);
    acc += std::norm(elem.series.theta(k)) / (a * a);
  }
  return acc;
}

double kl_rkhs(const RkhsElement& f, const RkhsElement& g, double noise_level, const BasisTable& table) {
  if (!(noise_level > 0.0)) throw std::invalid_argument("kl_rkhs: noise level must be positive");
  const RkhsElement diff{f.series - g.series};
  return 0.5 * rkhs_norm_sq(diff, table) / (noise_level * noise_level);
}

double kernel_parseval_check(const BasisTable& table, double s, double t, std::size_t K) {
  if (K == 0) K = table.K();
  if (K > table.K()) throw std::invalid_argument("kernel_parseval_check: K exceeds table");
  const double a0 = table.a(0);
  double acc = a0 * a0 * s * t;
  for (std::size_t k = 1; k <= K; ++k) {
    const long kk = static_cast<long>(k);
    const double x = 2.0 * table.omega(kk);
    const double a = table.a(kk);
    acc += 2.0 * a * a * (fourier_indicator(s, x) * std::conj(fourier_indicator(t, x))).real();
  }
  return acc;
}

double kernel_tail_bound(const BasisTable& table, std::size_t K) {
  if (K == 0) K = table.K();
  const double H = table.hurst();
  const double aK = table.a(static_cast<long>(K));
  const double kk = static_cast<double>(K);
  // sum_{k>K} 2 a_k^2 / omega_k^2 with omega_k >= (k - 1/4) pi
  const double shrink = kk / (kk - 0.25);
  return aK * aK * shrink * shrink / (std::numbers::pi * std::numbers::pi * H * kk);
}

std::vector<double> kernel_parseval_grid(const BasisTable& table, std::span<const double> s,
                                         std::span<const double> t, std::size_t K, int jobs) {
  const std::size_t cols = t.size();
  return parallel_map(s.size() * cols, jobs,
                      [&](std::size_t i) { return kernel_parseval_check(table, s[i / cols], t[i % cols], K); });
}

Eigen::MatrixXcd gram_matrix(const BasisTable& table, std::size_t K) {
  if (K > table.K()) throw std::invalid_argument("gram_matrix: K exceeds table");
  const long km = static_cast<long>(K);
  const auto dim = static_cast<Eigen::Index>(2 * K + 1);
  Eigen::MatrixXcd g(dim, dim);
  for (long k = -km; k <= km; ++k) {
    for (long l = -km; l <= km; ++l) {
      const double d = 2.0 * (table.omega(k) - table.omega(l));
      g(k + km, l + km) = d == 0.0 ? cplx{1.0, 0.0} : (std::exp(kI * d) - 1.0) / (kI * d);
    }
  }
  return g;
}

double l2_norm_sq(const NonharmonicSeries& series) {
  const long K = static_cast<long>(series.K());
  cplx acc = 0.0;
  for (long k = -K; k <= K; ++k) {
    for (long l = -K; l <= K; ++l) {
      const double d = 2.0 * (series.omega(k) - series.omega(l));
      const cplx g = d == 0.0 ? cplx{1.0, 0.0} : (std::exp(kI * d) - 1.0) / (kI * d);
      acc += series.theta(k) * std::conj(series.theta(l)) * g;
    }
  }
  return acc.real();
}

FrameBounds riesz_bounds(const BasisTable& table, std::size_t K) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(gram_matrix(table, K), Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw NumericError("riesz_bounds: eigensolver failed");
  return {solver.eigenvalues().minCoeff(), solver.eigenvalues().maxCoeff()};
}

}  // namespace fracequiv
