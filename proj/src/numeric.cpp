#include "crossings/numeric.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>
#include <vector>

namespace crossings {

namespace {

// Gauss-Kronrod 7/15 abscissae and weights on [-1, 1].
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double a;
  double b;
  double value;
  double error;
  int depth;
};

struct WorstFirst {
  bool operator()(const Panel& l, const Panel& r) const { return l.error < r.error; }
};

Panel gauss_kronrod(const Integrand& f, double a, double b, int depth) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double kronrod = fc * kWgk[7];
  double gauss = fc * kWg[3];
  double resabs = std::abs(kronrod);
  std::array<double, 7> f1{};
  std::array<double, 7> f2{};
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[static_cast<std::size_t>(j)];
    f1[static_cast<std::size_t>(j)] = f(center - dx);
    f2[static_cast<std::size_t>(j)] = f(center + dx);
    const double pair = f1[static_cast<std::size_t>(j)] + f2[static_cast<std::size_t>(j)];
    kronrod += kWgk[static_cast<std::size_t>(j)] * pair;
    resabs += kWgk[static_cast<std::size_t>(j)] *
              (std::abs(f1[static_cast<std::size_t>(j)]) + std::abs(f2[static_cast<std::size_t>(j)]));
    if (j % 2 == 1) gauss += kWg[static_cast<std::size_t>(j / 2)] * pair;
  }
  const double mean = 0.5 * kronrod;
  double resasc = kWgk[7] * std::abs(fc - mean);
  for (std::size_t j = 0; j < 7; ++j) {
    resasc += kWgk[j] * (std::abs(f1[j] - mean) + std::abs(f2[j] - mean));
  }
  const double scale = std::abs(half);
  kronrod *= half;
  gauss *= half;
  resabs *= scale;
  resasc *= scale;

  // Error heuristic of QUADPACK's qk15.
  double err = std::abs(kronrod - gauss);
  if (resasc != 0.0 && err != 0.0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  constexpr double eps = std::numeric_limits<double>::epsilon();
  if (resabs > std::numeric_limits<double>::min() / (50.0 * eps)) err = std::max(50.0 * eps * resabs, err);
  return {a, b, kronrod, err, depth};
}

}  // namespace

void Quadrature::validate() const {
  if (!(abs_tol > 0.0) || !(rel_tol > 0.0)) throw std::invalid_argument("quadrature tolerances must be > 0");
  if (max_depth < 1) throw std::invalid_argument("quadrature max_depth must be >= 1");
  if (!(half_width > 0.0)) throw std::invalid_argument("quadrature half_width must be > 0");
}

double std_normal_pdf(double x) { return kInvSqrt2Pi * std::exp(-0.5 * x * x); }

double std_normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double std_normal_sf(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

double gauss_density_var(double x, double variance) {
  if (!(variance > 0.0)) throw std::invalid_argument("gauss_density_var: variance must be > 0");
  const double sd = std::sqrt(variance);
  return std_normal_pdf(x / sd) / sd;
}

double bvn_rect_upper(double u, double r, const Quadrature& q) {
  if (!(r > -1.0) || r > 1.0) throw std::invalid_argument("bvn_rect_upper: correlation must lie in (-1, 1]");
  if (r == 1.0) return 0.0;
  const double s = std::sqrt((1.0 - r) * (1.0 + r));
  const double inf = std::numeric_limits<double>::infinity();
  const double value = quad_adaptive(
      [u, r, s](double x) { return std_normal_pdf(x) * std_normal_sf((u - r * x) / s); }, -inf, u, q);
  return std::max(0.0, value);
}

double poisson_pmf(std::int64_t n, double mean) {
  if (n < 0) throw std::invalid_argument("poisson_pmf: negative count");
  if (!(mean >= 0.0)) throw std::invalid_argument("poisson_pmf: mean must be >= 0");
  if (mean == 0.0) return n == 0 ? 1.0 : 0.0;
  const auto k = static_cast<double>(n);
  return std::exp(k * std::log(mean) - mean - std::lgamma(k + 1.0));
}

double poisson_tail(std::int64_t n, double mean) {
  if (n < 0) throw std::invalid_argument("poisson_tail: negative count");
  if (!(mean >= 0.0)) throw std::invalid_argument("poisson_tail: mean must be >= 0");
  if (n == 0) return 1.0;
  if (mean == 0.0) return 0.0;
  if (static_cast<double>(n) <= mean) {
    double below = 0.0;
    for (std::int64_t k = 0; k < n; ++k) below += poisson_pmf(k, mean);
    return std::clamp(1.0 - below, 0.0, 1.0);
  }
  // Right tail: terms decrease monotonically past the mode.
  double term = poisson_pmf(n, mean);
  double sum = 0.0;
  for (std::int64_t k = n; term > 0.0; ++k) {
    sum += term;
    if (term < 1e-17 * sum) break;
    term *= mean / static_cast<double>(k + 1);
  }
  return std::min(sum, 1.0);
}

double quad_adaptive(const Integrand& f, double a, double b, const Quadrature& q) {
  q.validate();
  if (std::isnan(a) || std::isnan(b)) throw std::invalid_argument("quad_adaptive: NaN bound");
  if (a == b) return 0.0;
  if (a > b) return -quad_adaptive(f, b, a, q);
  if (std::isinf(a) && a > 0) return 0.0;
  if (std::isinf(b) && b < 0) return 0.0;
  if (std::isinf(a)) a = std::min(std::isinf(b) ? 0.0 : b, 0.0) - q.half_width;
  if (std::isinf(b)) b = std::max(a, 0.0) + q.half_width;
  if (a >= b) return 0.0;

  std::priority_queue<Panel, std::vector<Panel>, WorstFirst> panels;
  panels.push(gauss_kronrod(f, a, b, 0));
  double total = panels.top().value;
  double error = panels.top().error;
  constexpr std::size_t kMaxPanels = 200000;

  while (error > std::max(q.abs_tol, q.rel_tol * std::abs(total))) {
    if (!std::isfinite(total)) throw std::domain_error("quad_adaptive: integrand is not finite on the window");
    Panel worst = panels.top();
    if (worst.depth >= q.max_depth || panels.size() >= kMaxPanels) {
      throw QuadratureError("quad_adaptive: subdivision depth exhausted", total, error);
    }
    panels.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    Panel left = gauss_kronrod(f, worst.a, mid, worst.depth + 1);
    Panel right = gauss_kronrod(f, mid, worst.b, worst.depth + 1);
    total += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    panels.push(left);
    panels.push(right);
  }
  // Re-sum to shed the drift of the running update.
  double resummed = 0.0;
  while (!panels.empty()) {
    resummed += panels.top().value;
    panels.pop();
  }
  return resummed;
}

}  // namespace crossings
