#include "crossings/rice.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace crossings {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

/// Weights p_1..p_N of the CPP mixture density.
std::vector<double> mixture_weights(double lambda, double horizon, double tol) {
  const double mean = lambda * horizon;
  std::vector<double> w;
  for (std::int64_t n = 1;; ++n) {
    const double pn = poisson_tail(n, mean) / mean;
    w.push_back(pn);
    if (static_cast<double>(n) > mean && pn < tol) break;
    if (n > 100000) throw std::runtime_error("cpp mixture series failed to converge");
  }
  return w;
}

double mixture_density(const std::vector<double>& weights, double x) {
  double sum = 0.0;
  for (std::size_t k = 0; k < weights.size(); ++k) sum += weights[k] * gauss_density_var(x, static_cast<double>(k + 1));
  return sum;
}

}  // namespace

MeanAbsDerivative mean_abs_derivative(double lambda2) {
  require(lambda2 > 0.0, "lambda2 must be > 0");
  const double plus = std::sqrt(lambda2 / (2.0 * kPi));
  return {plus, 2.0 * plus};
}

void PoissonArParams::validate() const {
  require(lambda2 > 0.0, "lambda2 must be > 0");
  require(lambda > 0.0, "lambda must be > 0");
  require(std::abs(rho) < 1.0, "rho must satisfy |rho| < 1");
  require(horizon > 0.0, "horizon T must be > 0");
}

void CppParams::validate() const {
  require(lambda2 > 0.0, "lambda2 must be > 0");
  require(lambda > 0.0, "lambda must be > 0");
  require(horizon > 0.0, "horizon T must be > 0");
  require(tail_tolerance > 0.0 && tail_tolerance <= 1e-6, "series tolerance must lie in (0, 1e-6]");
}

double rice_const_var_continuous(double lambda2, double density_at_level, double horizon, Direction direction) {
  require(density_at_level >= 0.0, "density must be >= 0");
  require(horizon > 0.0, "horizon T must be > 0");
  const MeanAbsDerivative m = mean_abs_derivative(lambda2);
  const double rate = direction == Direction::both ? m.absolute : m.positive_part;
  return horizon * rate * density_at_level;
}

MeanCrossings poisson_ar_upcrossings(const PoissonArParams& p, double level, const Quadrature& q) {
  p.validate();
  const double cont = rice_const_var_continuous(p.lambda2, std_normal_pdf(level), p.horizon, Direction::up);
  const double disc = p.lambda * p.horizon * bvn_rect_upper(level, 0.5 * (1.0 + p.rho), q);
  return {cont, disc, cont + disc};
}

int cpp_mixture_terms(double lambda, double horizon, double tol) {
  return static_cast<int>(mixture_weights(lambda, horizon, tol).size());
}

double cpp_mixture_density(double level, double lambda, double horizon, double tol) {
  require(lambda > 0.0 && horizon > 0.0, "lambda and T must be > 0");
  require(tol > 0.0, "tolerance must be > 0");
  return mixture_density(mixture_weights(lambda, horizon, tol), level);
}

MeanCrossings cpp_upcrossings(const CppParams& c, double level, const Quadrature& q) {
  c.validate();
  const std::vector<double> weights = mixture_weights(c.lambda, c.horizon, c.tail_tolerance);
  const double density = mixture_density(weights, level);
  const double cont = rice_const_var_continuous(c.lambda2, density, c.horizon, Direction::up);

  // The widest mixture component has variance N; widen the truncation window accordingly.
  Quadrature wide = q;
  wide.half_width = q.half_width * std::sqrt(static_cast<double>(weights.size()));
  const double inf = std::numeric_limits<double>::infinity();
  const double integral = quad_adaptive(
      [&weights, level](double x) { return std_normal_sf(level - x) * mixture_density(weights, x); }, -inf, level,
      wide);
  const double disc = c.lambda * c.horizon * integral;
  return {cont, disc, cont + disc};
}

double max_tail_upper_bound(const PoissonArParams& p, double level, const Quadrature& q) {
  const MeanCrossings mean = poisson_ar_upcrossings(p, level, q);
  return std::min(1.0, std_normal_sf(level) + mean.total);
}

double general_rice_convolution(const std::function<double(double, double)>& cond_mean_abs_deriv,
                                const std::function<double(double, double)>& smooth_density,
                                const std::function<double(double, double)>& jump_density, double level,
                                double horizon, const Quadrature& q) {
  require(horizon > 0.0, "horizon T must be > 0");
  const double reach = q.half_width + std::abs(level);
  auto inner = [&](double t) {
    auto integrand = [&](double x) {
      const double v = level - x;
      return cond_mean_abs_deriv(t, v) * smooth_density(t, v) * jump_density(t, x);
    };
    // x = +-reach * s^4 clusters nodes at x = 0.
    auto half_line = [&](double sign) {
      return quad_adaptive(
          [&](double s) {
            const double s3 = s * s * s;
            return integrand(sign * reach * s3 * s) * 4.0 * reach * s3;
          },
          0.0, 1.0, q);
    };
    return half_line(1.0) + half_line(-1.0);
  };
  return quad_adaptive(inner, 0.0, horizon, q);
}

}  // namespace crossings
