#include "gridrisk/forecast/ssm.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gridrisk/error.hpp"
#include "gridrisk/objectives/objectives.hpp"

namespace gridrisk::forecast {

Discretized zoh_discretize(std::span<const double> a_diag, std::span<const double> b, double delta) {
  if (!(delta > 0.0)) throw Error(ErrorCode::non_positive_step, "discretization step must be positive");
  if (a_diag.size() != b.size()) throw Error(ErrorCode::dimension_mismatch, "A and B state sizes differ");
  Discretized out;
  out.a_bar.resize(a_diag.size());
  out.b_bar.resize(a_diag.size());
  for (std::size_t i = 0; i < a_diag.size(); ++i) {
    const double z = delta * a_diag[i];
    out.a_bar[i] = std::exp(z);
    out.b_bar[i] = std::abs(z) < 1e-8 ? delta * b[i] : std::expm1(z) / z * delta * b[i];
  }
  return out;
}

void SsmCell::validate() const {
  const std::size_t n = a_diag.size();
  if (n == 0) throw Error(ErrorCode::invalid_argument, "state dimension must be positive");
  if (b.size() != n || c.size() != n) throw Error(ErrorCode::dimension_mismatch, "B and C must match the state size");
  for (double a : a_diag) {
    if (!(a < 0.0)) throw Error(ErrorCode::invalid_argument, "diagonal of A must be strictly negative");
  }
  if (!s_delta && !(delta > 0.0)) throw Error(ErrorCode::non_positive_step, "step must be positive");
  for (const auto* m : {&s_b, &s_c}) {
    if (*m && ((*m)->slope.size() != n || (*m)->bias.size() != n)) {
      throw Error(ErrorCode::dimension_mismatch, "selective map must match the state size");
    }
  }
}

double SsmCell::spectral_radius(double step) const {
  double r = 0.0;
  for (double a : a_diag) r = std::max(r, std::abs(std::exp(step * a)));
  return r;
}

std::vector<double> selective_scan(const SsmCell& cell, std::span<const double> inputs) {
  cell.validate();
  const std::size_t n = cell.state_dim();
  std::vector<double> h(n, 0.0), b_k(n), c_k(n), y;
  y.reserve(inputs.size());
  for (std::size_t k = 0; k < inputs.size(); ++k) {
    const double x = inputs[k];
    if (!std::isfinite(x)) throw Error(ErrorCode::non_finite_state, "input is not finite", std::to_string(k));
    for (std::size_t i = 0; i < n; ++i) {
      b_k[i] = cell.s_b ? cell.s_b->slope[i] * x + cell.s_b->bias[i] : cell.b[i];
      c_k[i] = cell.s_c ? cell.s_c->slope[i] * x + cell.s_c->bias[i] : cell.c[i];
    }
    const double step = cell.s_delta ? objectives::softplus(cell.s_delta->slope * x + cell.s_delta->bias) : cell.delta;
    const auto disc = zoh_discretize(cell.a_diag, b_k, step);
    double out = cell.d * x;
    for (std::size_t i = 0; i < n; ++i) {
      h[i] = disc.a_bar[i] * h[i] + disc.b_bar[i] * x;
      if (!std::isfinite(h[i])) throw Error(ErrorCode::non_finite_state, "state diverged", "step " + std::to_string(k));
      out += c_k[i] * h[i];
    }
    if (!std::isfinite(out)) throw Error(ErrorCode::non_finite_state, "output overflowed", "step " + std::to_string(k));
    y.push_back(out);
  }
  return y;
}

}  // namespace gridrisk::forecast
