#pragma once

#include <optional>
#include <span>
#include <vector>

namespace gridrisk::forecast {

struct Discretized {
  std::vector<double> a_bar;  // diagonal of exp(delta A)
  std::vector<double> b_bar;
};

/// Zero-order hold for diagonal A. Entries with |delta a| < 1e-8 take the
/// limit b_bar = delta b. Throws NonPositiveStep.
Discretized zoh_discretize(std::span<const double> a_diag, std::span<const double> b, double delta);

/// Input-dependent parameter: value = slope * x + bias, one entry per state.
struct SelectiveMap {
  std::vector<double> slope;
  std::vector<double> bias;
};

/// Scalar variant for the step; the step is softplus(slope * x + bias).
struct StepMap {
  double slope = 0.0;
  double bias = 0.0;
};

/// Single-input single-output cell with diagonal A. Unset selective maps fall
/// back to the fixed B, C and delta.
struct SsmCell {
  std::vector<double> a_diag;
  std::vector<double> b;
  std::vector<double> c;
  double d = 0.0;
  double delta = 1.0;
  std::optional<SelectiveMap> s_b;
  std::optional<SelectiveMap> s_c;
  std::optional<StepMap> s_delta;

  std::size_t state_dim() const { return a_diag.size(); }
  /// Throws InvalidArgument on shape errors or a non-negative diagonal entry.
  void validate() const;
  /// max_i |exp(delta a_i)|.
  double spectral_radius(double step) const;
};

/// h_0 = 0; per step recomputes (B_k, C_k, delta_k), discretizes, updates
/// h_k = A_bar h_{k-1} + B_bar x_k and emits C_k h_k + D x_k. Throws
/// NonFiniteState when the state overflows.
std::vector<double> selective_scan(const SsmCell& cell, std::span<const double> inputs);

}  // namespace gridrisk::forecast
