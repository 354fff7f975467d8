#pragma once

#include <vector>

#include "gridrisk/metrics/forecast_set.hpp"

namespace gridrisk::objectives {

using metrics::QuantileForecastSet;

/// Weighted multi-quantile objective with bias and smoothed over-forecast
/// hinge penalties. MW-valued fields are in the units of the predictions.
struct ObjectiveConfig {
  std::vector<double> quantile_levels{0.025, 0.5, 0.975};
  std::vector<double> weights{4.0, 1.0, 4.0};
  int h_star = 24;
  double b_max_mw = 0.0;
  double lambda_bias = 10.0;
  double lambda_opr = 10.0;
  double pi_max = 0.6;
  double tau_mw = 50.0;
  /// Head used as the scheduled forecast by the bias and OPR terms.
  double point_level = 0.5;

  /// Throws InvalidConfig on a violated invariant.
  void validate() const;
};

/// Loss value and its gradient with respect to the prediction tensor (same
/// layout as QuantileForecastSet::predictions()).
struct ObjectiveValue {
  double loss = 0.0;
  std::vector<double> gradient;
};

/// max(q (y - qhat), (q - 1)(y - qhat)).
double pinball(double y, double q_hat, double q);

/// d pinball / d qhat: -q when y > qhat, (1 - q) otherwise (kink included).
double pinball_gradient(double y, double q_hat, double q);

/// sum_q w_q (1/H) sum_h pinball, averaged over issue times.
ObjectiveValue multi_quantile_loss(const QuantileForecastSet& batch, const ObjectiveConfig& cfg);

/// Mean (point head - actual) at h_star over the batch.
double batch_bias(const QuantileForecastSet& batch, const ObjectiveConfig& cfg);

/// lambda_bias * max(0, b - b_max). Gradient is zero at the hinge.
ObjectiveValue bias_penalty(const QuantileForecastSet& batch, const ObjectiveConfig& cfg);

/// Mean sigmoid((point head - actual) / tau) at h_star.
double smooth_opr(const QuantileForecastSet& batch, const ObjectiveConfig& cfg);

/// lambda_opr * max(0, smooth_opr - pi_max).
ObjectiveValue opr_penalty(const QuantileForecastSet& batch, const ObjectiveConfig& cfg);

/// Multi-quantile loss plus both penalties; gradients add.
ObjectiveValue combined_objective(const QuantileForecastSet& batch, const ObjectiveConfig& cfg);

/// 0.5 [ln sigma2 + (y - mu)^2 / sigma2].
double gaussian_nll(double y, double mu, double sigma2);

struct GaussianNllGradient {
  double d_mu = 0.0;
  double d_sigma2 = 0.0;
};
GaussianNllGradient gaussian_nll_gradient(double y, double mu, double sigma2);

double sigmoid(double x);
/// log(1 + e^x) without overflow.
double softplus(double x);
/// Inverse of softplus for x > 0.
double softplus_inverse(double x);

}  // namespace gridrisk::objectives
