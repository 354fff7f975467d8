#include "gridrisk/objectives/objectives.hpp"

#include <cmath>
#include <string>

#include "gridrisk/error.hpp"

namespace gridrisk::objectives {

namespace {

void require_level(double q) {
  if (!(q > 0.0 && q < 1.0)) throw Error(ErrorCode::invalid_level, "quantile level must lie in (0, 1)");
}

void require_shape(const QuantileForecastSet& batch, const ObjectiveConfig& cfg) {
  const auto levels = batch.levels();
  if (levels.size() != cfg.quantile_levels.size()) {
    throw Error(ErrorCode::shape_mismatch, "batch levels do not match the objective's quantile set");
  }
  for (std::size_t k = 0; k < levels.size(); ++k) {
    if (std::abs(levels[k] - cfg.quantile_levels[k]) > 1e-12) {
      throw Error(ErrorCode::shape_mismatch, "batch levels do not match the objective's quantile set");
    }
  }
  if (std::abs(batch.point_level() - cfg.point_level) > 1e-12) {
    throw Error(ErrorCode::shape_mismatch, "batch point level differs from the objective's point level");
  }
  if (batch.issue_count() == 0 || batch.lead_count() == 0) throw Error(ErrorCode::empty_set, "empty batch");
}

std::size_t h_star_index(const QuantileForecastSet& batch, const ObjectiveConfig& cfg) {
  auto l = batch.lead_index(cfg.h_star);
  if (!l) throw Error(ErrorCode::missing_lead, "h_star not among batch leads: " + std::to_string(cfg.h_star));
  return *l;
}

}  // namespace

void ObjectiveConfig::validate() const {
  auto fail = [](const std::string& msg) { throw Error(ErrorCode::invalid_config, msg); };
  if (quantile_levels.empty()) fail("quantile set is empty");
  if (weights.size() != quantile_levels.size()) fail("weights must align with quantile levels");
  bool has_point = false;
  for (std::size_t k = 0; k < quantile_levels.size(); ++k) {
    const double q = quantile_levels[k];
    if (!(q > 0.0 && q < 1.0)) fail("quantile levels must lie in (0, 1)");
    if (k > 0 && !(q > quantile_levels[k - 1])) fail("quantile levels must be strictly increasing");
    if (!(weights[k] > 0.0)) fail("quantile weights must be positive");
    if (std::abs(q - point_level) < 1e-12) has_point = true;
  }
  if (!has_point) fail("point level is not among the quantile levels");
  if (h_star < 1) fail("h_star must be a positive lead hour");
  if (!(lambda_bias >= 0.0) || !(lambda_opr >= 0.0)) fail("penalty weights must be non-negative");
  if (!(pi_max >= 0.0 && pi_max <= 1.0)) fail("pi_max must lie in [0, 1]");
  if (!(tau_mw > 0.0)) fail("tau must be positive");
  if (!std::isfinite(b_max_mw)) fail("b_max must be finite");
}

double pinball(double y, double q_hat, double q) {
  require_level(q);
  const double u = y - q_hat;
  return std::max(q * u, (q - 1.0) * u);
}

double pinball_gradient(double y, double q_hat, double q) {
  require_level(q);
  return y > q_hat ? -q : 1.0 - q;
}

ObjectiveValue multi_quantile_loss(const QuantileForecastSet& batch, const ObjectiveConfig& cfg) {
  require_shape(batch, cfg);
  const std::size_t n_issue = batch.issue_count();
  const std::size_t n_lead = batch.lead_count();
  const std::size_t n_level = batch.level_count();
  const double scale = 1.0 / (static_cast<double>(n_lead) * static_cast<double>(n_issue));

  ObjectiveValue out;
  out.gradient.assign(batch.predictions().size(), 0.0);
  for (std::size_t i = 0; i < n_issue; ++i) {
    for (std::size_t l = 0; l < n_lead; ++l) {
      const double y = batch.actual(i, l);
      for (std::size_t k = 0; k < n_level; ++k) {
        const double q = cfg.quantile_levels[k];
        const double w = cfg.weights[k] * scale;
        const std::size_t idx = batch.flat_index(i, l, k);
        const double pred = batch.predictions()[idx];
        out.loss += w * pinball(y, pred, q);
        out.gradient[idx] = w * pinball_gradient(y, pred, q);
      }
    }
  }
  return out;
}

double batch_bias(const QuantileForecastSet& batch, const ObjectiveConfig& cfg) {
  const std::size_t l = h_star_index(batch, cfg);
  double sum = 0.0;
  for (std::size_t i = 0; i < batch.issue_count(); ++i) sum += batch.point(i, l) - batch.actual(i, l);
  return sum / static_cast<double>(batch.issue_count());
}

ObjectiveValue bias_penalty(const QuantileForecastSet& batch, const ObjectiveConfig& cfg) {
  require_shape(batch, cfg);
  ObjectiveValue out;
  out.gradient.assign(batch.predictions().size(), 0.0);
  if (cfg.lambda_bias == 0.0) return out;
  const std::size_t l = h_star_index(batch, cfg);
  const double excess = batch_bias(batch, cfg) - cfg.b_max_mw;
  if (excess <= 0.0) return out;
  out.loss = cfg.lambda_bias * excess;
  const double g = cfg.lambda_bias / static_cast<double>(batch.issue_count());
  for (std::size_t i = 0; i < batch.issue_count(); ++i) out.gradient[batch.flat_index(i, l, batch.point_index())] = g;
  return out;
}

double smooth_opr(const QuantileForecastSet& batch, const ObjectiveConfig& cfg) {
  if (!(cfg.tau_mw > 0.0)) throw Error(ErrorCode::invalid_config, "tau must be positive");
  const std::size_t l = h_star_index(batch, cfg);
  if (batch.issue_count() == 0) throw Error(ErrorCode::empty_set, "empty batch");
  double sum = 0.0;
  for (std::size_t i = 0; i < batch.issue_count(); ++i) {
    sum += sigmoid((batch.point(i, l) - batch.actual(i, l)) / cfg.tau_mw);
  }
  return sum / static_cast<double>(batch.issue_count());
}

ObjectiveValue opr_penalty(const QuantileForecastSet& batch, const ObjectiveConfig& cfg) {
  require_shape(batch, cfg);
  ObjectiveValue out;
  out.gradient.assign(batch.predictions().size(), 0.0);
  if (cfg.lambda_opr == 0.0) return out;
  const std::size_t l = h_star_index(batch, cfg);
  const double excess = smooth_opr(batch, cfg) - cfg.pi_max;
  if (excess <= 0.0) return out;
  out.loss = cfg.lambda_opr * excess;
  const double scale = cfg.lambda_opr / (static_cast<double>(batch.issue_count()) * cfg.tau_mw);
  for (std::size_t i = 0; i < batch.issue_count(); ++i) {
    const double s = sigmoid((batch.point(i, l) - batch.actual(i, l)) / cfg.tau_mw);
    out.gradient[batch.flat_index(i, l, batch.point_index())] = scale * s * (1.0 - s);
  }
  return out;
}

ObjectiveValue combined_objective(const QuantileForecastSet& batch, const ObjectiveConfig& cfg) {
  ObjectiveValue total = multi_quantile_loss(batch, cfg);
  for (const auto& term : {bias_penalty(batch, cfg), opr_penalty(batch, cfg)}) {
    total.loss += term.loss;
    for (std::size_t i = 0; i < total.gradient.size(); ++i) total.gradient[i] += term.gradient[i];
  }
  return total;
}

double gaussian_nll(double y, double mu, double sigma2) {
  if (!(sigma2 > 0.0)) throw Error(ErrorCode::non_positive_variance, "variance must be positive");
  const double r = y - mu;
  return 0.5 * (std::log(sigma2) + r * r / sigma2);
}

GaussianNllGradient gaussian_nll_gradient(double y, double mu, double sigma2) {
  if (!(sigma2 > 0.0)) throw Error(ErrorCode::non_positive_variance, "variance must be positive");
  const double r = y - mu;
  return {-r / sigma2, 0.5 * (1.0 / sigma2 - r * r / (sigma2 * sigma2))};
}

double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

double softplus(double x) {
  if (x > 30.0) return x + std::log1p(std::exp(-x));
  return std::log1p(std::exp(x));
}

double softplus_inverse(double x) {
  if (!(x > 0.0)) throw Error(ErrorCode::invalid_argument, "softplus inverse needs x > 0");
  if (x > 30.0) return x + std::log(-std::expm1(-x));
  return std::log(std::expm1(x));
}

}  // namespace gridrisk::objectives
