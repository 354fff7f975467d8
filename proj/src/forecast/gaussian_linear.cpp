#include "gridrisk/forecast/gaussian_linear.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>

#include <boost/math/distributions/normal.hpp>

#include "gridrisk/error.hpp"

namespace gridrisk::forecast {

namespace {

constexpr double kMinVariance = 1e-4;

double dot(const std::vector<double>& w, std::span<const double> x) {
  double s = 0.0;
  for (std::size_t j = 0; j < w.size(); ++j) s += w[j] * x[j];
  return s;
}

}  // namespace

GaussianLinearModel::Moments GaussianLinearModel::moments(std::span<const double> row) const {
  if (row.size() != columns.size()) throw Error(ErrorCode::column_mismatch, "row width differs from model columns");
  std::vector<double> x(row.size());
  for (std::size_t j = 0; j < row.size(); ++j) x[j] = (row[j] - feature_mean[j]) / feature_scale[j];
  const double mu = mean_bias + dot(mean_weights, x);
  const double s2 = std::max(kMinVariance, objectives::softplus(var_bias + dot(var_weights, x)));
  return {y_mean + y_scale * mu, y_scale * y_scale * s2};
}

std::vector<double> GaussianLinearModel::parameters() const {
  std::vector<double> out(mean_weights);
  out.insert(out.end(), var_weights.begin(), var_weights.end());
  out.push_back(mean_bias);
  out.push_back(var_bias);
  return out;
}

GaussianLinearModel fit_gaussian_model(const FeatureMatrix& train, const FitOptions& opt) {
  if (!(opt.step_size > 0.0)) throw Error(ErrorCode::non_positive_step, "step size must be positive");
  const std::size_t n = train.rows(), c = train.cols();
  if (n <= c) throw Error(ErrorCode::degenerate_design, "fewer training rows than feature columns + 1");

  GaussianLinearModel m;
  m.columns = train.columns;
  m.feature_mean.assign(c, 0.0);
  m.feature_scale.assign(c, 1.0);
  for (std::size_t j = 0; j < c; ++j) {
    double sum = 0.0;
    for (std::size_t r = 0; r < n; ++r) sum += train.at(r, j);
    const double mu = sum / static_cast<double>(n);
    double ss = 0.0;
    for (std::size_t r = 0; r < n; ++r) ss += (train.at(r, j) - mu) * (train.at(r, j) - mu);
    const double sd = std::sqrt(ss / static_cast<double>(n));
    if (!(sd > 0.0)) throw Error(ErrorCode::degenerate_design, "feature column is constant", train.columns[j]);
    m.feature_mean[j] = mu;
    m.feature_scale[j] = sd;
  }
  m.y_mean = std::accumulate(train.target.begin(), train.target.end(), 0.0) / static_cast<double>(n);
  double ss = 0.0;
  for (double y : train.target) ss += (y - m.y_mean) * (y - m.y_mean);
  m.y_scale = ss > 0.0 ? std::sqrt(ss / static_cast<double>(n)) : 1.0;

  std::vector<double> x(n * c), y(n);
  for (std::size_t r = 0; r < n; ++r) {
    y[r] = (train.target[r] - m.y_mean) / m.y_scale;
    for (std::size_t j = 0; j < c; ++j) x[r * c + j] = (train.at(r, j) - m.feature_mean[j]) / m.feature_scale[j];
  }
  auto row = [&](std::size_t r) { return std::span<const double>(x.data() + r * c, c); };

  m.mean_weights.assign(c, 0.0);
  m.var_weights.assign(c, 0.0);
  m.mean_bias = 0.0;
  m.var_bias = objectives::softplus_inverse(1.0);

  auto nll = [&]() {
    double total = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
      const double mu = m.mean_bias + dot(m.mean_weights, row(r));
      const double s2 = std::max(kMinVariance, objectives::softplus(m.var_bias + dot(m.var_weights, row(r))));
      total += objectives::gaussian_nll(y[r], mu, s2);
    }
    return total / static_cast<double>(n);
  };

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(opt.seed);
  const std::size_t lead_count = std::max<std::size_t>(1, train.leads.size());
  const std::size_t batch =
      opt.batch_issues == 0 ? n : std::min(n, opt.batch_issues * lead_count);
  const double initial = nll();
  m.training_trace.push_back(initial);

  std::vector<double> gmw(c), gvw(c);
  for (int epoch = 1; epoch <= opt.epochs; ++epoch) {
    const double step =
        opt.step_size * 0.5 * (1.0 + std::cos(std::numbers::pi * static_cast<double>(epoch - 1) / opt.epochs));
    if (batch < n) std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t first = 0; first < n; first += batch) {
      const std::size_t last = std::min(n, first + batch);
      std::fill(gmw.begin(), gmw.end(), 0.0);
      std::fill(gvw.begin(), gvw.end(), 0.0);
      double gmb = 0.0, gvb = 0.0;
      const double inv = 1.0 / static_cast<double>(last - first);
      for (std::size_t i = first; i < last; ++i) {
        const auto xr = row(order[i]);
        const double mu = m.mean_bias + dot(m.mean_weights, xr);
        const double s = m.var_bias + dot(m.var_weights, xr);
        const double s2 = std::max(kMinVariance, objectives::softplus(s));
        const auto g = objectives::gaussian_nll_gradient(y[order[i]], mu, s2);
        const double gs = g.d_sigma2 * objectives::sigmoid(s);
        gmb += g.d_mu * inv;
        gvb += gs * inv;
        for (std::size_t j = 0; j < c; ++j) {
          gmw[j] += g.d_mu * xr[j] * inv;
          gvw[j] += gs * xr[j] * inv;
        }
      }
      m.mean_bias -= step * gmb;
      m.var_bias -= step * gvb;
      for (std::size_t j = 0; j < c; ++j) {
        m.mean_weights[j] -= step * gmw[j];
        m.var_weights[j] -= step * gvw[j];
      }
    }
    const double loss = nll();
    m.training_trace.push_back(loss);
    if (!std::isfinite(loss)) throw Error(ErrorCode::diverged_loss, "Gaussian NLL became non-finite");
  }
  return m;
}

QuantileForecastSet predict_gaussian(const GaussianLinearModel& model, const FeatureMatrix& features,
                                     std::span<const double> levels, double point_level) {
  if (features.columns != model.columns) {
    throw Error(ErrorCode::column_mismatch, "feature columns differ from the model's columns");
  }
  const boost::math::normal_distribution<double> unit;
  std::vector<double> z;
  for (double q : levels) {
    if (!(q > 0.0 && q < 1.0)) throw Error(ErrorCode::invalid_level, "quantile level must lie in (0, 1)");
    z.push_back(boost::math::quantile(unit, q));
  }
  std::vector<double> preds;
  preds.reserve(features.rows() * levels.size());
  for (std::size_t r = 0; r < features.rows(); ++r) {
    const auto mom = model.moments(features.row(r));
    const double sd = std::sqrt(mom.variance);
    for (double zq : z) preds.push_back(mom.mean + sd * zq);
  }
  return QuantileForecastSet(features.issue_times, features.leads, std::vector<double>(levels.begin(), levels.end()),
                             std::move(preds), features.target, point_level);
}

nlohmann::ordered_json to_json(const GaussianLinearModel& model) {
  nlohmann::ordered_json j;
  j["columns"] = model.columns;
  j["feature_mean"] = model.feature_mean;
  j["feature_scale"] = model.feature_scale;
  j["y_mean"] = model.y_mean;
  j["y_scale"] = model.y_scale;
  j["mean_weights"] = model.mean_weights;
  j["mean_bias"] = model.mean_bias;
  j["var_weights"] = model.var_weights;
  j["var_bias"] = model.var_bias;
  return j;
}

}  // namespace gridrisk::forecast
