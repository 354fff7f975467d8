#include "gridrisk/forecast/linear_quantile.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>

#include <Eigen/Dense>

#include "gridrisk/error.hpp"
#include "gridrisk/metrics/risk_metrics.hpp"

namespace gridrisk::forecast {

namespace {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

struct Standardizer {
  std::vector<double> mean, scale;
  double y_mean = 0.0, y_scale = 1.0;
};

Standardizer fit_standardizer(const FeatureMatrix& m) {
  Standardizer s;
  const std::size_t n = m.rows(), c = m.cols();
  s.mean.assign(c, 0.0);
  s.scale.assign(c, 0.0);
  for (std::size_t j = 0; j < c; ++j) {
    double sum = 0.0;
    for (std::size_t r = 0; r < n; ++r) sum += m.at(r, j);
    const double mu = sum / static_cast<double>(n);
    double ss = 0.0;
    for (std::size_t r = 0; r < n; ++r) ss += (m.at(r, j) - mu) * (m.at(r, j) - mu);
    const double sd = std::sqrt(ss / static_cast<double>(n));
    if (!(sd > 1e-12 * std::max(1.0, std::abs(mu)))) {
      throw Error(ErrorCode::degenerate_design, "feature column is constant on the training rows", m.columns[j]);
    }
    s.mean[j] = mu;
    s.scale[j] = sd;
  }
  const double ym = std::accumulate(m.target.begin(), m.target.end(), 0.0) / static_cast<double>(n);
  double ss = 0.0;
  for (double y : m.target) ss += (y - ym) * (y - ym);
  const double ysd = std::sqrt(ss / static_cast<double>(n));
  s.y_mean = ym;
  s.y_scale = ysd > 0.0 ? ysd : 1.0;
  return s;
}

RowMatrix standardized(const FeatureMatrix& m, const Standardizer& s) {
  RowMatrix x(static_cast<Eigen::Index>(m.rows()), static_cast<Eigen::Index>(m.cols()));
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      x(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(j)) = (m.at(r, j) - s.mean[j]) / s.scale[j];
    }
  }
  return x;
}

std::vector<double> scaled_target(const FeatureMatrix& m, const Standardizer& s) {
  std::vector<double> y(m.target.size());
  for (std::size_t r = 0; r < y.size(); ++r) y[r] = (m.target[r] - s.y_mean) / s.y_scale;
  return y;
}

// The objective in standardized target units equals the MW objective divided
// by the target scale.
ObjectiveConfig scaled_config(const ObjectiveConfig& cfg, double y_scale) {
  ObjectiveConfig out = cfg;
  out.b_max_mw = cfg.b_max_mw / y_scale;
  out.tau_mw = cfg.tau_mw / y_scale;
  out.lambda_opr = cfg.lambda_opr / y_scale;
  return out;
}

struct Params {
  RowMatrix w;  // levels x cols
  Eigen::VectorXd b;
};

struct Design {
  const RowMatrix* x;
  const std::vector<double>* y;
  const FeatureMatrix* m;
};

// Objective over the issues listed in `issues` (sorted), gradient optional.
objectives::ObjectiveValue evaluate(const Design& d, const std::vector<std::size_t>& issues, const Params& p,
                                    const ObjectiveConfig& cfg, Params* grad) {
  const std::size_t n_lead = d.m->leads.size();
  const std::size_t n_level = cfg.quantile_levels.size();
  std::vector<data::Instant> times;
  times.reserve(issues.size());
  std::vector<double> preds(issues.size() * n_lead * n_level);
  std::vector<double> actual(issues.size() * n_lead);
  for (std::size_t i = 0; i < issues.size(); ++i) {
    times.push_back(d.m->issue_times[issues[i]]);
    for (std::size_t l = 0; l < n_lead; ++l) {
      const auto r = static_cast<Eigen::Index>(d.m->row_index(issues[i], l));
      actual[i * n_lead + l] = (*d.y)[static_cast<std::size_t>(r)];
      const Eigen::VectorXd z = p.w * d.x->row(r).transpose() + p.b;
      for (std::size_t k = 0; k < n_level; ++k) preds[(i * n_lead + l) * n_level + k] = z(static_cast<Eigen::Index>(k));
    }
  }
  QuantileForecastSet batch(std::move(times), d.m->leads, cfg.quantile_levels, std::move(preds), std::move(actual),
                            cfg.point_level);
  auto value = objectives::combined_objective(batch, cfg);
  if (grad) {
    grad->w.setZero(p.w.rows(), p.w.cols());
    grad->b.setZero(p.b.size());
    for (std::size_t i = 0; i < issues.size(); ++i) {
      for (std::size_t l = 0; l < n_lead; ++l) {
        const auto r = static_cast<Eigen::Index>(d.m->row_index(issues[i], l));
        for (std::size_t k = 0; k < n_level; ++k) {
          const double g = value.gradient[batch.flat_index(i, l, k)];
          if (g == 0.0) continue;
          grad->w.row(static_cast<Eigen::Index>(k)) += g * d.x->row(r);
          grad->b(static_cast<Eigen::Index>(k)) += g;
        }
      }
    }
  }
  return value;
}

void check_design(const FeatureMatrix& m, const RowMatrix& x) {
  if (m.rows() <= m.cols()) {
    throw Error(ErrorCode::degenerate_design, "fewer training rows than feature columns + 1");
  }
  if (m.cols() == 0) return;
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(x);
  qr.setThreshold(1e-10);
  if (qr.rank() < static_cast<Eigen::Index>(m.cols())) {
    throw Error(ErrorCode::degenerate_design, "feature columns are collinear on the training rows");
  }
}

void require_matrix(const FeatureMatrix& m, const ObjectiveConfig& cfg) {
  if (m.rows() == 0) throw Error(ErrorCode::insufficient_data, "no training rows");
  if (m.values.size() != m.rows() * m.cols()) throw Error(ErrorCode::shape_mismatch, "feature matrix is ragged");
  if (!std::count(m.leads.begin(), m.leads.end(), cfg.h_star) &&
      (cfg.lambda_bias > 0.0 || cfg.lambda_opr > 0.0)) {
    throw Error(ErrorCode::missing_lead, "h_star is not among the feature leads");
  }
}

}  // namespace

std::vector<double> LinearQuantileModel::parameters() const {
  std::vector<double> out;
  for (const auto& w : weights) out.insert(out.end(), w.begin(), w.end());
  out.insert(out.end(), intercepts.begin(), intercepts.end());
  return out;
}

std::vector<double> LinearQuantileModel::raw_heads(std::span<const double> row) const {
  if (row.size() != columns.size()) throw Error(ErrorCode::column_mismatch, "row width differs from model columns");
  std::vector<double> out(levels.size());
  for (std::size_t k = 0; k < levels.size(); ++k) {
    double z = intercepts[k];
    for (std::size_t j = 0; j < row.size(); ++j) z += weights[k][j] * row[j];
    out[k] = z;
  }
  return out;
}

LinearQuantileModel fit_quantile_model(const FeatureMatrix& train, const ObjectiveConfig& cfg, const FitOptions& opt,
                                       const FeatureMatrix* validation) {
  cfg.validate();
  if (!(opt.step_size > 0.0)) throw Error(ErrorCode::non_positive_step, "step size must be positive");
  if (opt.epochs < 1) throw Error(ErrorCode::invalid_config, "epochs must be >= 1");
  require_matrix(train, cfg);
  if (validation && validation->rows() == 0) validation = nullptr;
  if (validation && validation->columns != train.columns) {
    throw Error(ErrorCode::column_mismatch, "validation columns differ from training columns");
  }

  const Standardizer st = fit_standardizer(train);
  const RowMatrix x = standardized(train, st);
  check_design(train, x);
  const std::vector<double> y = scaled_target(train, st);
  const ObjectiveConfig scfg = scaled_config(cfg, st.y_scale);

  RowMatrix xv;
  std::vector<double> yv;
  if (validation) {
    xv = standardized(*validation, st);
    yv = scaled_target(*validation, st);
  }
  const Design dtrain{&x, &y, &train};
  const Design dval{&xv, &yv, validation};

  const std::size_t n_level = cfg.quantile_levels.size();
  Params p{RowMatrix::Zero(static_cast<Eigen::Index>(n_level), static_cast<Eigen::Index>(train.cols())),
           Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n_level))};
  if (opt.init == InterceptInit::quantiles) {
    for (std::size_t k = 0; k < n_level; ++k) {
      p.b(static_cast<Eigen::Index>(k)) = metrics::percentile(y, 100.0 * cfg.quantile_levels[k]);
    }
  }

  std::vector<std::size_t> all_train(train.issue_times.size());
  std::iota(all_train.begin(), all_train.end(), 0);
  std::vector<std::size_t> all_val;
  if (validation) {
    all_val.resize(validation->issue_times.size());
    std::iota(all_val.begin(), all_val.end(), 0);
  }

  LinearQuantileModel model;
  model.levels = cfg.quantile_levels;
  model.point_level = cfg.point_level;
  model.columns = train.columns;
  model.seed = opt.seed;

  auto monitor = [&](const Params& q, double train_loss) {
    if (!validation) return train_loss;
    const double v = evaluate(dval, all_val, q, scfg, nullptr).loss;
    model.validation_trace.push_back(v * st.y_scale);
    return v;
  };

  const double initial = evaluate(dtrain, all_train, p, scfg, nullptr).loss;
  model.training_trace.push_back(initial * st.y_scale);
  Params best = p;
  double best_loss = monitor(p, initial);
  int best_epoch = 0;
  int stale = 0;

  std::mt19937_64 rng(opt.seed);
  std::vector<std::size_t> order = all_train;
  const std::size_t batch = opt.batch_issues == 0 ? order.size() : std::min(opt.batch_issues, order.size());
  Params grad{RowMatrix(), Eigen::VectorXd()};

  for (int epoch = 1; epoch <= opt.epochs; ++epoch) {
    const double step =
        opt.step_size * 0.5 * (1.0 + std::cos(std::numbers::pi * static_cast<double>(epoch - 1) / opt.epochs));
    if (batch < order.size()) std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t first = 0; first < order.size(); first += batch) {
      const std::size_t last = std::min(order.size(), first + batch);
      std::vector<std::size_t> issues(order.begin() + static_cast<std::ptrdiff_t>(first),
                                      order.begin() + static_cast<std::ptrdiff_t>(last));
      std::sort(issues.begin(), issues.end());
      evaluate(dtrain, issues, p, scfg, &grad);
      p.w -= step * grad.w;
      p.b -= step * grad.b;
    }
    const double loss = evaluate(dtrain, all_train, p, scfg, nullptr).loss;
    model.training_trace.push_back(loss * st.y_scale);
    if (!std::isfinite(loss) || loss > 10.0 * std::max(initial, opt.step_size)) {
      throw Error(ErrorCode::diverged_loss, "training loss rose above 10x its initial value",
                  "epoch " + std::to_string(epoch));
    }
    const double m = monitor(p, loss);
    if (m < best_loss) {
      best_loss = m;
      best = p;
      best_epoch = epoch;
      stale = 0;
    } else if (opt.patience > 0 && ++stale >= opt.patience) {
      break;
    }
  }
  model.best_epoch = best_epoch;

  model.weights.assign(n_level, std::vector<double>(train.cols(), 0.0));
  model.intercepts.assign(n_level, 0.0);
  for (std::size_t k = 0; k < n_level; ++k) {
    double shift = 0.0;
    for (std::size_t j = 0; j < train.cols(); ++j) {
      const double w = best.w(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(j));
      model.weights[k][j] = st.y_scale * w / st.scale[j];
      shift += w * st.mean[j] / st.scale[j];
    }
    model.intercepts[k] = st.y_mean + st.y_scale * (best.b(static_cast<Eigen::Index>(k)) - shift);
  }
  return model;
}

void sort_levels(std::vector<double>& predictions, std::size_t level_count) {
  if (level_count == 0) return;
  for (std::size_t i = 0; i + level_count <= predictions.size(); i += level_count) {
    std::sort(predictions.begin() + static_cast<std::ptrdiff_t>(i),
              predictions.begin() + static_cast<std::ptrdiff_t>(i + level_count));
  }
}

QuantileForecastSet predict_quantiles(const LinearQuantileModel& model, const FeatureMatrix& features) {
  if (features.columns != model.columns) {
    throw Error(ErrorCode::column_mismatch, "feature columns differ from the model's columns");
  }
  std::vector<double> preds;
  preds.reserve(features.rows() * model.levels.size());
  for (std::size_t r = 0; r < features.rows(); ++r) {
    const auto heads = model.raw_heads(features.row(r));
    preds.insert(preds.end(), heads.begin(), heads.end());
  }
  sort_levels(preds, model.levels.size());
  return QuantileForecastSet(features.issue_times, features.leads, model.levels, std::move(preds), features.target,
                             model.point_level);
}

nlohmann::ordered_json to_json(const LinearQuantileModel& model) {
  nlohmann::ordered_json j;
  j["quantiles"] = model.levels;
  j["columns"] = model.columns;
  j["weights"] = model.weights;
  j["intercepts"] = model.intercepts;
  j["config_hash"] = model.config_hash;
  j["seed"] = model.seed;
  j["point_level"] = model.point_level;
  return j;
}

LinearQuantileModel linear_model_from_json(const nlohmann::ordered_json& j) {
  try {
    LinearQuantileModel m;
    m.levels = j.at("quantiles").get<std::vector<double>>();
    m.columns = j.at("columns").get<std::vector<std::string>>();
    m.weights = j.at("weights").get<std::vector<std::vector<double>>>();
    m.intercepts = j.at("intercepts").get<std::vector<double>>();
    m.config_hash = j.value("config_hash", std::string{});
    m.seed = j.value("seed", std::uint64_t{0});
    m.point_level = j.value("point_level", 0.5);
    if (m.weights.size() != m.levels.size() || m.intercepts.size() != m.levels.size()) {
      throw Error(ErrorCode::shape_mismatch, "checkpoint heads do not match its quantile levels");
    }
    for (const auto& w : m.weights) {
      if (w.size() != m.columns.size()) throw Error(ErrorCode::shape_mismatch, "checkpoint weight row has wrong width");
    }
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::parse_error, std::string("malformed model checkpoint: ") + e.what());
  }
}

}  // namespace gridrisk::forecast
