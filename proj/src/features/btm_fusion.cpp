#include "gridrisk/features/btm_fusion.hpp"

#include "gridrisk/error.hpp"

namespace gridrisk::features {

Eigen::VectorXd AffineMap::operator()(const Eigen::VectorXd& x) const {
  if (x.size() != weight.cols() || bias.size() != weight.rows()) {
    throw Error(ErrorCode::dimension_mismatch, "affine map input or bias has the wrong size");
  }
  return weight * x + bias;
}

AffineMap AffineMap::identity(Eigen::Index dim) {
  return {Eigen::MatrixXd::Identity(dim, dim), Eigen::VectorXd::Zero(dim)};
}

AffineMap AffineMap::constant(Eigen::Index in_dim, const Eigen::VectorXd& value) {
  return {Eigen::MatrixXd::Zero(value.size(), in_dim), value};
}

std::vector<double> btm_fuse(std::span<const double> x, std::span<const double> registry,
                             std::span<const double> context, double daylight, const FusionMaps& maps) {
  if (!(daylight >= 0.0 && daylight <= 1.0)) throw Error(ErrorCode::invalid_argument, "daylight gate outside [0, 1]");
  const auto dim = static_cast<Eigen::Index>(x.size());
  if (maps.phi.out_dim() != dim) throw Error(ErrorCode::dimension_mismatch, "phi output width differs from x");
  if (maps.g.out_dim() != 2 * dim) throw Error(ErrorCode::dimension_mismatch, "g must emit 2 * width values");
  if (maps.phi.in_dim() != static_cast<Eigen::Index>(registry.size())) {
    throw Error(ErrorCode::dimension_mismatch, "registry vector does not match phi");
  }
  if (maps.g.in_dim() != static_cast<Eigen::Index>(context.size())) {
    throw Error(ErrorCode::dimension_mismatch, "context vector does not match g");
  }

  std::vector<double> z(x.begin(), x.end());
  if (daylight == 0.0) return z;

  const Eigen::VectorXd b_emb = maps.phi(Eigen::Map<const Eigen::VectorXd>(registry.data(), registry.size()));
  const Eigen::VectorXd film = maps.g(Eigen::Map<const Eigen::VectorXd>(context.data(), context.size()));
  const auto gamma = film.head(dim);
  const auto beta = film.tail(dim);
  const Eigen::VectorXd modulated = daylight * (gamma.cwiseProduct(b_emb) + beta);
  for (Eigen::Index i = 0; i < dim; ++i) z[static_cast<std::size_t>(i)] += modulated(i);
  return z;
}

}  // namespace gridrisk::features
