#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

namespace gridrisk::features {

/// y = W x + b.
struct AffineMap {
  Eigen::MatrixXd weight;
  Eigen::VectorXd bias;

  Eigen::Index in_dim() const { return weight.cols(); }
  Eigen::Index out_dim() const { return weight.rows(); }
  Eigen::VectorXd operator()(const Eigen::VectorXd& x) const;

  static AffineMap identity(Eigen::Index dim);
  static AffineMap constant(Eigen::Index in_dim, const Eigen::VectorXd& value);
};

/// phi embeds the registry vector to the model width D; g maps the context
/// vector to 2D values, gamma then beta.
struct FusionMaps {
  AffineMap phi;
  AffineMap g;
};

/// z = x + d * (gamma (.) phi(b) + beta) with (gamma, beta) = g(c).
/// d = 0 returns x unchanged. Throws DimensionMismatch.
std::vector<double> btm_fuse(std::span<const double> x, std::span<const double> registry,
                             std::span<const double> context, double daylight, const FusionMaps& maps);

}  // namespace gridrisk::features
