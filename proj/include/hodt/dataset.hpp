#ifndef HODT_DATASET_HPP
#define HODT_DATASET_HPP

#include <Eigen/Dense>
#include <span>
#include <vector>

#include "hodt/bitset.hpp"

namespace hodt {

/// N points in R^D with integer class labels in 0..C-1.
struct Dataset {
  Eigen::MatrixXd points;  // N x D
  std::vector<int> labels;
  int num_classes = 0;

  int n() const { return static_cast<int>(points.rows()); }
  int dim() const { return static_cast<int>(points.cols()); }

  /// Validates the invariants; num_classes < 0 means "infer as max label + 1".
  static Dataset create(Eigen::MatrixXd pts, std::vector<int> labels, int num_classes = -1);

  Dataset subset(std::span<const int> indices) const;
};

/// Per-class membership bitsets (index c holds the points labeled c).
std::vector<PointSet> class_masks(const Dataset& data);

/// Points mapped to all monomials of total degree 1..M.
struct EmbeddedDataset {
  Eigen::MatrixXd points;  // N x G
  int degree = 1;
  int dim_embedded = 0;  // G = C(M+D, D) - 1

  int n() const { return static_cast<int>(points.rows()); }
};

/// Embedding dimension G = C(M+D, D) - 1. Throws DimensionTooLarge past max_dim.
int embed_dim(int dim, int degree, int max_dim = 64);

/// Exponent vectors of all monomials of total degree 1..M over D variables,
/// in graded-lexicographic order (degree ascending, then lex-descending
/// exponents; for D=2, M=2 this is x, y, x^2, xy, y^2).
std::vector<std::vector<int>> monomial_exponents(int dim, int degree);

EmbeddedDataset veronese_embed(const Eigen::MatrixXd& pts, int degree, int max_dim = 64);
inline EmbeddedDataset veronese_embed(const Dataset& data, int degree, int max_dim = 64) {
  return veronese_embed(data.points, degree, max_dim);
}

/// Embed a single raw point (used by prediction).
Eigen::VectorXd veronese_embed_point(std::span<const double> raw, int degree, int max_dim = 64);

}  // namespace hodt

#endif
