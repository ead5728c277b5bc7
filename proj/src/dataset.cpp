#include "hodt/dataset.hpp"

#include <algorithm>

#include "hodt/combinatorics.hpp"
#include "hodt/common.hpp"

namespace hodt {

Dataset Dataset::create(Eigen::MatrixXd pts, std::vector<int> labels, int num_classes) {
  if (pts.cols() < 1) throw InvalidParams("Dataset: dimension must be >= 1");
  if (static_cast<std::size_t>(pts.rows()) != labels.size())
    throw InvalidParams("Dataset: labels.size() must equal points.rows()");
  int max_label = -1;
  for (int l : labels) {
    if (l < 0) throw InvalidParams("Dataset: negative label");
    max_label = std::max(max_label, l);
  }
  if (num_classes < 0) num_classes = max_label + 1;
  if (max_label >= num_classes) throw InvalidParams("Dataset: label >= num_classes");
  if (num_classes < 1) num_classes = 1;
  return Dataset{std::move(pts), std::move(labels), num_classes};
}

Dataset Dataset::subset(std::span<const int> indices) const {
  Eigen::MatrixXd pts(indices.size(), points.cols());
  std::vector<int> lab(indices.size());
  for (std::size_t r = 0; r < indices.size(); ++r) {
    pts.row(r) = points.row(indices[r]);
    lab[r] = labels[indices[r]];
  }
  return Dataset{std::move(pts), std::move(lab), num_classes};
}

std::vector<PointSet> class_masks(const Dataset& data) {
  std::vector<PointSet> masks(data.num_classes, PointSet(data.n()));
  for (int i = 0; i < data.n(); ++i) masks[data.labels[i]].set(i);
  return masks;
}

int embed_dim(int dim, int degree, int max_dim) {
  if (dim < 1 || degree < 1) throw InvalidParams("embed_dim: need D >= 1 and M >= 1");
  std::int64_t g = binomial(degree + dim, dim, Overflow::kSaturate) - 1;
  if (g > max_dim)
    throw DimensionTooLarge("embedding dimension G=" + std::to_string(g) +
                            " exceeds maximum " + std::to_string(max_dim));
  return static_cast<int>(g);
}

namespace {

void gen_exponents(int dim, int remaining, std::vector<int>& cur,
                   std::vector<std::vector<int>>& out) {
  if (static_cast<int>(cur.size()) == dim - 1) {
    cur.push_back(remaining);
    out.push_back(cur);
    cur.pop_back();
    return;
  }
  for (int e = remaining; e >= 0; --e) {  // lex-descending within a degree
    cur.push_back(e);
    gen_exponents(dim, remaining - e, cur, out);
    cur.pop_back();
  }
}

}  // namespace

std::vector<std::vector<int>> monomial_exponents(int dim, int degree) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  for (int total = 1; total <= degree; ++total) gen_exponents(dim, total, cur, out);
  return out;
}

EmbeddedDataset veronese_embed(const Eigen::MatrixXd& pts, int degree, int max_dim) {
  int dim = static_cast<int>(pts.cols());
  int g = embed_dim(dim, degree, max_dim);
  if (degree == 1) return EmbeddedDataset{pts, 1, g};

  auto exps = monomial_exponents(dim, degree);
  Eigen::MatrixXd emb(pts.rows(), g);
  for (Eigen::Index r = 0; r < pts.rows(); ++r) {
    for (int m = 0; m < g; ++m) {
      double v = 1.0;
      for (int d = 0; d < dim; ++d)
        for (int e = 0; e < exps[m][d]; ++e) v *= pts(r, d);
      emb(r, m) = v;
    }
  }
  return EmbeddedDataset{std::move(emb), degree, g};
}

Eigen::VectorXd veronese_embed_point(std::span<const double> raw, int degree, int max_dim) {
  int dim = static_cast<int>(raw.size());
  int g = embed_dim(dim, degree, max_dim);
  Eigen::VectorXd out(g);
  if (degree == 1) {
    for (int d = 0; d < dim; ++d) out[d] = raw[d];
    return out;
  }
  auto exps = monomial_exponents(dim, degree);
  for (int m = 0; m < g; ++m) {
    double v = 1.0;
    for (int d = 0; d < dim; ++d)
      for (int e = 0; e < exps[m][d]; ++e) v *= raw[d];
    out[m] = v;
  }
  return out;
}

}  // namespace hodt
