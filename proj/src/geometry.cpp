#include "hodt/geometry.hpp"

#include <algorithm>
#include <cmath>

#include "hodt/common.hpp"

namespace hodt {

double side_value(const Eigen::VectorXd& normal, const Eigen::RowVectorXd& point) {
  int g = static_cast<int>(point.size());
  double v = normal[g];  // bias
  for (int i = 0; i < g; ++i) v += normal[i] * point[i];
  return v;
}

bool on_positive_side(const Eigen::VectorXd& normal, const Eigen::RowVectorXd& point,
                      double eps_rel) {
  int g = static_cast<int>(point.size());
  double v = normal[g];
  double scale = std::abs(normal[g]);
  for (int i = 0; i < g; ++i) {
    double t = normal[i] * point[i];
    v += t;
    scale += std::abs(t);
  }
  return v >= -eps_rel * scale;
}

std::optional<Hyperplane> fit_hyperplane(const EmbeddedDataset& embedded,
                                         std::span<const int> defining,
                                         const FitOptions& opts) {
  const int g = embedded.dim_embedded;
  const int n = embedded.n();
  if (static_cast<int>(defining.size()) != g)
    throw InvalidParams("fit_hyperplane: need exactly G defining points");

  // homogeneous system A w = 0 with rows (x, 1)
  Eigen::MatrixXd a(g, g + 1);
  for (int r = 0; r < g; ++r) {
    int idx = defining[r];
    if (idx < 0 || idx >= n) throw InvalidParams("fit_hyperplane: index out of range");
    a.row(r).head(g) = embedded.points.row(idx);
    a(r, g) = 1.0;
  }

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  double smax = sv.size() > 0 ? sv[0] : 0.0;
  double tol = std::max(smax, 1.0) * 1e-12 * std::max(g + 1, 8);
  int rank = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv[i] > tol) ++rank;
  if (rank != g) return std::nullopt;  // nullspace dimension != 1

  Eigen::VectorXd w = svd.matrixV().col(g);
  w.normalize();
  // orientation: first nonzero coordinate positive
  for (int i = 0; i <= g; ++i) {
    if (std::abs(w[i]) > 1e-14) {
      if (w[i] < 0) w = -w;
      break;
    }
  }

  Hyperplane h;
  h.defining.assign(defining.begin(), defining.end());
  std::sort(h.defining.begin(), h.defining.end());
  h.normal = std::move(w);
  h.side_pos = PointSet(n);
  h.side_neg = PointSet(n);

  // residual gate on the defining points
  for (int idx : h.defining) {
    Eigen::RowVectorXd row = embedded.points.row(idx);
    double v = std::abs(side_value(h.normal, row));
    double scale = std::abs(h.normal[g]);
    for (int i = 0; i < g; ++i) scale += std::abs(h.normal[i] * row[i]);
    if (v > opts.residual_rel * std::max(scale, 1.0)) return std::nullopt;
  }

  for (int i = 0; i < n; ++i) {
    if (on_positive_side(h.normal, embedded.points.row(i), opts.side_eps_rel))
      h.side_pos.set(i);
    else
      h.side_neg.set(i);
  }
  return h;
}

ancestry_t ancestry(const Hyperplane& hi, const Hyperplane& hj) {
  bool all_pos = true, all_neg = true;
  for (int p : hj.defining) {
    if (!hi.side_pos.test(p)) all_pos = false;
    if (!hi.side_neg.test(p)) all_neg = false;
  }
  if (all_pos) return kAncestryPos;
  if (all_neg) return kAncestryNeg;
  return kAncestryNone;
}

bool crossed(const Hyperplane& hi, const Hyperplane& hj) {
  return ancestry(hi, hj) == kAncestryNone && ancestry(hj, hi) == kAncestryNone;
}

RuleTable::RuleTable(std::int64_t dense_bound) {
  if (dense_bound >= 0 && dense_bound <= (std::int64_t{1} << 31)) {
    dense_ = true;
    dense_index_.assign(static_cast<std::size_t>(dense_bound), kAbsent);
  }
}

std::int32_t RuleTable::slot(std::int64_t rank) const {
  if (dense_) {
    if (rank < 0 || rank >= static_cast<std::int64_t>(dense_index_.size())) return kAbsent;
    return dense_index_[static_cast<std::size_t>(rank)];
  }
  auto it = sparse_index_.find(rank);
  return it == sparse_index_.end() ? kAbsent : it->second;
}

void RuleTable::add(Hyperplane h) {
  std::int64_t rank = h.rank;
  std::int32_t s = static_cast<std::int32_t>(rules_.size());
  rules_.push_back(std::move(h));
  if (dense_)
    dense_index_[static_cast<std::size_t>(rank)] = s;
  else
    sparse_index_[rank] = s;
}

void RuleTable::mark_degenerate(std::int64_t rank) {
  ++degenerate_count_;
  if (dense_)
    dense_index_[static_cast<std::size_t>(rank)] = kDegenerate;
  else
    sparse_index_[rank] = kDegenerate;
}

const Hyperplane* RuleTable::find(std::int64_t rank) const {
  std::int32_t s = slot(rank);
  return s >= 0 ? &rules_[static_cast<std::size_t>(s)] : nullptr;
}

bool RuleTable::is_degenerate(std::int64_t rank) const { return slot(rank) == kDegenerate; }

}  // namespace hodt
