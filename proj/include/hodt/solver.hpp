#ifndef HODT_SOLVER_HPP
#define HODT_SOLVER_HPP

#include <memory>
#include <optional>

#include "hodt/config.hpp"
#include "hodt/tree.hpp"

namespace hodt {

enum class Backend { kRec, kVec };

struct SolverOptions {
  Backend backend = Backend::kRec;
  int threads = 1;
  int batch_size = 4096;  // configurations per parallel reduction window
  FitOptions fit;
  std::int64_t max_rule_ranks = 50'000'000;
};

struct SearchStats {
  std::int64_t rules_total = 0;
  std::int64_t rules_degenerate = 0;
  ExtensionCounters extensions;
  std::vector<std::int64_t> feasible_per_k;
  std::int64_t configs_evaluated = 0;
  std::int64_t configs_no_tree = 0;  // passed the pairwise filter, admit no proper tree
  std::int64_t trees_evaluated = 0;
  bool store_thinned = true;

  bool operator==(const SearchStats&) const = default;
};

struct HodtResult {
  bool has_solution = false;
  int loss = 0;
  Tree tree;
  Config best_config;
  std::int64_t best_stream_index = -1;
  SearchStats stats;
  std::shared_ptr<RuleTable> rules;  // for prediction / serialization
  int degree = 1;
  int dim_embedded = 0;
};

/// Exact size-K optimal hypersurface tree: fused per-point pipeline of rule
/// generation, crossed-free ancestry updates, per-configuration sodt, and a
/// streaming minimum keyed by (loss, configuration stream index). Identical
/// output for any thread count.
HodtResult hodt(const Dataset& data, int k, int degree, const SolverOptions& opts = {});

/// Unfused reference composition (tiny instances): enumerate all
/// K-combinations, post-hoc cal_arm + feasibility filter, solve each, min.
struct NaiveResult {
  bool has_solution = false;
  int loss = 0;
};
NaiveResult odt_size_naive(const Dataset& data, int k, int degree,
                           const FitOptions& fit = {});

}  // namespace hodt

#endif
