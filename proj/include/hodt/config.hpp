#ifndef HODT_CONFIG_HPP
#define HODT_CONFIG_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "hodt/geometry.hpp"

namespace hodt {

/// Non-owning view of one configuration: k rule ranks over a k x k ancestry
/// matrix (row-major, zero diagonal). The stacked (k+1) x k layout of the
/// storage puts the rule row first, then the matrix rows.
struct ConfigView {
  int k = 0;
  std::span<const std::int64_t> rules;
  std::span<const ancestry_t> ar;

  ancestry_t at(int i, int j) const { return ar[static_cast<std::size_t>(i) * k + j]; }
};

/// Owning configuration.
struct Config {
  int k = 0;
  std::vector<std::int64_t> rules;
  std::vector<ancestry_t> ar;

  ConfigView view() const { return {k, rules, ar}; }
  bool operator==(const Config&) const = default;
};

/// A configuration is feasible iff no off-diagonal symmetric zero pair exists.
bool is_feasible(ConfigView cfg);

struct ExtensionCounters {
  std::int64_t attempted = 0;
  std::int64_t feasible = 0;
  std::int64_t crossed_rejected = 0;
  std::int64_t degenerate_rejected = 0;
  std::int64_t pair_checks = 0;  // (new rule, existing rule) predicate evaluations

  ExtensionCounters& operator+=(const ExtensionCounters& o);
};

/// Extend a feasible configuration with one rule. Returns nullopt exactly when
/// the new rule crosses some existing rule, or is degenerate/absent from the
/// table. Touches only the new rule against the k existing rules.
std::optional<Config> update_armat(ConfigView cfg, std::int64_t new_rule,
                                   const RuleTable& table,
                                   ExtensionCounters* counters = nullptr);

/// Full ancestry matrix for a rule list, regardless of feasibility (the
/// post-hoc oracle). Every rank must be present in the table.
Config cal_arm(std::span<const std::int64_t> rules, const RuleTable& table);

/// Configurations of equal k stored contiguously as (k+1) x k integer blocks.
class ConfigBatch {
 public:
  explicit ConfigBatch(int k) : k_(k) {}

  int k() const { return k_; }
  std::size_t size() const { return k_ ? rules_.size() / k_ : 0; }
  bool empty() const { return rules_.empty(); }

  void append(ConfigView cfg);
  /// Append base extended by new_rule with the given last column/row values
  /// (col[i] = AR(base_i, new), row[i] = AR(new, base_i)).
  void append_extension(ConfigView base, std::int64_t new_rule,
                        std::span<const ancestry_t> col, std::span<const ancestry_t> row);

  ConfigView at(std::size_t idx) const;

  template <class Fn>
  void for_each(Fn&& fn) const {
    for (std::size_t i = 0; i < size(); ++i) fn(at(i));
  }

 private:
  int k_;
  std::vector<std::int64_t> rules_;
  std::vector<ancestry_t> ar_;
};

/// Batched update_armat (Alg. 1): apply the extension to every configuration,
/// dropping infeasible ones; output order preserves input order.
ConfigBatch updates_armat(const ConfigBatch& configs, std::int64_t new_rule,
                          const RuleTable& table, ExtensionCounters* counters = nullptr);

/// All feasible configurations of one size, kept as blocks in arrival order
/// and iterated newest-block-first (the generator's prepend discipline).
class ConfigTier {
 public:
  explicit ConfigTier(int k) : k_(k) {}

  int k() const { return k_; }
  std::size_t total() const { return total_; }

  void push_block(ConfigBatch block);
  void clear();

  template <class Fn>
  void for_each(Fn&& fn) const {
    for (std::size_t b = blocks_.size(); b-- > 0;) blocks_[b].for_each(fn);
  }

 private:
  int k_;
  std::size_t total_ = 0;
  std::vector<ConfigBatch> blocks_;
};

struct StreamOptions {
  FitOptions fit;
  /// Refuse to enumerate when C(N, G) exceeds this.
  std::int64_t max_rule_ranks = 50'000'000;
};

struct StreamStats {
  std::int64_t rules_total = 0;
  std::int64_t rules_degenerate = 0;
  ExtensionCounters extensions;
  std::vector<std::int64_t> feasible_per_k;  // index k, sizes 1..K
};

/// The fused generator: emits exactly the feasible K-configurations of the
/// embedded dataset, with their ancestry matrices, in stream order (points
/// ascending, new ranks ascending, tier extensions newest-block-first).
/// Equivalent to post-hoc filtering of cal_arm over nested_combs.
class FeasibleConfigStream {
 public:
  FeasibleConfigStream(const EmbeddedDataset& embedded, int k, StreamOptions opts = {});

  /// Drive the full stream; on_config(cfg, stream_index) per K-configuration.
  void run(const std::function<void(ConfigView, std::int64_t)>& on_config);

  const RuleTable& rules() const { return table_; }
  RuleTable&& take_rules() { return std::move(table_); }
  const StreamStats& stats() const { return stats_; }

  /// True when no tier-K configurations are retained between point steps
  /// (checked after every step; the evaluate-and-drop thinning contract).
  bool store_was_thinned() const { return store_thinned_; }

 private:
  const EmbeddedDataset& embedded_;
  int k_;
  StreamOptions opts_;
  RuleTable table_;
  StreamStats stats_;
  bool store_thinned_ = true;
};

/// Collecting wrapper over FeasibleConfigStream (test-sized inputs).
std::vector<Config> nested_combs_fa(const EmbeddedDataset& embedded, int k,
                                    StreamOptions opts = {}, StreamStats* stats = nullptr);

}  // namespace hodt

#endif
