#include "hodt/config.hpp"

#include <cassert>

#include "hodt/combinatorics.hpp"
#include "hodt/common.hpp"

namespace hodt {

bool is_feasible(ConfigView cfg) {
  for (int i = 0; i < cfg.k; ++i)
    for (int j = i + 1; j < cfg.k; ++j)
      if (cfg.at(i, j) == kAncestryNone && cfg.at(j, i) == kAncestryNone) return false;
  return true;
}

ExtensionCounters& ExtensionCounters::operator+=(const ExtensionCounters& o) {
  attempted += o.attempted;
  feasible += o.feasible;
  crossed_rejected += o.crossed_rejected;
  degenerate_rejected += o.degenerate_rejected;
  pair_checks += o.pair_checks;
  return *this;
}

namespace {

// Evaluate the new rule against every existing rule of cfg. Returns false on
// the first crossing (Alg. 1's break); fills col/row otherwise.
bool extension_relations(ConfigView cfg, const Hyperplane& hnew, const RuleTable& table,
                         std::span<ancestry_t> col, std::span<ancestry_t> row,
                         ExtensionCounters* counters) {
  for (int i = 0; i < cfg.k; ++i) {
    const Hyperplane* hi = table.find(cfg.rules[i]);
    if (hi == nullptr) throw InternalError("extension: existing rule missing from table");
    if (counters) ++counters->pair_checks;
    ancestry_t a_ij = ancestry(*hi, hnew);  // p1: new rule's points vs h_i
    ancestry_t a_ji = ancestry(hnew, *hi);  // p2: h_i's points vs new rule
    if (a_ij == kAncestryNone && a_ji == kAncestryNone) return false;
    col[i] = a_ij;
    row[i] = a_ji;
  }
  return true;
}

}  // namespace

std::optional<Config> update_armat(ConfigView cfg, std::int64_t new_rule,
                                   const RuleTable& table, ExtensionCounters* counters) {
  if (counters) ++counters->attempted;
  const Hyperplane* hnew = table.find(new_rule);
  if (hnew == nullptr) {
    if (counters) ++counters->degenerate_rejected;
    return std::nullopt;
  }
  std::vector<ancestry_t> col(cfg.k), row(cfg.k);
  if (!extension_relations(cfg, *hnew, table, col, row, counters)) {
    if (counters) ++counters->crossed_rejected;
    return std::nullopt;
  }
  if (counters) ++counters->feasible;

  Config out;
  out.k = cfg.k + 1;
  out.rules.assign(cfg.rules.begin(), cfg.rules.end());
  out.rules.push_back(new_rule);
  out.ar.assign(static_cast<std::size_t>(out.k) * out.k, 0);
  for (int i = 0; i < cfg.k; ++i) {
    for (int j = 0; j < cfg.k; ++j) out.ar[static_cast<std::size_t>(i) * out.k + j] = cfg.at(i, j);
    out.ar[static_cast<std::size_t>(i) * out.k + cfg.k] = col[i];
    out.ar[static_cast<std::size_t>(cfg.k) * out.k + i] = row[i];
  }
  return out;
}

Config cal_arm(std::span<const std::int64_t> rules, const RuleTable& table) {
  int k = static_cast<int>(rules.size());
  Config out;
  out.k = k;
  out.rules.assign(rules.begin(), rules.end());
  out.ar.assign(static_cast<std::size_t>(k) * k, 0);
  for (int i = 0; i < k; ++i) {
    const Hyperplane* hi = table.find(rules[i]);
    if (hi == nullptr) throw InvalidParams("cal_arm: rule missing from table");
    for (int j = 0; j < k; ++j) {
      if (i == j) continue;
      const Hyperplane* hj = table.find(rules[j]);
      if (hj == nullptr) throw InvalidParams("cal_arm: rule missing from table");
      out.ar[static_cast<std::size_t>(i) * k + j] = ancestry(*hi, *hj);
    }
  }
  return out;
}

void ConfigBatch::append(ConfigView cfg) {
  assert(cfg.k == k_);
  rules_.insert(rules_.end(), cfg.rules.begin(), cfg.rules.end());
  ar_.insert(ar_.end(), cfg.ar.begin(), cfg.ar.end());
}

void ConfigBatch::append_extension(ConfigView base, std::int64_t new_rule,
                                   std::span<const ancestry_t> col,
                                   std::span<const ancestry_t> row) {
  assert(base.k + 1 == k_);
  rules_.insert(rules_.end(), base.rules.begin(), base.rules.end());
  rules_.push_back(new_rule);
  std::size_t pos = ar_.size();
  ar_.resize(pos + static_cast<std::size_t>(k_) * k_, 0);
  for (int i = 0; i < base.k; ++i) {
    for (int j = 0; j < base.k; ++j) ar_[pos + static_cast<std::size_t>(i) * k_ + j] = base.at(i, j);
    ar_[pos + static_cast<std::size_t>(i) * k_ + base.k] = col[i];
    ar_[pos + static_cast<std::size_t>(base.k) * k_ + i] = row[i];
  }
}

ConfigView ConfigBatch::at(std::size_t idx) const {
  return {k_,
          std::span<const std::int64_t>(rules_.data() + idx * k_, static_cast<std::size_t>(k_)),
          std::span<const ancestry_t>(ar_.data() + idx * k_ * k_,
                                      static_cast<std::size_t>(k_) * k_)};
}

ConfigBatch updates_armat(const ConfigBatch& configs, std::int64_t new_rule,
                          const RuleTable& table, ExtensionCounters* counters) {
  ConfigBatch out(configs.k() + 1);
  const Hyperplane* hnew = table.find(new_rule);
  if (hnew == nullptr) {
    if (counters) {
      counters->attempted += static_cast<std::int64_t>(configs.size());
      counters->degenerate_rejected += static_cast<std::int64_t>(configs.size());
    }
    return out;
  }
  std::vector<ancestry_t> col(configs.k()), row(configs.k());
  configs.for_each([&](ConfigView cfg) {
    if (counters) ++counters->attempted;
    if (extension_relations(cfg, *hnew, table, col, row, counters)) {
      if (counters) ++counters->feasible;
      out.append_extension(cfg, new_rule, col, row);
    } else if (counters) {
      ++counters->crossed_rejected;
    }
  });
  return out;
}

void ConfigTier::push_block(ConfigBatch block) {
  if (block.empty()) return;
  total_ += block.size();
  blocks_.push_back(std::move(block));
}

void ConfigTier::clear() {
  total_ = 0;
  blocks_.clear();
}

FeasibleConfigStream::FeasibleConfigStream(const EmbeddedDataset& embedded, int k,
                                           StreamOptions opts)
    : embedded_(embedded), k_(k), opts_(opts) {
  if (k < 1) throw InvalidParams("FeasibleConfigStream: K must be >= 1");
  std::int64_t total_ranks =
      binomial(embedded.n(), embedded.dim_embedded, Overflow::kSaturate);
  if (total_ranks == kSaturated || total_ranks > opts.max_rule_ranks)
    throw InvalidParams("FeasibleConfigStream: C(N, G) too large to enumerate");
  table_ = RuleTable(total_ranks);
  stats_.feasible_per_k.assign(k + 1, 0);
}

void FeasibleConfigStream::run(const std::function<void(ConfigView, std::int64_t)>& on_config) {
  const int n = embedded_.n();
  const int g = embedded_.dim_embedded;
  std::vector<ConfigTier> tiers;
  tiers.reserve(k_ + 1);
  for (int k = 0; k <= k_; ++k) tiers.emplace_back(k);

  std::int64_t stream_index = 0;
  std::vector<ancestry_t> col(k_), row(k_);
  Config full;  // reused scratch for emitted K-configs

  for (int pt = 0; pt < n; ++pt) {
    std::int64_t c1 = binomial(pt, g);
    std::int64_t c2 = binomial(pt + 1, g);

    // genModels: fit the new rules of this step (combinations with max element
    // == pt, walked in colex order so the running rank is exact)
    if (c2 > c1) {
      std::vector<int> comb(g);
      for (int i = 0; i < g - 1; ++i) comb[i] = i;
      comb[g - 1] = pt;
      std::int64_t rank = c1;
      do {
        stats_.rules_total++;
        auto fitted = fit_hyperplane(embedded_, comb, opts_.fit);
        if (fitted) {
          fitted->rank = rank;
          table_.add(std::move(*fitted));
        } else {
          table_.mark_degenerate(rank);
          stats_.rules_degenerate++;
        }
        ++rank;
      } while (g > 1 && next_colex_combination(std::span<int>(comb.data(), g - 1), pt) &&
               (comb[g - 1] = pt, true));
      assert(rank == c2);
    }

    for (std::int64_t i = c1; i < c2; ++i) {
      const Hyperplane* hnew = table_.find(i);
      if (hnew == nullptr) {
        // degenerate rule: the extensions it would have attempted are rejected
        for (int k = std::min<std::int64_t>(k_, i + 1); k >= 1; --k) {
          std::int64_t m =
              (k == 1) ? 1 : static_cast<std::int64_t>(tiers[k - 1].total());
          stats_.extensions.attempted += m;
          stats_.extensions.degenerate_rejected += m;
        }
        continue;
      }
      for (int k = std::min<std::int64_t>(k_, i + 1); k >= 1; --k) {
        ConfigBatch block(k);
        auto extend = [&](ConfigView base) {
          ++stats_.extensions.attempted;
          if (!extension_relations(base, *hnew, table_, std::span(col.data(), base.k),
                                   std::span(row.data(), base.k), &stats_.extensions)) {
            ++stats_.extensions.crossed_rejected;
            return;
          }
          ++stats_.extensions.feasible;
          ++stats_.feasible_per_k[k];
          if (k == k_) {
            full.k = k;
            full.rules.assign(base.rules.begin(), base.rules.end());
            full.rules.push_back(i);
            full.ar.assign(static_cast<std::size_t>(k) * k, 0);
            for (int r = 0; r < base.k; ++r) {
              for (int c = 0; c < base.k; ++c)
                full.ar[static_cast<std::size_t>(r) * k + c] = base.at(r, c);
              full.ar[static_cast<std::size_t>(r) * k + base.k] = col[r];
              full.ar[static_cast<std::size_t>(base.k) * k + r] = row[r];
            }
            on_config(full.view(), stream_index++);
          } else {
            block.append_extension(base, i, std::span(col.data(), base.k),
                                   std::span(row.data(), base.k));
          }
        };
        if (k == 1) {
          ConfigView empty{0, {}, {}};
          extend(empty);
        } else {
          tiers[k - 1].for_each(extend);
        }
        if (k < k_) tiers[k].push_block(std::move(block));
      }
    }
    // tier K is emitted eagerly, never stored
    if (tiers[k_].total() != 0) store_thinned_ = false;
  }
}

std::vector<Config> nested_combs_fa(const EmbeddedDataset& embedded, int k, StreamOptions opts,
                                    StreamStats* stats) {
  FeasibleConfigStream stream(embedded, k, opts);
  std::vector<Config> out;
  stream.run([&](ConfigView cfg, std::int64_t) {
    out.push_back(Config{cfg.k, {cfg.rules.begin(), cfg.rules.end()},
                         {cfg.ar.begin(), cfg.ar.end()}});
  });
  if (stats) *stats = stream.stats();
  return out;
}

}  // namespace hodt
