#include "geocomm/engine.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace geocomm {

DeltaQLedger::DeltaQLedger(const Network& net, const WeightContext& ctx,
                           const DetectOptions& options)
    : net_(&net), ctx_(&ctx), options_(options) {
  const std::size_t n = net.node_count();
  const bool similarity = ctx.variant() == Variant::kSimilarity;
  normalizer_ = similarity ? 2.0 * ctx.omega() : ctx.omega();
  null_scale_ = similarity ? ctx.tau() / ctx.two_m() : 1.0 / ctx.two_m();

  rows_.resize(n);
  members_.resize(n);
  blocks_.resize(n);
  weight_sums_.resize(n);
  alive_.assign(n, true);
  live_ = n;

  std::vector<double> g(n);
  for (NodeIndex v = 0; v < n; ++v) {
    const auto k = static_cast<double>(net.degree(v));
    g[v] = similarity ? k * std::sqrt(k) : k;
    members_[v].push_back(v);
    blocks_[v].push(net.point(v), g[v], net.metric());
    weight_sums_[v] = g[v];
  }

  // Singleton state: only the diagonal null terms survive.
  double diagonal = 0.0;
  for (NodeIndex v = 0; v < n; ++v) diagonal += g[v] * g[v];
  q_ = -null_scale_ * diagonal / normalizer_;
  trace_.emplace_back(0, q_);

  for (NodeIndex v = 0; v < n; ++v) {
    const auto nb = net.neighbors(v);
    const std::size_t base = net.adjacency_offset(v);
    for (std::size_t k = 0; k < nb.size(); ++k) {
      const NodeIndex w = nb[k];
      if (w < v) continue;
      const double l = ctx.edge_locality(base + k);
      const double observed = similarity ? ctx.edge_similarity(base + k) * l : l;
      const double dq = 2.0 * (observed - null_scale_ * g[v] * g[w] * l) / normalizer_;
      set_entry(v, w, dq);
    }
  }
}

void DeltaQLedger::set_entry(CommunityId i, CommunityId j, double dq) {
  const std::uint64_t stamp = next_stamp_++;
  const auto [it, inserted] = rows_[i].insert_or_assign(j, Entry{dq, stamp});
  rows_[j].insert_or_assign(i, Entry{dq, stamp});
  if (inserted) ++entry_count_;
  heap_.push(HeapItem{dq, std::min(i, j), std::max(i, j), stamp});
}

bool DeltaQLedger::current(const HeapItem& item) const {
  if (!alive_[item.a] || !alive_[item.b]) return false;
  const auto it = rows_[item.a].find(item.b);
  return it != rows_[item.a].end() && it->second.stamp == item.stamp;
}

void DeltaQLedger::rebuild_heap() {
  std::vector<HeapItem> items;
  items.reserve(entry_count_);
  for (CommunityId a = 0; a < rows_.size(); ++a) {
    if (!alive_[a]) continue;
    for (const auto& [b, e] : rows_[a]) {
      if (a < b) items.push_back(HeapItem{e.dq, a, b, e.stamp});
    }
  }
  heap_ = decltype(heap_)(HeapOrder{}, std::move(items));
}

std::vector<double> DeltaQLedger::penalties(CommunityId from,
                                            std::span<const CommunityId> to) const {
  std::vector<double> out(to.size());
  if (ctx_->unit_locality()) {
    for (std::size_t i = 0; i < to.size(); ++i) {
      out[i] = -2.0 * null_scale_ * weight_sums_[from] * weight_sums_[to[i]] / normalizer_;
    }
    return out;
  }
  std::vector<const kernels::MemberBlock*> others;
  others.reserve(to.size());
  for (CommunityId c : to) others.push_back(&blocks_[c]);
  const auto sums = kernels::omp::cross_sums(blocks_[from], others, ctx_->sigma_km(),
                                             net_->metric());
  for (std::size_t i = 0; i < to.size(); ++i) {
    out[i] = -2.0 * null_scale_ * sums[i] / normalizer_;
  }
  return out;
}

double DeltaQLedger::cross_penalty(CommunityId j, CommunityId k) const {
  if (!alive_[j] || !alive_[k] || j == k) {
    throw std::logic_error("cross penalty needs two distinct live communities");
  }
  if (rows_[j].contains(k)) {
    throw std::logic_error("cross penalty requested for edge-adjacent communities");
  }
  const CommunityId target[] = {k};
  return penalties(j, target)[0];
}

std::optional<double> DeltaQLedger::delta_q(CommunityId i, CommunityId j) const {
  if (i >= rows_.size() || !alive_[i]) return std::nullopt;
  const auto it = rows_[i].find(j);
  if (it == rows_[i].end()) return std::nullopt;
  return it->second.dq;
}

std::vector<CommunityId> DeltaQLedger::neighbors(CommunityId c) const {
  std::vector<CommunityId> out;
  out.reserve(rows_[c].size());
  for (const auto& [l, e] : rows_[c]) out.push_back(l);
  return out;
}

std::optional<MergeRecord> DeltaQLedger::merge_step() {
  while (!heap_.empty() && !current(heap_.top())) heap_.pop();
  if (heap_.empty() || heap_.top().dq <= 0.0) return std::nullopt;
  const HeapItem best = heap_.top();
  heap_.pop();

  CommunityId s = best.a;
  CommunityId t = best.b;
  if (members_[t].size() > members_[s].size()) std::swap(s, t);

  auto& row_s = rows_[s];
  auto& row_t = rows_[t];

  // Neighbors of t only need penalty(s, l); neighbors of s only need
  // penalty(t, l). Shared neighbors just add the two stored gains.
  std::vector<std::pair<CommunityId, double>> updated;
  std::vector<CommunityId> need_s;
  std::vector<double> base_s;
  std::vector<CommunityId> need_t;
  std::vector<double> base_t;
  auto is = row_s.begin();
  auto it = row_t.begin();
  while (is != row_s.end() || it != row_t.end()) {
    if (it == row_t.end() || (is != row_s.end() && is->first < it->first)) {
      if (is->first != t) {
        need_t.push_back(is->first);
        base_t.push_back(is->second.dq);
      }
      ++is;
    } else if (is == row_s.end() || it->first < is->first) {
      if (it->first != s) {
        need_s.push_back(it->first);
        base_s.push_back(it->second.dq);
      }
      ++it;
    } else {
      updated.emplace_back(is->first, is->second.dq + it->second.dq);
      ++is;
      ++it;
    }
  }
  const auto pen_s = penalties(s, need_s);
  const auto pen_t = penalties(t, need_t);
  for (std::size_t i = 0; i < need_s.size(); ++i) {
    updated.emplace_back(need_s[i], base_s[i] + pen_s[i]);
  }
  for (std::size_t i = 0; i < need_t.size(); ++i) {
    updated.emplace_back(need_t[i], base_t[i] + pen_t[i]);
  }
  std::sort(updated.begin(), updated.end());

  // Retire t.
  for (const auto& [l, e] : row_t) {
    if (l != s) rows_[l].erase(t);
  }
  entry_count_ -= row_t.size();
  row_t.clear();
  row_s.erase(t);
  alive_[t] = false;
  --live_;

  for (const auto& [l, dq] : updated) set_entry(s, l, dq);

  members_[s].insert(members_[s].end(), members_[t].begin(), members_[t].end());
  members_[t].clear();
  members_[t].shrink_to_fit();
  blocks_[s].append(blocks_[t]);
  blocks_[t] = kernels::MemberBlock{};
  weight_sums_[s] += weight_sums_[t];

  ++merges_;
  q_ += best.dq;
  if (options_.recompute_interval > 0 && merges_ % options_.recompute_interval == 0) {
    const double fresh = modularity(*net_, *ctx_, partition());
    if (options_.verify_drift && std::abs(fresh - q_) > options_.drift_tolerance) {
      std::ostringstream msg;
      msg << "modularity drift " << (fresh - q_) << " after " << merges_ << " merges";
      throw std::logic_error(msg.str());
    }
    q_ = fresh;
  }
  trace_.emplace_back(merges_, q_);

  if (heap_.size() > 4 * entry_count_ + 1024) rebuild_heap();

  return MergeRecord{merges_, s, t, best.dq, q_};
}

Partition DeltaQLedger::partition() const {
  std::vector<std::uint32_t> labels(members_.size());
  for (CommunityId c = 0; c < members_.size(); ++c) {
    for (NodeIndex v : members_[c]) labels[v] = c;
  }
  return Partition::from_labels(labels);
}

void DeltaQLedger::validate() const {
  std::size_t count = 0;
  for (CommunityId i = 0; i < rows_.size(); ++i) {
    if (!alive_[i]) {
      if (!rows_[i].empty()) throw std::logic_error("dead community has ledger entries");
      continue;
    }
    for (const auto& [j, e] : rows_[i]) {
      if (!alive_[j]) throw std::logic_error("ledger entry points at a dead community");
      const auto back = rows_[j].find(i);
      if (back == rows_[j].end() || back->second.dq != e.dq) {
        std::ostringstream msg;
        msg << "ledger asymmetry between communities " << i << " and " << j;
        throw std::logic_error(msg.str());
      }
      if (i < j) ++count;
    }
  }
  if (count != entry_count_) throw std::logic_error("ledger entry count mismatch");

  // An entry must exist exactly for community pairs joined by an edge.
  std::vector<CommunityId> owner(net_->node_count());
  for (CommunityId c = 0; c < members_.size(); ++c) {
    for (NodeIndex v : members_[c]) owner[v] = c;
  }
  std::vector<std::map<CommunityId, bool>> adjacent(rows_.size());
  for (NodeIndex v = 0; v < net_->node_count(); ++v) {
    for (NodeIndex w : net_->neighbors(v)) {
      if (owner[v] != owner[w]) adjacent[owner[v]][owner[w]] = true;
    }
  }
  for (CommunityId c = 0; c < rows_.size(); ++c) {
    if (adjacent[c].size() != rows_[c].size()) {
      throw std::logic_error("ledger entries do not match community adjacency");
    }
    for (const auto& [l, unused] : adjacent[c]) {
      if (!rows_[c].contains(l)) throw std::logic_error("missing ledger entry");
    }
  }
}

Dendrogram detect(const Network& net, const WeightContext& ctx, const DetectOptions& options) {
  DeltaQLedger ledger(net, ctx, options);
  Dendrogram out;
  out.q_initial = ledger.q();
  while (auto record = ledger.merge_step()) out.merges.push_back(*record);
  out.partition = ledger.partition();
  out.q_final = ledger.q();
  return out;
}

Dendrogram detect(const Network& net, Variant variant, const DetectOptions& options) {
  if (net.edge_count() == 0) {
    Dendrogram out;
    out.partition = Partition::singletons(net.node_count());
    return out;
  }
  double sigma = 0.0;
  if (variant != Variant::kBaseline) {
    sigma = mean_pair_distance(net, options.sigma_sample, options.seed);
  }
  const auto ctx = WeightContext::build(net, variant, sigma);
  return detect(net, ctx, options);
}

}  // namespace geocomm
