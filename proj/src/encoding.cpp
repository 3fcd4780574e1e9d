#include "nodetok/encoding.hpp"

#include <algorithm>
#include <random>

#include "nodetok/parallel.hpp"
#include "nodetok/simd/kernels.hpp"

namespace nodetok {

AnchorEncoding::AnchorEncoding(std::size_t node_count, std::vector<NodeId> anchor_ids, std::vector<Hops> values,
                               std::uint64_t graph_hash)
    : rows_(node_count), anchors_(std::move(anchor_ids)), values_(std::move(values)), graph_hash_(graph_hash) {
  if (values_.size() != rows_ * anchors_.size()) {
    throw Error("encoding payload has " + std::to_string(values_.size()) + " entries, expected " +
                std::to_string(rows_ * anchors_.size()));
  }
  for (NodeId a : anchors_) {
    if (a >= rows_) throw Error("encoding anchor " + std::to_string(a) + " out of range");
  }
}

void AnchorEncoding::check_node(NodeId v) const {
  if (v >= rows_) {
    throw Error("node " + std::to_string(v) + " out of range [0, " + std::to_string(rows_) + ")");
  }
}

Hops AnchorEncoding::estimate_raw(NodeId u, NodeId v) const {
  check_node(u);
  check_node(v);
  const auto ru = row(u);
  return simd::active().min_plus(ru.data(), row(v).data(), ru.size());
}

Hops AnchorEncoding::estimate(NodeId u, NodeId v) const {
  if (u == v) {
    check_node(u);
    return 0;
  }
  return estimate_raw(u, v);
}

Hops AnchorEncoding::nearest_anchor_distance(NodeId v) const {
  check_node(v);
  return simd::active().min_u32(row(v).data(), anchor_count());
}

AnchorEncoding encode_all(const Graph& g, std::span<const NodeId> anchors) {
  if (anchors.empty()) throw Error("cannot encode with an empty anchor set");
  const std::size_t n = g.node_count();
  for (NodeId a : anchors) {
    if (a >= n) throw Error("anchor " + std::to_string(a) + " out of range [0, " + std::to_string(n) + ")");
  }
  const std::size_t k = anchors.size();
  std::vector<Hops> values(n * k);
  // Column-wise BFS, scattered into the row-major payload.
  parallel_for(k, [&](std::size_t, std::size_t begin, std::size_t end) {
    BfsScratch scratch(n);
    std::vector<Hops> dist(n);
    for (std::size_t col = begin; col < end; ++col) {
      scratch.run(g, anchors[col], dist);
      for (std::size_t v = 0; v < n; ++v) values[v * k + col] = dist[v];
    }
  });
  return AnchorEncoding(n, std::vector<NodeId>(anchors.begin(), anchors.end()), std::move(values), g.hash());
}

AnchorEncoding encode_all(const Graph& g, const AnchorSet& anchors) { return encode_all(g, anchors.anchors); }

Hops estimate_distance(const AnchorEncoding& enc, NodeId u, NodeId v) { return enc.estimate(u, v); }
Hops estimate_raw(const AnchorEncoding& enc, NodeId u, NodeId v) { return enc.estimate_raw(u, v); }

BoundReport verify_error_bound(const Graph& g, const AnchorEncoding& enc, const AnchorSet& anchors,
                               const PairSampling& sampling) {
  const std::uint64_t gh = g.hash();
  if (enc.graph_hash() != gh) {
    throw Error("encoding graph_hash " + to_hex(enc.graph_hash()) + " does not match graph " + to_hex(gh));
  }
  if (anchors.graph_hash != 0 && anchors.graph_hash != gh) {
    throw Error("anchor set graph_hash " + to_hex(anchors.graph_hash) + " does not match graph " + to_hex(gh));
  }
  if (!std::equal(enc.anchor_ids().begin(), enc.anchor_ids().end(), anchors.anchors.begin(), anchors.anchors.end())) {
    throw Error("encoding anchors differ from the supplied anchor set");
  }

  const std::size_t n = g.node_count();
  const Hops c = anchors.config.c;
  // Coverage is recomputed from the encoding itself so the report does not
  // trust the anchor file's covered list.
  std::vector<char> covered(n, 0);
  std::uint64_t uncovered = 0;
  for (NodeId v = 0; v < n; ++v) {
    covered[v] = enc.nearest_anchor_distance(v) <= c;
    if (!covered[v]) ++uncovered;
  }

  BoundReport rep;
  rep.bound_2c = 2 * c;
  rep.uncovered_nodes = uncovered;
  rep.both_uncovered_pairs = uncovered * uncovered;
  rep.total_ordered_pairs = static_cast<std::uint64_t>(n) * n;
  rep.fraction_both_uncovered =
      n == 0 ? 0.0 : static_cast<double>(rep.both_uncovered_pairs) / static_cast<double>(rep.total_ordered_pairs);

  std::vector<NodeId> sources;
  if (sampling.sources == 0 || sampling.sources >= n) {
    sources.resize(n);
    for (NodeId v = 0; v < n; ++v) sources[v] = v;
  } else {
    std::mt19937_64 rng(sampling.seed);
    std::vector<NodeId> all(n);
    for (NodeId v = 0; v < n; ++v) all[v] = v;
    for (std::size_t i = 0; i < sampling.sources; ++i) {
      const std::size_t j = i + static_cast<std::size_t>(rng() % (n - i));
      std::swap(all[i], all[j]);
    }
    sources.assign(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(sampling.sources));
    std::sort(sources.begin(), sources.end());
  }
  const bool exhaustive = sources.size() == n;

  long double error_sum = 0.0L;
  long double error_sum_all = 0.0L;
  std::uint64_t finite_pairs = 0;
  BfsScratch scratch(n);
  std::vector<Hops> dist(n);
  for (NodeId u : sources) {
    scratch.run(g, u, dist);
    for (NodeId v = 0; v < n; ++v) {
      if (v == u || (exhaustive && v < u)) continue;
      const Hops truth = dist[v];
      if (!is_reachable(truth)) continue;
      const Hops est = enc.estimate(u, v);
      ++rep.pairs_checked;
      if (!is_reachable(est)) {
        // A reachable pair always shares every anchor of its component, so a
        // missing estimate only happens when the component has no anchor.
        if (covered[u] || covered[v]) rep.violations.push_back({u, v, est, truth});
        continue;
      }
      if (est < truth) {
        rep.underestimates.push_back({u, v, est, truth});
        continue;
      }
      const Hops err = est - truth;
      rep.max_error_all_pairs = std::max(rep.max_error_all_pairs, err);
      if (rep.error_histogram.size() <= err) rep.error_histogram.resize(err + 1, 0);
      ++rep.error_histogram[err];
      error_sum_all += err;
      ++finite_pairs;
      if (covered[u] || covered[v]) {
        ++rep.covered_pairs_checked;
        error_sum += err;
        rep.max_error_covered_pairs = std::max(rep.max_error_covered_pairs, err);
        if (err > rep.bound_2c) rep.violations.push_back({u, v, est, truth});
      }
    }
  }
  if (finite_pairs > 0) rep.mean_error_all_pairs = static_cast<double>(error_sum_all / finite_pairs);
  if (rep.covered_pairs_checked > 0) {
    rep.mean_error_covered_pairs = static_cast<double>(error_sum / rep.covered_pairs_checked);
  }
  return rep;
}

}  // namespace nodetok
