#include "nodetok/generators.hpp"

#include <random>

namespace nodetok::gen {

Graph path(std::size_t n) {
  std::vector<Edge> edges;
  for (std::size_t i = 0; i + 1 < n; ++i) edges.emplace_back(i, i + 1);
  return Graph::from_edges(n, edges);
}

Graph cycle(std::size_t n) {
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < n; ++i) edges.emplace_back(i, (i + 1) % n);
  return Graph::from_edges(n, edges);
}

Graph star(std::size_t leaves) {
  std::vector<Edge> edges;
  for (std::size_t i = 1; i <= leaves; ++i) edges.emplace_back(0, i);
  return Graph::from_edges(leaves + 1, edges);
}

Graph erdos_renyi(std::size_t n, double p, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::vector<Edge> edges;
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t v = u + 1; v < n; ++v) {
      if (coin(rng) < p) edges.emplace_back(u, v);
    }
  }
  return Graph::from_edges(n, edges);
}

LabeledGraph stochastic_block_model(const std::vector<std::size_t>& block_sizes, double p_in, double p_out,
                                    std::uint64_t seed) {
  LabeledGraph out;
  for (std::size_t b = 0; b < block_sizes.size(); ++b) {
    out.labels.insert(out.labels.end(), block_sizes[b], static_cast<int>(b));
  }
  const std::size_t n = out.labels.size();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::vector<Edge> edges;
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t v = u + 1; v < n; ++v) {
      const double p = out.labels[u] == out.labels[v] ? p_in : p_out;
      if (coin(rng) < p) edges.emplace_back(u, v);
    }
  }
  out.graph = Graph::from_edges(n, edges);
  return out;
}

Graph permute(const Graph& g, const std::vector<NodeId>& perm) {
  std::vector<Edge> edges;
  for (auto [u, v] : g.canonical_edges()) edges.emplace_back(perm[u], perm[v]);
  return Graph::from_edges(g.node_count(), edges);
}

}  // namespace nodetok::gen
