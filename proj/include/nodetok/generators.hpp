#pragma once

#include <cstdint>
#include <vector>

#include "nodetok/graph.hpp"

namespace nodetok::gen {

Graph path(std::size_t n);
Graph cycle(std::size_t n);
/// Star with center 0 and `leaves` leaves.
Graph star(std::size_t leaves);
/// G(n, p) with every unordered pair included independently.
Graph erdos_renyi(std::size_t n, double p, std::uint64_t seed);

struct LabeledGraph {
  Graph graph;
  std::vector<int> labels;
};

/// Stochastic block model with consecutive blocks of the given sizes.
LabeledGraph stochastic_block_model(const std::vector<std::size_t>& block_sizes, double p_in, double p_out,
                                    std::uint64_t seed);

/// Relabels nodes: node v of g becomes perm[v].
Graph permute(const Graph& g, const std::vector<NodeId>& perm);

}  // namespace nodetok::gen
