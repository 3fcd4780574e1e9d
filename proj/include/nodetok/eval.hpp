#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "nodetok/anchors.hpp"
#include "nodetok/encoding.hpp"
#include "nodetok/matrix.hpp"
#include "nodetok/pretrain.hpp"

namespace nodetok {

/// Fraction of non-tied quadruples whose embedding-distance order matches
/// the estimated graph-distance order. sample == 0 enumerates every pair of
/// distinct node pairs; otherwise `sample` quadruples are drawn with `seed`.
/// Throws when the embedding and encoding do not describe the same graph.
double order_agreement(const EmbeddingMatrix& emb, const AnchorEncoding& enc, std::size_t sample, std::uint64_t seed);

/// Order agreement of a raw point set against the encoding (no provenance check).
double order_agreement(const Matrix& points, const AnchorEncoding& enc, std::size_t sample, std::uint64_t seed);

struct EvalOptions {
  TrainConfig train;
  std::size_t agreement_sample = 20000;
  std::uint64_t agreement_seed = 1;
  PairSampling error_sampling{};
};

struct StrategyRow {
  AnchorStrategy strategy = AnchorStrategy::kGreedy;
  std::uint64_t seed = 0;
  std::size_t anchors = 0;
  double ratio = 0.0;
  bool no_progress = false;
  double agreement = 0.0;
  double mean_err = 0.0;
};

struct StrategySummary {
  AnchorStrategy strategy = AnchorStrategy::kGreedy;
  double anchors = 0.0;
  double ratio = 0.0;
  double agreement = 0.0;
  double mean_err = 0.0;
  /// Every seed reached the target ratio or raised the no-progress flag.
  bool contract_ok = true;
};

struct StrategyReport {
  std::vector<StrategyRow> rows;
  std::vector<StrategySummary> summary;

  /// Header: strategy,seed,anchors,ratio,agreement,mean_err
  std::string csv() const;
};

/// Anchor count, achieved ratio, post-training agreement and mean estimate
/// error per (strategy, seed); summary rows average over seeds.
StrategyReport strategy_report(const Graph& g, std::span<const AnchorStrategy> strategies, Hops c, double cr,
                               std::span<const std::uint64_t> seeds, const EvalOptions& opts);

struct SweepCell {
  Hops c = 1;
  double cr = 0.0;
  std::size_t anchors = 0;
  double ratio = 0.0;
  bool no_progress = false;
  double agreement = 0.0;
  /// Mean estimate - truth over all checked reachable pairs.
  double mean_err = 0.0;
  double mean_err_covered = 0.0;
  Hops max_err_covered = 0;
};

struct SweepTable {
  std::vector<SweepCell> cells;  // c-major order

  /// Header: c,cr,anchors,agreement,mean_err
  std::string csv() const;
  const SweepCell& at(Hops c, double cr) const;
};

/// Greedy anchors, encoding and training for every (c, cr) combination.
/// When train_embeddings is false the agreement column is left at 0.
SweepTable hyperparameter_sweep(const Graph& g, std::span<const Hops> c_values, std::span<const double> cr_values,
                                const EvalOptions& opts, bool train_embeddings = true);

struct ProbeOptions {
  double l2 = 1e-3;
  double train_fraction = 0.8;
  std::size_t iterations = 300;
  double learning_rate = 0.05;
};

/// Multinomial logistic regression on standardized features with a seeded
/// 80/20 split; returns test accuracy. Throws when a class present in the
/// labels is missing from the training split.
double community_probe(const Matrix& features, std::span<const int> labels, std::uint64_t seed,
                       const ProbeOptions& opts = {});

struct Projection {
  Matrix coords;                  // rows x dims
  Matrix components;              // dims x original width, unit rows
  std::vector<double> variances;  // per kept component, non-increasing
  std::vector<double> eigenvalues;  // all covariance eigenvalues, non-increasing
  /// Mean squared residual per row after projecting back.
  double reconstruction_error = 0.0;
};

/// Mean-centred projection onto the top principal directions of the
/// covariance. Signs are fixed so each component's largest-magnitude
/// loading is positive. Throws when dims exceeds the data width.
Projection pca_project(const Matrix& data, std::size_t dims = 2);

/// Header: node,pc1..pcK,is_anchor
std::string projection_csv(const Projection& p, std::span<const NodeId> anchors);

struct EvalReport {
  double order_agreement = 0.0;
  std::size_t agreement_sample = 0;
  std::optional<BoundReport> distance;
  std::size_t anchor_count = 0;
  std::size_t node_count = 0;
  std::optional<double> coverage_ratio;
  nlohmann::json config = nlohmann::json::object();
};

nlohmann::json to_json(const EvalReport& r);

}  // namespace nodetok
