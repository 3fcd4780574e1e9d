#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "nodetok/encoding.hpp"
#include "nodetok/matrix.hpp"
#include "nodetok/mlp.hpp"
#include "nodetok/optim.hpp"

namespace nodetok {

struct TrainConfig {
  std::size_t dim = 64;
  std::size_t hidden = 256;
  double learning_rate = 1e-3;
  std::size_t epochs = 100;
  std::size_t quadruples_per_epoch = 4096;
  std::size_t batch_size = 256;
  std::uint64_t seed = 0;
  /// Redraw quadruples whose two pair estimates are equal.
  bool skip_ties = false;
  double eps_norm = 1e-12;

  void validate() const;
};

/// Per-node Euclidean embedding with the provenance needed to re-derive it.
struct EmbeddingMatrix {
  Matrix values;
  std::uint64_t graph_hash = 0;
  std::uint64_t anchor_hash = 0;
  TrainConfig config;

  std::size_t node_count() const noexcept { return values.rows(); }
  std::size_t dim() const noexcept { return values.cols(); }
};

std::uint64_t anchor_hash(std::span<const NodeId> anchors);

/// Maps each hop count d to 1/(1+d); unreachable entries map to 0.
Matrix normalize_encoding(const AnchorEncoding& enc);

struct QuadrupleLoss {
  double loss = 0.0;
  /// Signed difference of the two pair norms.
  double margin = 0.0;
  std::array<std::vector<double>, 4> grads;  // w.r.t. e_u, e_v, e_i, e_j
};

/// Binary cross-entropy of sigmoid(|e_u - e_v| - |e_i - e_j|) against y,
/// with norms stabilized as sqrt(sum d^2 + eps_norm). Throws on non-finite
/// input or mismatched widths.
QuadrupleLoss quadruple_loss(std::span<const double> e_u, std::span<const double> e_v, std::span<const double> e_i,
                             std::span<const double> e_j, int y, double eps_norm = 1e-12);

struct Quadruple {
  NodeId u = 0, v = 0, i = 0, j = 0;
  Hops d_uv = 0, d_ij = 0;
  /// 1 iff d_uv > d_ij.
  int y = 0;
};

/// Stream of uniformly drawn quadruples with u != v and i != j. Quadruples
/// with an unreachable estimate are redrawn, and so are ties when
/// skip_ties is set. Throws when fewer than 1% of the draws in a
/// 10000-draw window are accepted.
class QuadrupleSampler {
 public:
  static constexpr std::size_t kWindow = 10000;

  QuadrupleSampler(const AnchorEncoding& enc, std::uint64_t seed, bool skip_ties);

  Quadruple next();

  std::size_t rejected_unreachable() const noexcept { return rejected_unreachable_; }
  std::size_t rejected_ties() const noexcept { return rejected_ties_; }

 private:
  std::pair<NodeId, NodeId> draw_pair();

  const AnchorEncoding* enc_;
  std::mt19937_64 rng_;
  bool skip_ties_;
  std::size_t rejected_unreachable_ = 0;
  std::size_t rejected_ties_ = 0;
  std::size_t window_draws_ = 0;
  std::size_t window_accepts_ = 0;
};

struct QuadrupleBatch {
  std::vector<Quadruple> items;
  std::size_t rejected_unreachable = 0;
  std::size_t rejected_ties = 0;
};

QuadrupleBatch sample_quadruples(const AnchorEncoding& enc, std::size_t count, std::uint64_t seed, bool skip_ties);

/// Mean quadruple loss of a batch. When grad is non-null the gradient of
/// that mean is accumulated into it. Each node is pushed through the
/// network once per call regardless of how many quadruples reference it.
double batch_loss(const MlpParams& params, const Matrix& features, std::span<const Quadruple> batch,
                  double eps_norm, MlpParams* grad);

struct TrainResult {
  MlpParams params;
  EmbeddingMatrix embeddings;
  /// Mean quadruple loss of each epoch.
  std::vector<double> loss_history;
};

/// Explicit training loop state, for callers that drive steps themselves.
class Trainer {
 public:
  Trainer(const MlpParams& init, const TrainConfig& cfg);

  /// One optimizer step on the batch; returns the batch's mean loss.
  double step(const Matrix& features, std::span<const Quadruple> batch);
  const MlpParams& params() const noexcept { return params_; }

 private:
  TrainConfig cfg_;
  MlpParams params_;
  MlpParams grad_;
  Adam adam_;
};

TrainResult train(const AnchorEncoding& enc, const TrainConfig& cfg);

struct GradCheckResult {
  double max_relative_error = 0.0;
  double max_abs_analytic = 0.0;
  double max_abs_numeric = 0.0;
  std::size_t checked = 0;
  /// Parameters skipped because a +-h probe flipped a rectifier.
  std::size_t skipped_kinks = 0;
};

/// Backpropagated gradient of the mean batch loss against central finite
/// differences over every parameter. Relative error is
/// |a - n| / max(|a|, |n|, 1e-6).
GradCheckResult grad_check(const MlpParams& params, const Matrix& features, std::span<const Quadruple> batch,
                           double eps_norm = 1e-12, double step = 1e-5);

}  // namespace nodetok
