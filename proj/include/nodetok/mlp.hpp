#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "nodetok/matrix.hpp"

namespace nodetok {

/// Parameters of a three-affine-layer perceptron
///   input(K) -> hidden -> hidden -> output(n),
/// rectifier after the first two layers and identity on the output.
/// All weights and biases live in one contiguous buffer so optimizers and
/// finite-difference checks can treat them as a flat vector. Weight l is
/// row-major out_l x in_l.
class MlpParams {
 public:
  static constexpr std::size_t kLayers = 3;

  MlpParams() = default;
  MlpParams(std::size_t input_dim, std::size_t hidden_dim, std::size_t output_dim);

  /// Weights and biases drawn from U(-1/sqrt(fan_in), 1/sqrt(fan_in)).
  static MlpParams init_uniform(std::size_t input_dim, std::size_t hidden_dim, std::size_t output_dim,
                                std::uint64_t seed);
  /// Same shapes, all zeros. Used as a gradient accumulator.
  static MlpParams zeros_like(const MlpParams& other);

  std::size_t input_dim() const noexcept { return dims_[0]; }
  std::size_t hidden_dim() const noexcept { return dims_[1]; }
  std::size_t output_dim() const noexcept { return dims_[3]; }
  std::size_t layer_in(std::size_t l) const noexcept { return dims_[l]; }
  std::size_t layer_out(std::size_t l) const noexcept { return dims_[l + 1]; }

  std::span<double> weight(std::size_t l) noexcept { return {flat_.data() + w_off_[l], layer_out(l) * layer_in(l)}; }
  std::span<const double> weight(std::size_t l) const noexcept {
    return {flat_.data() + w_off_[l], layer_out(l) * layer_in(l)};
  }
  std::span<double> weight_row(std::size_t l, std::size_t o) noexcept {
    return {flat_.data() + w_off_[l] + o * layer_in(l), layer_in(l)};
  }
  std::span<const double> weight_row(std::size_t l, std::size_t o) const noexcept {
    return {flat_.data() + w_off_[l] + o * layer_in(l), layer_in(l)};
  }
  std::span<double> bias(std::size_t l) noexcept { return {flat_.data() + b_off_[l], layer_out(l)}; }
  std::span<const double> bias(std::size_t l) const noexcept { return {flat_.data() + b_off_[l], layer_out(l)}; }

  std::span<double> flat() noexcept { return flat_; }
  std::span<const double> flat() const noexcept { return flat_; }
  std::size_t parameter_count() const noexcept { return flat_.size(); }

  bool all_finite() const;
  bool operator==(const MlpParams&) const = default;

 private:
  std::array<std::size_t, kLayers + 1> dims_{};
  std::array<std::size_t, kLayers> w_off_{};
  std::array<std::size_t, kLayers> b_off_{};
  std::vector<double> flat_;
};

/// Intermediate activations kept for backpropagation.
struct ForwardCache {
  Matrix input;
  std::array<Matrix, 2> pre;   // affine outputs of the hidden layers
  std::array<Matrix, 2> post;  // rectified hidden activations
  Matrix output;
};

/// Row-wise evaluation of the network. Throws on a width mismatch.
Matrix forward(const MlpParams& params, const Matrix& features);
ForwardCache forward_cached(const MlpParams& params, const Matrix& features);

/// Accumulates d(loss)/d(params) into `grad` given d(loss)/d(output).
void backward(const MlpParams& params, const ForwardCache& cache, const Matrix& grad_output, MlpParams& grad);

}  // namespace nodetok
