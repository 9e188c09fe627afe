#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "trafficast/gru.hpp"
#include "trafficast/lstm.hpp"
#include "trafficast/matrix.hpp"

namespace trafficast {

enum class CellKind { lstm, gru };

std::string_view to_string(CellKind kind) noexcept;
/// Accepts "lstm" or "gru"; throws std::invalid_argument otherwise.
CellKind parse_cell_kind(std::string_view text);

struct ModelConfig {
  CellKind cell_kind = CellKind::lstm;
  std::vector<std::size_t> layer_sizes;
  std::size_t input_dim = 0;
  std::size_t horizon = 1;
  std::uint64_t seed = 0;

  void validate() const;
  friend bool operator==(const ModelConfig&, const ModelConfig&) = default;
};

using LayerParams = std::variant<LstmParams, GruParams>;

struct NamedParam {
  std::string name;
  Matrix* value;
};

struct ConstNamedParam {
  std::string name;
  const Matrix* value;
};

/// Every trainable tensor of a network. Gradients use the same type.
struct ParameterSet {
  std::vector<LayerParams> layers;
  Matrix head_w;  // horizon x last_hidden
  Matrix head_b;  // horizon x 1

  /// Stable order: layer0.w_f ... layerN.b_*, head.w, head.b.
  std::vector<NamedParam> named();
  std::vector<ConstNamedParam> named() const;

  ParameterSet zeros_like() const;
  std::size_t scalar_count() const;

  friend bool operator==(const ParameterSet&, const ParameterSet&) = default;
};

/// Initial value of every head bias entry.
inline constexpr double kHeadBiasInit = 0.5;

/// Stacked recurrent layers feeding a linear head that reads the top
/// layer's last hidden state.
class Network {
 public:
  /// Random initialization, deterministic in config.seed. Head bias starts
  /// at kHeadBiasInit.
  static Network create(const ModelConfig& config);

  /// Adopts explicit parameters; throws ShapeError if they disagree with config.
  Network(ModelConfig config, ParameterSet params);

  const ModelConfig& config() const noexcept { return config_; }
  const ParameterSet& params() const noexcept { return params_; }
  ParameterSet& params() noexcept { return params_; }

  void validate() const;

  friend bool operator==(const Network&, const Network&) = default;

 private:
  ModelConfig config_;
  ParameterSet params_;
};

using LayerTrace = std::variant<std::vector<LstmCache>, std::vector<GruCache>>;

/// Caches from one forward pass, consumed by backward_sequence.
struct SequenceCache {
  std::vector<LayerTrace> layers;
  Matrix last_hidden;
  std::size_t steps = 0;
  std::size_t batch = 0;
};

struct ForwardResult {
  Matrix prediction;  // horizon x batch
  SequenceCache cache;
};

/// Runs the window (one input_dim x batch matrix per timestep) through the
/// stack from zero initial state.
ForwardResult forward_sequence(const Network& net, std::span<const Matrix> window);

/// forward_sequence without keeping caches.
Matrix predict(const Network& net, std::span<const Matrix> window);

/// Exact gradients of every parameter given dLoss/dPrediction.
ParameterSet backward_sequence(const Network& net, const SequenceCache& cache,
                               const Matrix& d_pred);

struct LossAndGrad {
  double loss = 0.0;
  Matrix d_pred;
};

/// Mean squared error over every entry and its gradient 2 (pred - target) / n.
LossAndGrad mse_loss_and_grad(const Matrix& pred, const Matrix& target);

}  // namespace trafficast
