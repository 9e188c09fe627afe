#include "trafficast/network.hpp"

#include <random>
#include <stdexcept>
#include <type_traits>

namespace trafficast {
namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  // splitmix64 finalizer
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::size_t layer_hidden(const LayerParams& layer) {
  return std::visit([](const auto& p) { return p.hidden_dim(); }, layer);
}

std::size_t layer_input(const LayerParams& layer) {
  return std::visit([](const auto& p) { return p.input_dim(); }, layer);
}

template <class Params, class Cache, class StepFn>
std::vector<Matrix> run_layer(const Params& p, std::span<const Matrix> inputs, bool with_cell,
                              StepFn step, std::vector<Cache>* trace) {
  const std::size_t batch = inputs.front().cols();
  CellState state = CellState::zeros(p.hidden_dim(), batch, with_cell);
  std::vector<Matrix> outputs;
  outputs.reserve(inputs.size());
  if (trace) trace->reserve(inputs.size());
  for (const Matrix& x : inputs) {
    auto result = step(p, x, state);
    state = std::move(result.next);
    outputs.push_back(state.h);
    if (trace) trace->push_back(std::move(result.cache));
  }
  return outputs;
}

Matrix head_output(const ParameterSet& params, const Matrix& last_hidden) {
  return add_bias(matmul(params.head_w, last_hidden), params.head_b);
}

Matrix run_stack(const Network& net, std::span<const Matrix> window, SequenceCache* cache) {
  if (window.empty()) throw ShapeError("forward_sequence: empty window");
  const std::size_t batch = window.front().cols();
  for (const Matrix& x : window) {
    if (x.rows() != net.config().input_dim || x.cols() != batch) {
      throw ShapeError("forward_sequence: step input " + x.shape_string() + ", expected (" +
                       std::to_string(net.config().input_dim) + "x" + std::to_string(batch) +
                       ")");
    }
  }

  std::vector<Matrix> current(window.begin(), window.end());
  for (const LayerParams& layer : net.params().layers) {
    current = std::visit(
        overloaded{
            [&](const LstmParams& p) {
              std::vector<LstmCache>* trace = nullptr;
              if (cache) trace = &std::get<0>(cache->layers.emplace_back(std::vector<LstmCache>{}));
              return run_layer<LstmParams, LstmCache>(p, current, true, lstm_step, trace);
            },
            [&](const GruParams& p) {
              std::vector<GruCache>* trace = nullptr;
              if (cache) {
                trace = &std::get<1>(cache->layers.emplace_back(
                    std::in_place_index<1>, std::vector<GruCache>{}));
              }
              return run_layer<GruParams, GruCache>(p, current, false, gru_step, trace);
            },
        },
        layer);
  }
  if (cache) {
    cache->last_hidden = current.back();
    cache->steps = window.size();
    cache->batch = batch;
  }
  return head_output(net.params(), current.back());
}

template <class Params>
Params zeros_for(const Params& p) {
  return Params::zeros(p.input_dim(), p.hidden_dim());
}

template <class Params>
void add_into(Params& acc, const Params& g) {
  // for_each visits members in the same order for both objects.
  std::vector<Matrix*> dst;
  acc.for_each([&](const char*, Matrix& m) { dst.push_back(&m); });
  std::size_t k = 0;
  g.for_each([&](const char*, const Matrix& m) { accumulate(*dst[k++], m); });
}

}  // namespace

std::string_view to_string(CellKind kind) noexcept {
  return kind == CellKind::lstm ? "lstm" : "gru";
}

CellKind parse_cell_kind(std::string_view text) {
  if (text == "lstm") return CellKind::lstm;
  if (text == "gru") return CellKind::gru;
  throw std::invalid_argument("unknown cell kind '" + std::string(text) +
                              "' (expected lstm or gru)");
}

void ModelConfig::validate() const {
  if (layer_sizes.empty()) throw std::invalid_argument("ModelConfig: layer_sizes is empty");
  for (std::size_t s : layer_sizes) {
    if (s == 0) throw std::invalid_argument("ModelConfig: layer size must be >= 1");
  }
  if (input_dim == 0) throw std::invalid_argument("ModelConfig: input_dim must be >= 1");
  if (horizon == 0) throw std::invalid_argument("ModelConfig: horizon must be >= 1");
}

std::vector<NamedParam> ParameterSet::named() {
  std::vector<NamedParam> out;
  for (std::size_t l = 0; l < layers.size(); ++l) {
    const std::string prefix = "layer" + std::to_string(l) + ".";
    std::visit([&](auto& p) {
      p.for_each([&](const char* name, Matrix& m) { out.push_back({prefix + name, &m}); });
    }, layers[l]);
  }
  out.push_back({"head.w", &head_w});
  out.push_back({"head.b", &head_b});
  return out;
}

std::vector<ConstNamedParam> ParameterSet::named() const {
  std::vector<ConstNamedParam> out;
  for (std::size_t l = 0; l < layers.size(); ++l) {
    const std::string prefix = "layer" + std::to_string(l) + ".";
    std::visit([&](const auto& p) {
      p.for_each([&](const char* name, const Matrix& m) { out.push_back({prefix + name, &m}); });
    }, layers[l]);
  }
  out.push_back({"head.w", &head_w});
  out.push_back({"head.b", &head_b});
  return out;
}

ParameterSet ParameterSet::zeros_like() const {
  ParameterSet out;
  out.layers.reserve(layers.size());
  for (const auto& layer : layers) {
    std::visit([&](const auto& p) { out.layers.emplace_back(zeros_for(p)); }, layer);
  }
  out.head_w = Matrix(head_w.rows(), head_w.cols());
  out.head_b = Matrix(head_b.rows(), head_b.cols());
  return out;
}

std::size_t ParameterSet::scalar_count() const {
  std::size_t n = 0;
  for (const auto& p : named()) n += p.value->size();
  return n;
}

Network Network::create(const ModelConfig& config) {
  config.validate();
  ParameterSet params;
  std::size_t input = config.input_dim;
  for (std::size_t l = 0; l < config.layer_sizes.size(); ++l) {
    const std::size_t hidden = config.layer_sizes[l];
    const std::uint64_t seed = mix_seed(config.seed, l);
    if (config.cell_kind == CellKind::lstm) {
      params.layers.emplace_back(lstm_init(input, hidden, seed));
    } else {
      params.layers.emplace_back(gru_init(input, hidden, seed));
    }
    input = hidden;
  }
  std::mt19937_64 rng(mix_seed(config.seed, config.layer_sizes.size()));
  params.head_w = detail::glorot_uniform(config.horizon, input, rng);
  // Targets are min-max scaled, so start the output at the middle of [0, 1].
  params.head_b = Matrix(config.horizon, 1, kHeadBiasInit);
  return Network(config, std::move(params));
}

Network::Network(ModelConfig config, ParameterSet params)
    : config_(std::move(config)), params_(std::move(params)) {
  validate();
}

void Network::validate() const {
  config_.validate();
  if (params_.layers.size() != config_.layer_sizes.size()) {
    throw ShapeError("Network: " + std::to_string(params_.layers.size()) +
                     " layers for layer_sizes of length " +
                     std::to_string(config_.layer_sizes.size()));
  }
  std::size_t input = config_.input_dim;
  for (std::size_t l = 0; l < params_.layers.size(); ++l) {
    const LayerParams& layer = params_.layers[l];
    const bool kind_ok = (config_.cell_kind == CellKind::lstm) == (layer.index() == 0);
    if (!kind_ok) throw ShapeError("Network: layer " + std::to_string(l) + " has wrong cell kind");
    std::visit([](const auto& p) { p.validate(); }, layer);
    if (layer_input(layer) != input || layer_hidden(layer) != config_.layer_sizes[l]) {
      throw ShapeError("Network: layer " + std::to_string(l) + " maps " +
                       std::to_string(layer_input(layer)) + " -> " +
                       std::to_string(layer_hidden(layer)) + ", expected " +
                       std::to_string(input) + " -> " + std::to_string(config_.layer_sizes[l]));
    }
    input = config_.layer_sizes[l];
  }
  if (!params_.head_w.same_shape(Matrix(config_.horizon, input)) ||
      !params_.head_b.same_shape(Matrix(config_.horizon, 1))) {
    throw ShapeError("Network: head shapes " + params_.head_w.shape_string() + "/" +
                     params_.head_b.shape_string() + " do not match horizon " +
                     std::to_string(config_.horizon) + " and last hidden " +
                     std::to_string(input));
  }
}

ForwardResult forward_sequence(const Network& net, std::span<const Matrix> window) {
  ForwardResult out;
  out.prediction = run_stack(net, window, &out.cache);
  return out;
}

Matrix predict(const Network& net, std::span<const Matrix> window) {
  return run_stack(net, window, nullptr);
}

ParameterSet backward_sequence(const Network& net, const SequenceCache& cache,
                               const Matrix& d_pred) {
  const ParameterSet& params = net.params();
  if (cache.layers.size() != params.layers.size() || cache.steps == 0) {
    throw ShapeError("backward_sequence: cache does not come from this network");
  }
  if (d_pred.rows() != params.head_w.rows() || d_pred.cols() != cache.batch) {
    throw ShapeError("backward_sequence: d_pred " + d_pred.shape_string() +
                     " does not match prediction (" + std::to_string(params.head_w.rows()) +
                     "x" + std::to_string(cache.batch) + ")");
  }

  ParameterSet grads = params.zeros_like();
  grads.head_w = matmul_bt(d_pred, cache.last_hidden);
  grads.head_b = sum_columns(d_pred);

  // Upstream gradient on each timestep's output of the current layer. Only
  // the last step of the top layer feeds the head.
  std::vector<Matrix> d_out(cache.steps);
  const std::size_t top_hidden = params.head_w.cols();
  for (auto& m : d_out) m = Matrix(top_hidden, cache.batch);
  d_out.back() = matmul_at(params.head_w, d_pred);

  for (std::size_t l = params.layers.size(); l-- > 0;) {
    const LayerTrace& trace = cache.layers[l];
    if (trace.index() != params.layers[l].index()) {
      throw ShapeError("backward_sequence: cache layer kind mismatch at layer " + std::to_string(l));
    }
    std::vector<Matrix> d_in(cache.steps);
    std::visit(
        overloaded{
            [&](const LstmParams& p) {
              const auto& steps = std::get<0>(trace);
              if (steps.size() != cache.steps) throw ShapeError("backward_sequence: truncated cache");
              auto& g = std::get<LstmParams>(grads.layers[l]);
              Matrix d_h_next(p.hidden_dim(), cache.batch);
              Matrix d_c_next(p.hidden_dim(), cache.batch);
              for (std::size_t t = cache.steps; t-- > 0;) {
                LstmGradients step = lstm_backward(p, steps[t], d_out[t] + d_h_next, d_c_next);
                add_into(g, step.d_params);
                d_in[t] = std::move(step.d_x);
                d_h_next = std::move(step.d_prev.h);
                d_c_next = std::move(step.d_prev.c);
              }
            },
            [&](const GruParams& p) {
              const auto& steps = std::get<1>(trace);
              if (steps.size() != cache.steps) throw ShapeError("backward_sequence: truncated cache");
              auto& g = std::get<GruParams>(grads.layers[l]);
              Matrix d_h_next(p.hidden_dim(), cache.batch);
              for (std::size_t t = cache.steps; t-- > 0;) {
                GruGradients step = gru_backward(p, steps[t], d_out[t] + d_h_next);
                add_into(g, step.d_params);
                d_in[t] = std::move(step.d_x);
                d_h_next = std::move(step.d_prev_h);
              }
            },
        },
        params.layers[l]);
    d_out = std::move(d_in);
  }
  return grads;
}

LossAndGrad mse_loss_and_grad(const Matrix& pred, const Matrix& target) {
  if (!pred.same_shape(target)) {
    throw ShapeError("mse_loss_and_grad: prediction " + pred.shape_string() + " vs target " +
                     target.shape_string());
  }
  if (pred.empty()) throw ShapeError("mse_loss_and_grad: empty prediction");
  const double n = static_cast<double>(pred.size());
  LossAndGrad out;
  out.d_pred = Matrix(pred.rows(), pred.cols());
  auto p = pred.values();
  auto t = target.values();
  auto g = out.d_pred.values();
  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double r = p[i] - t[i];
    sum += r * r;
    g[i] = 2.0 * r / n;
  }
  out.loss = sum / n;
  return out;
}

}  // namespace trafficast
