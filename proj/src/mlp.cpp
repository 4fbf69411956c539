#include "gtflux/mlp.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <memory>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace gtflux {

using Eigen::MatrixXd;
using Eigen::VectorXd;

double elu(double x) { return x > 0.0 ? x : std::expm1(x); }
double elu_derivative(double x) { return x > 0.0 ? 1.0 : std::exp(x); }

std::vector<int> default_dims() { return {kNnInputs, 80, 80, 80, 80, 1}; }

namespace {

void check_dims(const std::vector<int>& dims) {
  if (dims.size() < 2) throw std::invalid_argument("MlpModel: need at least input and output sizes");
  for (int d : dims)
    if (d < 1) throw std::invalid_argument("MlpModel: layer sizes must be positive");
  if (dims.back() != 1) throw std::invalid_argument("MlpModel: output size must be 1");
}

}  // namespace

MlpModel MlpModel::zeros(const std::vector<int>& dims) {
  check_dims(dims);
  MlpModel m;
  m.dims = dims;
  for (std::size_t k = 0; k + 1 < dims.size(); ++k)
    m.layers.push_back({MatrixXd::Zero(dims[k + 1], dims[k]), VectorXd::Zero(dims[k + 1])});
  return m;
}

MlpModel MlpModel::random(const std::vector<int>& dims, std::uint64_t seed) {
  MlpModel m = zeros(dims);
  std::mt19937_64 rng(seed);
  for (auto& layer : m.layers) {
    const double r = std::sqrt(3.0 / static_cast<double>(layer.W.cols()));
    std::uniform_real_distribution<double> dist(-r, r);
    for (Eigen::Index i = 0; i < layer.W.rows(); ++i)
      for (Eigen::Index j = 0; j < layer.W.cols(); ++j) layer.W(i, j) = dist(rng);
  }
  return m;
}

std::size_t MlpModel::parameter_count() const {
  std::size_t n = 0;
  for (const auto& l : layers) n += static_cast<std::size_t>(l.W.size() + l.b.size());
  return n;
}

double& MlpModel::parameter(std::size_t index) {
  for (auto& l : layers) {
    const auto nw = static_cast<std::size_t>(l.W.size());
    if (index < nw) {
      const auto cols = static_cast<std::size_t>(l.W.cols());
      return l.W(static_cast<Eigen::Index>(index / cols), static_cast<Eigen::Index>(index % cols));
    }
    index -= nw;
    const auto nb = static_cast<std::size_t>(l.b.size());
    if (index < nb) return l.b(static_cast<Eigen::Index>(index));
    index -= nb;
  }
  throw std::out_of_range("MlpModel::parameter: index out of range");
}

double MlpModel::parameter(std::size_t index) const {
  return const_cast<MlpModel*>(this)->parameter(index);
}

double mlp_forward(const MlpModel& model, std::span<const double> input) {
  if (model.layers.empty()) throw std::invalid_argument("mlp_forward: empty model");
  if (static_cast<int>(input.size()) != model.dims.front())
    throw std::invalid_argument("mlp_forward: input size does not match the model");
  VectorXd a = Eigen::Map<const VectorXd>(input.data(), static_cast<Eigen::Index>(input.size()));
  for (std::size_t k = 0; k < model.layers.size(); ++k) {
    VectorXd z = model.layers[k].W * a + model.layers[k].b;
    if (k + 1 < model.layers.size()) z = z.unaryExpr([](double x) { return elu(x); });
    a = std::move(z);
  }
  return a(0);
}

double predict_alpha(const MlpModel& model, std::span<const double> input) {
  const double raw = mlp_forward(model, input);
  if (std::isnan(raw)) throw std::domain_error("predict_alpha: network output is NaN");
  return std::clamp(raw, 0.0, 1.0);
}

std::vector<double> nn_input_window(const PaddedField& u, long interface, const GasModel& gas) {
  if (u.ghosts() < kNnCellsPerSide) throw std::invalid_argument("nn_input_window: halo too narrow");
  std::vector<double> in;
  in.reserve(kNnInputs);
  for (long k = interface - kNnCellsPerSide; k < interface + kNnCellsPerSide; ++k) {
    const State& s = u.cell(k);
    in.push_back(s.rho);
    in.push_back(s.mom);
    in.push_back(s.energy);
    in.push_back(pressure(s, gas));
  }
  return in;
}

LossKind parse_loss(const std::string& name) {
  if (name == "mse") return LossKind::mse;
  if (name == "mexp") return LossKind::mexp;
  if (name == "nonsym") return LossKind::nonsym;
  throw std::invalid_argument("unknown loss kind: " + name);
}

const char* to_string(LossKind kind) {
  switch (kind) {
    case LossKind::mse: return "mse";
    case LossKind::mexp: return "mexp";
    case LossKind::nonsym: return "nonsym";
  }
  return "?";
}

double sample_loss(double prediction, double target, LossKind kind) {
  const double r = target - prediction;
  switch (kind) {
    case LossKind::mse: return r * r;
    case LossKind::mexp: {
      const double e = std::expm1(r);
      return e * e;
    }
    case LossKind::nonsym: return prediction > target ? -r : kNonsymGamma * r * r;
  }
  throw std::invalid_argument("sample_loss: unknown kind");
}

double sample_loss_derivative(double prediction, double target, LossKind kind) {
  const double r = target - prediction;
  switch (kind) {
    case LossKind::mse: return -2.0 * r;
    case LossKind::mexp: return -2.0 * std::expm1(r) * std::exp(r);
    case LossKind::nonsym: return prediction > target ? 1.0 : -2.0 * kNonsymGamma * r;
  }
  throw std::invalid_argument("sample_loss_derivative: unknown kind");
}

double loss(std::span<const double> predictions, std::span<const double> targets, LossKind kind) {
  if (predictions.size() != targets.size()) throw std::invalid_argument("loss: length mismatch");
  if (predictions.empty()) return 0.0;
  double sum = 0.0;
  for (std::size_t i = 0; i < predictions.size(); ++i) sum += sample_loss(predictions[i], targets[i], kind);
  return sum / static_cast<double>(predictions.size());
}

void Dataset::add(std::span<const double> input, double target) {
  if (input.size() != n_inputs) throw std::invalid_argument("Dataset::add: wrong input length");
  inputs.insert(inputs.end(), input.begin(), input.end());
  targets.push_back(target);
}

double backprop(const MlpModel& model, const Dataset& data, std::span<const std::size_t> batch,
                LossKind kind, MlpModel& grad) {
  if (batch.empty()) throw std::invalid_argument("backprop: empty batch");
  if (static_cast<int>(data.n_inputs) != model.dims.front())
    throw std::invalid_argument("backprop: dataset width does not match the model");
  const auto nb = static_cast<Eigen::Index>(batch.size());
  const std::size_t n_layers = model.layers.size();

  // acts[k] is the input of layer k; pre[k] its pre-activation output.
  std::vector<MatrixXd> acts(n_layers + 1), pre(n_layers);
  acts[0].resize(model.dims.front(), nb);
  for (Eigen::Index j = 0; j < nb; ++j) {
    const auto r = data.row(batch[static_cast<std::size_t>(j)]);
    acts[0].col(j) = Eigen::Map<const VectorXd>(r.data(), static_cast<Eigen::Index>(r.size()));
  }
  for (std::size_t k = 0; k < n_layers; ++k) {
    pre[k] = model.layers[k].W * acts[k];
    pre[k].colwise() += model.layers[k].b;
    acts[k + 1] = k + 1 < n_layers ? pre[k].unaryExpr([](double x) { return elu(x); }) : pre[k];
  }

  const double inv_n = 1.0 / static_cast<double>(nb);
  double total = 0.0;
  MatrixXd delta(1, nb);
  for (Eigen::Index j = 0; j < nb; ++j) {
    const double y = acts[n_layers](0, j);
    const double t = data.targets[batch[static_cast<std::size_t>(j)]];
    total += sample_loss(y, t, kind);
    delta(0, j) = sample_loss_derivative(y, t, kind) * inv_n;
  }

  if (grad.dims != model.dims) grad = MlpModel::zeros(model.dims);
  for (std::size_t k = n_layers; k-- > 0;) {
    grad.layers[k].W.noalias() = delta * acts[k].transpose();
    grad.layers[k].b = delta.rowwise().sum();
    if (k > 0) {
      MatrixXd back = model.layers[k].W.transpose() * delta;
      delta = back.cwiseProduct(pre[k - 1].unaryExpr([](double x) { return elu_derivative(x); }));
    }
  }
  return total * inv_n;
}

AdamState::AdamState(const MlpModel& shape)
    : m(MlpModel::zeros(shape.dims)), v(MlpModel::zeros(shape.dims)) {}

void adam_step(MlpModel& params, const MlpModel& grads, AdamState& state, double step_size) {
  if (grads.dims != params.dims || state.m.dims != params.dims)
    throw std::invalid_argument("adam_step: shape mismatch");
  ++state.t;
  const double c1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.t));
  const double c2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.t));
  auto update = [&](auto& p, const auto& g, auto& m, auto& v) {
    m = state.beta1 * m + (1.0 - state.beta1) * g;
    v = state.beta2 * v + (1.0 - state.beta2) * g.cwiseProduct(g);
    p.array() -= step_size * (m.array() / c1) / ((v.array() / c2).sqrt() + state.eps);
  };
  for (std::size_t k = 0; k < params.layers.size(); ++k) {
    update(params.layers[k].W, grads.layers[k].W, state.m.layers[k].W, state.v.layers[k].W);
    update(params.layers[k].b, grads.layers[k].b, state.m.layers[k].b, state.v.layers[k].b);
  }
}

TrainingSchedule TrainingSchedule::full() {
  TrainingSchedule s;
  const std::size_t batches[] = {32, 256, 1024, 4096, 4096, 4096, 4096};
  const double steps[] = {1e-3, 1e-3, 1e-3, 1e-3, 1e-4, 1e-5, 1e-6};
  for (int i = 0; i < 7; ++i) s.sections.push_back({25, batches[i], steps[i]});
  return s;
}

TrainingSchedule TrainingSchedule::quick() {
  TrainingSchedule s = full();
  s.sections.resize(2);
  return s;
}

TrainingSchedule TrainingSchedule::parse(const std::string& name) {
  if (name == "full") return full();
  if (name == "quick") return quick();
  throw std::invalid_argument("unknown schedule: " + name);
}

TrainResult train(const Dataset& data, const TrainingSchedule& schedule, LossKind kind,
                  std::uint64_t seed, const MlpModel& initial, const EpochCallback& on_epoch) {
  if (data.size() == 0) throw std::invalid_argument("train: empty dataset");
  TrainResult res;
  res.model = initial;
  AdamState adam(initial);
  MlpModel grad = MlpModel::zeros(initial.dims);
  std::mt19937_64 rng(seed);
  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), std::size_t{0});

  for (std::size_t s = 0; s < schedule.sections.size(); ++s) {
    const auto& sec = schedule.sections[s];
    if (sec.batch_size == 0) throw std::invalid_argument("train: batch size must be positive");
    for (int e = 0; e < sec.epochs; ++e) {
      std::shuffle(order.begin(), order.end(), rng);
      double sum = 0.0;
      for (std::size_t start = 0; start < order.size(); start += sec.batch_size) {
        const std::size_t len = std::min(sec.batch_size, order.size() - start);
        std::span<const std::size_t> batch(order.data() + start, len);
        sum += backprop(res.model, data, batch, kind, grad) * static_cast<double>(len);
        adam_step(res.model, grad, adam, sec.step_size);
      }
      const double mean = sum / static_cast<double>(order.size());
      res.epoch_loss.push_back(mean);
      res.epoch_section.push_back(static_cast<int>(s));
      if (on_epoch) on_epoch(static_cast<int>(s), e, mean);
    }
  }
  return res;
}

TrainResult train(const Dataset& data, const TrainingSchedule& schedule, LossKind kind,
                  std::uint64_t seed, const EpochCallback& on_epoch) {
  std::vector<int> dims = default_dims();
  dims.front() = static_cast<int>(data.n_inputs);
  return train(data, schedule, kind, seed, MlpModel::random(dims, seed), on_epoch);
}

std::string model_to_json(const MlpModel& model) {
  nlohmann::json j;
  j["dims"] = model.dims;
  j["activation"] = "elu";
  j["input_order"] = "rho,mom,E,p x cells -5..+4";
  auto layers = nlohmann::json::array();
  for (const auto& l : model.layers) {
    nlohmann::json jl;
    auto w = nlohmann::json::array();
    for (Eigen::Index r = 0; r < l.W.rows(); ++r) {
      std::vector<double> row(static_cast<std::size_t>(l.W.cols()));
      for (Eigen::Index c = 0; c < l.W.cols(); ++c) row[static_cast<std::size_t>(c)] = l.W(r, c);
      w.push_back(row);
    }
    jl["W"] = std::move(w);
    jl["b"] = std::vector<double>(l.b.data(), l.b.data() + l.b.size());
    layers.push_back(std::move(jl));
  }
  j["layers"] = std::move(layers);
  return j.dump();
}

MlpModel model_from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  if (j.contains("activation") && j["activation"] != "elu")
    throw std::invalid_argument("weight file: unsupported activation");
  MlpModel m = MlpModel::zeros(j.at("dims").get<std::vector<int>>());
  const auto& layers = j.at("layers");
  if (layers.size() != m.layers.size()) throw std::invalid_argument("weight file: layer count mismatch");
  for (std::size_t k = 0; k < m.layers.size(); ++k) {
    auto& l = m.layers[k];
    const auto& w = layers[k].at("W");
    const auto b = layers[k].at("b").get<std::vector<double>>();
    if (w.size() != static_cast<std::size_t>(l.W.rows()) || b.size() != static_cast<std::size_t>(l.b.size()))
      throw std::invalid_argument("weight file: layer shape mismatch");
    for (Eigen::Index r = 0; r < l.W.rows(); ++r) {
      const auto row = w[static_cast<std::size_t>(r)].get<std::vector<double>>();
      if (row.size() != static_cast<std::size_t>(l.W.cols()))
        throw std::invalid_argument("weight file: layer shape mismatch");
      for (Eigen::Index c = 0; c < l.W.cols(); ++c) l.W(r, c) = row[static_cast<std::size_t>(c)];
    }
    for (Eigen::Index r = 0; r < l.b.size(); ++r) l.b(r) = b[static_cast<std::size_t>(r)];
  }
  return m;
}

void save_model(const MlpModel& model, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::ios_base::failure("cannot write " + path);
  out << model_to_json(model) << '\n';
  if (!out) throw std::ios_base::failure("write failed: " + path);
}

MlpModel load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::ios_base::failure("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return model_from_json(ss.str());
}

std::vector<double> nn_alpha_field(const MlpModel& model, const PaddedField& u, const GasModel& gas,
                                   Exec exec) {
  const long n_if = static_cast<long>(u.n_cells()) + 1;
  std::vector<double> alpha(static_cast<std::size_t>(n_if));
  for_each_index(exec, n_if, [&](std::ptrdiff_t i) {
    alpha[static_cast<std::size_t>(i)] = predict_alpha(model, nn_input_window(u, i, gas));
  });
  return alpha;
}

Limiter neural_limiter(MlpModel model) {
  if (model.dims.empty() || model.dims.front() != kNnInputs)
    throw std::invalid_argument("neural_limiter: model must take 40 inputs");
  Limiter lim;
  lim.name = "neural";
  lim.half_width = kNnCellsPerSide;
  auto shared = std::make_shared<const MlpModel>(std::move(model));
  lim.alpha = [shared](const StepContext& ctx) { return nn_alpha_field(*shared, ctx.u, ctx.gas, ctx.exec); };
  return lim;
}

}  // namespace gtflux
