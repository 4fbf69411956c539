#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "gtflux/mesh.hpp"
#include "gtflux/solver.hpp"

namespace gtflux {

/// Cells per side of the interface seen by the network and values per cell.
inline constexpr int kNnCellsPerSide = 5;
inline constexpr int kNnValuesPerCell = 4;
inline constexpr int kNnInputs = 2 * kNnCellsPerSide * kNnValuesPerCell;

double elu(double x);
double elu_derivative(double x);

struct DenseLayer {
  Eigen::MatrixXd W;  ///< out x in
  Eigen::VectorXd b;
};

/// Fully connected network: ELU after every layer but the last, identity output.
struct MlpModel {
  std::vector<int> dims;
  std::vector<DenseLayer> layers;

  static MlpModel zeros(const std::vector<int>& dims);
  /// Weights uniform in +-sqrt(3 / fan_in), biases zero.
  static MlpModel random(const std::vector<int>& dims, std::uint64_t seed);

  std::size_t parameter_count() const;
  /// Flat parameter access in layer order, W row-major then b.
  double& parameter(std::size_t index);
  double parameter(std::size_t index) const;
};

/// Layer sizes of the DDLFT network.
std::vector<int> default_dims();

double mlp_forward(const MlpModel& model, std::span<const double> input);
double predict_alpha(const MlpModel& model, std::span<const double> input);

/// 40 network inputs for interface i (between cells i-1 and i): (rho, mom, E, p)
/// for cells i-5 .. i+4. `u` needs at least 5 ghosts.
std::vector<double> nn_input_window(const PaddedField& u, long interface, const GasModel& gas);

enum class LossKind { mse, mexp, nonsym };

inline constexpr double kNonsymGamma = 10.0;

LossKind parse_loss(const std::string& name);
const char* to_string(LossKind kind);

/// Per-sample loss d(prediction, target) and its derivative in the prediction.
double sample_loss(double prediction, double target, LossKind kind);
double sample_loss_derivative(double prediction, double target, LossKind kind);

/// Mean loss over the samples.
double loss(std::span<const double> predictions, std::span<const double> targets, LossKind kind);

/// Row-major sample matrix with one target per row.
struct Dataset {
  std::size_t n_inputs{kNnInputs};
  std::vector<double> inputs;
  std::vector<double> targets;

  std::size_t size() const { return targets.size(); }
  std::span<const double> row(std::size_t i) const { return {inputs.data() + i * n_inputs, n_inputs}; }
  void add(std::span<const double> input, double target);
};

/// Mean loss of the rows listed in `batch`, and its exact gradient (same shape
/// as the model) written to `grad`.
double backprop(const MlpModel& model, const Dataset& data, std::span<const std::size_t> batch,
                LossKind kind, MlpModel& grad);

struct AdamState {
  MlpModel m;
  MlpModel v;
  long t{0};
  double beta1{0.9};
  double beta2{0.999};
  double eps{1e-8};

  explicit AdamState(const MlpModel& shape);
};

void adam_step(MlpModel& params, const MlpModel& grads, AdamState& state, double step_size);

struct TrainingSection {
  int epochs{25};
  std::size_t batch_size{32};
  double step_size{1e-3};
};

struct TrainingSchedule {
  std::vector<TrainingSection> sections;

  /// Seven sections of 25 epochs, batch 32 .. 4096, step 1e-3 .. 1e-6.
  static TrainingSchedule full();
  /// First two sections of the full schedule.
  static TrainingSchedule quick();
  static TrainingSchedule parse(const std::string& name);
};

struct TrainResult {
  MlpModel model;
  std::vector<double> epoch_loss;  ///< mean training loss of each epoch
  std::vector<int> epoch_section;
};

using EpochCallback = std::function<void(int section, int epoch, double mean_loss)>;

/// Trains `initial` with ADAM; rows are reshuffled every epoch from a
/// generator seeded with `seed`.
TrainResult train(const Dataset& data, const TrainingSchedule& schedule, LossKind kind,
                  std::uint64_t seed, const MlpModel& initial, const EpochCallback& on_epoch = {});

/// Same, starting from MlpModel::random(default_dims(), seed).
TrainResult train(const Dataset& data, const TrainingSchedule& schedule, LossKind kind,
                  std::uint64_t seed, const EpochCallback& on_epoch = {});

std::string model_to_json(const MlpModel& model);
MlpModel model_from_json(const std::string& text);
void save_model(const MlpModel& model, const std::string& path);
MlpModel load_model(const std::string& path);

/// Per-interface alpha from the network on the current field.
std::vector<double> nn_alpha_field(const MlpModel& model, const PaddedField& u, const GasModel& gas,
                                   Exec exec = Exec::serial);

Limiter neural_limiter(MlpModel model);

}  // namespace gtflux
