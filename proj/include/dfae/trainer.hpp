#pragma once

#include <cstdint>
#include <filesystem>
#include <limits>
#include <utility>
#include <vector>

#include "dfae/datasets.hpp"
#include "dfae/network.hpp"

namespace dfae {

struct TrainConfig {
  int epochs = 1000;
  double learning_rate = 1.0;
  int batch_size = 1;
  std::uint64_t seed = 0;
  double adagrad_epsilon = 1e-8;
  bool shuffle = true;
  int eval_every = 10;
  LossKind loss = LossKind::Psnr;
};

/// Per-parameter sums of squared gradients; element-wise non-decreasing.
struct AdagradState {
  std::vector<Layer> accumulators;
};

AdagradState make_adagrad_state(const NetworkParams& params);

/// acc += g^2; param -= lr * g / (sqrt(acc) + eps), element-wise.
void adagrad_step(NetworkParams& params, const NetworkParams& grads,
                  AdagradState& state, double learning_rate, double epsilon);

struct RunMetrics {
  struct Row {
    int epoch = 0;
    double train_loss = 0.0;
    double train_mse = 0.0;
    double test_mse = std::numeric_limits<double>::quiet_NaN();
    double seconds = 0.0;  // wall clock, excluded from determinism contracts
  };
  std::vector<Row> rows;
  double final_test_mse = std::numeric_limits<double>::quiet_NaN();
  long long examples_visited = 0;
};

/// CSV with header epoch,train_loss,train_mse,test_mse,seconds.
void write_metrics_csv(const std::filesystem::path& path,
                       const RunMetrics& metrics);

/// Adagrad training over the example pairs: every epoch visits each example
/// once in seeded-shuffled order, per-batch gradients are averaged, and the
/// whole run is a deterministic function of (data, sizes, cfg).
std::pair<NetworkParams, RunMetrics> train(
    const std::vector<ExamplePair>& train_set, const std::vector<int>& sizes,
    const TrainConfig& cfg, const std::vector<ExamplePair>& test_set = {});

/// Mean over examples of mse(target, network output).
double evaluate(const NetworkParams& params,
                const std::vector<ExamplePair>& examples);

/// The paper-style percent scale for reconstruction error.
inline double mse_percent(double mse_value) { return 100.0 * mse_value; }

}  // namespace dfae
