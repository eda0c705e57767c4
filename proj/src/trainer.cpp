#include "dfae/trainer.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <stdexcept>

#include "dfae/errors.hpp"
#include "dfae/rng.hpp"

namespace dfae {

AdagradState make_adagrad_state(const NetworkParams& params) {
  AdagradState state;
  state.accumulators.resize(params.layers.size());
  for (std::size_t i = 0; i < params.layers.size(); ++i) {
    state.accumulators[i].weights =
        Eigen::MatrixXd::Zero(params.layers[i].weights.rows(),
                              params.layers[i].weights.cols());
    state.accumulators[i].bias =
        Eigen::VectorXd::Zero(params.layers[i].bias.size());
  }
  return state;
}

void adagrad_step(NetworkParams& params, const NetworkParams& grads,
                  AdagradState& state, double learning_rate, double epsilon) {
  if (grads.layers.size() != params.layers.size() ||
      state.accumulators.size() != params.layers.size()) {
    throw DimensionError("adagrad operands differ in layer count");
  }
  for (std::size_t i = 0; i < params.layers.size(); ++i) {
    Layer& p = params.layers[i];
    const Layer& g = grads.layers[i];
    Layer& acc = state.accumulators[i];
    if (g.weights.rows() != p.weights.rows() ||
        g.weights.cols() != p.weights.cols() ||
        g.bias.size() != p.bias.size()) {
      throw DimensionError("adagrad gradient shape mismatch at layer " +
                           std::to_string(i));
    }
    acc.weights.array() += g.weights.array().square();
    acc.bias.array() += g.bias.array().square();
    p.weights.array() -= learning_rate * g.weights.array() /
                         (acc.weights.array().sqrt() + epsilon);
    p.bias.array() -=
        learning_rate * g.bias.array() / (acc.bias.array().sqrt() + epsilon);
  }
}

namespace {

void check_examples(const std::vector<ExamplePair>& pairs, int m, int n,
                    const char* which) {
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    if (pairs[i].input.size() != m || pairs[i].target.size() != n) {
      throw std::invalid_argument(
          std::string(which) + " example " + std::to_string(i) +
          " has shape (" + std::to_string(pairs[i].input.size()) + ", " +
          std::to_string(pairs[i].target.size()) + "), expected (" +
          std::to_string(m) + ", " + std::to_string(n) + ")");
    }
  }
}

}  // namespace

std::pair<NetworkParams, RunMetrics> train(
    const std::vector<ExamplePair>& train_set, const std::vector<int>& sizes,
    const TrainConfig& cfg, const std::vector<ExamplePair>& test_set) {
  if (cfg.epochs < 1) throw std::invalid_argument("epochs must be >= 1");
  if (cfg.batch_size < 1) throw std::invalid_argument("batch size must be >= 1");
  if (cfg.learning_rate <= 0.0) {
    throw std::invalid_argument("learning rate must be positive");
  }
  if (cfg.eval_every < 1) throw std::invalid_argument("eval_every must be >= 1");
  if (train_set.empty()) throw std::invalid_argument("empty training set");
  if (sizes.size() < 3) {
    throw std::invalid_argument("size chain needs at least one hidden layer");
  }
  const int m = sizes.front();
  const int n = sizes.back();
  check_examples(train_set, m, n, "train");
  check_examples(test_set, m, n, "test");

  NetworkParams params = init_params(sizes, cfg.seed);
  AdagradState state = make_adagrad_state(params);
  RunMetrics metrics;

  std::vector<std::size_t> order(train_set.size());
  std::iota(order.begin(), order.end(), std::size_t{0});

  const auto count = train_set.size();
  Eigen::MatrixXd inputs(m, cfg.batch_size);
  Eigen::MatrixXd targets(n, cfg.batch_size);

  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    const auto epoch_start = std::chrono::steady_clock::now();
    if (cfg.shuffle) {
      std::iota(order.begin(), order.end(), std::size_t{0});
      Rng rng(mix_seed(cfg.seed, static_cast<std::uint64_t>(epoch)));
      rng.shuffle(order);
    }

    double loss_sum = 0.0;
    double mse_sum = 0.0;
    for (std::size_t start = 0; start < count; start += cfg.batch_size) {
      const auto batch =
          std::min<std::size_t>(cfg.batch_size, count - start);
      inputs.resize(m, static_cast<Eigen::Index>(batch));
      targets.resize(n, static_cast<Eigen::Index>(batch));
      for (std::size_t b = 0; b < batch; ++b) {
        inputs.col(static_cast<Eigen::Index>(b)) =
            train_set[order[start + b]].input;
        targets.col(static_cast<Eigen::Index>(b)) =
            train_set[order[start + b]].target;
      }
      const BatchTrace trace = forward_batch(params, inputs);
      for (std::size_t b = 0; b < batch; ++b) {
        const auto col = static_cast<Eigen::Index>(b);
        loss_sum += loss(trace.output().col(col), targets.col(col), cfg.loss);
        mse_sum +=
            (trace.output().col(col) - targets.col(col)).squaredNorm() / n;
      }
      const NetworkParams grads =
          backward_batch(params, trace, targets, cfg.loss);
      adagrad_step(params, grads, state, cfg.learning_rate,
                   cfg.adagrad_epsilon);
      metrics.examples_visited += static_cast<long long>(batch);
    }

    if (epoch % cfg.eval_every == 0 || epoch == cfg.epochs) {
      RunMetrics::Row row;
      row.epoch = epoch;
      row.train_loss = loss_sum / static_cast<double>(count);
      row.train_mse = mse_sum / static_cast<double>(count);
      if (!test_set.empty()) {
        row.test_mse = evaluate(params, test_set);
      }
      row.seconds = std::chrono::duration<double>(
                        std::chrono::steady_clock::now() - epoch_start)
                        .count();
      metrics.rows.push_back(row);
    }
  }

  if (!test_set.empty()) {
    metrics.final_test_mse = evaluate(params, test_set);
  }
  return {std::move(params), std::move(metrics)};
}

double evaluate(const NetworkParams& params,
                const std::vector<ExamplePair>& examples) {
  if (examples.empty()) {
    throw std::invalid_argument("evaluate on an empty dataset");
  }
  double total = 0.0;
  for (const ExamplePair& pair : examples) {
    const ForwardTrace trace = forward(params, pair.input);
    total += (trace.output() - pair.target).squaredNorm() /
             static_cast<double>(pair.target.size());
  }
  return total / static_cast<double>(examples.size());
}

void write_metrics_csv(const std::filesystem::path& path,
                       const RunMetrics& metrics) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) {
    throw std::runtime_error("cannot open metrics CSV for writing: " +
                             path.string());
  }
  out << "epoch,train_loss,train_mse,test_mse,seconds\n";
  char buf[256];
  for (const RunMetrics::Row& row : metrics.rows) {
    std::snprintf(buf, sizeof(buf), "%d,%.17g,%.17g,%.17g,%.6f\n", row.epoch,
                  row.train_loss, row.train_mse, row.test_mse, row.seconds);
    out << buf;
  }
}

}  // namespace dfae
