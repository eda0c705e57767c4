#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <filesystem>
#include <vector>

#include "dfae/foveation.hpp"
#include "dfae/image.hpp"

namespace dfae {

struct Layer {
  Eigen::MatrixXd weights;  // out x in
  Eigen::VectorXd bias;     // out
};

/// Dense network parameters: tanh hidden layers, logistic output. The size
/// chain runs [m, h1, ..., hk, n] from foveated input to full image.
struct NetworkParams {
  std::vector<Layer> layers;

  std::vector<int> sizes() const;
  int input_size() const;
  int output_size() const;
  int hidden_layer_count() const {
    return static_cast<int>(layers.size()) - 1;
  }
};

/// Everything backprop needs from one forward pass over a batch
/// (columns are examples).
struct BatchTrace {
  Eigen::MatrixXd input;
  std::vector<Eigen::MatrixXd> activations;  // h0..h_{k-1}, then y
  const Eigen::MatrixXd& output() const { return activations.back(); }
};

/// Single-example trace with the per-layer vectors.
struct ForwardTrace {
  Eigen::VectorXd input;
  std::vector<Eigen::VectorXd> preactivations;
  std::vector<Eigen::VectorXd> activations;
  const Eigen::VectorXd& output() const { return activations.back(); }
};

enum class LossKind { Psnr, Mse, CrossEntropy };

/// All weights and biases drawn uniformly from [-0.1, 0.1].
NetworkParams init_params(const std::vector<int>& sizes, std::uint64_t seed);

ForwardTrace forward(const NetworkParams& params, const Eigen::VectorXd& input);
BatchTrace forward_batch(const NetworkParams& params,
                         const Eigen::MatrixXd& inputs);

/// Training objective. Psnr minimizes 0.5*log10(max(mse, eps)), i.e. the
/// negated PSNR quality score.
double loss(const Eigen::VectorXd& output, const Eigen::VectorXd& target,
            LossKind kind = LossKind::Psnr);

/// Exact parameter gradients of the loss via the chain rule. Returned
/// gradients share NetworkParams shapes.
NetworkParams backward(const NetworkParams& params, const ForwardTrace& trace,
                       const Eigen::VectorXd& target,
                       LossKind kind = LossKind::Psnr);

/// Batched gradients, averaged over the batch columns.
NetworkParams backward_batch(const NetworkParams& params,
                             const BatchTrace& trace,
                             const Eigen::MatrixXd& targets,
                             LossKind kind = LossKind::Psnr);

/// Runs the network on a foveated input and reshapes the output to the
/// source image geometry.
Image reconstruct(const NetworkParams& params, const FoveatedInput& fi);

/// Versioned binary checkpoint, bit-exact across round-trips.
void save_checkpoint(const std::filesystem::path& path,
                     const NetworkParams& params);
NetworkParams load_checkpoint(const std::filesystem::path& path);

}  // namespace dfae
