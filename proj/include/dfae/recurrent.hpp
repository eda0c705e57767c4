#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <filesystem>
#include <vector>

#include "dfae/foveation.hpp"
#include "dfae/image.hpp"
#include "dfae/network.hpp"

namespace dfae {

/// Parameters of the recurrent model: a one-layer encoder whose
/// pre-activation also receives the previous hidden state through the
/// recurrence matrix, a saccade head scoring candidate loci, and a
/// logistic decoder back to image space.
struct RecurrentParams {
  Layer encoder;               // hidden x m, with bias
  Eigen::MatrixXd recurrence;  // hidden x hidden
  Eigen::MatrixXd saccade;     // num_loci x hidden
  Layer decoder;               // n x hidden, with bias

  int hidden_size() const { return static_cast<int>(encoder.bias.size()); }
};

/// The discrete set of fovea placements on the block grid of one image
/// geometry, in raster order.
struct SaccadeSpace {
  FoveationSpec spec;
  int image_height = 0;
  int image_width = 0;
  int image_channels = 1;
  int fovea_side = 0;
  std::vector<Rect> loci;

  int input_len() const;   // m of one foveated glimpse
  int output_len() const;  // n of the full image
};

SaccadeSpace make_saccade_space(int height, int width, int channels,
                                const FoveationSpec& spec);

RecurrentParams init_recurrent(const SaccadeSpace& space, int hidden,
                               std::uint64_t seed);

struct RecurrentStepResult {
  Eigen::VectorXd hidden;
  int next_locus = 0;
  Eigen::VectorXd output;
  FoveatedInput foveated;      // raw glimpse, for rendering
  Eigen::VectorXd input;       // centered glimpse the encoder saw
};

/// One step: foveate at the locus, fold the previous hidden state in,
/// score the next locus (argmax, ties to the lowest index), decode.
RecurrentStepResult recurrent_step(const RecurrentParams& params,
                                   const SaccadeSpace& space,
                                   const Eigen::VectorXd& h_prev,
                                   const Image& img, int locus);

struct RolloutStep {
  int locus = 0;
  Rect region;
  FoveatedInput foveated;
  Eigen::VectorXd input;
  Eigen::VectorXd hidden;
  Eigen::VectorXd output;
  double step_loss = 0.0;  // next-foveation prediction loss, 0 at step 0
};

struct Rollout {
  std::vector<RolloutStep> steps;
  double final_loss = 0.0;   // full-image term, pre-weighting
  double final_weight = 0.0;
  double total_loss = 0.0;   // sum of step losses + weight * final term
};

/// Runs T steps from the initial locus. Step t >= 1 is charged the negated
/// PSNR between the fovea content it reveals and the same slice of the
/// previous prediction. When pinned_loci is given it overrides the saccade
/// head's choices (the head's scores are still recorded via next_locus).
Rollout rollout(const RecurrentParams& params, const SaccadeSpace& space,
                const Image& img, int steps, int initial_locus,
                double final_weight = 0.0,
                const std::vector<int>* pinned_loci = nullptr);

/// Exact gradients of the rollout's total loss via backpropagation through
/// time. Loci are treated as given: nothing flows through the argmax, so
/// the saccade head's gradient is zero.
RecurrentParams rollout_backward(const RecurrentParams& params,
                                 const SaccadeSpace& space, const Image& img,
                                 const Rollout& rollout);

/// Per-step foveation above its prediction, tiled left to right.
void write_rollout_strip(const std::filesystem::path& path,
                         const SaccadeSpace& space, const Rollout& rollout);

/// CSV with header step,locus,loss.
void write_rollout_csv(const std::filesystem::path& path,
                       const Rollout& rollout);

}  // namespace dfae
