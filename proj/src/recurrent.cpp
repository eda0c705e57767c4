#include "dfae/recurrent.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "dfae/errors.hpp"
#include "dfae/png_io.hpp"
#include "dfae/rng.hpp"
#include "dfae/viz.hpp"

namespace dfae {

namespace {

constexpr double kLn10 = 2.302585092994046;

// Flat indices of a rect's values in an H x W x C raster, raster order.
std::vector<Eigen::Index> rect_indices(const Rect& rect, int width,
                                       int channels) {
  std::vector<Eigen::Index> idx;
  idx.reserve(static_cast<std::size_t>(rect.height) * rect.width * channels);
  for (int r = rect.top; r < rect.top + rect.height; ++r) {
    for (int c = rect.left; c < rect.left + rect.width; ++c) {
      for (int ch = 0; ch < channels; ++ch) {
        idx.push_back((static_cast<Eigen::Index>(r) * width + c) * channels +
                      ch);
      }
    }
  }
  return idx;
}

double slice_negated_psnr(const Eigen::VectorXd& prediction,
                          const Eigen::VectorXd& target,
                          const std::vector<Eigen::Index>& idx) {
  double sum = 0.0;
  for (Eigen::Index i : idx) {
    const double d = prediction(i) - target(i);
    sum += d * d;
  }
  const double m = sum / static_cast<double>(idx.size());
  return 0.5 * std::log10(std::max(m, kPsnrEpsilon));
}

// d(slice loss)/d(prediction), scattered into a full-length vector.
void add_slice_psnr_gradient(const Eigen::VectorXd& prediction,
                             const Eigen::VectorXd& target,
                             const std::vector<Eigen::Index>& idx,
                             double weight, Eigen::VectorXd& grad) {
  double sum = 0.0;
  for (Eigen::Index i : idx) {
    const double d = prediction(i) - target(i);
    sum += d * d;
  }
  const auto n = static_cast<double>(idx.size());
  const double m = sum / n;
  if (m <= kPsnrEpsilon) return;  // flat clamp region
  const double scale = weight / (n * m * kLn10);
  for (Eigen::Index i : idx) {
    grad(i) += scale * (prediction(i) - target(i));
  }
}

}  // namespace

int SaccadeSpace::input_len() const {
  return loci.empty() ? 0
                      : make_layout(spec, image_height, image_width,
                                    image_channels, loci.front())
                            .total_len;
}

int SaccadeSpace::output_len() const {
  return image_height * image_width * image_channels;
}

SaccadeSpace make_saccade_space(int height, int width, int channels,
                                const FoveationSpec& spec) {
  if (spec.kind != FoveationKind::Fovea &&
      spec.kind != FoveationKind::FoveaAchromatic) {
    throw SpecError("saccade space needs a fovea-style foveation");
  }
  SaccadeSpace space;
  space.spec = spec;
  space.spec.location = Location{LocationKind::Centered, 0};
  space.image_height = height;
  space.image_width = width;
  space.image_channels = channels;

  Rng dummy(0);
  const Rect centered = resolve_location(space.spec, height, width, dummy);
  space.fovea_side = centered.height;
  if (space.fovea_side <= 0) {
    throw SpecError("saccade space needs a non-empty fovea");
  }
  for (int top = 0; top + space.fovea_side <= height; top += spec.factor) {
    for (int left = 0; left + space.fovea_side <= width;
         left += spec.factor) {
      space.loci.push_back(
          Rect{top, left, space.fovea_side, space.fovea_side});
    }
  }
  return space;
}

RecurrentParams init_recurrent(const SaccadeSpace& space, int hidden,
                               std::uint64_t seed) {
  if (hidden < 1) throw std::invalid_argument("hidden size must be positive");
  const int m = space.input_len();
  const int n = space.output_len();
  const auto loci = static_cast<int>(space.loci.size());
  Rng rng(seed);
  const auto fill = [&rng](Eigen::MatrixXd& mat, int rows, int cols) {
    mat.resize(rows, cols);
    for (Eigen::Index r = 0; r < mat.rows(); ++r) {
      for (Eigen::Index c = 0; c < mat.cols(); ++c) {
        mat(r, c) = rng.uniform(-0.1, 0.1);
      }
    }
  };
  RecurrentParams params;
  fill(params.encoder.weights, hidden, m);
  params.encoder.bias.resize(hidden);
  for (Eigen::Index i = 0; i < hidden; ++i) {
    params.encoder.bias(i) = rng.uniform(-0.1, 0.1);
  }
  fill(params.recurrence, hidden, hidden);
  fill(params.saccade, loci, hidden);
  fill(params.decoder.weights, n, hidden);
  params.decoder.bias.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    params.decoder.bias(i) = rng.uniform(-0.1, 0.1);
  }
  return params;
}

RecurrentStepResult recurrent_step(const RecurrentParams& params,
                                   const SaccadeSpace& space,
                                   const Eigen::VectorXd& h_prev,
                                   const Image& img, int locus) {
  if (locus < 0 || locus >= static_cast<int>(space.loci.size())) {
    throw std::invalid_argument("locus " + std::to_string(locus) +
                                " is off the candidate grid of " +
                                std::to_string(space.loci.size()));
  }
  if (h_prev.size() != params.hidden_size()) {
    throw DimensionError("hidden state size mismatch");
  }
  RecurrentStepResult result;
  result.foveated = foveate_at(img, space.spec, space.loci[locus]);
  result.input = center(Eigen::Map<const Eigen::VectorXd>(
      result.foveated.values.data(),
      static_cast<Eigen::Index>(result.foveated.values.size())));

  const Eigen::VectorXd z = params.encoder.weights * result.input +
                            params.recurrence * h_prev + params.encoder.bias;
  result.hidden = z.array().tanh();

  const Eigen::VectorXd scores = params.saccade * result.hidden;
  Eigen::Index best = 0;
  scores.maxCoeff(&best);  // first maximum wins ties
  result.next_locus = static_cast<int>(best);

  const Eigen::VectorXd zy =
      params.decoder.weights * result.hidden + params.decoder.bias;
  result.output = zy.unaryExpr(
      [](double v) { return 1.0 / (1.0 + std::exp(-v)); });
  return result;
}

Rollout rollout(const RecurrentParams& params, const SaccadeSpace& space,
                const Image& img, int steps, int initial_locus,
                double final_weight, const std::vector<int>* pinned_loci) {
  if (steps < 1) throw std::invalid_argument("rollout needs at least one step");
  if (pinned_loci && static_cast<int>(pinned_loci->size()) != steps) {
    throw std::invalid_argument("pinned loci count differs from step count");
  }
  const Eigen::VectorXd target = Eigen::Map<const Eigen::VectorXd>(
      img.data.data(), static_cast<Eigen::Index>(img.data.size()));

  Rollout out;
  out.final_weight = final_weight;
  out.steps.reserve(static_cast<std::size_t>(steps));

  Eigen::VectorXd h = Eigen::VectorXd::Zero(params.hidden_size());
  int locus = pinned_loci ? (*pinned_loci)[0] : initial_locus;
  double prediction_total = 0.0;
  for (int t = 0; t < steps; ++t) {
    RecurrentStepResult step = recurrent_step(params, space, h, img, locus);
    RolloutStep record;
    record.locus = locus;
    record.region = space.loci[static_cast<std::size_t>(locus)];
    record.foveated = std::move(step.foveated);
    record.input = std::move(step.input);
    record.hidden = step.hidden;
    record.output = std::move(step.output);
    if (t > 0) {
      const auto idx = rect_indices(record.region, space.image_width,
                                    space.image_channels);
      record.step_loss = slice_negated_psnr(
          out.steps.back().output, target, idx);
      prediction_total += record.step_loss;
    }
    out.steps.push_back(std::move(record));
    h = step.hidden;
    locus = pinned_loci && t + 1 < steps ? (*pinned_loci)[t + 1]
                                         : step.next_locus;
  }

  const double full_mse =
      (out.steps.back().output - target).squaredNorm() /
      static_cast<double>(target.size());
  out.final_loss = 0.5 * std::log10(std::max(full_mse, kPsnrEpsilon));
  out.total_loss = prediction_total + final_weight * out.final_loss;
  return out;
}

RecurrentParams rollout_backward(const RecurrentParams& params,
                                 const SaccadeSpace& space, const Image& img,
                                 const Rollout& rollout) {
  const auto steps = static_cast<int>(rollout.steps.size());
  if (steps < 1) throw std::invalid_argument("empty rollout");
  const Eigen::VectorXd target = Eigen::Map<const Eigen::VectorXd>(
      img.data.data(), static_cast<Eigen::Index>(img.data.size()));
  const auto n = target.size();

  RecurrentParams grads;
  grads.encoder.weights = Eigen::MatrixXd::Zero(
      params.encoder.weights.rows(), params.encoder.weights.cols());
  grads.encoder.bias = Eigen::VectorXd::Zero(params.encoder.bias.size());
  grads.recurrence =
      Eigen::MatrixXd::Zero(params.recurrence.rows(), params.recurrence.cols());
  grads.saccade =
      Eigen::MatrixXd::Zero(params.saccade.rows(), params.saccade.cols());
  grads.decoder.weights = Eigen::MatrixXd::Zero(
      params.decoder.weights.rows(), params.decoder.weights.cols());
  grads.decoder.bias = Eigen::VectorXd::Zero(params.decoder.bias.size());

  Eigen::VectorXd carry = Eigen::VectorXd::Zero(params.hidden_size());
  for (int t = steps - 1; t >= 0; --t) {
    const RolloutStep& step = rollout.steps[static_cast<std::size_t>(t)];

    Eigen::VectorXd dy = Eigen::VectorXd::Zero(n);
    if (t == steps - 1 && rollout.final_weight != 0.0) {
      const double m = (step.output - target).squaredNorm() /
                       static_cast<double>(n);
      if (m > kPsnrEpsilon) {
        dy += (rollout.final_weight / (static_cast<double>(n) * m * kLn10)) *
              (step.output - target);
      }
    }
    if (t + 1 < steps) {
      // This step's prediction is graded against the next glimpse.
      const RolloutStep& next = rollout.steps[static_cast<std::size_t>(t + 1)];
      const auto idx = rect_indices(next.region, space.image_width,
                                    space.image_channels);
      add_slice_psnr_gradient(step.output, target, idx, 1.0, dy);
    }

    const Eigen::VectorXd delta_dec =
        dy.cwiseProduct(step.output.cwiseProduct(
            (1.0 - step.output.array()).matrix()));
    grads.decoder.weights += delta_dec * step.hidden.transpose();
    grads.decoder.bias += delta_dec;

    const Eigen::VectorXd dh =
        params.decoder.weights.transpose() * delta_dec + carry;
    const Eigen::VectorXd zeta =
        dh.cwiseProduct((1.0 - step.hidden.array().square()).matrix());
    grads.encoder.weights += zeta * step.input.transpose();
    grads.encoder.bias += zeta;
    if (t > 0) {
      grads.recurrence +=
          zeta * rollout.steps[static_cast<std::size_t>(t - 1)].hidden
                     .transpose();
    }
    carry = params.recurrence.transpose() * zeta;
  }
  return grads;
}

void write_rollout_strip(const std::filesystem::path& path,
                         const SaccadeSpace& space, const Rollout& rollout) {
  std::vector<Image> cells;
  cells.reserve(rollout.steps.size() * 2);
  for (const RolloutStep& step : rollout.steps) {
    cells.push_back(render_foveated(step.foveated, space.image_height,
                                    space.image_width));
  }
  for (const RolloutStep& step : rollout.steps) {
    Image pred(space.image_height, space.image_width, space.image_channels);
    for (Eigen::Index i = 0; i < step.output.size(); ++i) {
      pred.data[static_cast<std::size_t>(i)] = step.output(i);
    }
    cells.push_back(std::move(pred));
  }
  write_png(path, tile_grid(cells, static_cast<int>(rollout.steps.size())));
}

void write_rollout_csv(const std::filesystem::path& path,
                       const Rollout& rollout) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) {
    throw std::runtime_error("cannot open rollout CSV for writing: " +
                             path.string());
  }
  out << "step,locus,loss\n";
  char buf[128];
  for (std::size_t t = 0; t < rollout.steps.size(); ++t) {
    std::snprintf(buf, sizeof(buf), "%zu,%d,%.17g\n", t,
                  rollout.steps[t].locus, rollout.steps[t].step_loss);
    out << buf;
  }
}

}  // namespace dfae
