// Acceptance suite: one pass/fail line per criterion, nonzero exit when any
// fails. Uses real MNIST/CIFAR-100 files from $DFAE_DATA_DIR when present,
// otherwise deterministic synthetic corpora written and re-read through the
// production file parsers.

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "dfae/cli.hpp"
#include "dfae/config.hpp"
#include "dfae/datasets.hpp"
#include "dfae/foveation.hpp"
#include "dfae/network.hpp"
#include "dfae/recurrent.hpp"
#include "dfae/rng.hpp"
#include "dfae/synth.hpp"
#include "dfae/trainer.hpp"

using namespace dfae;

namespace {

int failures = 0;

struct Timer {
  std::chrono::steady_clock::time_point start =
      std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start)
        .count();
  }
};

void report(int criterion, bool pass, const std::string& detail) {
  std::printf("[%s] criterion %2d: %s\n", pass ? "PASS" : "FAIL", criterion,
              detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

std::string fmt(const char* format, ...) {
  char buf[512];
  va_list args;
  va_start(args, format);
  std::vsnprintf(buf, sizeof(buf), format, args);
  va_end(args);
  return buf;
}

// ---------------------------------------------------------------------------
// Data staging

struct Corpus {
  std::filesystem::path mnist_train_images, mnist_train_labels;
  std::filesystem::path mnist_test_images, mnist_test_labels;
  std::filesystem::path cifar_train, cifar_test;
  bool real = false;
};

Corpus stage_data(const std::filesystem::path& work) {
  Corpus corpus;
  if (const char* env = std::getenv("DFAE_DATA_DIR")) {
    const std::filesystem::path base(env);
    corpus.mnist_train_images = base / "train-images-idx3-ubyte";
    corpus.mnist_train_labels = base / "train-labels-idx1-ubyte";
    corpus.mnist_test_images = base / "t10k-images-idx3-ubyte";
    corpus.mnist_test_labels = base / "t10k-labels-idx1-ubyte";
    corpus.cifar_train = base / "train.bin";
    corpus.cifar_test = base / "test.bin";
    corpus.real = std::filesystem::exists(corpus.mnist_train_images) &&
                  std::filesystem::exists(corpus.mnist_test_images) &&
                  std::filesystem::exists(corpus.cifar_train) &&
                  std::filesystem::exists(corpus.cifar_test);
    if (corpus.real) {
      std::printf("data: real files from %s\n", env);
      return corpus;
    }
  }

  std::filesystem::create_directories(work);
  corpus.mnist_train_images = work / "train-images-idx3-ubyte";
  corpus.mnist_train_labels = work / "train-labels-idx1-ubyte";
  corpus.mnist_test_images = work / "t10k-images-idx3-ubyte";
  corpus.mnist_test_labels = work / "t10k-labels-idx1-ubyte";
  corpus.cifar_train = work / "train.bin";
  corpus.cifar_test = work / "test.bin";

  synth::write_idx(synth::digits(2000, 101), corpus.mnist_train_images,
                   corpus.mnist_train_labels);
  synth::write_idx(synth::digits(500, 102), corpus.mnist_test_images,
                   corpus.mnist_test_labels);
  synth::write_cifar(synth::natural(2000, 103), corpus.cifar_train);
  synth::write_cifar(synth::natural(500, 104), corpus.cifar_test);
  std::printf("data: synthetic stand-in corpora in %s\n",
              work.string().c_str());
  return corpus;
}

// Shared training budgets.
constexpr int kMnistHidden = 100;
constexpr int kCifarHidden = 200;
constexpr int kEpochs = 50;
constexpr std::uint64_t kDataSeed = 7;
constexpr std::uint64_t kTrainSeed = 42;

// Shared optimizer settings for every training-based criterion: the paper's
// learning rate with minibatching for desk-scale speed, and an adagrad
// epsilon that acts as a warm-start floor for the zero-initialized
// accumulator (with eps at the default 1e-8 the very first update moves
// every weight by almost exactly +-lr, saturating the logistic layer).
constexpr int kBatch = 20;
constexpr double kAdagradEps = 0.1;

TrainConfig budget() {
  TrainConfig cfg;
  cfg.epochs = kEpochs;
  cfg.learning_rate = 1.0;
  cfg.batch_size = kBatch;
  cfg.seed = kTrainSeed;
  cfg.adagrad_epsilon = kAdagradEps;
  cfg.eval_every = kEpochs;
  return cfg;
}

double trained_test_mse(const Dataset& train_ds, const Dataset& test_ds,
                        const FoveationSpec& spec, int hidden,
                        const TrainConfig& cfg) {
  const FoveatedDataset fov_train = foveate_dataset(train_ds, spec, kDataSeed);
  const FoveatedDataset fov_test =
      foveate_dataset(test_ds, spec, kDataSeed + 1);
  const int n = fov_train.image_height * fov_train.image_width *
                fov_train.image_channels;
  const std::vector<int> sizes = {fov_train.layout.total_len, hidden, n};
  auto [params, metrics] = train(fov_train.pairs, sizes, cfg, fov_test.pairs);
  return metrics.final_test_mse;
}

// ---------------------------------------------------------------------------
// Criterion 1: gradient correctness on random dense nets.

void criterion_gradients() {
  Timer timer;
  Rng rng(2024);
  double worst = 0.0;
  for (int net = 0; net < 50; ++net) {
    const int k = 1 + static_cast<int>(rng.index(3));
    std::vector<int> sizes;
    sizes.push_back(2 + static_cast<int>(rng.index(19)));
    for (int i = 0; i < k; ++i) {
      sizes.push_back(2 + static_cast<int>(rng.index(19)));
    }
    sizes.push_back(2 + static_cast<int>(rng.index(19)));
    NetworkParams params = init_params(sizes, rng.index(1u << 30));

    Eigen::VectorXd input(sizes.front());
    for (Eigen::Index i = 0; i < input.size(); ++i) {
      input(i) = rng.uniform(-0.5, 0.5);
    }
    Eigen::VectorXd target(sizes.back());
    for (Eigen::Index i = 0; i < target.size(); ++i) {
      target(i) = rng.uniform(0.05, 0.95);
    }

    const ForwardTrace trace = forward(params, input);
    const NetworkParams analytic = backward(params, trace, target);

    const double step = 1e-5;
    for (std::size_t li = 0; li < params.layers.size(); ++li) {
      Layer& layer = params.layers[li];
      const auto check_entry = [&](double& value, double grad) {
        const double saved = value;
        value = saved + step;
        const double plus = loss(forward(params, input).output(), target);
        value = saved - step;
        const double minus = loss(forward(params, input).output(), target);
        value = saved;
        const double fd = (plus - minus) / (2.0 * step);
        const double denom = std::max({std::abs(fd), std::abs(grad), 1e-6});
        worst = std::max(worst, std::abs(fd - grad) / denom);
      };
      for (Eigen::Index r = 0; r < layer.weights.rows(); ++r) {
        for (Eigen::Index c = 0; c < layer.weights.cols(); ++c) {
          check_entry(layer.weights(r, c), analytic.layers[li].weights(r, c));
        }
      }
      for (Eigen::Index i = 0; i < layer.bias.size(); ++i) {
        check_entry(layer.bias(i), analytic.layers[li].bias(i));
      }
    }
  }
  const double secs = timer.seconds();
  report(1, worst < 1e-4 && secs < 10.0,
         fmt("backward vs central differences, 50 nets: max rel err %.3g "
             "(< 1e-4), %.1fs (< 10s)",
             worst, secs));
}

// ---------------------------------------------------------------------------
// Criterion 2: gradient correctness through a T=3 rollout.

void criterion_recurrent_gradients() {
  Timer timer;
  Rng rng(55);
  Image img(8, 8, 1);
  for (double& v : img.data) v = rng.unit();
  const FoveationSpec spec{FoveationKind::Fovea, 0.25, 2,
                           Location{LocationKind::Centered, 0}};
  const SaccadeSpace space = make_saccade_space(8, 8, 1, spec);
  RecurrentParams params = init_recurrent(space, 5, 99);

  const int steps = 3;
  const double final_weight = 0.5;
  const Rollout probe = rollout(params, space, img, steps, 1, final_weight);
  std::vector<int> pinned;
  for (const RolloutStep& s : probe.steps) pinned.push_back(s.locus);

  const Rollout base =
      rollout(params, space, img, steps, 1, final_weight, &pinned);
  const RecurrentParams analytic =
      rollout_backward(params, space, img, base);

  const double step = 1e-5;
  double worst = 0.0;
  const auto check_entry = [&](double& value, double grad) {
    const double saved = value;
    value = saved + step;
    const double plus =
        rollout(params, space, img, steps, 1, final_weight, &pinned)
            .total_loss;
    value = saved - step;
    const double minus =
        rollout(params, space, img, steps, 1, final_weight, &pinned)
            .total_loss;
    value = saved;
    const double fd = (plus - minus) / (2.0 * step);
    const double denom = std::max({std::abs(fd), std::abs(grad), 1e-6});
    worst = std::max(worst, std::abs(fd - grad) / denom);
  };
  const auto check_matrix = [&](Eigen::MatrixXd& m, const Eigen::MatrixXd& g) {
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      for (Eigen::Index c = 0; c < m.cols(); ++c) {
        check_entry(m(r, c), g(r, c));
      }
    }
  };
  check_matrix(params.encoder.weights, analytic.encoder.weights);
  for (Eigen::Index i = 0; i < params.encoder.bias.size(); ++i) {
    check_entry(params.encoder.bias(i), analytic.encoder.bias(i));
  }
  check_matrix(params.recurrence, analytic.recurrence);
  check_matrix(params.saccade, analytic.saccade);
  check_matrix(params.decoder.weights, analytic.decoder.weights);
  for (Eigen::Index i = 0; i < params.decoder.bias.size(); ++i) {
    check_entry(params.decoder.bias(i), analytic.decoder.bias(i));
  }

  const double secs = timer.seconds();
  report(2, worst < 1e-4 && secs < 10.0,
         fmt("T=3 rollout vs central differences: max rel err %.3g "
             "(< 1e-4), %.1fs (< 10s)",
             worst, secs));
}

// ---------------------------------------------------------------------------
// Criteria 3, 4, 8, 9: MNIST downsampling experiments.

struct MnistResults {
  double dfae_mse = 0.0;
  double bilinear_mse = 0.0;
};

void criteria_mnist(const Corpus& corpus,
                    const std::filesystem::path& work) {
  // Criterion 3 config: 2000 train / 500 held-out, d=4, hidden 100,
  // 50 epochs, lr 1.0, fixed seed, pure SGD.
  Dataset train_full = load_mnist(corpus.mnist_train_images,
                                  corpus.mnist_train_labels, Split::Train);
  Dataset test_full = load_mnist(corpus.mnist_test_images,
                                 corpus.mnist_test_labels, Split::Test);
  const Dataset train_ds =
      train_full.size() > 2000 ? subsample(train_full, 2000, kDataSeed)
                               : train_full;
  const Dataset test_ds = test_full.size() > 500
                              ? subsample(test_full, 500, kDataSeed + 1)
                              : test_full;

  // Criterion 3: the trained network beats bilinear upsampling.
  {
    Timer timer;
    const FoveationSpec spec{FoveationKind::Downsample, 0.0, 4, {}};
    const double dfae_mse =
        trained_test_mse(train_ds, test_ds, spec, kMnistHidden, budget());
    double bilinear = 0.0;
    for (const Image& img : test_ds.images) {
      bilinear += mse(upsample_bilinear(downsample_nearest(img, 4),
                                        img.height, img.width),
                      img);
    }
    bilinear /= static_cast<double>(test_ds.size());
    const double secs = timer.seconds();
    report(3, dfae_mse < bilinear && secs < 300.0,
           fmt("d=4 hidden=%d: dfae test mse %.5f < bilinear %.5f, %.0fs "
               "(< 300s)",
               kMnistHidden, dfae_mse, bilinear, secs));

    // Criterion 8: an under-complete net (hidden 10 < m = 49) does worse.
    const double small_mse =
        trained_test_mse(train_ds, test_ds, spec, 10, budget());
    report(8, small_mse > dfae_mse,
           fmt("hidden=10 test mse %.5f > hidden=%d test mse %.5f", small_mse,
               kMnistHidden, dfae_mse));
  }

  // Criterion 4: interpolator ordering over factors {2, 4, 7}.
  {
    const std::vector<int> factors = {2, 4, 7};
    std::vector<double> nearest(factors.size(), 0.0);
    std::vector<double> bilinear(factors.size(), 0.0);
    for (std::size_t fi = 0; fi < factors.size(); ++fi) {
      for (const Image& img : test_ds.images) {
        const Image small = downsample_nearest(img, factors[fi]);
        nearest[fi] +=
            mse(upsample_nearest(small, img.height, img.width), img);
        bilinear[fi] +=
            mse(upsample_bilinear(small, img.height, img.width), img);
      }
      nearest[fi] /= static_cast<double>(test_ds.size());
      bilinear[fi] /= static_cast<double>(test_ds.size());
    }
    bool ordered = true;
    for (std::size_t fi = 0; fi < factors.size(); ++fi) {
      ordered = ordered && nearest[fi] >= bilinear[fi];
      if (fi > 0) {
        ordered = ordered && nearest[fi] >= nearest[fi - 1] &&
                  bilinear[fi] >= bilinear[fi - 1];
      }
    }
    report(4, ordered,
           fmt("nearest {%.5f, %.5f, %.5f} >= bilinear {%.5f, %.5f, %.5f}, "
               "both non-decreasing over d={2,4,7}",
               nearest[0], nearest[1], nearest[2], bilinear[0], bilinear[1],
               bilinear[2]));
  }

  // Criterion 9: two CLI runs of the criterion-3 config are bit-identical
  // up to the wall-clock column.
  {
    const auto cfg_path = work / "criterion3.ini";
    const auto dir_a = work / "run_a";
    const auto dir_b = work / "run_b";
    const auto write_cfg = [&](const std::filesystem::path& out_dir) {
      std::ofstream out(cfg_path, std::ios::trunc);
      out << "[dataset]\nname = mnist\n"
          << "images = " << corpus.mnist_train_images.string() << "\n"
          << "labels = " << corpus.mnist_train_labels.string() << "\n"
          << "test_images = " << corpus.mnist_test_images.string() << "\n"
          << "test_labels = " << corpus.mnist_test_labels.string() << "\n"
          << "subsample = 2000\ntest_subsample = 500\nseed = " << kDataSeed
          << "\n"
          << "[foveation]\nkind = downsample\nd = 4\n"
          << "[model]\nhidden = " << kMnistHidden << "\n"
          << "[train]\nepochs = " << kEpochs
          << "\nlearning_rate = 1\nbatch_size = " << kBatch
          << "\nseed = " << kTrainSeed << "\nadagrad_epsilon = "
          << kAdagradEps << "\neval_every = 10\n"
          << "[output]\ndir = " << out_dir.string() << "\n";
    };

    const auto slurp = [](const std::filesystem::path& p) {
      std::ifstream in(p, std::ios::binary);
      std::stringstream ss;
      ss << in.rdbuf();
      return ss.str();
    };
    const auto drop_seconds = [](const std::string& csv) {
      std::stringstream in(csv);
      std::string out, line;
      while (std::getline(in, line)) {
        out += line.substr(0, line.rfind(','));
        out += '\n';
      }
      return out;
    };

    write_cfg(dir_a);
    cmd_train(cfg_path);
    write_cfg(dir_b);
    cmd_train(cfg_path);

    const bool checkpoints_equal =
        slurp(dir_a / "checkpoint.dfae") == slurp(dir_b / "checkpoint.dfae");
    const bool metrics_equal =
        drop_seconds(slurp(dir_a / "metrics.csv")) ==
        drop_seconds(slurp(dir_b / "metrics.csv"));
    report(9, checkpoints_equal && metrics_equal,
           fmt("repeated runs: checkpoints %s, metrics (excl. wall clock) %s",
               checkpoints_equal ? "identical" : "DIFFER",
               metrics_equal ? "identical" : "DIFFER"));
  }
}

// ---------------------------------------------------------------------------
// Criteria 5, 6, 7: CIFAR foveation experiments.

void criteria_cifar(const Corpus& corpus) {
  Dataset train_gray_full =
      load_cifar100(corpus.cifar_train, Split::Train, ColorMode::Grayscale);
  Dataset test_gray_full =
      load_cifar100(corpus.cifar_test, Split::Test, ColorMode::Grayscale);
  const Dataset train_gray =
      train_gray_full.size() > 2000
          ? subsample(train_gray_full, 2000, kDataSeed)
          : train_gray_full;
  const Dataset test_gray = test_gray_full.size() > 500
                                ? subsample(test_gray_full, 500, kDataSeed + 1)
                                : test_gray_full;

  // Criterion 5: a 75% centered fovea beats uniform downsampling.
  {
    Timer timer;
    const FoveationSpec fovea{FoveationKind::Fovea, 0.75, 4,
                              Location{LocationKind::Centered, 0}};
    const FoveationSpec uniform{FoveationKind::Downsample, 0.0, 4, {}};
    const double fovea_mse =
        trained_test_mse(train_gray, test_gray, fovea, kCifarHidden,
                         budget());
    const double uniform_mse =
        trained_test_mse(train_gray, test_gray, uniform, kCifarHidden,
                         budget());
    report(5, fovea_mse <= uniform_mse,
           fmt("FOV r=0.75 centered test mse %.5f <= uniform d=4 %.5f "
               "(%.0fs)",
               fovea_mse, uniform_mse, timer.seconds()));
  }

  // Criterion 6: scotoma error grows with the removed fraction.
  {
    Timer timer;
    std::vector<double> errs;
    for (double r : {0.25, 0.5, 0.75}) {
      const FoveationSpec spec{FoveationKind::Scotoma, r, 1,
                               Location{LocationKind::RandomQuadrant, 0}};
      errs.push_back(trained_test_mse(train_gray, test_gray, spec,
                                      kCifarHidden, budget()));
    }
    report(6, errs[0] <= errs[1] && errs[1] <= errs[2],
           fmt("SCT test mse non-decreasing in r: %.5f (r=.25) <= %.5f "
               "(r=.5) <= %.5f (r=.75) (%.0fs)",
               errs[0], errs[1], errs[2], timer.seconds()));
  }

  // Criterion 7: a 25% color fovea recovers more than half the gap between
  // grayscale-only and full-color inputs.
  {
    Timer timer;
    Dataset train_color_full =
        load_cifar100(corpus.cifar_train, Split::Train, ColorMode::Color);
    Dataset test_color_full =
        load_cifar100(corpus.cifar_test, Split::Test, ColorMode::Color);
    const Dataset train_color =
        train_color_full.size() > 2000
            ? subsample(train_color_full, 2000, kDataSeed)
            : train_color_full;
    const Dataset test_color =
        test_color_full.size() > 500
            ? subsample(test_color_full, 500, kDataSeed + 1)
            : test_color_full;

    const FoveationSpec fova{FoveationKind::FoveaAchromatic, 0.25, 4,
                             Location{LocationKind::Centered, 0}};
    const FoveationSpec full_color{FoveationKind::Achromatic, 1.0, 1,
                                   Location{LocationKind::Centered, 0}};
    const FoveationSpec no_color{FoveationKind::Achromatic, 0.0, 1,
                                 Location{LocationKind::Centered, 0}};

    const double fova_mse = trained_test_mse(train_color, test_color, fova,
                                             kCifarHidden, budget());
    const double full_mse = trained_test_mse(train_color, test_color,
                                             full_color, kCifarHidden,
                                             budget());
    const double gray_mse = trained_test_mse(train_color, test_color,
                                             no_color, kCifarHidden,
                                             budget());
    const bool pass = fova_mse - full_mse <= 0.5 * (gray_mse - full_mse);
    report(7, pass,
           fmt("FOVA r=.25 %.5f - full color %.5f = %.5f <= 0.5*(gray %.5f "
               "- full %.5f) = %.5f (%.0fs)",
               fova_mse, full_mse, fova_mse - full_mse, gray_mse, full_mse,
               0.5 * (gray_mse - full_mse), timer.seconds()));
  }
}

// ---------------------------------------------------------------------------
// Criterion 10: foveation length formulas and exactly-once cover.

void criterion_dimensions() {
  Timer timer;
  struct Geometry {
    int h, w, c;
  };
  const std::vector<Geometry> geoms = {{28, 28, 1}, {32, 32, 3}};
  const std::vector<double> r_grid = {0.0, 0.06, 0.25, 0.5, 0.75, 1.0};
  const std::vector<int> d_grid = {1, 2, 4};
  const std::vector<FoveationKind> kinds = {
      FoveationKind::Downsample, FoveationKind::Scotoma, FoveationKind::Fovea,
      FoveationKind::Achromatic, FoveationKind::FoveaAchromatic};
  const std::vector<Location> locations = {
      Location{LocationKind::Centered, 0}, Location{LocationKind::Quadrant, 3},
      Location{LocationKind::RandomQuadrant, 0}};

  int cases = 0;
  bool all_ok = true;
  std::string first_failure;
  for (const Geometry& g : geoms) {
    for (FoveationKind kind : kinds) {
      for (double r : r_grid) {
        for (int d : d_grid) {
          for (const Location& loc : locations) {
            ++cases;
            const FoveationSpec spec{kind, r, d, loc};
            Rng rng(5);
            const Rect region = resolve_location(spec, g.h, g.w, rng);
            const Layout layout = make_layout(spec, g.h, g.w, g.c, region);

            // Exactly-once cover.
            std::vector<int> counts(
                static_cast<std::size_t>(g.h) * g.w, 0);
            for (const Slot& slot : layout.slots) {
              for (int rr = slot.top; rr < slot.top + slot.rows; ++rr) {
                for (int cc = slot.left; cc < slot.left + slot.cols; ++cc) {
                  counts[static_cast<std::size_t>(rr) * g.w + cc] += 1;
                }
              }
            }
            bool cover = true;
            for (int count : counts) cover = cover && count == 1;

            // Closed-form m.
            const int blocks = (g.h / d) * (g.w / d);
            const int fovea_blocks = (region.height / d) * (region.width / d);
            const int inside = region.height * region.width;
            int expected = -1;
            switch (kind) {
              case FoveationKind::Downsample: expected = blocks * g.c; break;
              case FoveationKind::Scotoma: expected = g.h * g.w * g.c; break;
              case FoveationKind::Fovea:
                expected =
                    g.c * (d * d * fovea_blocks + (blocks - fovea_blocks));
                break;
              case FoveationKind::Achromatic:
                expected = g.c * inside + (g.h * g.w - inside);
                break;
              case FoveationKind::FoveaAchromatic:
                expected =
                    g.c * d * d * fovea_blocks + (blocks - fovea_blocks);
                break;
            }
            if (!cover || layout.total_len != expected) {
              all_ok = false;
              if (first_failure.empty()) {
                first_failure = fmt(" first failure: kind=%s r=%.2f d=%d",
                                    to_string(kind).c_str(), r, d);
              }
            }
          }
        }
      }
    }
  }
  const double secs = timer.seconds();
  report(10, all_ok && secs < 5.0,
         fmt("%d spec-grid cases: m formulas and exactly-once cover%s, "
             "%.2fs (< 5s)",
             cases, all_ok ? " hold" : first_failure.c_str(), secs));
}

// ---------------------------------------------------------------------------
// Criterion 11: psnr/mse consistency.

void criterion_psnr_consistency() {
  Rng rng(808);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const int n = 8 + static_cast<int>(rng.index(64));
    std::vector<double> x(static_cast<std::size_t>(n));
    std::vector<double> y(static_cast<std::size_t>(n));
    for (auto& v : x) v = rng.unit();
    for (auto& v : y) v = rng.unit();
    const double m = mse(std::span<const double>(x), std::span<const double>(y));
    const double direct = psnr(std::span<const double>(x),
                               std::span<const double>(y));
    const double algebraic = -0.5 * std::log10(m);
    worst = std::max(worst, std::abs(direct - algebraic));
  }
  report(11, worst < 1e-12,
         fmt("psnr = -0.5*log10(mse) over 1000 random pairs: max |diff| "
             "%.3g (< 1e-12)",
             worst));
}

}  // namespace

int main() {
  const auto work =
      std::filesystem::temp_directory_path() / "dfae_acceptance";
  std::filesystem::remove_all(work);
  std::filesystem::create_directories(work);

  const Corpus corpus = stage_data(work / "data");

  criterion_gradients();
  criterion_recurrent_gradients();
  criteria_mnist(corpus, work);
  criteria_cifar(corpus);
  criterion_dimensions();
  criterion_psnr_consistency();

  if (failures > 0) {
    std::printf("%d criterion(s) FAILED\n", failures);
    return 1;
  }
  std::printf("all criteria passed\n");
  return 0;
}
