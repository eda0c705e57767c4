#include "dfae/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>

#include "dfae/errors.hpp"
#include "dfae/png_io.hpp"
#include "dfae/rng.hpp"
#include "dfae/viz.hpp"

namespace dfae {

namespace {

std::vector<int> size_chain(const ExperimentConfig& cfg, int input_len,
                            int output_len) {
  std::vector<int> sizes;
  sizes.push_back(input_len);
  sizes.insert(sizes.end(), cfg.model.hidden.begin(), cfg.model.hidden.end());
  sizes.push_back(output_len);
  return sizes;
}

// Train and test examples share the spec but draw locations from distinct
// streams, both rooted in the dataset seed.
constexpr std::uint64_t kTestFoveationOffset = 1;

std::vector<int> default_baseline_factors(int side) {
  if (side == 28) return {2, 4, 7};
  if (side == 32) return {2, 4, 8};
  std::vector<int> factors;
  for (int f = 2; f <= 8; ++f) {
    if (side % f == 0) factors.push_back(f);
  }
  return factors;
}

Dataset require_eval_split(const ExperimentConfig& cfg,
                           std::pair<Dataset, Dataset>&& splits) {
  if (!splits.second.images.empty()) return std::move(splits.second);
  if (!splits.first.images.empty()) return std::move(splits.first);
  throw ConfigError("config '" + cfg.output_dir +
                    "' provides no images to evaluate");
}

}  // namespace

void cmd_train(const std::filesystem::path& config_path) {
  const ExperimentConfig cfg = load_config(config_path);
  auto [train_ds, test_ds] = load_config_datasets(cfg);

  FoveatedDataset train_fov =
      foveate_dataset(train_ds, cfg.foveation, cfg.dataset.seed);
  std::vector<ExamplePair> test_pairs;
  if (!test_ds.images.empty()) {
    test_pairs = foveate_dataset(test_ds, cfg.foveation,
                                 cfg.dataset.seed + kTestFoveationOffset)
                     .pairs;
  }

  const int n = train_fov.image_height * train_fov.image_width *
                train_fov.image_channels;
  const std::vector<int> sizes =
      size_chain(cfg, train_fov.layout.total_len, n);

  auto [params, metrics] =
      train(train_fov.pairs, sizes, cfg.train, test_pairs);

  const std::filesystem::path out_dir(cfg.output_dir);
  std::filesystem::create_directories(out_dir);
  save_config(out_dir / "config.txt", cfg);
  save_checkpoint(out_dir / "checkpoint.dfae", params);
  write_metrics_csv(out_dir / "metrics.csv", metrics);

  std::cout << "trained " << to_string(cfg.foveation.kind) << " m="
            << train_fov.layout.total_len << " -> n=" << n << " over "
            << cfg.train.epochs << " epochs";
  if (!test_pairs.empty()) {
    std::cout << "; test mse " << metrics.final_test_mse << " ("
              << mse_percent(metrics.final_test_mse) << "%)";
  }
  std::cout << "\nrun directory: " << out_dir.string() << "\n";
}

void cmd_evaluate(const std::filesystem::path& config_path,
                  const std::filesystem::path& checkpoint_path) {
  const ExperimentConfig cfg = load_config(config_path);
  Dataset eval_ds = require_eval_split(cfg, load_config_datasets(cfg));
  const std::uint64_t seed = eval_ds.split == Split::Test
                                 ? cfg.dataset.seed + kTestFoveationOffset
                                 : cfg.dataset.seed;
  const FoveatedDataset fov = foveate_dataset(eval_ds, cfg.foveation, seed);
  const NetworkParams params = load_checkpoint(checkpoint_path);
  const double value = evaluate(params, fov.pairs);
  std::printf("test mse %.8f (%.4f%%), psnr %.4f, over %zu images\n", value,
              mse_percent(value), psnr_from_mse(value), fov.pairs.size());
}

void cmd_baseline(const std::filesystem::path& config_path,
                  const std::filesystem::path& checkpoint_path) {
  const ExperimentConfig cfg = load_config(config_path);
  if (cfg.foveation.kind != FoveationKind::Downsample) {
    throw ConfigError(
        "baseline tables need a downsample foveation, config has " +
        to_string(cfg.foveation.kind));
  }
  Dataset eval_ds = require_eval_split(cfg, load_config_datasets(cfg));
  const Image& first = eval_ds.images.front();
  std::vector<int> factors = cfg.baseline_factors;
  if (factors.empty()) {
    factors = default_baseline_factors(std::min(first.height, first.width));
  }

  NetworkParams params;
  int dfae_input = -1;
  if (!checkpoint_path.empty()) {
    params = load_checkpoint(checkpoint_path);
    dfae_input = params.input_size();
  }

  std::vector<double> nearest_mse(factors.size(), 0.0);
  std::vector<double> bilinear_mse(factors.size(), 0.0);
  std::vector<double> dfae_mse(factors.size(),
                               std::numeric_limits<double>::quiet_NaN());
  for (std::size_t fi = 0; fi < factors.size(); ++fi) {
    const int f = factors[fi];
    if (first.height % f != 0 || first.width % f != 0) {
      throw ConfigError("baseline factor " + std::to_string(f) +
                        " does not divide the image size");
    }
    double nn = 0.0;
    double bl = 0.0;
    for (const Image& img : eval_ds.images) {
      const Image small = downsample_nearest(img, f);
      nn += mse(upsample_nearest(small, img.height, img.width), img);
      bl += mse(upsample_bilinear(small, img.height, img.width), img);
    }
    nearest_mse[fi] = nn / static_cast<double>(eval_ds.size());
    bilinear_mse[fi] = bl / static_cast<double>(eval_ds.size());

    const int m = (first.height / f) * (first.width / f) * first.channels;
    if (m == dfae_input) {
      FoveationSpec spec = cfg.foveation;
      spec.factor = f;
      double err = 0.0;
      for (const Image& img : eval_ds.images) {
        Rng rng(0);  // downsample specs use no randomness
        const Image out = reconstruct(params, foveate(img, spec, rng));
        err += mse(out, img);
      }
      dfae_mse[fi] = err / static_cast<double>(eval_ds.size());
    }
  }

  const std::filesystem::path out_dir(cfg.output_dir);
  std::filesystem::create_directories(out_dir);
  std::ofstream out(out_dir / "baseline.csv", std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write baseline.csv");
  out << "algorithm";
  for (int f : factors) out << ",d" << f;
  out << "\n";
  const auto write_row = [&](const char* name, const std::vector<double>& v) {
    out << name;
    char buf[64];
    for (double x : v) {
      if (std::isnan(x)) {
        out << ",";
      } else {
        std::snprintf(buf, sizeof(buf), ",%.17g", x);
        out << buf;
      }
    }
    out << "\n";
  };
  write_row("nearest", nearest_mse);
  write_row("bilinear", bilinear_mse);
  if (dfae_input >= 0) write_row("dfae", dfae_mse);

  for (std::size_t fi = 0; fi < factors.size(); ++fi) {
    std::printf("d=%d  nearest %.6f  bilinear %.6f", factors[fi],
                nearest_mse[fi], bilinear_mse[fi]);
    if (!std::isnan(dfae_mse[fi])) std::printf("  dfae %.6f", dfae_mse[fi]);
    std::printf("\n");
  }
}

void cmd_foveate(const std::filesystem::path& config_path,
                 const std::filesystem::path& input_png, std::size_t index) {
  const ExperimentConfig cfg = load_config(config_path);
  Image img;
  if (!input_png.empty()) {
    img = read_png(input_png);
  } else {
    auto [train_ds, test_ds] = load_config_datasets(cfg);
    if (index >= train_ds.size()) {
      throw std::invalid_argument("index " + std::to_string(index) +
                                  " is out of range for " +
                                  std::to_string(train_ds.size()) + " images");
    }
    img = train_ds.images[index];
  }

  Rng rng(mix_seed(cfg.dataset.seed, index));
  const FoveatedInput fi = foveate(img, cfg.foveation, rng);
  const Image preview =
      side_by_side(img, render_foveated(fi, img.height, img.width), 0.5);

  const std::filesystem::path out_dir(cfg.output_dir);
  std::filesystem::create_directories(out_dir);
  write_png(out_dir / "preview.png", preview);
  std::cout << "foveated " << to_string(cfg.foveation.kind) << ": m = "
            << fi.layout.total_len << " of n = " << img.value_count()
            << "; wrote " << (out_dir / "preview.png").string() << "\n";
}

void cmd_filters(const std::filesystem::path& config_path,
                 const std::filesystem::path& checkpoint_path) {
  const ExperimentConfig cfg = load_config(config_path);
  auto [train_ds, test_ds] = load_config_datasets(cfg);
  const Image& first = train_ds.images.front();

  Rng rng(mix_seed(cfg.dataset.seed, 0));
  const Rect region =
      resolve_location(cfg.foveation, first.height, first.width, rng);
  const Layout layout = make_layout(cfg.foveation, first.height, first.width,
                                    first.channels, region);

  const NetworkParams params = load_checkpoint(checkpoint_path);
  const Image grid = filter_grid(params, layout);

  const std::filesystem::path out_dir(cfg.output_dir);
  std::filesystem::create_directories(out_dir);
  write_png(out_dir / "filters.png", grid);
  std::cout << "wrote " << params.layers.front().weights.rows()
            << " filters to " << (out_dir / "filters.png").string() << "\n";
}

void cmd_reconstruct(const std::filesystem::path& config_path,
                     const std::filesystem::path& checkpoint_path,
                     const std::vector<std::size_t>& indices) {
  if (indices.empty()) {
    throw std::invalid_argument("reconstruct needs at least one index");
  }
  const ExperimentConfig cfg = load_config(config_path);
  Dataset eval_ds = require_eval_split(cfg, load_config_datasets(cfg));
  const std::uint64_t seed = eval_ds.split == Split::Test
                                 ? cfg.dataset.seed + kTestFoveationOffset
                                 : cfg.dataset.seed;
  const NetworkParams params = load_checkpoint(checkpoint_path);

  const bool with_bilinear = cfg.foveation.kind == FoveationKind::Downsample;
  std::vector<Image> originals;
  std::vector<Image> foveated;
  std::vector<Image> bilinear;
  std::vector<Image> network;
  for (std::size_t index : indices) {
    if (index >= eval_ds.size()) {
      throw std::invalid_argument("index " + std::to_string(index) +
                                  " is out of range for " +
                                  std::to_string(eval_ds.size()) + " images");
    }
    const Image& img = eval_ds.images[index];
    Rng rng(mix_seed(seed, index));
    const FoveatedInput fi = foveate(img, cfg.foveation, rng);
    originals.push_back(img);
    foveated.push_back(render_foveated(fi, img.height, img.width));
    if (with_bilinear) {
      bilinear.push_back(upsample_bilinear(
          downsample_nearest(img, cfg.foveation.factor), img.height,
          img.width));
    }
    network.push_back(reconstruct(params, fi));
  }

  std::vector<Image> cells;
  cells.insert(cells.end(), originals.begin(), originals.end());
  cells.insert(cells.end(), foveated.begin(), foveated.end());
  if (with_bilinear) {
    cells.insert(cells.end(), bilinear.begin(), bilinear.end());
  }
  cells.insert(cells.end(), network.begin(), network.end());

  const std::filesystem::path out_dir(cfg.output_dir);
  std::filesystem::create_directories(out_dir);
  write_png(out_dir / "reconstruction.png",
            tile_grid(cells, static_cast<int>(indices.size()), 0.5));
  std::cout << "wrote " << (with_bilinear ? 4 : 3) << "x" << indices.size()
            << " panel to " << (out_dir / "reconstruction.png").string()
            << "\n";
}

int exit_code_for(const std::exception& error) {
  if (dynamic_cast<const ParseError*>(&error)) return 2;
  return 1;
}

int run_cli(int argc, const char* const* argv) {
  CLI::App app{
      "dfae: defoveating autoencoders. Trains dense networks to restore "
      "full-detail images from foveated inputs and compares them against "
      "classical interpolation. PSNR is computed from the standard mean "
      "squared error, log10(1/sqrt(MSE))."};
  app.require_subcommand(1);

  std::string config_path;
  std::string checkpoint_path;
  std::string input_png;
  std::size_t index = 0;
  std::vector<std::size_t> indices;

  CLI::App* train_cmd = app.add_subcommand("train", "train per the config");
  train_cmd->add_option("--config", config_path, "experiment config file")
      ->required();

  CLI::App* eval_cmd =
      app.add_subcommand("evaluate", "test MSE of a checkpoint");
  eval_cmd->add_option("--config", config_path)->required();
  eval_cmd->add_option("--checkpoint", checkpoint_path)->required();

  CLI::App* baseline_cmd = app.add_subcommand(
      "baseline", "interpolation vs network MSE per downsample factor");
  baseline_cmd->add_option("--config", config_path)->required();
  baseline_cmd->add_option("--checkpoint", checkpoint_path);

  CLI::App* foveate_cmd =
      app.add_subcommand("foveate", "preview a foveation side by side");
  foveate_cmd->add_option("--config", config_path)->required();
  foveate_cmd->add_option("--input", input_png, "PNG instead of a dataset image");
  foveate_cmd->add_option("--index", index, "dataset image index");

  CLI::App* filters_cmd =
      app.add_subcommand("filters", "visualize first-layer weights");
  filters_cmd->add_option("--config", config_path)->required();
  filters_cmd->add_option("--checkpoint", checkpoint_path)->required();

  CLI::App* reconstruct_cmd = app.add_subcommand(
      "reconstruct", "original/foveated/reconstruction panel");
  reconstruct_cmd->add_option("--config", config_path)->required();
  reconstruct_cmd->add_option("--checkpoint", checkpoint_path)->required();
  reconstruct_cmd->add_option("--indices", indices, "test image indices")
      ->delimiter(',')
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (train_cmd->parsed()) {
      cmd_train(config_path);
    } else if (eval_cmd->parsed()) {
      cmd_evaluate(config_path, checkpoint_path);
    } else if (baseline_cmd->parsed()) {
      cmd_baseline(config_path, checkpoint_path);
    } else if (foveate_cmd->parsed()) {
      cmd_foveate(config_path, input_png, index);
    } else if (filters_cmd->parsed()) {
      cmd_filters(config_path, checkpoint_path);
    } else if (reconstruct_cmd->parsed()) {
      cmd_reconstruct(config_path, checkpoint_path, indices);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e);
  }
  return 0;
}

}  // namespace dfae
