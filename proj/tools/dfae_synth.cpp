// Generates deterministic stand-in datasets in the MNIST IDX and CIFAR-100
// binary formats, for environments without the real files.

#include <CLI11.hpp>
#include <filesystem>
#include <iostream>

#include "dfae/synth.hpp"

int main(int argc, char** argv) {
  CLI::App app{"dfae-synth: write synthetic datasets in MNIST/CIFAR formats"};

  std::string dataset = "mnist";
  std::string out_dir = ".";
  std::size_t train_count = 2000;
  std::size_t test_count = 500;
  std::uint64_t seed = 0;
  app.add_option("--dataset", dataset, "mnist or cifar100")
      ->check(CLI::IsMember({"mnist", "cifar100"}));
  app.add_option("--out", out_dir, "output directory")->required();
  app.add_option("--train-count", train_count);
  app.add_option("--test-count", test_count);
  app.add_option("--seed", seed);
  CLI11_PARSE(app, argc, argv);

  try {
    const std::filesystem::path dir(out_dir);
    std::filesystem::create_directories(dir);
    if (dataset == "mnist") {
      const auto train = dfae::synth::digits(train_count, seed);
      const auto test = dfae::synth::digits(test_count, seed + 1);
      dfae::synth::write_idx(train, dir / "train-images-idx3-ubyte",
                             dir / "train-labels-idx1-ubyte");
      dfae::synth::write_idx(test, dir / "t10k-images-idx3-ubyte",
                             dir / "t10k-labels-idx1-ubyte");
    } else {
      const auto train = dfae::synth::natural(train_count, seed);
      const auto test = dfae::synth::natural(test_count, seed + 1);
      dfae::synth::write_cifar(train, dir / "train.bin");
      dfae::synth::write_cifar(test, dir / "test.bin");
    }
    std::cout << "wrote " << train_count << " train + " << test_count
              << " test " << dataset << " images to " << out_dir << "\n";
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
