#include "dfae/network.hpp"

#include <doctest.h>

#include <cmath>
#include <fstream>
#include <vector>

#include "dfae/errors.hpp"
#include "test_util.hpp"

using namespace dfae;

namespace {

// Canonical parameter order shared by the finite-difference loop and the
// analytic gradient flattening.
std::vector<double*> parameter_pointers(NetworkParams& params) {
  std::vector<double*> ptrs;
  for (Layer& layer : params.layers) {
    for (Eigen::Index r = 0; r < layer.weights.rows(); ++r) {
      for (Eigen::Index c = 0; c < layer.weights.cols(); ++c) {
        ptrs.push_back(&layer.weights(r, c));
      }
    }
    for (Eigen::Index i = 0; i < layer.bias.size(); ++i) {
      ptrs.push_back(&layer.bias(i));
    }
  }
  return ptrs;
}

std::vector<double> flatten_gradients(const NetworkParams& grads) {
  std::vector<double> flat;
  for (const Layer& layer : grads.layers) {
    for (Eigen::Index r = 0; r < layer.weights.rows(); ++r) {
      for (Eigen::Index c = 0; c < layer.weights.cols(); ++c) {
        flat.push_back(layer.weights(r, c));
      }
    }
    for (Eigen::Index i = 0; i < layer.bias.size(); ++i) {
      flat.push_back(layer.bias(i));
    }
  }
  return flat;
}

double max_relative_gradient_error(NetworkParams params,
                                   const Eigen::VectorXd& input,
                                   const Eigen::VectorXd& target,
                                   LossKind kind, double step) {
  const ForwardTrace trace = forward(params, input);
  const std::vector<double> analytic =
      flatten_gradients(backward(params, trace, target, kind));
  const std::vector<double*> ptrs = parameter_pointers(params);
  REQUIRE(analytic.size() == ptrs.size());

  double worst = 0.0;
  for (std::size_t i = 0; i < ptrs.size(); ++i) {
    const double saved = *ptrs[i];
    *ptrs[i] = saved + step;
    const double plus = loss(forward(params, input).output(), target, kind);
    *ptrs[i] = saved - step;
    const double minus = loss(forward(params, input).output(), target, kind);
    *ptrs[i] = saved;
    const double fd = (plus - minus) / (2.0 * step);
    const double denom = std::max({std::abs(fd), std::abs(analytic[i]), 1e-6});
    worst = std::max(worst, std::abs(fd - analytic[i]) / denom);
  }
  return worst;
}

Eigen::VectorXd random_vector(Eigen::Index n, double lo, double hi, Rng& rng) {
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = rng.uniform(lo, hi);
  return v;
}

}  // namespace

TEST_CASE("init_params draws uniformly from [-0.1, 0.1]") {
  const NetworkParams params = init_params({100, 500, 100}, 7);
  double sum = 0.0;
  std::size_t count = 0;
  for (const Layer& layer : params.layers) {
    for (Eigen::Index r = 0; r < layer.weights.rows(); ++r) {
      for (Eigen::Index c = 0; c < layer.weights.cols(); ++c) {
        const double v = layer.weights(r, c);
        REQUIRE(v >= -0.1);
        REQUIRE(v <= 0.1);
        sum += v;
        ++count;
      }
    }
    for (Eigen::Index i = 0; i < layer.bias.size(); ++i) {
      REQUIRE(layer.bias(i) >= -0.1);
      REQUIRE(layer.bias(i) <= 0.1);
      sum += layer.bias(i);
      ++count;
    }
  }
  REQUIRE(count > 100000);
  CHECK(std::abs(sum / static_cast<double>(count)) < 0.005);

  // Same seed, bit-identical parameters.
  const NetworkParams again = init_params({100, 500, 100}, 7);
  for (std::size_t i = 0; i < params.layers.size(); ++i) {
    CHECK(test::exactly_equal(params.layers[i].weights, again.layers[i].weights));
    CHECK(test::exactly_equal(params.layers[i].bias, again.layers[i].bias));
  }

  CHECK_THROWS_AS(init_params({}, 0), std::invalid_argument);
  CHECK_THROWS_AS(init_params({5, 5}, 0), std::invalid_argument);
}

TEST_CASE("forward with zero parameters outputs 0.5 everywhere") {
  NetworkParams params = init_params({6, 4, 9}, 1);
  for (Layer& layer : params.layers) {
    layer.weights.setZero();
    layer.bias.setZero();
  }
  Rng rng(2);
  const ForwardTrace trace = forward(params, random_vector(6, -1.0, 1.0, rng));
  for (Eigen::Index i = 0; i < trace.output().size(); ++i) {
    CHECK(trace.output()(i) == 0.5);
  }

  // Zero input with zero biases propagates tanh(0) = 0 to the same result.
  NetworkParams biased = init_params({6, 4, 9}, 3);
  for (Layer& layer : biased.layers) layer.bias.setZero();
  const ForwardTrace t2 = forward(biased, Eigen::VectorXd::Zero(6));
  for (Eigen::Index i = 0; i < t2.output().size(); ++i) {
    CHECK(t2.output()(i) == 0.5);
  }
}

TEST_CASE("forward matches a naive triple-loop oracle") {
  Rng rng(5);
  const std::vector<int> sizes = {7, 5, 4, 6};
  const NetworkParams params = init_params(sizes, 11);
  const Eigen::VectorXd input = random_vector(7, -0.5, 0.5, rng);
  const ForwardTrace trace = forward(params, input);

  std::vector<double> current(input.data(), input.data() + input.size());
  for (std::size_t li = 0; li < params.layers.size(); ++li) {
    const Layer& layer = params.layers[li];
    std::vector<double> next(static_cast<std::size_t>(layer.weights.rows()));
    for (Eigen::Index r = 0; r < layer.weights.rows(); ++r) {
      double z = layer.bias(r);
      for (Eigen::Index c = 0; c < layer.weights.cols(); ++c) {
        z += layer.weights(r, c) * current[static_cast<std::size_t>(c)];
      }
      next[static_cast<std::size_t>(r)] =
          li + 1 == params.layers.size() ? 1.0 / (1.0 + std::exp(-z))
                                         : std::tanh(z);
    }
    current = next;
  }
  for (Eigen::Index i = 0; i < trace.output().size(); ++i) {
    CHECK(trace.output()(i) ==
          doctest::Approx(current[static_cast<std::size_t>(i)])
              .epsilon(1e-10));
  }
}

TEST_CASE("trace preactivations are consistent with activations") {
  Rng rng(8);
  const NetworkParams params = init_params({6, 4, 3, 6}, 12);
  const Eigen::VectorXd input = random_vector(6, -0.5, 0.5, rng);
  const ForwardTrace trace = forward(params, input);
  REQUIRE(trace.preactivations.size() == trace.activations.size());
  for (std::size_t i = 0; i < trace.activations.size(); ++i) {
    const bool last = i + 1 == trace.activations.size();
    for (Eigen::Index j = 0; j < trace.activations[i].size(); ++j) {
      const double z = trace.preactivations[i](j);
      const double expected =
          last ? 1.0 / (1.0 + std::exp(-z)) : std::tanh(z);
      CHECK(trace.activations[i](j) ==
            doctest::Approx(expected).epsilon(1e-12));
    }
  }
}

TEST_CASE("forward is deterministic and validates dimensions") {
  Rng rng(6);
  const NetworkParams params = init_params({5, 3, 5}, 9);
  const Eigen::VectorXd input = random_vector(5, -1.0, 1.0, rng);
  const ForwardTrace a = forward(params, input);
  const ForwardTrace b = forward(params, input);
  CHECK(test::exactly_equal(a.output(), b.output()));
  CHECK_THROWS_AS(forward(params, Eigen::VectorXd::Zero(4)), DimensionError);
}

TEST_CASE("loss fixed points") {
  // mse 0.01 between constant vectors 0.1 apart.
  const Eigen::VectorXd zeros = Eigen::VectorXd::Zero(50);
  const Eigen::VectorXd tenth = Eigen::VectorXd::Constant(50, 0.1);
  CHECK(loss(tenth, zeros) == doctest::Approx(-1.0));
  const Eigen::VectorXd ones = Eigen::VectorXd::Constant(50, 1.0);
  CHECK(loss(ones, zeros) == doctest::Approx(0.0));
  CHECK(loss(zeros, zeros) == doctest::Approx(-6.0));
  CHECK_THROWS_AS(loss(zeros, Eigen::VectorXd::Zero(49)), DimensionError);
}

TEST_CASE("backward gradients are zero in the epsilon clamp region") {
  const NetworkParams params = init_params({4, 3, 4}, 21);
  Rng rng(22);
  const Eigen::VectorXd input = random_vector(4, -1.0, 1.0, rng);
  const ForwardTrace trace = forward(params, input);
  // Target equal to the output puts the loss on the clamp plateau.
  const NetworkParams grads = backward(params, trace, trace.output());
  for (const Layer& layer : grads.layers) {
    CHECK(layer.weights.cwiseAbs().maxCoeff() == 0.0);
    CHECK(layer.bias.cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("backward matches central finite differences on a 12-7-12 net") {
  Rng rng(33);
  const NetworkParams params = init_params({12, 7, 12}, 34);
  const Eigen::VectorXd input = random_vector(12, -0.5, 0.5, rng);
  const Eigen::VectorXd target = random_vector(12, 0.05, 0.95, rng);
  for (LossKind kind :
       {LossKind::Psnr, LossKind::Mse, LossKind::CrossEntropy}) {
    const double err =
        max_relative_gradient_error(params, input, target, kind, 1e-5);
    CHECK(err < 1e-4);
  }
}

TEST_CASE("duplicated input dimensions receive identical gradients") {
  NetworkParams params = init_params({4, 3, 2}, 40);
  // Make columns 0 and 1 of the first layer identical.
  params.layers[0].weights.col(1) = params.layers[0].weights.col(0);
  Eigen::VectorXd input(4);
  input << 0.3, 0.3, -0.2, 0.9;
  Eigen::VectorXd target(2);
  target << 0.25, 0.75;
  const ForwardTrace trace = forward(params, input);
  const NetworkParams grads = backward(params, trace, target);
  CHECK(test::exactly_equal(grads.layers[0].weights.col(0),
                            grads.layers[0].weights.col(1)));
}

TEST_CASE("deep chains up to four hidden layers work") {
  Rng rng(44);
  for (int k = 1; k <= 4; ++k) {
    std::vector<int> sizes{10};
    for (int i = 0; i < k; ++i) sizes.push_back(6);
    sizes.push_back(10);
    const NetworkParams params = init_params(sizes, 45 + k);
    const Eigen::VectorXd input = random_vector(10, -0.5, 0.5, rng);
    const Eigen::VectorXd target = random_vector(10, 0.1, 0.9, rng);
    CHECK(max_relative_gradient_error(params, input, target, LossKind::Psnr,
                                      1e-5) < 1e-4);
  }
}

TEST_CASE("reconstruct reshapes the logistic output") {
  Rng rng(50);
  const Image img = test::random_image(8, 8, 1, rng);
  const FoveationSpec spec{FoveationKind::Downsample, 0.0, 2, {}};
  const FoveatedInput fi = foveate(img, spec, rng);

  NetworkParams params = init_params({16, 5, 64}, 51);
  Image out = reconstruct(params, fi);
  CHECK(out.height == 8);
  CHECK(out.width == 8);
  CHECK(out.channels == 1);
  for (double v : out.data) {
    CHECK(v > 0.0);
    CHECK(v < 1.0);
  }

  for (Layer& layer : params.layers) {
    layer.weights.setZero();
    layer.bias.setZero();
  }
  out = reconstruct(params, fi);
  for (double v : out.data) CHECK(v == 0.5);

  const NetworkParams wrong = init_params({10, 5, 64}, 52);
  CHECK_THROWS_AS(reconstruct(wrong, fi), DimensionError);
}

TEST_CASE("checkpoints round-trip bit-exactly") {
  const auto dir = test::scratch_dir("checkpoint");
  const NetworkParams params = init_params({12, 7, 3, 12}, 60);
  const auto path = dir / "net.dfae";
  save_checkpoint(path, params);
  const NetworkParams back = load_checkpoint(path);
  REQUIRE(back.layers.size() == params.layers.size());
  CHECK(back.sizes() == params.sizes());
  for (std::size_t i = 0; i < params.layers.size(); ++i) {
    CHECK(test::exactly_equal(back.layers[i].weights, params.layers[i].weights));
    CHECK(test::exactly_equal(back.layers[i].bias, params.layers[i].bias));
  }

  // Rewriting the reloaded params produces identical bytes.
  const auto path2 = dir / "net2.dfae";
  save_checkpoint(path2, back);
  std::ifstream a(path, std::ios::binary), b(path2, std::ios::binary);
  const std::vector<char> bytes_a((std::istreambuf_iterator<char>(a)),
                                  std::istreambuf_iterator<char>());
  const std::vector<char> bytes_b((std::istreambuf_iterator<char>(b)),
                                  std::istreambuf_iterator<char>());
  CHECK(bytes_a == bytes_b);
}

TEST_CASE("checkpoint loader rejects corrupt files") {
  const auto dir = test::scratch_dir("checkpoint_bad");
  const NetworkParams params = init_params({5, 3, 5}, 61);
  const auto path = dir / "net.dfae";
  save_checkpoint(path, params);

  SUBCASE("bad magic") {
    std::fstream f(path, std::ios::in | std::ios::out | std::ios::binary);
    f.seekp(0);
    f.write("XXXX", 4);
    f.close();
    CHECK_THROWS_AS(load_checkpoint(path), ParseError);
  }
  SUBCASE("truncation") {
    const auto size = std::filesystem::file_size(path);
    std::filesystem::resize_file(path, size - 8);
    CHECK_THROWS_AS(load_checkpoint(path), ParseError);
  }
  SUBCASE("trailing bytes") {
    std::ofstream f(path, std::ios::app | std::ios::binary);
    f << "zz";
    f.close();
    CHECK_THROWS_AS(load_checkpoint(path), ParseError);
  }
}
