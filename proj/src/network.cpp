#include "dfae/network.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <string>

#include "dfae/errors.hpp"
#include "dfae/rng.hpp"

namespace dfae {

namespace {

constexpr double kLn10 = 2.302585092994046;

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

void check_size_chain(const std::vector<int>& sizes) {
  if (sizes.size() < 3) {
    throw std::invalid_argument(
        "size chain needs input, at least one hidden layer, and output");
  }
  for (int s : sizes) {
    if (s < 1) throw std::invalid_argument("layer sizes must be positive");
  }
}

}  // namespace

std::vector<int> NetworkParams::sizes() const {
  std::vector<int> chain;
  if (layers.empty()) return chain;
  chain.push_back(static_cast<int>(layers.front().weights.cols()));
  for (const Layer& layer : layers) {
    chain.push_back(static_cast<int>(layer.weights.rows()));
  }
  return chain;
}

int NetworkParams::input_size() const {
  return layers.empty() ? 0 : static_cast<int>(layers.front().weights.cols());
}

int NetworkParams::output_size() const {
  return layers.empty() ? 0 : static_cast<int>(layers.back().weights.rows());
}

NetworkParams init_params(const std::vector<int>& sizes, std::uint64_t seed) {
  check_size_chain(sizes);
  Rng rng(seed);
  NetworkParams params;
  params.layers.resize(sizes.size() - 1);
  for (std::size_t i = 0; i + 1 < sizes.size(); ++i) {
    Layer& layer = params.layers[i];
    layer.weights.resize(sizes[i + 1], sizes[i]);
    layer.bias.resize(sizes[i + 1]);
    for (Eigen::Index r = 0; r < layer.weights.rows(); ++r) {
      for (Eigen::Index c = 0; c < layer.weights.cols(); ++c) {
        layer.weights(r, c) = rng.uniform(-0.1, 0.1);
      }
    }
    for (Eigen::Index r = 0; r < layer.bias.size(); ++r) {
      layer.bias(r) = rng.uniform(-0.1, 0.1);
    }
  }
  return params;
}

BatchTrace forward_batch(const NetworkParams& params,
                         const Eigen::MatrixXd& inputs) {
  if (params.layers.empty()) {
    throw std::invalid_argument("forward on an empty network");
  }
  if (inputs.rows() != params.input_size()) {
    throw DimensionError("input size " + std::to_string(inputs.rows()) +
                         " does not match network input " +
                         std::to_string(params.input_size()));
  }
  BatchTrace trace;
  trace.input = inputs;
  trace.activations.reserve(params.layers.size());
  const Eigen::MatrixXd* prev = &trace.input;
  for (std::size_t i = 0; i < params.layers.size(); ++i) {
    const Layer& layer = params.layers[i];
    Eigen::MatrixXd z =
        (layer.weights * (*prev)).colwise() + layer.bias;
    if (i + 1 < params.layers.size()) {
      trace.activations.push_back(z.array().tanh().matrix());
    } else {
      trace.activations.push_back(
          z.unaryExpr([](double v) { return sigmoid(v); }));
    }
    prev = &trace.activations.back();
  }
  return trace;
}

ForwardTrace forward(const NetworkParams& params,
                     const Eigen::VectorXd& input) {
  BatchTrace batch = forward_batch(params, input);
  ForwardTrace trace;
  trace.input = input;
  trace.preactivations.reserve(params.layers.size());
  trace.activations.reserve(batch.activations.size());
  const Eigen::VectorXd* below = &trace.input;
  for (std::size_t i = 0; i < batch.activations.size(); ++i) {
    trace.activations.push_back(batch.activations[i].col(0));
    trace.preactivations.push_back(params.layers[i].weights * (*below) +
                                   params.layers[i].bias);
    below = &trace.activations.back();
  }
  return trace;
}

double loss(const Eigen::VectorXd& output, const Eigen::VectorXd& target,
            LossKind kind) {
  if (output.size() != target.size()) {
    throw DimensionError("loss operands differ in length");
  }
  const auto n = static_cast<double>(output.size());
  switch (kind) {
    case LossKind::Psnr: {
      const double m = (output - target).squaredNorm() / n;
      return 0.5 * std::log10(std::max(m, kPsnrEpsilon));
    }
    case LossKind::Mse:
      return (output - target).squaredNorm() / n;
    case LossKind::CrossEntropy: {
      double total = 0.0;
      for (Eigen::Index i = 0; i < output.size(); ++i) {
        const double y = std::clamp(output(i), 1e-12, 1.0 - 1e-12);
        total -= target(i) * std::log(y) + (1.0 - target(i)) * std::log(1.0 - y);
      }
      return total / n;
    }
  }
  return 0.0;
}

NetworkParams backward_batch(const NetworkParams& params,
                             const BatchTrace& trace,
                             const Eigen::MatrixXd& targets,
                             LossKind kind) {
  if (trace.activations.size() != params.layers.size() ||
      trace.input.rows() != params.input_size()) {
    throw DimensionError("trace does not match network shape");
  }
  if (targets.rows() != params.output_size() ||
      targets.cols() != trace.input.cols()) {
    throw DimensionError("target shape does not match network output");
  }

  const Eigen::MatrixXd& y = trace.output();
  const auto n = static_cast<double>(y.rows());
  const auto batch = y.cols();

  // Delta at the output pre-activation. The logistic derivative y(1-y)
  // cancels against the cross-entropy denominator.
  Eigen::MatrixXd delta = y - targets;
  switch (kind) {
    case LossKind::Psnr:
      for (Eigen::Index b = 0; b < batch; ++b) {
        const double m = delta.col(b).squaredNorm() / n;
        const double scale =
            m > kPsnrEpsilon ? 1.0 / (n * m * kLn10) : 0.0;
        delta.col(b) =
            delta.col(b).cwiseProduct(y.col(b).cwiseProduct(
                (1.0 - y.col(b).array()).matrix())) *
            scale;
      }
      break;
    case LossKind::Mse:
      delta = delta.cwiseProduct(
                  y.cwiseProduct((1.0 - y.array()).matrix())) *
              (2.0 / n);
      break;
    case LossKind::CrossEntropy:
      delta /= n;
      break;
  }

  NetworkParams grads;
  grads.layers.resize(params.layers.size());
  const double inv_batch = 1.0 / static_cast<double>(batch);
  for (auto i = static_cast<int>(params.layers.size()) - 1; i >= 0; --i) {
    const Eigen::MatrixXd& below =
        i == 0 ? trace.input : trace.activations[static_cast<std::size_t>(i) - 1];
    grads.layers[static_cast<std::size_t>(i)].weights =
        delta * below.transpose() * inv_batch;
    grads.layers[static_cast<std::size_t>(i)].bias =
        delta.rowwise().sum() * inv_batch;
    if (i > 0) {
      const Eigen::MatrixXd& h =
          trace.activations[static_cast<std::size_t>(i) - 1];
      delta = (params.layers[static_cast<std::size_t>(i)].weights.transpose() *
               delta)
                  .cwiseProduct((1.0 - h.array().square()).matrix());
    }
  }
  return grads;
}

NetworkParams backward(const NetworkParams& params, const ForwardTrace& trace,
                       const Eigen::VectorXd& target, LossKind kind) {
  BatchTrace batch;
  batch.input = trace.input;
  batch.activations.reserve(trace.activations.size());
  for (const Eigen::VectorXd& a : trace.activations) {
    batch.activations.push_back(a);
  }
  return backward_batch(params, batch, target, kind);
}

Image reconstruct(const NetworkParams& params, const FoveatedInput& fi) {
  const Layout& layout = fi.layout;
  if (params.input_size() != layout.total_len) {
    throw DimensionError("checkpoint expects input length " +
                         std::to_string(params.input_size()) +
                         ", foveated input has " +
                         std::to_string(layout.total_len));
  }
  const int n = layout.image_height * layout.image_width *
                layout.image_channels;
  if (params.output_size() != n) {
    throw DimensionError("checkpoint output length " +
                         std::to_string(params.output_size()) +
                         " does not match image size " + std::to_string(n));
  }
  const Eigen::VectorXd input =
      center(Eigen::Map<const Eigen::VectorXd>(
          fi.values.data(), static_cast<Eigen::Index>(fi.values.size())));
  const ForwardTrace trace = forward(params, input);
  Image out(layout.image_height, layout.image_width, layout.image_channels);
  for (int i = 0; i < n; ++i) {
    out.data[static_cast<std::size_t>(i)] = trace.output()(i);
  }
  return out;
}

namespace {

constexpr char kCheckpointMagic[4] = {'D', 'F', 'A', 'E'};
constexpr std::uint32_t kCheckpointVersion = 1;

void write_u32(std::ostream& out, std::uint32_t v) {
  char bytes[4];
  for (int i = 0; i < 4; ++i) bytes[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  out.write(bytes, 4);
}

void write_f64(std::ostream& out, double v) {
  std::uint64_t bits;
  std::memcpy(&bits, &v, 8);
  char bytes[8];
  for (int i = 0; i < 8; ++i) {
    bytes[i] = static_cast<char>((bits >> (8 * i)) & 0xff);
  }
  out.write(bytes, 8);
}

std::uint32_t read_u32(std::istream& in, const std::string& what) {
  unsigned char bytes[4];
  if (!in.read(reinterpret_cast<char*>(bytes), 4)) {
    throw ParseError("checkpoint truncated while reading " + what);
  }
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= std::uint32_t{bytes[i]} << (8 * i);
  return v;
}

double read_f64(std::istream& in, const std::string& what) {
  unsigned char bytes[8];
  if (!in.read(reinterpret_cast<char*>(bytes), 8)) {
    throw ParseError("checkpoint truncated while reading " + what);
  }
  std::uint64_t bits = 0;
  for (int i = 0; i < 8; ++i) bits |= std::uint64_t{bytes[i]} << (8 * i);
  double v;
  std::memcpy(&v, &bits, 8);
  return v;
}

}  // namespace

void save_checkpoint(const std::filesystem::path& path,
                     const NetworkParams& params) {
  if (params.layers.empty()) {
    throw std::invalid_argument("refusing to save an empty network");
  }
  // Write-temp-then-rename keeps the target valid under interruption.
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw std::runtime_error("cannot open checkpoint for writing: " +
                               tmp.string());
    }
    out.write(kCheckpointMagic, 4);
    write_u32(out, kCheckpointVersion);
    write_u32(out, static_cast<std::uint32_t>(params.layers.size()));
    const std::vector<int> chain = params.sizes();
    write_u32(out, static_cast<std::uint32_t>(chain.size()));
    for (int s : chain) write_u32(out, static_cast<std::uint32_t>(s));
    for (const Layer& layer : params.layers) {
      for (Eigen::Index r = 0; r < layer.weights.rows(); ++r) {
        for (Eigen::Index c = 0; c < layer.weights.cols(); ++c) {
          write_f64(out, layer.weights(r, c));
        }
      }
      for (Eigen::Index r = 0; r < layer.bias.size(); ++r) {
        write_f64(out, layer.bias(r));
      }
    }
    if (!out) {
      throw std::runtime_error("checkpoint write failed: " + tmp.string());
    }
  }
  std::filesystem::rename(tmp, path);
}

NetworkParams load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ParseError("cannot open checkpoint: " + path.string());
  }
  char magic[4];
  if (!in.read(magic, 4) || std::memcmp(magic, kCheckpointMagic, 4) != 0) {
    throw ParseError("bad checkpoint magic at offset 0 in " + path.string());
  }
  const std::uint32_t version = read_u32(in, "version");
  if (version != kCheckpointVersion) {
    throw ParseError("unsupported checkpoint version " +
                     std::to_string(version));
  }
  const std::uint32_t layer_count = read_u32(in, "layer count");
  const std::uint32_t chain_len = read_u32(in, "size chain length");
  if (chain_len != layer_count + 1 || layer_count == 0) {
    throw ParseError("inconsistent checkpoint header: " +
                     std::to_string(layer_count) + " layers, " +
                     std::to_string(chain_len) + " sizes");
  }
  std::vector<int> chain(chain_len);
  for (std::uint32_t i = 0; i < chain_len; ++i) {
    chain[i] = static_cast<int>(read_u32(in, "size chain"));
    if (chain[i] < 1) throw ParseError("non-positive layer size in checkpoint");
  }
  NetworkParams params;
  params.layers.resize(layer_count);
  for (std::uint32_t i = 0; i < layer_count; ++i) {
    Layer& layer = params.layers[i];
    layer.weights.resize(chain[i + 1], chain[i]);
    layer.bias.resize(chain[i + 1]);
    for (Eigen::Index r = 0; r < layer.weights.rows(); ++r) {
      for (Eigen::Index c = 0; c < layer.weights.cols(); ++c) {
        layer.weights(r, c) = read_f64(in, "weights");
      }
    }
    for (Eigen::Index r = 0; r < layer.bias.size(); ++r) {
      layer.bias(r) = read_f64(in, "bias");
    }
  }
  char extra;
  if (in.read(&extra, 1)) {
    throw ParseError("trailing bytes after checkpoint payload");
  }
  return params;
}

}  // namespace dfae
