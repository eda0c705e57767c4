#include "dfae/config.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

namespace dfae {

bool operator==(const FoveationSpec& a, const FoveationSpec& b) {
  return a.kind == b.kind && a.region_fraction == b.region_fraction &&
         a.factor == b.factor && a.location.kind == b.location.kind &&
         a.location.quadrant == b.location.quadrant;
}

bool operator==(const TrainConfig& a, const TrainConfig& b) {
  return a.epochs == b.epochs && a.learning_rate == b.learning_rate &&
         a.batch_size == b.batch_size && a.seed == b.seed &&
         a.adagrad_epsilon == b.adagrad_epsilon && a.shuffle == b.shuffle &&
         a.eval_every == b.eval_every && a.loss == b.loss;
}

bool ExperimentConfig::operator==(const ExperimentConfig& other) const {
  return dataset == other.dataset && foveation == other.foveation &&
         model == other.model && train == other.train &&
         output_dir == other.output_dir &&
         baseline_factors == other.baseline_factors;
}

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

struct KeyValues {
  std::map<std::string, std::string> entries;  // "section.key" -> value
  std::filesystem::path source;

  bool has(const std::string& key) const { return entries.count(key) > 0; }

  std::string take(const std::string& key, const std::string& fallback) {
    const auto it = entries.find(key);
    if (it == entries.end()) return fallback;
    std::string value = it->second;
    entries.erase(it);
    return value;
  }

  std::string require(const std::string& key) {
    const auto it = entries.find(key);
    if (it == entries.end()) {
      throw ConfigError("missing required key '" + key + "' in " +
                        source.string());
    }
    std::string value = it->second;
    entries.erase(it);
    return value;
  }
};

KeyValues read_key_values(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open config file: " + path.string());
  }
  KeyValues kv;
  kv.source = path;
  std::string line;
  std::string section;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string stripped = trim(line.substr(0, line.find('#')));
    if (stripped.empty()) continue;
    if (stripped.front() == '[') {
      if (stripped.back() != ']') {
        throw ConfigError("malformed section header at line " +
                          std::to_string(line_no) + " of " + path.string());
      }
      section = trim(stripped.substr(1, stripped.size() - 2));
      continue;
    }
    const auto eq = stripped.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("expected key = value at line " +
                        std::to_string(line_no) + " of " + path.string());
    }
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    if (section.empty() || key.empty()) {
      throw ConfigError("key outside a section at line " +
                        std::to_string(line_no) + " of " + path.string());
    }
    kv.entries[section + "." + key] = value;
  }
  return kv;
}

long long parse_int(const std::string& value, const std::string& key) {
  try {
    std::size_t pos = 0;
    const long long v = std::stoll(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("key '" + key + "' expects an integer, got '" + value +
                      "'");
  }
}

double parse_double(const std::string& value, const std::string& key) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("key '" + key + "' expects a number, got '" + value +
                      "'");
  }
}

bool parse_bool(const std::string& value, const std::string& key) {
  if (value == "true") return true;
  if (value == "false") return false;
  throw ConfigError("key '" + key + "' expects true or false, got '" + value +
                    "'");
}

std::vector<int> parse_int_list(const std::string& value,
                                const std::string& key) {
  std::vector<int> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    out.push_back(static_cast<int>(parse_int(trim(item), key)));
  }
  if (out.empty()) {
    throw ConfigError("key '" + key + "' expects a comma-separated list");
  }
  return out;
}

FoveationKind parse_kind(const std::string& value) {
  if (value == "downsample") return FoveationKind::Downsample;
  if (value == "scotoma") return FoveationKind::Scotoma;
  if (value == "fovea") return FoveationKind::Fovea;
  if (value == "achromatic") return FoveationKind::Achromatic;
  if (value == "fovea-achromatic") return FoveationKind::FoveaAchromatic;
  throw ConfigError("key 'foveation.kind' has unknown value '" + value + "'");
}

Location parse_location(const std::string& value) {
  if (value == "centered") return Location{LocationKind::Centered, 0};
  if (value == "random-quadrant") {
    return Location{LocationKind::RandomQuadrant, 0};
  }
  if (value.rfind("quadrant:", 0) == 0) {
    const long long q = parse_int(value.substr(9), "foveation.location");
    if (q < 0 || q > 3) {
      throw ConfigError("quadrant index must be 0..3, got " +
                        std::to_string(q));
    }
    return Location{LocationKind::Quadrant, static_cast<int>(q)};
  }
  throw ConfigError("key 'foveation.location' has unknown value '" + value +
                    "'");
}

LossKind parse_loss(const std::string& value) {
  if (value == "psnr") return LossKind::Psnr;
  if (value == "mse") return LossKind::Mse;
  if (value == "cross-entropy") return LossKind::CrossEntropy;
  throw ConfigError("key 'train.loss' has unknown value '" + value + "'");
}

std::string location_to_string(const Location& loc) {
  switch (loc.kind) {
    case LocationKind::Centered: return "centered";
    case LocationKind::Quadrant:
      return "quadrant:" + std::to_string(loc.quadrant);
    case LocationKind::RandomQuadrant: return "random-quadrant";
  }
  return "centered";
}

// Existing path as written, else relative to $DFAE_DATA_DIR.
std::string resolve_data_path(const std::string& value,
                              const std::string& key) {
  if (value.empty()) return value;
  if (std::filesystem::exists(value)) return value;
  if (!std::filesystem::path(value).is_absolute()) {
    if (const char* base = std::getenv("DFAE_DATA_DIR")) {
      const std::filesystem::path joined = std::filesystem::path(base) / value;
      if (std::filesystem::exists(joined)) return joined.string();
    }
  }
  throw ConfigError("key '" + key + "' names a missing file: " + value);
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

ExperimentConfig load_config(const std::filesystem::path& path) {
  KeyValues kv = read_key_values(path);
  ExperimentConfig cfg;

  cfg.dataset.name = kv.require("dataset.name");
  if (cfg.dataset.name != "mnist" && cfg.dataset.name != "cifar100") {
    throw ConfigError("key 'dataset.name' must be mnist or cifar100, got '" +
                      cfg.dataset.name + "'");
  }
  cfg.dataset.images =
      resolve_data_path(kv.require("dataset.images"), "dataset.images");
  cfg.dataset.labels =
      resolve_data_path(kv.take("dataset.labels", ""), "dataset.labels");
  cfg.dataset.test_images = resolve_data_path(
      kv.take("dataset.test_images", ""), "dataset.test_images");
  cfg.dataset.test_labels = resolve_data_path(
      kv.take("dataset.test_labels", ""), "dataset.test_labels");
  if (cfg.dataset.name == "mnist" && cfg.dataset.labels.empty()) {
    throw ConfigError("key 'dataset.labels' is required for mnist");
  }
  if (cfg.dataset.name == "mnist" && !cfg.dataset.test_images.empty() &&
      cfg.dataset.test_labels.empty()) {
    throw ConfigError("key 'dataset.test_labels' is required for mnist");
  }
  const std::string mode = kv.take("dataset.color_mode", "grayscale");
  if (mode == "color") {
    cfg.dataset.color_mode = ColorMode::Color;
  } else if (mode == "grayscale") {
    cfg.dataset.color_mode = ColorMode::Grayscale;
  } else {
    throw ConfigError("key 'dataset.color_mode' has unknown value '" + mode +
                      "'");
  }
  if (cfg.dataset.name == "mnist") cfg.dataset.color_mode = ColorMode::Grayscale;
  cfg.dataset.subsample = static_cast<std::size_t>(
      parse_int(kv.take("dataset.subsample", "0"), "dataset.subsample"));
  cfg.dataset.test_subsample = static_cast<std::size_t>(parse_int(
      kv.take("dataset.test_subsample", "0"), "dataset.test_subsample"));
  cfg.dataset.seed = static_cast<std::uint64_t>(
      parse_int(kv.take("dataset.seed", "0"), "dataset.seed"));

  cfg.foveation.kind = parse_kind(kv.require("foveation.kind"));
  cfg.foveation.region_fraction =
      parse_double(kv.take("foveation.r", "0"), "foveation.r");
  cfg.foveation.factor =
      static_cast<int>(parse_int(kv.take("foveation.d", "1"), "foveation.d"));
  cfg.foveation.location =
      parse_location(kv.take("foveation.location", "centered"));

  cfg.model.hidden = parse_int_list(kv.require("model.hidden"), "model.hidden");
  for (int h : cfg.model.hidden) {
    if (h < 1) throw ConfigError("key 'model.hidden' needs positive sizes");
  }

  cfg.train.epochs = static_cast<int>(
      parse_int(kv.take("train.epochs", "1000"), "train.epochs"));
  cfg.train.learning_rate = parse_double(
      kv.take("train.learning_rate", "1.0"), "train.learning_rate");
  cfg.train.batch_size = static_cast<int>(
      parse_int(kv.take("train.batch_size", "1"), "train.batch_size"));
  cfg.train.seed = static_cast<std::uint64_t>(
      parse_int(kv.take("train.seed", "0"), "train.seed"));
  cfg.train.adagrad_epsilon = parse_double(
      kv.take("train.adagrad_epsilon", "1e-8"), "train.adagrad_epsilon");
  cfg.train.shuffle =
      parse_bool(kv.take("train.shuffle", "true"), "train.shuffle");
  cfg.train.eval_every = static_cast<int>(
      parse_int(kv.take("train.eval_every", "10"), "train.eval_every"));
  cfg.train.loss = parse_loss(kv.take("train.loss", "psnr"));

  cfg.output_dir = kv.require("output.dir");

  if (kv.has("baseline.factors")) {
    cfg.baseline_factors =
        parse_int_list(kv.take("baseline.factors", ""), "baseline.factors");
  }

  if (!kv.entries.empty()) {
    throw ConfigError("unknown key '" + kv.entries.begin()->first + "' in " +
                      path.string());
  }
  return cfg;
}

void save_config(const std::filesystem::path& path,
                 const ExperimentConfig& cfg) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) {
    throw ConfigError("cannot write config snapshot: " + path.string());
  }
  out << "[dataset]\n";
  out << "name = " << cfg.dataset.name << "\n";
  out << "images = " << cfg.dataset.images << "\n";
  if (!cfg.dataset.labels.empty()) {
    out << "labels = " << cfg.dataset.labels << "\n";
  }
  if (!cfg.dataset.test_images.empty()) {
    out << "test_images = " << cfg.dataset.test_images << "\n";
  }
  if (!cfg.dataset.test_labels.empty()) {
    out << "test_labels = " << cfg.dataset.test_labels << "\n";
  }
  out << "color_mode = "
      << (cfg.dataset.color_mode == ColorMode::Color ? "color" : "grayscale")
      << "\n";
  out << "subsample = " << cfg.dataset.subsample << "\n";
  out << "test_subsample = " << cfg.dataset.test_subsample << "\n";
  out << "seed = " << cfg.dataset.seed << "\n";

  out << "\n[foveation]\n";
  out << "kind = " << to_string(cfg.foveation.kind) << "\n";
  out << "r = " << format_double(cfg.foveation.region_fraction) << "\n";
  out << "d = " << cfg.foveation.factor << "\n";
  out << "location = " << location_to_string(cfg.foveation.location) << "\n";

  out << "\n[model]\n";
  out << "hidden = ";
  for (std::size_t i = 0; i < cfg.model.hidden.size(); ++i) {
    out << (i ? "," : "") << cfg.model.hidden[i];
  }
  out << "\n";

  out << "\n[train]\n";
  out << "epochs = " << cfg.train.epochs << "\n";
  out << "learning_rate = " << format_double(cfg.train.learning_rate) << "\n";
  out << "batch_size = " << cfg.train.batch_size << "\n";
  out << "seed = " << cfg.train.seed << "\n";
  out << "adagrad_epsilon = " << format_double(cfg.train.adagrad_epsilon)
      << "\n";
  out << "shuffle = " << (cfg.train.shuffle ? "true" : "false") << "\n";
  out << "eval_every = " << cfg.train.eval_every << "\n";
  out << "loss = "
      << (cfg.train.loss == LossKind::Psnr
              ? "psnr"
              : cfg.train.loss == LossKind::Mse ? "mse" : "cross-entropy")
      << "\n";

  out << "\n[output]\n";
  out << "dir = " << cfg.output_dir << "\n";

  if (!cfg.baseline_factors.empty()) {
    out << "\n[baseline]\n";
    out << "factors = ";
    for (std::size_t i = 0; i < cfg.baseline_factors.size(); ++i) {
      out << (i ? "," : "") << cfg.baseline_factors[i];
    }
    out << "\n";
  }
}

std::pair<Dataset, Dataset> load_config_datasets(const ExperimentConfig& cfg) {
  Dataset train_ds;
  Dataset test_ds;
  if (cfg.dataset.name == "mnist") {
    train_ds = load_mnist(cfg.dataset.images, cfg.dataset.labels, Split::Train);
    if (!cfg.dataset.test_images.empty()) {
      test_ds = load_mnist(cfg.dataset.test_images, cfg.dataset.test_labels,
                           Split::Test);
    }
  } else {
    train_ds = load_cifar100(cfg.dataset.images, Split::Train,
                             cfg.dataset.color_mode);
    if (!cfg.dataset.test_images.empty()) {
      test_ds = load_cifar100(cfg.dataset.test_images, Split::Test,
                              cfg.dataset.color_mode);
    }
  }
  if (cfg.dataset.subsample > 0 && cfg.dataset.subsample < train_ds.size()) {
    train_ds = subsample(train_ds, cfg.dataset.subsample, cfg.dataset.seed);
  }
  if (cfg.dataset.test_subsample > 0 &&
      cfg.dataset.test_subsample < test_ds.size()) {
    test_ds = subsample(test_ds, cfg.dataset.test_subsample,
                        cfg.dataset.seed + 1);
  }
  return {std::move(train_ds), std::move(test_ds)};
}

}  // namespace dfae
