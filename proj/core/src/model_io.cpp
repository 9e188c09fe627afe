#include "trafficast/model_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "trafficast/io.hpp"

namespace trafficast {
namespace {

std::string join_sizes(const std::vector<std::size_t>& v) {
  std::string out;
  for (std::size_t s : v) {
    if (!out.empty()) out += ',';
    out += std::to_string(s);
  }
  return out;
}

template <class Int>
Int parse_uint(const std::string& key, const std::string& text) {
  Int v{};
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    throw ModelFormatError("model file: bad integer for '" + key + "': '" + text + "'");
  }
  return v;
}

std::vector<std::size_t> parse_sizes(const std::string& text) {
  std::vector<std::size_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_uint<std::size_t>("layers", item));
  return out;
}

class LineReader {
 public:
  explicit LineReader(std::istream& in) : in_(in) {}

  bool next(std::string& line) {
    if (!std::getline(in_, line)) return false;
    ++line_no_;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return true;
  }
  std::string require(const char* what) {
    std::string line;
    if (!next(line)) {
      throw ModelFormatError("model file truncated: expected " + std::string(what) +
                             " after line " + std::to_string(line_no_));
    }
    return line;
  }
  std::size_t line_no() const { return line_no_; }

 private:
  std::istream& in_;
  std::size_t line_no_ = 0;
};

}  // namespace

const std::string& ModelFile::meta(const std::string& key) const {
  for (const auto& [k, v] : metadata) {
    if (k == key) return v;
  }
  throw ModelFormatError("model file has no '" + key + "' entry");
}

void write_model(std::ostream& out, const Network& net, const ModelMetadata& metadata) {
  const ModelConfig& cfg = net.config();
  const auto tensors = net.params().named();
  out << kModelHeader << '\n';
  out << "cell=" << to_string(cfg.cell_kind) << '\n';
  out << "layers=" << join_sizes(cfg.layer_sizes) << '\n';
  out << "input_dim=" << cfg.input_dim << '\n';
  out << "horizon=" << cfg.horizon << '\n';
  out << "seed=" << cfg.seed << '\n';
  out << "tensors=" << tensors.size() << '\n';
  for (const auto& [k, v] : metadata) {
    if (k.find_first_of("=\n") != std::string::npos || v.find('\n') != std::string::npos) {
      throw std::invalid_argument("write_model: metadata '" + k + "' is not line-safe");
    }
    out << "meta." << k << '=' << v << '\n';
  }
  for (const auto& t : tensors) {
    const Matrix& m = *t.value;
    out << t.name << '\n' << m.rows() << ' ' << m.cols() << '\n';
    for (std::size_t r = 0; r < m.rows(); ++r) {
      for (std::size_t c = 0; c < m.cols(); ++c) {
        if (c) out << ' ';
        out << format_double(m(r, c));
      }
      out << '\n';
    }
  }
}

ModelFile read_model(std::istream& in) {
  LineReader reader(in);
  std::string line;
  if (!reader.next(line)) throw ModelFormatError("model file is empty");
  if (line != kModelHeader) {
    if (line.rfind("trafficast-model ", 0) == 0) {
      throw ModelFormatError("unsupported model version '" + line.substr(17) + "' (expected v1)");
    }
    throw ModelFormatError("not a trafficast model file (bad header line)");
  }

  ModelConfig cfg;
  ModelMetadata metadata;
  std::size_t tensor_count = 0;
  bool seen_cell = false, seen_layers = false, seen_input = false, seen_tensors = false;
  std::string first_tensor;
  while (true) {
    line = reader.require("configuration or tensor");
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      first_tensor = line;
      break;
    }
    const std::string key = line.substr(0, eq);
    const std::string value = line.substr(eq + 1);
    if (key == "cell") {
      try {
        cfg.cell_kind = parse_cell_kind(value);
      } catch (const std::invalid_argument& e) {
        throw ModelFormatError(std::string("model file: ") + e.what());
      }
      seen_cell = true;
    } else if (key == "layers") {
      cfg.layer_sizes = parse_sizes(value);
      seen_layers = true;
    } else if (key == "input_dim") {
      cfg.input_dim = parse_uint<std::size_t>(key, value);
      seen_input = true;
    } else if (key == "horizon") {
      cfg.horizon = parse_uint<std::size_t>(key, value);
    } else if (key == "seed") {
      cfg.seed = parse_uint<std::uint64_t>(key, value);
    } else if (key == "tensors") {
      tensor_count = parse_uint<std::size_t>(key, value);
      seen_tensors = true;
    } else if (key.rfind("meta.", 0) == 0) {
      metadata.emplace_back(key.substr(5), value);
    } else {
      throw ModelFormatError("model file: unknown configuration key '" + key + "'");
    }
  }
  if (!seen_cell || !seen_layers || !seen_input || !seen_tensors) {
    throw ModelFormatError("model file: configuration is missing cell, layers, input_dim or tensors");
  }
  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw ModelFormatError(std::string("model file: ") + e.what());
  }

  // Build the expected skeleton and fill it tensor by tensor.
  Network skeleton = Network::create(cfg);
  ParameterSet params = skeleton.params();
  auto slots = params.named();
  if (slots.size() != tensor_count) {
    throw ModelFormatError("model file: configuration implies " + std::to_string(slots.size()) +
                           " tensors but file declares " + std::to_string(tensor_count));
  }

  for (std::size_t k = 0; k < slots.size(); ++k) {
    const std::string name = k == 0 ? first_tensor : reader.require("tensor name");
    if (name != slots[k].name) {
      throw ModelFormatError("model file line " + std::to_string(reader.line_no()) +
                             ": expected tensor '" + slots[k].name + "', found '" + name + "'");
    }
    std::istringstream shape(reader.require("tensor shape"));
    std::size_t rows = 0, cols = 0;
    if (!(shape >> rows >> cols)) {
      throw ModelFormatError("model file: bad shape line for '" + name + "'");
    }
    Matrix& slot = *slots[k].value;
    if (rows != slot.rows() || cols != slot.cols()) {
      throw ModelFormatError("model file: tensor '" + name + "' has shape (" +
                             std::to_string(rows) + "x" + std::to_string(cols) +
                             ") but the configuration requires " + slot.shape_string());
    }
    for (std::size_t r = 0; r < rows; ++r) {
      std::istringstream row(reader.require("tensor row"));
      std::string token;
      std::size_t c = 0;
      while (row >> token) {
        if (c == cols) {
          throw ModelFormatError("model file: too many values in row " + std::to_string(r) +
                                 " of '" + name + "'");
        }
        try {
          slot(r, c++) = parse_double_strict(token);
        } catch (const std::invalid_argument&) {
          throw ModelFormatError("model file line " + std::to_string(reader.line_no()) +
                                 ": bad value '" + token + "'");
        }
      }
      if (c != cols) {
        throw ModelFormatError("model file: row " + std::to_string(r) + " of '" + name +
                               "' has " + std::to_string(c) + " values, expected " +
                               std::to_string(cols));
      }
    }
  }
  return ModelFile{Network(cfg, std::move(params)), std::move(metadata)};
}

void save_model(const Network& net, const std::filesystem::path& path,
                const ModelMetadata& metadata) {
  std::ostringstream out;
  write_model(out, net, metadata);
  write_file_atomic(path, out.str());
}

ModelFile load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ModelFormatError("cannot open model file '" + path.string() + "'");
  return read_model(in);
}

}  // namespace trafficast
