#pragma once

#include <filesystem>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "trafficast/network.hpp"

namespace trafficast {

class ModelFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr const char* kModelHeader = "trafficast-model v1";

/// Free-form key/value pairs stored next to the network (preprocessing
/// settings, scaler ranges). Keys must not contain '=' or newlines.
using ModelMetadata = std::vector<std::pair<std::string, std::string>>;

struct ModelFile {
  Network net;
  ModelMetadata metadata;

  /// Value for `key`; throws ModelFormatError when absent.
  const std::string& meta(const std::string& key) const;
};

/// Text format:
///   trafficast-model v1
///   key=value config lines (cell, layers, input_dim, horizon, seed, tensors,
///   then meta.* entries)
///   per tensor: name line, "rows cols" line, one line of values per row.
/// Values use shortest round-trip decimal text, so loading is bit-exact.
void write_model(std::ostream& out, const Network& net, const ModelMetadata& metadata = {});
ModelFile read_model(std::istream& in);

/// Atomic write (temp file + rename).
void save_model(const Network& net, const std::filesystem::path& path,
                const ModelMetadata& metadata = {});
ModelFile load_model(const std::filesystem::path& path);

}  // namespace trafficast
