// Copyright 2026 The iontrap Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef IONTRAP_SRC_CONFIG_HPP
#define IONTRAP_SRC_CONFIG_HPP

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace iontrap {

/// Physical dimension expected for a config value.
enum class Dim {
  None,
  Angle,
  AngularFrequency,
  Rate,
  Time,
  Length,
  Mass,
  Charge,
  Voltage,
  Temperature,
  Pressure,
  Inductance,
  Resistance,
  ElectricField,
  Diffusion,
  Volume,
  Power,
  InverseArea,
  VoltageNoise,
  FieldCurvature,
};

/// One node of the parsed tree: either a value or a block of children.
struct ConfigNode {
  std::string key;
  std::string path;  // dotted path from the root
  int line = 0;
  bool is_block = false;
  std::string value;                // raw text for values
  std::vector<std::string> lines;   // raw statements of an expect block
  std::vector<std::unique_ptr<ConfigNode>> children;
  mutable bool used = false;
};

class Config {
 public:
  /// Parses text. ConfigError names the line on malformed input.
  static Config parse(const std::string &text, const std::string &origin = "<config>");
  static Config load(const std::string &path);

  const ConfigNode &root() const { return *root_; }
  const std::string &origin() const { return origin_; }

  bool has(const std::string &path) const;
  double quantity(const std::string &path, Dim d) const;
  double quantity(const std::string &path, Dim d, double fallback) const;
  std::vector<double> quantities(const std::string &path, Dim d) const;
  std::vector<double> quantities(const std::string &path, Dim d, const std::vector<double> &fallback) const;
  double number(const std::string &path) const { return quantity(path, Dim::None); }
  double number(const std::string &path, double fallback) const { return quantity(path, Dim::None, fallback); }
  long integer(const std::string &path) const;
  long integer(const std::string &path, long fallback) const;
  std::vector<long> integers(const std::string &path) const;
  bool boolean(const std::string &path, bool fallback) const;
  std::string string(const std::string &path) const;
  std::string string(const std::string &path, const std::string &fallback) const;
  std::vector<std::string> strings(const std::string &path) const;

  /// Blocks with the given key directly under the root.
  std::vector<const ConfigNode *> blocks(const std::string &key) const;
  const ConfigNode *block(const std::string &key) const;

  /// ConfigError on the first key never read.
  void reject_unused() const;

 private:
  std::shared_ptr<ConfigNode> root_;
  std::string origin_;
  const ConfigNode *find(const std::string &path) const;
  const ConfigNode &require(const std::string &path) const;
};

/// Splits "1.5 MHz" into a number and converts to SI for dimension d.
/// key_path is used in error messages.
double parse_quantity(const std::string &text, Dim d, const std::string &key_path);

/// Splits a list literal "[a, b, c]" into trimmed items. A bare scalar is a
/// one-element list.
std::vector<std::string> split_list(const std::string &text, const std::string &key_path);

const char *dim_name(Dim d);

}  // namespace iontrap

#endif
