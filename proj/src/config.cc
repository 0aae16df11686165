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

#include "config.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "iontrap/constants.hpp"
#include "iontrap/errors.hpp"

namespace iontrap {

namespace {

std::string trim(const std::string &s) {
  size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

// Drops a trailing comment that is not inside a string.
std::string strip_comment(const std::string &s) {
  bool quoted = false;
  for (size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '"') quoted = !quoted;
    if (s[i] == '#' && !quoted) return s.substr(0, i);
  }
  return s;
}

bool valid_key(const std::string &k) {
  if (k.empty()) return false;
  for (char c : k)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
  return true;
}

using UnitTable = std::map<std::string, double>;

UnitTable prefixed(const std::string &base, double scale = 1.0) {
  static const std::pair<const char *, double> prefixes[] = {{"f", 1e-15}, {"p", 1e-12}, {"n", 1e-9}, {"u", 1e-6},
                                                           {"m", 1e-3},  {"", 1.0},    {"k", 1e3},  {"M", 1e6},
                                                           {"G", 1e9},   {"T", 1e12}};
  UnitTable t;
  for (auto &[p, f] : prefixes) t[std::string(p) + base] = f * scale;
  return t;
}

const UnitTable &units_for(Dim d) {
  using constants::pi;
  static const std::map<Dim, UnitTable> table = [] {
    std::map<Dim, UnitTable> m;
    m[Dim::None] = {{"", 1.0}};
    m[Dim::Angle] = {{"rad", 1.0}, {"mrad", 1e-3}, {"deg", pi / 180.0}, {"pi", pi}};
    UnitTable af = prefixed("Hz", 2.0 * pi);
    for (auto &[k, v] : prefixed("rad/s")) af[k] = v;
    m[Dim::AngularFrequency] = af;
    UnitTable rate = prefixed("Hz");
    rate["/s"] = rate["1/s"] = rate["s^-1"] = 1.0;
    rate["/ms"] = rate["1/ms"] = 1e3;
    rate["/us"] = rate["1/us"] = 1e6;
    m[Dim::Rate] = rate;
    m[Dim::Time] = prefixed("s");
    UnitTable len = prefixed("m");
    len["A"] = 1e-10;
    m[Dim::Length] = len;
    UnitTable mass = prefixed("g", 1e-3);
    mass["u"] = constants::amu;
    mass["amu"] = constants::amu;
    m[Dim::Mass] = mass;
    UnitTable q = prefixed("C");
    q["e"] = constants::e;
    m[Dim::Charge] = q;
    m[Dim::Voltage] = prefixed("V");
    m[Dim::Temperature] = prefixed("K");
    m[Dim::Pressure] = prefixed("Pa");
    m[Dim::Pressure]["Torr"] = 133.322368;
    m[Dim::Inductance] = prefixed("H");
    m[Dim::Resistance] = prefixed("Ohm");
    m[Dim::ElectricField] = {{"V/m", 1.0}, {"V/mm", 1e3}, {"V/cm", 1e2}, {"mV/m", 1e-3}, {"kV/m", 1e3}};
    m[Dim::Diffusion] = {{"m2/s", 1.0}, {"cm2/s", 1e-4}};
    m[Dim::Volume] = {{"m3", 1.0}, {"cm3", 1e-6}, {"A3", 1e-30}};
    m[Dim::Power] = prefixed("W");
    m[Dim::InverseArea] = {{"1/m2", 1.0}, {"1/mm2", 1e6}, {"1/cm2", 1e4}};
    m[Dim::VoltageNoise] = {{"V2/Hz", 1.0}};
    m[Dim::FieldCurvature] = {{"V/m3", 1.0}, {"V/mm3", 1e9}};
    return m;
  }();
  return table.at(d);
}

std::string unit_list(Dim d) {
  std::string s;
  for (auto &[k, v] : units_for(d)) {
    if (k.empty()) continue;
    if (!s.empty()) s += ", ";
    s += k;
  }
  return s;
}

}  // namespace

const char *dim_name(Dim d) {
  switch (d) {
    case Dim::None: return "dimensionless";
    case Dim::Angle: return "angle";
    case Dim::AngularFrequency: return "frequency";
    case Dim::Rate: return "rate";
    case Dim::Time: return "time";
    case Dim::Length: return "length";
    case Dim::Mass: return "mass";
    case Dim::Charge: return "charge";
    case Dim::Voltage: return "voltage";
    case Dim::Temperature: return "temperature";
    case Dim::Pressure: return "pressure";
    case Dim::Inductance: return "inductance";
    case Dim::Resistance: return "resistance";
    case Dim::ElectricField: return "electric field";
    case Dim::Diffusion: return "diffusion constant";
    case Dim::Volume: return "volume";
    case Dim::Power: return "power";
    case Dim::InverseArea: return "inverse area";
    case Dim::VoltageNoise: return "voltage noise density";
    case Dim::FieldCurvature: return "field curvature";
  }
  return "?";
}

double parse_quantity(const std::string &text, Dim d, const std::string &key_path) {
  std::string t = trim(text);
  double x = 0;
  const char *b = t.data(), *e = t.data() + t.size();
  auto [p, ec] = std::from_chars(b, e, x);
  if (ec != std::errc()) throw ConfigError(key_path, "expected a number, got '" + t + "'");
  std::string unit = trim(std::string(p, e));
  const UnitTable &u = units_for(d);
  auto it = u.find(unit);
  if (it == u.end()) {
    if (unit.empty()) throw ConfigError(key_path, std::string("missing unit for a ") + dim_name(d) + " (one of " + unit_list(d) + ")");
    if (d == Dim::None) throw ConfigError(key_path, "unexpected unit '" + unit + "' on a dimensionless value");
    throw ConfigError(key_path, "unknown unit '" + unit + "' for a " + dim_name(d) + " (one of " + unit_list(d) + ")");
  }
  return x * it->second;
}

std::vector<std::string> split_list(const std::string &text, const std::string &key_path) {
  std::string t = trim(text);
  if (t.empty() || t.front() != '[') return {t};
  if (t.back() != ']') throw ConfigError(key_path, "unterminated list");
  std::vector<std::string> out;
  std::string body = t.substr(1, t.size() - 2);
  if (trim(body).empty()) return out;
  std::string item;
  bool quoted = false;
  auto flush = [&] {
    item = trim(item);
    if (item.empty()) throw ConfigError(key_path, "empty list item");
    out.push_back(item);
    item.clear();
  };
  for (char ch : body) {
    if (ch == '"') quoted = !quoted;
    if (ch == ',' && !quoted) flush();
    else item += ch;
  }
  if (quoted) throw ConfigError(key_path, "unterminated string in list");
  flush();
  return out;
}

Config Config::parse(const std::string &text, const std::string &origin) {
  Config cfg;
  cfg.origin_ = origin;
  cfg.root_ = std::make_shared<ConfigNode>();
  cfg.root_->is_block = true;
  std::vector<ConfigNode *> stack{cfg.root_.get()};
  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  auto where = [&] { return origin + ":" + std::to_string(lineno); };
  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = trim(strip_comment(raw));
    if (line.empty()) continue;
    ConfigNode *top = stack.back();
    if (line == "}") {
      if (stack.size() == 1) throw ConfigError(where(), "unmatched '}'");
      stack.pop_back();
      continue;
    }
    if (top->key == "expect") {
      top->lines.push_back(line);
      continue;
    }
    if (line.back() == '{') {
      std::string key = trim(line.substr(0, line.size() - 1));
      if (!valid_key(key)) throw ConfigError(where(), "bad block name '" + key + "'");
      auto node = std::make_unique<ConfigNode>();
      node->key = key;
      node->path = top->path.empty() ? key : top->path + "." + key;
      node->line = lineno;
      node->is_block = true;
      ConfigNode *raw_node = node.get();
      top->children.push_back(std::move(node));
      stack.push_back(raw_node);
      continue;
    }
    size_t eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(where(), "expected 'key = value' or 'key {'");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (!valid_key(key)) throw ConfigError(where(), "bad key '" + key + "'");
    if (value.empty()) throw ConfigError(where(), "empty value for '" + key + "'");
    for (auto &c : top->children)
      if (!c->is_block && c->key == key) throw ConfigError(where(), "duplicate key '" + key + "'");
    auto node = std::make_unique<ConfigNode>();
    node->key = key;
    node->path = top->path.empty() ? key : top->path + "." + key;
    node->line = lineno;
    node->value = value;
    top->children.push_back(std::move(node));
  }
  if (stack.size() != 1) throw ConfigError(origin, "unterminated block '" + stack.back()->path + "'");
  return cfg;
}

Config Config::load(const std::string &path) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot read " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse(ss.str(), path);
}

const ConfigNode *Config::find(const std::string &path) const {
  const ConfigNode *n = root_.get();
  std::stringstream ss(path);
  std::string part;
  while (std::getline(ss, part, '.')) {
    const ConfigNode *next = nullptr;
    for (auto &c : n->children)
      if (c->key == part) {
        next = c.get();
        break;
      }
    if (!next) return nullptr;
    if (next->is_block) next->used = true;
    n = next;
  }
  return n;
}

const ConfigNode &Config::require(const std::string &path) const {
  const ConfigNode *n = find(path);
  if (!n || n->is_block) throw ConfigError(path, "required key is missing");
  n->used = true;
  return *n;
}

bool Config::has(const std::string &path) const {
  const ConfigNode *n = root_.get();
  std::stringstream ss(path);
  std::string part;
  while (std::getline(ss, part, '.')) {
    const ConfigNode *next = nullptr;
    for (auto &c : n->children)
      if (c->key == part) next = c.get();
    if (!next) return false;
    n = next;
  }
  return true;
}

double Config::quantity(const std::string &path, Dim d) const {
  const ConfigNode &n = require(path);
  if (!n.value.empty() && n.value.front() == '[') throw ConfigError(path, "expected a scalar, got a list");
  return parse_quantity(n.value, d, path);
}

double Config::quantity(const std::string &path, Dim d, double fallback) const {
  return has(path) ? quantity(path, d) : fallback;
}

std::vector<double> Config::quantities(const std::string &path, Dim d) const {
  const ConfigNode &n = require(path);
  std::vector<double> out;
  for (auto &item : split_list(n.value, path)) out.push_back(parse_quantity(item, d, path));
  return out;
}

std::vector<double> Config::quantities(const std::string &path, Dim d, const std::vector<double> &fallback) const {
  return has(path) ? quantities(path, d) : fallback;
}

long Config::integer(const std::string &path) const {
  const ConfigNode &n = require(path);
  std::string t = trim(n.value);
  long v = 0;
  auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || p != t.data() + t.size()) throw ConfigError(path, "expected an integer, got '" + t + "'");
  return v;
}

long Config::integer(const std::string &path, long fallback) const { return has(path) ? integer(path) : fallback; }

std::vector<long> Config::integers(const std::string &path) const {
  const ConfigNode &n = require(path);
  std::vector<long> out;
  for (auto &item : split_list(n.value, path)) {
    long v = 0;
    auto [p, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
    if (ec != std::errc() || p != item.data() + item.size())
      throw ConfigError(path, "expected an integer, got '" + item + "'");
    out.push_back(v);
  }
  return out;
}

bool Config::boolean(const std::string &path, bool fallback) const {
  if (!has(path)) return fallback;
  std::string v = trim(require(path).value);
  if (v == "true" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "no" || v == "off") return false;
  throw ConfigError(path, "expected true or false, got '" + v + "'");
}

std::string Config::string(const std::string &path) const {
  std::string v = trim(require(path).value);
  if (v.size() >= 2 && v.front() == '"' && v.back() == '"') return v.substr(1, v.size() - 2);
  return v;
}

std::string Config::string(const std::string &path, const std::string &fallback) const {
  return has(path) ? string(path) : fallback;
}

std::vector<std::string> Config::strings(const std::string &path) const {
  std::vector<std::string> out;
  for (auto &item : split_list(require(path).value, path)) {
    if (item.size() >= 2 && item.front() == '"' && item.back() == '"') item = item.substr(1, item.size() - 2);
    out.push_back(item);
  }
  return out;
}

std::vector<const ConfigNode *> Config::blocks(const std::string &key) const {
  std::vector<const ConfigNode *> out;
  for (auto &c : root_->children)
    if (c->is_block && c->key == key) {
      c->used = true;
      out.push_back(c.get());
    }
  return out;
}

const ConfigNode *Config::block(const std::string &key) const {
  auto b = blocks(key);
  return b.empty() ? nullptr : b.front();
}

void Config::reject_unused() const {
  std::vector<const ConfigNode *> todo{root_.get()};
  while (!todo.empty()) {
    const ConfigNode *n = todo.back();
    todo.pop_back();
    for (auto it = n->children.rbegin(); it != n->children.rend(); ++it) {
      const ConfigNode &c = **it;
      if (!c.used) throw ConfigError(c.path, "unknown key (line " + std::to_string(c.line) + ")");
      if (c.is_block) todo.push_back(&c);
    }
  }
}

}  // namespace iontrap
