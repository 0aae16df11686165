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

#include "output.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

namespace iontrap {

int Table::column(const std::string &name) const {
  for (size_t i = 0; i < columns.size(); ++i) {
    std::string c = columns[i];
    size_t b = c.find(" [");
    if (b != std::string::npos) c = c.substr(0, b);
    if (c == name || columns[i] == name) return static_cast<int>(i);
  }
  return -1;
}

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (x == 0) return "0";
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, p);
}

std::string to_csv(const Table &t) {
  std::ostringstream o;
  for (auto &m : t.meta) o << "# " << m << "\n";
  for (size_t i = 0; i < t.columns.size(); ++i) o << (i ? "," : "") << t.columns[i];
  o << "\n";
  for (auto &r : t.rows) {
    for (size_t i = 0; i < r.size(); ++i) o << (i ? "," : "") << format_number(r[i]);
    o << "\n";
  }
  return o.str();
}

namespace {

std::string esc(const std::string &s) {
  std::string o;
  for (char c : s) {
    if (c == '<') o += "&lt;";
    else if (c == '>') o += "&gt;";
    else if (c == '&') o += "&amp;";
    else o += c;
  }
  return o;
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f", x);
  return buf;
}

std::string tick(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

}  // namespace

std::string to_svg(const Table &t, const PlotSpec &p) {
  const double W = 640, H = 420, ml = 70, mr = 20, mt = 40, mb = 50;
  int xi = t.column(p.x);
  std::vector<int> yi;
  for (auto &y : p.y) yi.push_back(t.column(y));
  auto tx = [&](double v) { return p.log_x ? std::log10(v) : v; };
  auto ty = [&](double v) { return p.log_y ? std::log10(v) : v; };
  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
  for (auto &r : t.rows) {
    double x = tx(r[xi]);
    if (!std::isfinite(x)) continue;
    x0 = std::min(x0, x);
    x1 = std::max(x1, x);
    for (int j : yi) {
      double y = ty(r[j]);
      if (!std::isfinite(y)) continue;
      y0 = std::min(y0, y);
      y1 = std::max(y1, y);
    }
  }
  if (!(x1 > x0)) x1 = x0 + 1;
  if (!(y1 > y0)) y1 = y0 + 1;
  double pad = 0.05 * (y1 - y0);
  y0 -= pad;
  y1 += pad;
  auto X = [&](double v) { return ml + (tx(v) - x0) / (x1 - x0) * (W - ml - mr); };
  auto Y = [&](double v) { return H - mb - (ty(v) - y0) / (y1 - y0) * (H - mt - mb); };
  static const char *colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};
  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  o << "<text x=\"" << W / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" << esc(p.title) << "</text>\n";
  o << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << W - ml - mr << "\" height=\"" << H - mt - mb
    << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int k = 0; k <= 4; ++k) {
    double xv = x0 + k * (x1 - x0) / 4, yv = y0 + k * (y1 - y0) / 4;
    double px = ml + k * (W - ml - mr) / 4, py = H - mb - k * (H - mt - mb) / 4;
    o << "<text x=\"" << fmt(px) << "\" y=\"" << H - mb + 16 << "\" text-anchor=\"middle\">"
      << tick(p.log_x ? std::pow(10, xv) : xv) << "</text>\n";
    o << "<text x=\"" << ml - 6 << "\" y=\"" << fmt(py + 4) << "\" text-anchor=\"end\">"
      << tick(p.log_y ? std::pow(10, yv) : yv) << "</text>\n";
  }
  o << "<text x=\"" << W / 2 << "\" y=\"" << H - 10 << "\" text-anchor=\"middle\">" << esc(t.columns[xi]) << "</text>\n";
  for (size_t s = 0; s < yi.size(); ++s) {
    o << "<polyline fill=\"none\" stroke=\"" << colors[s % 6] << "\" stroke-width=\"1.5\" points=\"";
    for (auto &r : t.rows) {
      if (!std::isfinite(tx(r[xi])) || !std::isfinite(ty(r[yi[s]]))) continue;
      o << fmt(X(r[xi])) << "," << fmt(Y(r[yi[s]])) << " ";
    }
    o << "\"/>\n";
    o << "<text x=\"" << ml + 10 << "\" y=\"" << mt + 16 + 14 * s << "\" fill=\"" << colors[s % 6] << "\">"
      << esc(t.columns[yi[s]]) << "</text>\n";
  }
  o << "</svg>\n";
  return o.str();
}

bool write_text(const std::string &path, const std::string &text) {
  std::error_code ec;
  auto parent = std::filesystem::path(path).parent_path();
  if (!parent.empty()) std::filesystem::create_directories(parent, ec);
  std::ofstream f(path, std::ios::binary);
  if (!f) return false;
  f << text;
  return static_cast<bool>(f);
}

}  // namespace iontrap
