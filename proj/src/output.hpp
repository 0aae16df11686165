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

#ifndef IONTRAP_SRC_OUTPUT_HPP
#define IONTRAP_SRC_OUTPUT_HPP

#include <string>
#include <vector>

namespace iontrap {

struct Table {
  std::string name;                  // file stem
  std::vector<std::string> columns;  // "name [unit]"
  std::vector<std::vector<double>> rows;
  std::vector<std::string> meta;     // written as '# ' lines

  void add(std::vector<double> row) { rows.push_back(std::move(row)); }
  int column(const std::string &name) const;  // matches the part before " ["; -1 if absent
};

/// Shortest round-trip text for a double; fixed across platforms for finite
/// values.
std::string format_number(double x);

std::string to_csv(const Table &t);

struct PlotSpec {
  std::string table;
  std::string x;
  std::vector<std::string> y;
  std::string title;
  bool log_x = false, log_y = false;
};

/// Static line plot. Columns must exist in t.
std::string to_svg(const Table &t, const PlotSpec &p);

/// Writes text to path, creating parent directories. Returns false on I/O
/// failure.
bool write_text(const std::string &path, const std::string &text);

}  // namespace iontrap

#endif
