// Copyright 2026 The quanta Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef QUANTA_CLI_OUTPUT_HPP
#define QUANTA_CLI_OUTPUT_HPP

#include <ostream>
#include <string>
#include <vector>

namespace quanta::cli {

  /// %.17g, so that every double round-trips.
  std::string format_number(double x);

  struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;

    void add(std::vector<double> row) { rows.push_back(std::move(row)); }
    std::vector<double> column(std::size_t i) const;
    bool all_finite() const;
  };

  void write_csv(std::ostream& os, const Table& table);
  std::string to_csv(const Table& table);

  struct Series {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
  };

  struct PlotSpec {
    std::string title;
    std::string x_label;
    std::string y_label;
    bool log_x = false;
    bool log_y = false;
  };

  /// Line plot as a standalone SVG document: axes, tick labels, one polyline
  /// per series. Points that cannot be drawn (non-finite, or <= 0 on a log
  /// axis) are skipped.
  std::string render_svg(const PlotSpec& spec, const std::vector<Series>& series);

  /// Whole-file write; throws std::runtime_error when the file cannot be written.
  void write_file(const std::string& path, const std::string& contents);

}

#endif
