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

#ifndef QUANTA_CLI_CLI_HPP
#define QUANTA_CLI_CLI_HPP

#include <cstddef>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "quanta/core.hpp"

namespace quanta::cli {

  enum ExitCode : int { kSuccess = 0, kNumericFailure = 1, kUsageFailure = 2 };

  /// `min:max:count`, linear unless log is set.
  struct GridSpec {
    double min = 0.0;
    double max = 0.0;
    std::size_t count = 0;
    bool log = false;

    std::vector<double> values() const;
  };

  /// Throws ParseError on bad syntax, count < 2, min >= max, or min <= 0 on a
  /// log grid.
  GridSpec parse_grid(const std::string& text, bool log);

  /// `kB=..,h=..,c=..`; missing keys keep their reduced value. Throws ParseError.
  PhysicalConstants parse_constants(const std::string& text);

  struct RunConfig {
    std::string subcommand;
    std::string density;
    std::string curve;
    int n = 1;
    int p = 1;
    std::optional<double> e_total;
    std::optional<double> beta;
    double r = 1.0;
    std::vector<int> n_list{8, 16, 32, 64};
    std::string nu_grid = "0.01:50:100";
    std::string alpha_grid;
    std::string t_grid;
    bool log = false;
    double temperature = 1.0;
    std::string constants;
    std::string out;
    std::string json;
    std::string plot;
    double lambda = 1e-6;
    std::size_t grid_size = 601;
    double eta_max = 6.0;
    long max_passes = 100000;
    int grid_intervals = 512;
    std::vector<double> eta0;
  };

  /// The whole command line: parses, runs one subcommand, writes its
  /// artifacts. Data goes to files or `out`, diagnostics to `err`.
  int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
  int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

  /// Runs an already parsed configuration.
  int execute(const RunConfig& config, std::ostream& out, std::ostream& err);

}

#endif
