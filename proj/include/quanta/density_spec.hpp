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

#ifndef QUANTA_DENSITY_SPEC_HPP
#define QUANTA_DENSITY_SPEC_HPP

// Text grammar for densities, shared by the library and the command line:
//
//   density := part ('+' part)*
//   part    := 'comb:eps=' F [',masses=' F (';' F)*] [',tail=' F]
//            | 'table:' PATH            two-column CSV, header "eta,w"
//            | ['w='] ('const' | 'exp' | 'invsqrt')
//
// A comb without masses= is the infinite unit comb. With masses= and no
// tail= the comb is finite.

#include <string>
#include <string_view>
#include <vector>

#include "quanta/core.hpp"

namespace quanta {

  /// Parses a density description; throws ParseError.
  WeightDensity parse_density(std::string_view spec);

  /// Reads a CSV file whose first row is exactly `header` (comma separated).
  /// Returns one vector per column. Throws ParseError.
  std::vector<std::vector<double>> read_csv_columns(const std::string& path, std::string_view header);

  /// Table density from an "eta,w" CSV file.
  WeightDensity load_table_density(const std::string& path);

  /// Energy curve from an "alpha,Y" CSV file with at least 2 rows.
  EnergyCurve load_energy_curve(const std::string& path);

}

#endif
