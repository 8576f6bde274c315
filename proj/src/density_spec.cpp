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

#include "quanta/density_spec.hpp"

#include <cctype>
#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "quanta/errors.hpp"

namespace quanta {

  namespace {

    std::string trim(std::string_view s) {
      const auto b = s.find_first_not_of(" \t\r\n");
      if (b == std::string_view::npos)
        return {};
      const auto e = s.find_last_not_of(" \t\r\n");
      return std::string(s.substr(b, e - b + 1));
    }

    std::vector<std::string> split(std::string_view s, char sep) {
      std::vector<std::string> out;
      std::size_t start = 0;
      while (true) {
        const auto pos = s.find(sep, start);
        out.push_back(trim(s.substr(start, pos == std::string_view::npos ? pos : pos - start)));
        if (pos == std::string_view::npos)
          break;
        start = pos + 1;
      }
      return out;
    }

    double to_number(const std::string& text, std::string_view what) {
      if (text.empty())
        throw ParseError("empty number for " + std::string(what));
      errno = 0;
      char* end = nullptr;
      const double v = std::strtod(text.c_str(), &end);
      if (end != text.c_str() + text.size() || errno == ERANGE)
        throw ParseError("bad number '" + text + "' for " + std::string(what));
      return v;
    }

    WeightDensity parse_comb(std::string_view body) {
      double eps = 0;
      bool have_eps = false, have_masses = false;
      std::vector<double> masses;
      double tail = 0;
      bool have_tail = false;
      for (const auto& field : split(body, ',')) {
        const auto eq = field.find('=');
        if (eq == std::string::npos)
          throw ParseError("comb field without '=': " + field);
        const std::string key = trim(std::string_view(field).substr(0, eq));
        const std::string val = trim(std::string_view(field).substr(eq + 1));
        if (key == "eps") {
          eps = to_number(val, "eps");
          have_eps = true;
        } else if (key == "masses") {
          for (const auto& m : split(val, ';'))
            masses.push_back(to_number(m, "masses"));
          have_masses = true;
        } else if (key == "tail") {
          tail = to_number(val, "tail");
          have_tail = true;
        } else {
          throw ParseError("unknown comb field '" + key + "'");
        }
      }
      if (!have_eps)
        throw ParseError("comb needs eps=");
      if (!have_masses)
        return WeightDensity::comb(eps, {1.0}, have_tail ? tail : 1.0);
      return WeightDensity::comb(eps, std::move(masses), tail);
    }

    WeightDensity parse_part(const std::string& part) {
      if (part.rfind("comb:", 0) == 0)
        return parse_comb(std::string_view(part).substr(5));
      if (part.rfind("table:", 0) == 0)
        return load_table_density(trim(std::string_view(part).substr(6)));
      std::string name = part;
      if (name.rfind("w=", 0) == 0)
        name = trim(std::string_view(name).substr(2));
      if (name == "const")
        return WeightDensity::constant();
      if (name == "exp")
        return WeightDensity::exponential();
      if (name == "invsqrt")
        return WeightDensity::inverse_sqrt();
      throw ParseError("unknown density '" + part + "'");
    }

  }

  WeightDensity parse_density(std::string_view spec) {
    const std::string text = trim(spec);
    if (text.empty())
      throw ParseError("empty density description");
    // '+' also occurs in exponents such as 1e+3; glue those pieces back
    std::vector<std::string> parts;
    for (auto& piece : split(text, '+')) {
      const std::string& prev = parts.empty() ? piece : parts.back();
      const std::size_t n = prev.size();
      if (!parts.empty() && n >= 2 && (prev[n - 1] == 'e' || prev[n - 1] == 'E') &&
          (std::isdigit(static_cast<unsigned char>(prev[n - 2])) || prev[n - 2] == '.'))
        parts.back() += "+" + piece;
      else
        parts.push_back(std::move(piece));
    }
    WeightDensity out;
    for (const auto& part : parts) {
      if (part.empty())
        throw ParseError("empty density term in '" + text + "'");
      out = WeightDensity::mixture(out, parse_part(part));
    }
    const auto report = validate(out);
    if (!report.ok())
      throw ParseError("invalid density '" + text + "': " + report.violations.front());
    return out;
  }

  std::vector<std::vector<double>> read_csv_columns(const std::string& path, std::string_view header) {
    std::ifstream in(path);
    if (!in)
      throw ParseError("cannot open '" + path + "'");
    std::string line;
    if (!std::getline(in, line) || trim(line) != header)
      throw ParseError("'" + path + "': expected header '" + std::string(header) + "'");
    const std::size_t ncols = split(header, ',').size();
    std::vector<std::vector<double>> cols(ncols);
    std::size_t row = 1;
    while (std::getline(in, line)) {
      ++row;
      if (trim(line).empty())
        continue;
      const auto cells = split(line, ',');
      if (cells.size() != ncols)
        throw ParseError("'" + path + "' row " + std::to_string(row) + ": expected " +
                         std::to_string(ncols) + " columns");
      for (std::size_t c = 0; c < ncols; ++c)
        cols[c].push_back(to_number(cells[c], "csv cell"));
    }
    return cols;
  }

  WeightDensity load_table_density(const std::string& path) {
    auto cols = read_csv_columns(path, "eta,w");
    return WeightDensity::tabulated(std::move(cols[0]), std::move(cols[1]));
  }

  EnergyCurve load_energy_curve(const std::string& path) {
    auto cols = read_csv_columns(path, "alpha,Y");
    if (cols[0].size() < 2)
      throw ParseError("'" + path + "': an energy curve needs at least 2 rows");
    try {
      return EnergyCurve(std::move(cols[0]), std::move(cols[1]));
    } catch (const DomainError& e) {
      throw ParseError("'" + path + "': " + e.what());
    }
  }

}
