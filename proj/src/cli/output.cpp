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

#include "output.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace quanta::cli {

  std::string format_number(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
  }

  std::vector<double> Table::column(std::size_t i) const {
    std::vector<double> out;
    out.reserve(rows.size());
    for (const auto& r : rows)
      out.push_back(r.at(i));
    return out;
  }

  bool Table::all_finite() const {
    for (const auto& r : rows)
      for (double v : r)
        if (!std::isfinite(v))
          return false;
    return true;
  }

  void write_csv(std::ostream& os, const Table& table) {
    for (std::size_t i = 0; i < table.header.size(); ++i)
      os << (i ? "," : "") << table.header[i];
    os << '\n';
    for (const auto& row : table.rows) {
      for (std::size_t i = 0; i < row.size(); ++i)
        os << (i ? "," : "") << format_number(row[i]);
      os << '\n';
    }
  }

  std::string to_csv(const Table& table) {
    std::ostringstream os;
    write_csv(os, table);
    return os.str();
  }

  namespace {

    constexpr double kWidth = 720, kHeight = 440;
    constexpr double kLeft = 80, kRight = 20, kTop = 40, kBottom = 60;
    constexpr const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"};

    std::string escape(const std::string& s) {
      std::string out;
      for (char c : s) {
        switch (c) {
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '&': out += "&amp;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
      }
      return out;
    }

    std::string fmt(double x, const char* f = "%.2f") {
      char buf[40];
      std::snprintf(buf, sizeof buf, f, x);
      return buf;
    }

    struct Axis {
      double lo = 0, hi = 1;
      bool log = false;

      double map(double v) const {
        const double t = log ? std::log10(v) : v;
        return hi > lo ? (t - lo) / (hi - lo) : 0.5;
      }
      bool drawable(double v) const { return std::isfinite(v) && (!log || v > 0); }
    };

    Axis make_axis(const std::vector<Series>& series, bool x, bool log) {
      Axis a;
      a.log = log;
      double lo = std::numeric_limits<double>::infinity(), hi = -lo;
      for (const auto& s : series)
        for (double v : x ? s.x : s.y)
          if (a.drawable(v)) {
            const double t = log ? std::log10(v) : v;
            lo = std::min(lo, t);
            hi = std::max(hi, t);
          }
      if (!(lo <= hi)) {
        lo = 0;
        hi = 1;
      }
      if (hi == lo) {
        lo -= 0.5;
        hi += 0.5;
      }
      a.lo = lo;
      a.hi = hi;
      return a;
    }

  }

  std::string render_svg(const PlotSpec& spec, const std::vector<Series>& series) {
    const Axis ax = make_axis(series, true, spec.log_x);
    const Axis ay = make_axis(series, false, spec.log_y);
    const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
    auto px = [&](double v) { return kLeft + pw * ax.map(v); };
    auto py = [&](double v) { return kTop + ph * (1.0 - ay.map(v)); };

    std::ostringstream os;
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
       << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
       << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n"
       << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
       << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"15\">"
       << escape(spec.title) << "</text>\n"
       << "<g stroke=\"black\" stroke-width=\"1\">\n"
       << "<line x1=\"" << kLeft << "\" y1=\"" << kTop + ph << "\" x2=\"" << kLeft + pw << "\" y2=\"" << kTop + ph
       << "\"/>\n"
       << "<line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft << "\" y2=\"" << kTop + ph << "\"/>\n"
       << "</g>\n";

    os << "<g font-family=\"sans-serif\" font-size=\"11\">\n";
    for (int i = 0; i <= 4; ++i) {
      const double f = i / 4.0;
      const double tx = ax.lo + f * (ax.hi - ax.lo), ty = ay.lo + f * (ay.hi - ay.lo);
      const double vx = ax.log ? std::pow(10.0, tx) : tx, vy = ay.log ? std::pow(10.0, ty) : ty;
      os << "<text x=\"" << fmt(kLeft + f * pw) << "\" y=\"" << fmt(kTop + ph + 16)
         << "\" text-anchor=\"middle\">" << fmt(vx, "%.3g") << "</text>\n";
      os << "<text x=\"" << fmt(kLeft - 6) << "\" y=\"" << fmt(kTop + ph * (1 - f) + 4)
         << "\" text-anchor=\"end\">" << fmt(vy, "%.3g") << "</text>\n";
    }
    os << "<text x=\"" << fmt(kLeft + pw / 2) << "\" y=\"" << fmt(kHeight - 16) << "\" text-anchor=\"middle\">"
       << escape(spec.x_label) << "</text>\n";
    os << "<text x=\"16\" y=\"" << fmt(kTop + ph / 2) << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
       << fmt(kTop + ph / 2) << ")\">" << escape(spec.y_label) << "</text>\n";
    os << "</g>\n";

    for (std::size_t s = 0; s < series.size(); ++s) {
      const auto& ser = series[s];
      const char* color = kColors[s % std::size(kColors)];
      os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
      bool first = true;
      for (std::size_t i = 0; i < std::min(ser.x.size(), ser.y.size()); ++i) {
        if (!ax.drawable(ser.x[i]) || !ay.drawable(ser.y[i]))
          continue;
        os << (first ? "" : " ") << fmt(px(ser.x[i])) << ',' << fmt(py(ser.y[i]));
        first = false;
      }
      os << "\"/>\n";
      os << "<text x=\"" << fmt(kLeft + pw - 4) << "\" y=\"" << fmt(kTop + 14 + 14.0 * double(s))
         << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\" fill=\"" << color << "\">"
         << escape(ser.label) << "</text>\n";
    }
    os << "</svg>\n";
    return os.str();
  }

  void write_file(const std::string& path, const std::string& contents) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f)
      throw std::runtime_error("cannot open '" + path + "' for writing");
    f << contents;
    if (!f)
      throw std::runtime_error("write to '" + path + "' failed");
  }

}
