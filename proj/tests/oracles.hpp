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

#ifndef QUANTA_TESTS_ORACLES_HPP
#define QUANTA_TESTS_ORACLES_HPP

// Independent reference computations for the tests. Nothing here calls into
// the library's numerics: closed forms, brute-force enumeration and plain
// composite quadrature only.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include <unistd.h>

#include "quanta/core.hpp"

namespace oracle {

  inline double rel_err(double got, double want) {
    return std::abs(got - want) / std::max(std::abs(want), 1e-300);
  }

  /// Y for the unit comb of spacing eps.
  inline double comb_energy(double eps, double alpha) { return eps / std::expm1(eps * alpha); }

  inline double planck_u(double nu, double temp, double kb = 1, double h = 1, double c = 1) {
    const double x = h * nu / (kb * temp);
    return 8.0 * std::numbers::pi * nu * nu / (c * c * c) * h * nu / std::expm1(x);
  }

  /// Mean energies of n resonators (weights per atom index from `mass`) and p
  /// molecules on the surface of total energy e, by enumerating every tuple
  /// (k_1, ..., k_n) with sum k_i eps <= e.
  struct Enumerated {
    double i = 0, i_prime = 0, i_second = 0, y = 0, x = 0;
  };

  inline Enumerated enumerate_comb(double eps, const std::function<double(int)>& mass, int n, int p, double e) {
    const int kmax = static_cast<int>(std::floor(e / eps + 1e-12));
    Enumerated out;
    std::vector<int> k(static_cast<std::size_t>(n), 0);
    while (true) {
      int total = 0;
      double weight = 1;
      for (int v : k) {
        total += v;
        weight *= mass(v);
      }
      const double xval = total * eps;
      if (xval <= e + 1e-12 && weight > 0) {
        const double gap = e - xval;
        const double kernel = std::pow(gap, p - 1);
        out.i += weight * kernel;
        out.i_prime += weight * kernel * xval;
        out.i_second += weight * kernel * gap;
      }
      std::size_t d = 0;
      while (d < k.size() && ++k[d] > kmax)
        k[d++] = 0;
      if (d == k.size())
        break;
    }
    out.y = out.i_prime / (n * out.i);
    out.x = out.i_second / (p * out.i);
    return out;
  }

  /// Composite Simpson on [a, b] with an even number of intervals.
  inline double simpson(const std::function<double(double)>& f, double a, double b, int intervals = 20000) {
    if (intervals % 2)
      ++intervals;
    const double h = (b - a) / intervals;
    double s = f(a) + f(b);
    for (int i = 1; i < intervals; ++i)
      s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
    return s * h / 3.0;
  }

  /// Piecewise-linear interpolation through the knots, zero outside.
  inline double table_value(const std::vector<double>& eta, const std::vector<double>& w, double x) {
    if (x < eta.front() || x > eta.back())
      return 0.0;
    for (std::size_t i = 0; i + 1 < eta.size(); ++i)
      if (x <= eta[i + 1]) {
        const double t = (x - eta[i]) / (eta[i + 1] - eta[i]);
        return w[i] * (1 - t) + w[i + 1] * t;
      }
    return w.back();
  }

  /// Phi and -Phi' of a table by segment-wise Simpson quadrature.
  inline std::pair<double, double> table_moments(const std::vector<double>& eta, const std::vector<double>& w,
                                                 double alpha) {
    double m0 = 0, m1 = 0;
    for (std::size_t i = 0; i + 1 < eta.size(); ++i) {
      auto f = [&](double x) { return table_value(eta, w, x) * std::exp(-alpha * x); };
      m0 += simpson(f, eta[i], eta[i + 1], 4000);
      m1 += simpson([&](double x) { return x * f(x); }, eta[i], eta[i + 1], 4000);
    }
    return {m0, m1};
  }

  /// Random finite comb, table, or comb + table mixture with a fixed seed.
  class DensityFactory {
  public:
    explicit DensityFactory(unsigned seed) : rng_(seed) {}

    quanta::WeightDensity comb() {
      const double eps = uniform(0.2, 2.0);
      std::vector<double> masses(static_cast<std::size_t>(1 + index(6)));
      for (auto& m : masses)
        m = bernoulli(0.2) ? 0.0 : uniform(0.1, 3.0);
      masses[index(masses.size())] = uniform(0.5, 2.0);
      return quanta::WeightDensity::comb(eps, masses, bernoulli(0.3) ? uniform(0.1, 1.0) : 0.0);
    }

    quanta::WeightDensity table() {
      std::vector<double> eta{0.0}, w{uniform(0.0, 2.0)};
      const std::size_t knots = 2 + index(8);
      for (std::size_t i = 1; i < knots; ++i) {
        eta.push_back(eta.back() + uniform(0.1, 1.5));
        w.push_back(uniform(0.0, 2.0));
      }
      w[index(w.size())] = uniform(0.5, 2.0);
      return quanta::WeightDensity::tabulated(eta, w);
    }

    quanta::WeightDensity any() {
      switch (index(3)) {
      case 0:
        return comb();
      case 1:
        return table();
      default:
        return quanta::WeightDensity::mixture(comb(), table());
      }
    }

    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
    std::size_t index(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_); }
    bool bernoulli(double p) { return std::bernoulli_distribution(p)(rng_); }
    std::mt19937_64& engine() { return rng_; }

  private:
    std::mt19937_64 rng_;
  };

  /// A fresh scratch directory under the system temp path, removed on exit.
  class TempDir {
  public:
    explicit TempDir(const std::string& name) {
      path_ = std::filesystem::temp_directory_path() / ("quanta_test_" + name + "_" + std::to_string(::getpid()));
      std::filesystem::remove_all(path_);
      std::filesystem::create_directories(path_);
    }
    ~TempDir() {
      std::error_code ec;
      std::filesystem::remove_all(path_, ec);
    }
    std::string file(const std::string& name) const { return (path_ / name).string(); }
    void write(const std::string& name, const std::string& contents) const {
      std::ofstream(file(name), std::ios::binary) << contents;
    }

  private:
    std::filesystem::path path_;
  };

  inline std::string slurp(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
  }

}

#endif
