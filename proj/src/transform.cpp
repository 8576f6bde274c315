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

#include "quanta/transform.hpp"

#include <array>
#include <cmath>
#include <numbers>

#include "numeric.hpp"
#include "quanta/errors.hpp"

namespace quanta {

  namespace {

    // exp(-x) with x possibly huge; avoids producing denormal noise.
    double decay(double x) { return x > 745.0 ? 0.0 : std::exp(-x); }

    // E_m(t) = integral_0^1 v^m exp(-t v) dv for m = 0, 1, 2.
    std::array<double, 3> unit_moments(double t) {
      std::array<double, 3> e{};
      if (t < 1.0) {
        // alternating series; terms fall below 1e-18 after ~20 steps
        double term = 1.0;
        for (int k = 0; k < 40; ++k) {
          for (int m = 0; m < 3; ++m)
            e[static_cast<std::size_t>(m)] += term / (k + m + 1);
          term *= -t / (k + 1);
          if (std::abs(term) < 1e-18)
            break;
        }
        return e;
      }
      const double et = decay(t);
      e[0] = -std::expm1(-t) / t;
      e[1] = (e[0] - et) / t;
      e[2] = (2.0 * e[1] - et) / t;
      return e;
    }

    struct Accumulator {
      detail::CompensatedSum m0, m1;
    };

    void add_comb(const CombPart& c, double alpha, double shift, Accumulator& acc) {
      const double eps = c.epsilon;
      for (std::size_t k = 0; k < c.masses.size(); ++k) {
        const double mk = c.masses[k];
        if (mk == 0.0)
          continue;
        const double eta = static_cast<double>(k) * eps;
        const double f = mk * decay(alpha * (eta - shift));
        acc.m0.add(f);
        acc.m1.add(eta * f);
      }
      if (c.tail_mass > 0) {
        // sum over k >= K of tail * x^k, x = exp(-eps alpha), in closed form
        const auto K = static_cast<double>(c.masses.size());
        const double x = std::exp(-eps * alpha);
        const double q = -std::expm1(-eps * alpha);
        const double lead = c.tail_mass * decay(alpha * (K * eps - shift));
        acc.m0.add(lead / q);
        acc.m1.add(eps * lead * (K / q + x / (q * q)));
      }
    }

    void add_table(const TablePart& t, double alpha, double shift, Accumulator& acc) {
      for (std::size_t i = 0; i + 1 < t.eta.size(); ++i) {
        const double f0 = t.value[i], f1 = t.value[i + 1];
        if (f0 == 0.0 && f1 == 0.0)
          continue;
        const double x0 = t.eta[i];
        const double len = t.eta[i + 1] - x0;
        const double lead = decay(alpha * (x0 - shift));
        if (lead == 0.0)
          continue;
        const auto e = unit_moments(alpha * len);
        // f(x0 + L v) = f0 (1 - v) + f1 v, both weights nonnegative
        const double base = f0 * (e[0] - e[1]) + f1 * e[1];
        const double first = f0 * (e[1] - e[2]) + f1 * e[2];
        acc.m0.add(lead * len * base);
        acc.m1.add(lead * len * (x0 * base + len * first));
      }
    }

    // gamma(a, x) / x^a as a power series, fine for moderate x.
    double lower_gamma_scaled(double a, double x) {
      double term = 1.0, sum = 0.0;
      for (int k = 0; k < 200; ++k) {
        sum += term / (k + a);
        term *= -x / (k + 1);
        if (std::abs(term) < 1e-18 * std::abs(sum))
          break;
      }
      return sum;
    }

    void add_analytic(const AnalyticPart& a, double alpha, double shift, Accumulator& acc) {
      const double c = a.coefficient * std::exp(alpha * shift);
      switch (a.shape) {
      case AnalyticShape::Constant:
        acc.m0.add(c / alpha);
        acc.m1.add(c / (alpha * alpha));
        break;
      case AnalyticShape::Exponential:
        acc.m0.add(c / (1.0 + alpha));
        acc.m1.add(c / ((1.0 + alpha) * (1.0 + alpha)));
        break;
      case AnalyticShape::InverseSqrt: {
        double m0, m1;
        if (alpha < 2.0) {
          m0 = lower_gamma_scaled(0.5, alpha);
          m1 = lower_gamma_scaled(1.5, alpha);
        } else {
          const double sa = std::sqrt(alpha);
          const double g_half = std::sqrt(std::numbers::pi) * std::erf(sa);
          const double g_three_half = 0.5 * g_half - sa * std::exp(-alpha);
          m0 = g_half / sa;
          m1 = g_three_half / (alpha * sa);
        }
        acc.m0.add(c * m0);
        acc.m1.add(c * m1);
        break;
      }
      }
    }

  }

  double LaplaceMoments::log_phi(double alpha) const { return -alpha * shift + std::log(m0); }

  LaplaceMoments laplace_moments(const WeightDensity& w, double alpha) {
    if (!(alpha > 0) || !std::isfinite(alpha))
      throw DomainError("transform: alpha must be positive (the transform may diverge)");
    LaplaceMoments out;
    out.shift = w.support_start();
    Accumulator acc;
    for (const auto& part : w.parts()) {
      if (const auto* c = std::get_if<CombPart>(&part))
        add_comb(*c, alpha, out.shift, acc);
      else if (const auto* t = std::get_if<TablePart>(&part))
        add_table(*t, alpha, out.shift, acc);
      else
        add_analytic(std::get<AnalyticPart>(part), alpha, out.shift, acc);
    }
    out.m0 = acc.m0.value();
    out.m1 = acc.m1.value();
    return out;
  }

  double phi(const WeightDensity& w, double alpha) {
    const auto m = laplace_moments(w, alpha);
    return m.m0 * decay(alpha * m.shift);
  }

  double log_phi(const WeightDensity& w, double alpha) {
    const auto m = laplace_moments(w, alpha);
    if (!(m.m0 > 0))
      throw DegenerateDensityError("transform: Phi(alpha) = 0");
    return m.log_phi(alpha);
  }

  double phi_derivative(const WeightDensity& w, double alpha) {
    const auto m = laplace_moments(w, alpha);
    return -m.m1 * decay(alpha * m.shift);
  }

  double mean_resonator_energy(const WeightDensity& w, double alpha) {
    const auto m = laplace_moments(w, alpha);
    if (!(m.m0 > 0))
      throw DegenerateDensityError("mean energy: Phi(alpha) = 0, density carries no weight");
    return m.mean();
  }

  ThetaPoint theta(const WeightDensity& w, double alpha, double omega, const EnsembleConfig& config) {
    check(config);
    const double beta = config.beta();
    if (!(omega > 0) || !(omega < beta))
      throw DomainError("theta: omega must lie in (0, beta)");
    ThetaPoint out;
    out.alpha = alpha;
    out.omega = omega;
    out.log_value = log_phi(w, alpha) + alpha * omega + config.ratio() * std::log(beta - omega);
    out.value = std::exp(out.log_value);
    return out;
  }

  SaddleSolution solve_saddle(const WeightDensity& w, const EnsembleConfig& config,
                              const SaddleOptions& options) {
    check(config);
    const double beta = config.beta();
    const double r = config.ratio();
    auto alpha_of = [&](double omega) { return r / (beta - omega); };
    auto g = [&](double omega) { return mean_resonator_energy(w, alpha_of(omega)) - omega; };

    // g(0+) = Y(r/beta) > 0 unless all weight sits at eta = 0; g(beta-) tends to
    // the lowest occupied energy minus beta.
    if (!(g(0.0) > 0))
      throw NoSaddleError("saddle: Y vanishes, all weight sits at zero energy");
    if (!(w.support_start() < beta))
      throw NoSaddleError("saddle: lowest occupied energy is not below beta, Y > beta for every alpha");

    double lo = 0.0, hi = beta;
    SaddleSolution s;
    double g_mid = 0.0;
    double mid = 0.0;
    bool converged = false;
    for (int it = 1; it <= options.max_iterations; ++it) {
      mid = 0.5 * (lo + hi);
      s.iterations = it;
      g_mid = g(mid);
      if (std::abs(g_mid) <= options.tolerance || mid <= lo || mid >= hi) {
        converged = true;
        break;
      }
      (g_mid > 0 ? lo : hi) = mid;
    }
    if (!converged)
      throw NoSaddleError("saddle: bisection hit the iteration cap");
    s.omega0 = mid;
    s.alpha0 = alpha_of(mid);
    s.energy_residual = g_mid;
    s.alpha_residual = s.alpha0 - r / (beta - s.omega0);
    return s;
  }

  AsymptoticEnergies asymptotic_energies(const SaddleSolution& s, const EnsembleConfig& config) {
    check(config);
    const double beta = config.beta();
    if (!(s.omega0 > 0) || !(s.omega0 < beta) || !(s.alpha0 > 0))
      throw DomainError("asymptotic energies: saddle solution outside (0, beta)");
    return {s.omega0, (beta - s.omega0) / config.ratio()};
  }

}
