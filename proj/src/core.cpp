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

#include "quanta/core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "numeric.hpp"
#include "quanta/errors.hpp"

namespace quanta {

  namespace {

    template <class... Ts>
    struct Overloaded : Ts... {
      using Ts::operator()...;
    };
    template <class... Ts>
    Overloaded(Ts...) -> Overloaded<Ts...>;

    // Largest k with k*epsilon <= eta0, or -1.
    long long last_atom_index(double epsilon, double eta0) {
      if (eta0 < 0)
        return -1;
      const double q = eta0 / epsilon;
      if (q > 9e15)
        return static_cast<long long>(9e15);
      auto k = static_cast<long long>(std::floor(q));
      while (static_cast<double>(k + 1) * epsilon <= eta0)
        ++k;
      while (k >= 0 && static_cast<double>(k) * epsilon > eta0)
        --k;
      return k;
    }

    double comb_mass_upto(const CombPart& c, double eta0) {
      const long long kmax = last_atom_index(c.epsilon, eta0);
      if (kmax < 0)
        return 0.0;
      detail::CompensatedSum s;
      const auto head = static_cast<long long>(c.masses.size());
      for (long long k = 0; k <= std::min(kmax, head - 1); ++k)
        s.add(c.masses[static_cast<std::size_t>(k)]);
      if (c.tail_mass > 0 && kmax >= head)
        s.add(c.tail_mass * static_cast<double>(kmax - head + 1));
      return s.value();
    }

    double table_mass_upto(const TablePart& t, double eta0) {
      detail::CompensatedSum s;
      for (std::size_t i = 0; i + 1 < t.eta.size(); ++i) {
        const double x0 = t.eta[i], x1 = t.eta[i + 1];
        if (eta0 <= x0)
          break;
        const double f0 = t.value[i], f1 = t.value[i + 1];
        if (eta0 >= x1) {
          s.add(0.5 * (f0 + f1) * (x1 - x0));
        } else {
          const double u = eta0 - x0;
          const double fu = f0 + (f1 - f0) * u / (x1 - x0);
          s.add(0.5 * (f0 + fu) * u);
        }
      }
      return s.value();
    }

    double analytic_mass_upto(const AnalyticPart& a, double eta0) {
      switch (a.shape) {
      case AnalyticShape::Constant:
        return a.coefficient * eta0;
      case AnalyticShape::Exponential:
        return -a.coefficient * std::expm1(-eta0);
      case AnalyticShape::InverseSqrt:
        return 2.0 * a.coefficient * std::sqrt(std::min(eta0, 1.0));
      }
      return 0.0;
    }

    void validate_comb(const CombPart& c, std::vector<std::string>& out) {
      if (!(c.epsilon > 0) || !std::isfinite(c.epsilon))
        out.emplace_back("epsilon must be positive");
      bool any_positive = c.tail_mass > 0;
      for (double m : c.masses) {
        if (!(m >= 0) || !std::isfinite(m)) {
          out.emplace_back("comb masses must be nonnegative");
          break;
        }
        any_positive = any_positive || m > 0;
      }
      if (!(c.tail_mass >= 0) || !std::isfinite(c.tail_mass))
        out.emplace_back("tail mass must be nonnegative");
      if (!any_positive)
        out.emplace_back("comb needs at least one positive mass");
    }

    void validate_table(const TablePart& t, std::vector<std::string>& out) {
      if (t.eta.size() != t.value.size()) {
        out.emplace_back("table columns differ in length");
        return;
      }
      if (t.eta.size() < 2) {
        out.emplace_back("table needs at least two knots");
        return;
      }
      if (t.eta.front() != 0.0)
        out.emplace_back("table must start at eta = 0");
      for (std::size_t i = 1; i < t.eta.size(); ++i) {
        if (!(t.eta[i] > t.eta[i - 1])) {
          out.emplace_back("eta not strictly increasing");
          break;
        }
      }
      for (double v : t.value) {
        if (!(v >= 0) || !std::isfinite(v)) {
          out.emplace_back("table densities must be nonnegative");
          break;
        }
      }
    }

  }

  double CombPart::mass_at(std::size_t k) const {
    return k < masses.size() ? masses[k] : tail_mass;
  }

  const char* to_string(DensityKind kind) {
    switch (kind) {
    case DensityKind::Comb:
      return "comb";
    case DensityKind::Tabulated:
      return "tabulated";
    case DensityKind::Analytic:
      return "analytic";
    case DensityKind::Mixture:
      return "mixture";
    }
    return "?";
  }

  WeightDensity WeightDensity::comb(double epsilon, std::vector<double> masses, double tail_mass) {
    return WeightDensity({CombPart{epsilon, std::move(masses), tail_mass}});
  }

  WeightDensity WeightDensity::unit_comb(double epsilon) { return comb(epsilon, {1.0}, 1.0); }

  WeightDensity WeightDensity::tabulated(std::vector<double> eta, std::vector<double> value) {
    return WeightDensity({TablePart{std::move(eta), std::move(value)}});
  }

  WeightDensity WeightDensity::constant(double coefficient) {
    return WeightDensity({AnalyticPart{AnalyticShape::Constant, coefficient}});
  }

  WeightDensity WeightDensity::exponential(double coefficient) {
    return WeightDensity({AnalyticPart{AnalyticShape::Exponential, coefficient}});
  }

  WeightDensity WeightDensity::inverse_sqrt(double coefficient) {
    return WeightDensity({AnalyticPart{AnalyticShape::InverseSqrt, coefficient}});
  }

  WeightDensity WeightDensity::mixture(const WeightDensity& a, const WeightDensity& b) {
    std::vector<DensityPart> parts = a.parts_;
    parts.insert(parts.end(), b.parts_.begin(), b.parts_.end());
    return WeightDensity(std::move(parts));
  }

  DensityKind WeightDensity::kind() const {
    bool comb = false, table = false, analytic = false;
    for (const auto& part : parts_) {
      std::visit(Overloaded{[&](const CombPart&) { comb = true; },
                            [&](const TablePart&) { table = true; },
                            [&](const AnalyticPart&) { analytic = true; }},
                 part);
    }
    const int count = int(comb) + int(table) + int(analytic);
    if (count != 1)
      return DensityKind::Mixture;
    if (comb)
      return DensityKind::Comb;
    return table ? DensityKind::Tabulated : DensityKind::Analytic;
  }

  WeightDensity WeightDensity::scaled(double c) const {
    std::vector<DensityPart> parts = parts_;
    for (auto& part : parts) {
      std::visit(Overloaded{[&](CombPart& p) {
                              for (double& m : p.masses)
                                m *= c;
                              p.tail_mass *= c;
                            },
                            [&](TablePart& p) {
                              for (double& v : p.value)
                                v *= c;
                            },
                            [&](AnalyticPart& p) { p.coefficient *= c; }},
                 part);
    }
    return WeightDensity(std::move(parts));
  }

  double WeightDensity::support_start() const {
    double start = std::numeric_limits<double>::infinity();
    for (const auto& part : parts_) {
      std::visit(Overloaded{[&](const CombPart& p) {
                              for (std::size_t k = 0; k < p.masses.size(); ++k) {
                                if (p.masses[k] > 0) {
                                  start = std::min(start, static_cast<double>(k) * p.epsilon);
                                  return;
                                }
                              }
                              if (p.tail_mass > 0)
                                start = std::min(start, static_cast<double>(p.masses.size()) * p.epsilon);
                            },
                            [&](const TablePart& p) {
                              for (std::size_t i = 0; i + 1 < p.eta.size(); ++i) {
                                if (p.value[i] > 0 || p.value[i + 1] > 0) {
                                  start = std::min(start, p.eta[i]);
                                  return;
                                }
                              }
                            },
                            [&](const AnalyticPart& p) {
                              if (p.coefficient > 0)
                                start = 0.0;
                            }},
                 part);
    }
    return std::isfinite(start) ? start : 0.0;
  }

  ValidationReport validate(const WeightDensity& w) {
    ValidationReport report;
    if (w.parts().empty())
      report.violations.emplace_back("density has no parts");
    for (const auto& part : w.parts()) {
      std::visit(Overloaded{[&](const CombPart& p) { validate_comb(p, report.violations); },
                            [&](const TablePart& p) { validate_table(p, report.violations); },
                            [&](const AnalyticPart& p) {
                              if (!(p.coefficient > 0) || !std::isfinite(p.coefficient))
                                report.violations.emplace_back("analytic coefficient must be positive");
                            }},
                 part);
    }
    return report;
  }

  double cumulative_mass(const WeightDensity& w, double eta0) {
    if (eta0 < 0)
      throw DomainError("cumulative_mass: eta0 must be nonnegative");
    detail::CompensatedSum s;
    for (const auto& part : w.parts()) {
      s.add(std::visit(Overloaded{[&](const CombPart& p) { return comb_mass_upto(p, eta0); },
                                  [&](const TablePart& p) { return table_mass_upto(p, eta0); },
                                  [&](const AnalyticPart& p) { return analytic_mass_upto(p, eta0); }},
                       part));
    }
    return s.value();
  }

  void check(const EnsembleConfig& config) {
    if (config.n < 1)
      throw DomainError("ensemble: n must be >= 1");
    if (config.p < 1)
      throw DomainError("ensemble: p must be >= 1");
    if (!(config.e_total > 0) || !std::isfinite(config.e_total))
      throw DomainError("ensemble: E_total must be positive");
  }

  AlphaGrid::AlphaGrid(std::vector<double> alpha) : alpha_(std::move(alpha)) {
    if (alpha_.size() < 2)
      throw DomainError("alpha grid needs at least 2 points");
    for (std::size_t i = 0; i < alpha_.size(); ++i) {
      if (!(alpha_[i] > 0) || !std::isfinite(alpha_[i]))
        throw DomainError("alpha grid values must be positive");
      if (i > 0 && !(alpha_[i] > alpha_[i - 1]))
        throw DomainError("alpha grid must be strictly increasing");
    }
  }

  AlphaGrid AlphaGrid::linear(double lo, double hi, std::size_t count) {
    if (count < 2 || !(lo < hi))
      throw DomainError("alpha grid needs count >= 2 and min < max");
    std::vector<double> a(count);
    for (std::size_t i = 0; i < count; ++i)
      a[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
    a.back() = hi;
    return AlphaGrid(std::move(a));
  }

  AlphaGrid AlphaGrid::logarithmic(double lo, double hi, std::size_t count) {
    if (count < 2 || !(lo < hi) || !(lo > 0))
      throw DomainError("log alpha grid needs count >= 2 and 0 < min < max");
    std::vector<double> a(count);
    const double l0 = std::log(lo), l1 = std::log(hi);
    for (std::size_t i = 0; i < count; ++i)
      a[i] = std::exp(l0 + (l1 - l0) * static_cast<double>(i) / static_cast<double>(count - 1));
    a.front() = lo;
    a.back() = hi;
    return AlphaGrid(std::move(a));
  }

  EnergyCurve::EnergyCurve(std::vector<double> alpha, std::vector<double> energy)
      : alpha_(std::move(alpha)), energy_(std::move(energy)) {
    if (alpha_.size() != energy_.size())
      throw DomainError("energy curve: alpha and Y differ in length");
    for (std::size_t i = 0; i < alpha_.size(); ++i) {
      if (!(alpha_[i] > 0) || !std::isfinite(alpha_[i]))
        throw DomainError("energy curve: alpha must be positive");
      if (!(energy_[i] >= 0) || !std::isfinite(energy_[i]))
        throw DomainError("energy curve: Y must be finite and nonnegative");
      if (i > 0) {
        if (!(alpha_[i] > alpha_[i - 1]))
          throw DomainError("energy curve: alpha must be strictly increasing");
        if (energy_[i] > energy_[i - 1] + kMonotoneTolerance) {
          std::ostringstream msg;
          msg << "energy curve: Y increases with alpha at alpha = " << alpha_[i];
          throw DomainError(msg.str());
        }
      }
    }
  }

}
