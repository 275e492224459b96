// Copyright 2026 The qmf Authors
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

#include "qmf/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "qmf/error.hpp"
#include "qmf/kernel.hpp"

namespace qmf {
namespace {

void check_design(std::span<const std::size_t> n_values, std::span<const std::uint64_t> seeds, bool enforce) {
  if (n_values.empty() || seeds.empty()) throw ConfigError("study needs N values and seeds");
  if (!std::is_sorted(n_values.begin(), n_values.end()) || n_values.front() == 0) {
    throw ConfigError("study N values must be positive and ascending");
  }
  if (!enforce) return;
  if (n_values.size() < 4 || n_values.back() < 16 * n_values.front()) {
    throw ConfigError("study needs at least 4 N values spanning a factor of 16");
  }
  if (seeds.size() < 8) throw ConfigError("study needs at least 8 seeds");
}

// tr(m^2), real part; equals ||m||_2^2 for Hermitian m.
double trace_of_square(const ComplexMatrix& m) { return trace(m * m).real(); }

double squared_hs_distance(const ComplexMatrix& a, const ComplexMatrix& b) {
  const double n = hs_norm(a - b);
  return n * n;
}

StudyRow summarize(std::size_t particles, std::span<const double> values, std::size_t excluded) {
  StudyRow row;
  row.particles = particles;
  row.excluded = excluded;
  if (values.empty()) return row;
  const double n = static_cast<double>(values.size());
  row.mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - row.mean) * (v - row.mean);
    row.std_error = std::sqrt(ss / (n - 1.0) / n);
  }
  return row;
}

template <typename Row, typename Value>
std::optional<LogLogFit> try_fit(const std::vector<Row>& rows, Value value) {
  std::vector<std::pair<double, double>> points;
  for (const auto& row : rows) {
    const double v = value(row);
    if (!(v > 0.0)) return std::nullopt;
    points.emplace_back(static_cast<double>(row.particles), v);
  }
  if (points.size() < 3) return std::nullopt;
  return fit_loglog_slope(points);
}

bool too_many_failures(std::size_t excluded, std::size_t total) {
  return static_cast<double>(excluded) > 0.1 * static_cast<double>(total);
}

}  // namespace

LogLogFit fit_loglog_slope(std::span<const std::pair<double, double>> points) {
  if (points.size() < 3) throw ConfigError("log-log fit needs at least 3 points");
  std::vector<double> xs;
  std::vector<double> ys;
  for (const auto& [n, err] : points) {
    if (!(n > 0.0) || !(err > 0.0)) throw ConfigError("log-log fit needs positive N and error values");
    xs.push_back(std::log(n));
    ys.push_back(std::log(err));
  }
  const double count = static_cast<double>(xs.size());
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / count;
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / count;
  double sxx = 0.0;
  double sxy = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  if (sxx == 0.0) throw ConfigError("log-log fit needs at least two distinct N values");
  LogLogFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  // Constant data is fit exactly.
  fit.r_squared = syy == 0.0 ? 1.0 : (sxy * sxy) / (sxx * syy);
  return fit;
}

ConvergenceReport convergence_study(const ModelSpec& spec, const SchemeConfig& scheme,
                                    std::span<const std::size_t> n_values, std::span<const std::uint64_t> seeds,
                                    bool enforce_design) {
  check_design(n_values, seeds, enforce_design);
  scheme.validate();
  const ReferenceSolution reference = solve_meanfield_reference(spec, scheme.horizon, scheme.dt);
  const auto& m_ref = reference.series.states;
  const bool weighted = scheme.mode == TrajectoryMode::kUnnormalizedPure;

  ConvergenceReport report;
  report.dt = scheme.dt;
  report.horizon = scheme.horizon;
  report.seeds.assign(seeds.begin(), seeds.end());

  for (const std::size_t particles : n_values) {
    std::vector<double> values;
    std::vector<double> weighted_values;
    std::size_t excluded = 0;
    for (const std::uint64_t seed : seeds) {
      double sup = 0.0;
      double weighted_sup = 0.0;
      auto observe = [&](const ParticleEnsemble& ensemble) {
        const std::size_t k = ensemble.step_index();
        if (k % scheme.record_stride != 0 && k != scheme.steps()) return;
        const ComplexMatrix m_hat = ensemble.empirical_state();
        sup = std::max(sup, trace_of_square(m_ref[k] - m_hat));
        if (weighted) {
          ComplexMatrix normalized = m_hat;
          normalized *= 1.0 / trace(m_hat).real();
          weighted_sup = std::max(weighted_sup, trace_of_square(m_ref[k] - normalized));
        }
      };
      const TrajectoryRecord record = simulate(spec, scheme, particles, seed, observe);
      StudyCell cell{particles, seed, sup, std::nullopt};
      if (record.failure) {
        cell.failure = record.failure->message;
        ++excluded;
      } else {
        values.push_back(sup);
        weighted_values.push_back(weighted_sup);
      }
      report.cells.push_back(cell);
    }
    report.rows.push_back(summarize(particles, values, excluded));
    if (weighted) report.weighted_rows.push_back(summarize(particles, weighted_values, excluded));
    report.excluded += excluded;
  }

  report.valid = !too_many_failures(report.excluded, report.cells.size());
  report.fit = try_fit(report.rows, [](const StudyRow& r) { return r.mean; });
  if (weighted) report.weighted_fit = try_fit(report.weighted_rows, [](const StudyRow& r) { return r.mean; });
  return report;
}

CouplingReport coupled_chaos_study(const ModelSpec& spec, const SchemeConfig& scheme,
                                   std::span<const std::size_t> n_values, std::span<const std::uint64_t> seeds,
                                   bool enforce_design) {
  check_design(n_values, seeds, enforce_design);
  scheme.validate();
  const ReferenceSolution reference = solve_meanfield_reference(spec, scheme.horizon, scheme.dt);
  const auto& m_ref = reference.series.states;
  const std::size_t steps = scheme.steps();
  const bool density = scheme.mode == TrajectoryMode::kNormalizedDensity;

  CouplingReport report;
  report.dt = scheme.dt;
  report.horizon = scheme.horizon;
  report.seeds.assign(seeds.begin(), seeds.end());
  std::size_t total_cells = 0;

  for (const std::size_t particles : n_values) {
    // distance_sum[k * particles + l], summed over successful seeds
    std::vector<double> distance_sum((steps + 1) * particles, 0.0);
    std::size_t used = 0;
    std::size_t excluded = 0;
    for (const std::uint64_t seed : seeds) {
      ++total_cells;
      ParticleEnsemble interacting(spec, scheme, particles, seed);
      ParticleEnsemble companions(spec, scheme, particles, seed);
      std::vector<double> distances((steps + 1) * particles, 0.0);
      try {
        for (std::size_t k = 0; k < steps; ++k) {
          interacting.advance(apply_kernel(spec.kernel(), interacting.empirical_state()));
          companions.advance(apply_kernel(spec.kernel(), m_ref[k]));
          for (std::size_t l = 0; l < particles; ++l) {
            double dist = 0.0;
            if (density) {
              dist = squared_hs_distance(interacting.densities()[l], companions.densities()[l]);
            } else {
              const double n = (interacting.vectors()[l].amplitudes - companions.vectors()[l].amplitudes).norm();
              dist = n * n;
            }
            distances[(k + 1) * particles + l] = dist;
          }
        }
      } catch (const NumericalError&) {
        ++excluded;
        continue;
      }
      ++used;
      for (std::size_t i = 0; i < distances.size(); ++i) distance_sum[i] += distances[i];
    }

    CouplingRow row;
    row.particles = particles;
    row.excluded = excluded;
    if (used > 0) {
      const double seeds_used = static_cast<double>(used);
      for (std::size_t k = 0; k <= steps; ++k) {
        if (k % scheme.record_stride != 0 && k != steps) continue;
        double pooled = 0.0;
        for (std::size_t l = 0; l < particles; ++l) {
          const double mean = distance_sum[k * particles + l] / seeds_used;
          pooled += mean;
          row.particle_sup = std::max(row.particle_sup, mean);
        }
        row.pooled = std::max(row.pooled, pooled / static_cast<double>(particles));
      }
    }
    report.rows.push_back(row);
    report.excluded += excluded;
  }

  report.valid = !too_many_failures(report.excluded, total_cells);
  report.fit = try_fit(report.rows, [](const CouplingRow& r) { return r.pooled; });
  report.particle_sup_fit = try_fit(report.rows, [](const CouplingRow& r) { return r.particle_sup; });
  return report;
}

NBodyTable chaos_vs_nbody(const ModelSpec& spec, std::span<const std::size_t> n_values, double horizon, double dt,
                          std::size_t stride) {
  const ReferenceSolution reference = solve_meanfield_reference(spec, horizon, dt, stride);
  NBodyTable table;
  for (const std::size_t particles : n_values) {
    const ReferenceSolution nbody = solve_nbody_reference(spec, particles, horizon, dt, stride);
    for (std::size_t i = 0; i < nbody.series.size(); ++i) {
      const ComplexMatrix reduced = partial_trace(nbody.series.states[i], 1, particles, spec.d());
      table.rows.push_back({particles, nbody.series.times[i], hs_norm(reduced - reference.series.states[i])});
    }
    table.at_horizon.emplace_back(particles, table.rows.back().discrepancy);
  }
  for (std::size_t i = 1; i < table.at_horizon.size(); ++i) {
    if (table.at_horizon[i].second > table.at_horizon[i - 1].second) table.monotone_at_horizon = false;
  }
  return table;
}

WeakBiasReport weak_bias_study(const ModelSpec& spec, const SchemeConfig& scheme, std::span<const double> dt_values,
                               std::size_t copies, std::span<const std::uint64_t> seeds) {
  if (dt_values.empty() || seeds.empty()) throw ConfigError("weak bias study needs dt values and seeds");
  WeakBiasReport report;
  for (const double dt : dt_values) {
    SchemeConfig level = scheme;
    level.dt = dt;
    level.record_stride = level.steps();
    level.validate();
    const ReferenceSolution reference = solve_meanfield_reference(spec, level.horizon, dt);
    const ComplexMatrix& target = reference.series.states.back();

    ComplexMatrix deviation(spec.d());
    double seed_error_sum = 0.0;
    for (const std::uint64_t seed : seeds) {
      const TimeSeries mean = simulate_mckean_iid(spec, level, copies, seed, reference.series);
      const ComplexMatrix dev = mean.states.back() - target;
      seed_error_sum += hs_norm(dev);
      deviation += dev;
    }
    deviation *= 1.0 / static_cast<double>(seeds.size());
    report.rows.push_back({dt, hs_norm(deviation), seed_error_sum / static_cast<double>(seeds.size())});
  }
  for (std::size_t i = 0; i + 1 < report.rows.size(); ++i) {
    report.ratios.push_back(report.rows[i].error / report.rows[i + 1].error);
  }
  return report;
}

}  // namespace qmf
