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

#pragma once

// Desk-scale reproductions of the particle-method convergence claims: the
// O(1/N) Monte-Carlo rate, pathwise propagation of chaos via synchronous
// coupling, the comparison against the exact N-body equation, and the Euler
// weak bias of the i.i.d. McKean-Vlasov system.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qmf/generators.hpp"
#include "qmf/trajectories.hpp"

namespace qmf {

struct LogLogFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

/// Least squares of log(error) on log(N). Needs >= 3 points with positive
/// N and error; throws ConfigError otherwise.
LogLogFit fit_loglog_slope(std::span<const std::pair<double, double>> points);

struct StudyCell {
  std::size_t particles = 0;
  std::uint64_t seed = 0;
  double value = 0.0;
  std::optional<std::string> failure;
};

struct StudyRow {
  std::size_t particles = 0;
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t excluded = 0;
};

struct ConvergenceReport {
  std::vector<StudyRow> rows;             // mean over seeds of sup_t tr((m_t - m_hat_t)^2)
  std::vector<StudyRow> weighted_rows;    // unnormalized mode: m_hat divided by its trace
  std::vector<StudyCell> cells;
  std::optional<LogLogFit> fit;
  std::optional<LogLogFit> weighted_fit;
  double dt = 0.0;
  double horizon = 0.0;
  std::vector<std::uint64_t> seeds;
  std::size_t excluded = 0;
  bool valid = true;
};

struct CouplingRow {
  std::size_t particles = 0;
  double pooled = 0.0;        // sup_t of the mean over seeds and particles
  double particle_sup = 0.0;  // sup_{l,t} of the mean over seeds
  std::size_t excluded = 0;
};

struct CouplingReport {
  std::vector<CouplingRow> rows;
  std::optional<LogLogFit> fit;               // on `pooled`
  std::optional<LogLogFit> particle_sup_fit;  // on `particle_sup`
  double dt = 0.0;
  double horizon = 0.0;
  std::vector<std::uint64_t> seeds;
  std::size_t excluded = 0;
  bool valid = true;
};

/// Requires ascending N values (>= 4, spanning >= 16x) and >= 8 seeds unless
/// `enforce_design` is false.
ConvergenceReport convergence_study(const ModelSpec& spec, const SchemeConfig& scheme,
                                    std::span<const std::size_t> n_values, std::span<const std::uint64_t> seeds,
                                    bool enforce_design = true);

/// Interacting ensemble vs. i.i.d. companions driven by A^{m_ref}, sharing the
/// noise of each particle. Distance is ||psi - psi_l||^2 in pure modes and the
/// squared Hilbert-Schmidt distance in density mode.
CouplingReport coupled_chaos_study(const ModelSpec& spec, const SchemeConfig& scheme,
                                   std::span<const std::size_t> n_values, std::span<const std::uint64_t> seeds,
                                   bool enforce_design = true);

struct NBodyRow {
  std::size_t particles = 0;
  double time = 0.0;
  double discrepancy = 0.0;  // || tr_{!=1}(rho^N_t) - m_t ||_2
};

struct NBodyTable {
  std::vector<NBodyRow> rows;
  std::vector<std::pair<std::size_t, double>> at_horizon;
  bool monotone_at_horizon = true;
};

NBodyTable chaos_vs_nbody(const ModelSpec& spec, std::span<const std::size_t> n_values, double horizon, double dt,
                          std::size_t stride = 1);

struct WeakBiasRow {
  double dt = 0.0;
  double error = 0.0;              // || mean over seeds of (m_hat_T - m_T) ||_2
  double mean_seed_error = 0.0;    // mean over seeds of || m_hat_T - m_T ||_2
};

struct WeakBiasReport {
  std::vector<WeakBiasRow> rows;
  std::vector<double> ratios;  // error(dt_i) / error(dt_{i+1})
};

/// Mean-consistency error of the i.i.d. McKean-Vlasov system at T for each dt.
WeakBiasReport weak_bias_study(const ModelSpec& spec, const SchemeConfig& scheme, std::span<const double> dt_values,
                               std::size_t copies, std::span<const std::uint64_t> seeds);

}  // namespace qmf
