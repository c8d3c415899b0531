#pragma once

#include "gomtrack/sensors.hpp"
#include "gomtrack/types.hpp"

#include <vector>

namespace gomtrack {

/// How data-parallel loops run. Both paths write each result to its own slot and reduce in
/// index order, so they return bit-identical values.
enum class Execution { serial, parallel };

/// log g(z | particle j) for every joint particle of `joint`.
std::vector<double> evaluate_log_likelihoods(const LogLikelihood& likelihood,
                                             const JointParticleSet& joint, Execution execution);

/// Serial reference implementation.
std::vector<double> evaluate_log_likelihoods_serial(const LogLikelihood& likelihood,
                                                    const JointParticleSet& joint);
/// OpenMP implementation, static schedule over particles.
std::vector<double> evaluate_log_likelihoods_parallel(const LogLikelihood& likelihood,
                                                      const JointParticleSet& joint);

/// Number of OpenMP threads used by parallel regions (1 when built without OpenMP).
int max_threads();
void set_threads(int threads);

}  // namespace gomtrack
