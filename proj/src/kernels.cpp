#include "gomtrack/kernels.hpp"

#include <omp.h>

#include <cstdint>
#include <exception>

namespace gomtrack {

std::vector<double> evaluate_log_likelihoods_serial(const LogLikelihood& likelihood,
                                                    const JointParticleSet& joint) {
  std::vector<double> out(joint.size());
  for (std::size_t j = 0; j < joint.size(); ++j) out[j] = likelihood(joint.particle(j));
  return out;
}

std::vector<double> evaluate_log_likelihoods_parallel(const LogLikelihood& likelihood,
                                                      const JointParticleSet& joint) {
  std::vector<double> out(joint.size());
  const auto n = static_cast<std::int64_t>(joint.size());
  // an exception may not leave a parallel region; keep the first and rethrow after it
  std::exception_ptr error;
#pragma omp parallel for schedule(static)
  for (std::int64_t j = 0; j < n; ++j) {
    try {
      out[static_cast<std::size_t>(j)] = likelihood(joint.particle(static_cast<std::size_t>(j)));
    } catch (...) {
#pragma omp critical(gomtrack_kernel_error)
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
  return out;
}

std::vector<double> evaluate_log_likelihoods(const LogLikelihood& likelihood,
                                             const JointParticleSet& joint, Execution execution) {
  return execution == Execution::parallel ? evaluate_log_likelihoods_parallel(likelihood, joint)
                                          : evaluate_log_likelihoods_serial(likelihood, joint);
}

int max_threads() { return omp_get_max_threads(); }

void set_threads(int threads) {
  if (threads > 0) omp_set_num_threads(threads);
}

}  // namespace gomtrack
