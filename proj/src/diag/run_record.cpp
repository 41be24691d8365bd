#include "bee/diag/run_record.hpp"

#include <algorithm>
#include <cmath>

namespace bee::diag {

void RunRecord::fill_gap() {
  if (!q_learned_mean || !q_mc_mean) return;
  gap = *q_learned_mean - *q_mc_mean;
  gap_normalized = *gap / std::max(std::abs(*q_mc_mean), 1.0);
}

bool RunRecord::consistent() const {
  for (const auto* v : {&episode_return, &success, &q_learned_mean, &q_mc_mean, &gap, &gap_normalized, &delta_mu_pi,
                        &lambda_used, &alpha, &loss_q, &loss_v, &loss_pi})
    if (*v && !std::isfinite(**v)) return false;
  if (gap && q_learned_mean && q_mc_mean && *gap != *q_learned_mean - *q_mc_mean) return false;
  return true;
}

}  // namespace bee::diag
