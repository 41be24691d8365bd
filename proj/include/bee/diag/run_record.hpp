#pragma once

#include <optional>

namespace bee::diag {

/**
 * One diagnostics row. Absent values stay empty rather than NaN so the CSV
 * writer can leave the field blank.
 *
 * `success` is a rate in [0, 1]: 0/1 for a single episode, the fraction of
 * successful episodes for an evaluation row.
 */
struct RunRecord {
  long step = 0;
  std::optional<double> episode_return;
  std::optional<double> success;
  std::optional<double> q_learned_mean;
  std::optional<double> q_mc_mean;
  std::optional<double> gap;
  std::optional<double> gap_normalized;
  std::optional<double> delta_mu_pi;
  std::optional<double> lambda_used;
  std::optional<double> alpha;
  std::optional<double> loss_q;
  std::optional<double> loss_v;
  std::optional<double> loss_pi;
  long seed = 0;

  /// Fill gap and gap_normalized from the two Q columns when both are present.
  void fill_gap();
  /// Every present value finite and gap consistent with its inputs.
  bool consistent() const;

  bool operator==(const RunRecord&) const = default;
};

}  // namespace bee::diag
