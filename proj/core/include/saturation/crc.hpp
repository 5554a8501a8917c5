#pragma once

// Two-source capture-recapture estimates of the total number of codes.
// At interview j the first "capture" is everything elicited in interviews
// 1..j-1 (marked codes) and the second is interview j itself.

#include <cstddef>
#include <optional>
#include <vector>

#include "saturation/dataset.hpp"

namespace saturation {

/// N = M * C / R. Absent when R = 0. Throws std::invalid_argument unless
/// R <= min(M, C).
std::optional<double> lincoln_petersen(std::size_t marked, std::size_t captured,
                                       std::size_t recaptured);

/// N = (M + 1)(C + 1) / (R + 1) - 1. Same precondition as lincoln_petersen.
double chapman(std::size_t marked, std::size_t captured, std::size_t recaptured);

/// D / (1 - f1 / n). Absent when every elicitation is a singleton
/// (zero coverage). Throws std::invalid_argument when n = 0.
std::optional<double> good_turing(const CodeFrequencyTable& freq);

struct CrcEstimate {
  std::size_t seq = 0;
  std::size_t marked = 0;      // M: distinct codes in interviews 1..j-1
  std::size_t captured = 0;    // C: codes elicited at j
  std::size_t recaptured = 0;  // R: codes at j already marked
  std::size_t distinct = 0;    // D_j: distinct codes through j

  std::optional<double> lincoln_petersen;
  std::optional<double> chapman;
  std::optional<double> good_turing;

  // N - D_j floored at 0, for each estimable N.
  std::optional<double> remaining_lincoln_petersen;
  std::optional<double> remaining_chapman;
  std::optional<double> remaining_good_turing;
};

/// One estimate per interview. Interview 1 has nothing marked, so every
/// estimator is reported absent there.
std::vector<CrcEstimate> per_interview_series(const ElicitationMatrix& matrix);

}  // namespace saturation
