#include "saturation/crc.hpp"

#include <algorithm>
#include <stdexcept>

namespace saturation {

namespace {

void check_counts(std::size_t marked, std::size_t captured, std::size_t recaptured) {
  if (recaptured > std::min(marked, captured))
    throw std::invalid_argument("recaptured count exceeds marked or captured count");
}

std::optional<double> remaining(std::optional<double> estimate, std::size_t distinct) {
  if (!estimate) return std::nullopt;
  return std::max(0.0, *estimate - static_cast<double>(distinct));
}

}  // namespace

std::optional<double> lincoln_petersen(std::size_t marked, std::size_t captured,
                                       std::size_t recaptured) {
  check_counts(marked, captured, recaptured);
  if (recaptured == 0) return std::nullopt;
  return static_cast<double>(marked) * static_cast<double>(captured) /
         static_cast<double>(recaptured);
}

double chapman(std::size_t marked, std::size_t captured, std::size_t recaptured) {
  check_counts(marked, captured, recaptured);
  return static_cast<double>(marked + 1) * static_cast<double>(captured + 1) /
             static_cast<double>(recaptured + 1) -
         1.0;
}

std::optional<double> good_turing(const CodeFrequencyTable& freq) {
  if (freq.elicitations() == 0) throw std::invalid_argument("no elicitations");
  if (freq.singletons() == freq.elicitations()) return std::nullopt;
  const double coverage = 1.0 - static_cast<double>(freq.singletons()) /
                                    static_cast<double>(freq.elicitations());
  return static_cast<double>(freq.distinct()) / coverage;
}

std::vector<CrcEstimate> per_interview_series(const ElicitationMatrix& matrix) {
  const std::size_t rows = matrix.interview_count();
  const std::size_t cols = matrix.code_count();
  std::vector<CrcEstimate> series;
  series.reserve(rows);

  std::vector<std::size_t> counts(cols, 0);
  std::size_t marked = 0;
  for (std::size_t r = 0; r < rows; ++r) {
    CrcEstimate e;
    e.seq = r + 1;
    e.marked = marked;
    for (std::size_t k = 0; k < cols; ++k) {
      if (!matrix.elicited(r, k)) continue;
      ++e.captured;
      if (counts[k] > 0) ++e.recaptured;
      ++counts[k];
    }
    marked += e.captured - e.recaptured;
    e.distinct = marked;

    if (r > 0) {
      e.lincoln_petersen = lincoln_petersen(e.marked, e.captured, e.recaptured);
      e.chapman = chapman(e.marked, e.captured, e.recaptured);
      CodeFrequencyTable freq(counts);
      if (freq.elicitations() > 0) e.good_turing = good_turing(freq);
      e.remaining_lincoln_petersen = remaining(e.lincoln_petersen, e.distinct);
      e.remaining_chapman = remaining(e.chapman, e.distinct);
      e.remaining_good_turing = remaining(e.good_turing, e.distinct);
    }
    series.push_back(e);
  }
  return series;
}

}  // namespace saturation
