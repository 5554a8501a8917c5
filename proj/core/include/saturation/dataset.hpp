#pragma once

// Interview/code data model: the per-interview elicitation matrix, the
// new-code sequence that drives Kaplan-Meier estimation, per-code
// frequency tables and grouped published counts.

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace saturation {

struct Interview {
  std::string id;
  std::size_t seq = 0;  // chronological position, 1-based

  bool operator==(const Interview&) const = default;
};

// The codes elicited at one interview, in entry order. Used to build a
// matrix from live entry or from a long-format elicitation list.
struct InterviewCodes {
  std::string interview_id;
  std::vector<std::string> codes;
};

/// Interview x code elicitation indicators (E) with the derived recapture
/// indicators (R). Rows are ordered by seq, which runs exactly 1..J.
/// Every code is elicited at least once. R is never stored independently:
/// R[j][k] = 1 iff E[j][k] = 1 and E[i][k] = 1 for some earlier row i.
///
/// Row and column accessors take 0-based indices; row r holds seq r + 1.
class ElicitationMatrix {
 public:
  ElicitationMatrix() = default;

  /// Validates and builds a matrix. `elicited` is row-major, one row per
  /// interview (in any seq order), one 0/1 cell per code. Throws DataError
  /// on duplicate or non-contiguous seq, duplicate code ids, a wrong row
  /// width, non-binary cells or a code that is never elicited.
  static ElicitationMatrix from_cells(std::vector<Interview> interviews,
                                      std::vector<std::string> codes,
                                      std::vector<std::vector<std::uint8_t>> elicited);

  /// Builds a matrix from per-interview code lists given in chronological
  /// order (seq = position + 1). Code columns appear in order of first
  /// elicitation. Throws DataError on a code repeated within one interview.
  static ElicitationMatrix from_interviews(std::span<const InterviewCodes> interviews);

  std::size_t interview_count() const noexcept { return interviews_.size(); }
  std::size_t code_count() const noexcept { return codes_.size(); }
  const std::vector<Interview>& interviews() const noexcept { return interviews_; }
  const std::vector<std::string>& codes() const noexcept { return codes_; }

  bool elicited(std::size_t row, std::size_t code) const {
    return elicited_[row * codes_.size() + code] != 0;
  }
  bool recaptured(std::size_t row, std::size_t code) const {
    return recaptured_[row * codes_.size() + code] != 0;
  }

  /// Row of each code's first elicitation (0-based).
  std::vector<std::size_t> first_elicitation_rows() const;

  /// Recomputes R from E; equals the stored R for every valid matrix.
  std::vector<std::uint8_t> derive_recaptured() const;

  bool operator==(const ElicitationMatrix&) const = default;

 private:
  std::vector<Interview> interviews_;
  std::vector<std::string> codes_;
  std::vector<std::uint8_t> elicited_;
  std::vector<std::uint8_t> recaptured_;
};

/// New codes first elicited at each interview, N_1..N_J. This is the KM
/// input; the zero/non-zero pattern is what matters to the estimator.
class InterviewSequence {
 public:
  /// Throws std::invalid_argument when `new_codes` is empty.
  explicit InterviewSequence(std::vector<std::size_t> new_codes);

  std::size_t size() const noexcept { return new_codes_.size(); }
  std::size_t operator[](std::size_t row) const { return new_codes_[row]; }
  const std::vector<std::size_t>& new_codes() const noexcept { return new_codes_; }
  std::size_t total_new_codes() const noexcept;

  bool operator==(const InterviewSequence&) const = default;

 private:
  std::vector<std::size_t> new_codes_;
};

/// Per-code elicitation totals M_k and the summary counts used by the
/// Good-Turing coverage estimate.
class CodeFrequencyTable {
 public:
  CodeFrequencyTable() = default;
  explicit CodeFrequencyTable(std::vector<std::size_t> counts);

  /// Counts over interviews 1..through_seq (all rows by default).
  static CodeFrequencyTable from_matrix(const ElicitationMatrix& matrix,
                                        std::optional<std::size_t> through_seq = std::nullopt);

  const std::vector<std::size_t>& counts() const noexcept { return counts_; }
  std::size_t distinct() const noexcept { return distinct_; }      // D
  std::size_t elicitations() const noexcept { return total_; }     // n
  std::size_t singletons() const noexcept { return singletons_; }  // f1

 private:
  std::vector<std::size_t> counts_;
  std::size_t distinct_ = 0;
  std::size_t total_ = 0;
  std::size_t singletons_ = 0;
};

struct Group {
  std::size_t start_seq = 0;
  std::size_t end_seq = 0;
  std::size_t codes_count = 0;

  std::size_t width() const noexcept { return end_seq - start_seq + 1; }
  bool operator==(const Group&) const = default;
};

/// Published codes-per-block summaries. Groups tile 1..J contiguously.
class GroupedCounts {
 public:
  /// Throws DataError on a gap, an overlap or an empty group.
  explicit GroupedCounts(std::vector<Group> groups);

  const std::vector<Group>& groups() const noexcept { return groups_; }
  std::size_t interview_count() const noexcept;

 private:
  std::vector<Group> groups_;
};

struct SampleSummary {
  std::size_t n = 0;
  double mean = 0.0;
  double median = 0.0;
  std::optional<double> sd;  // sample SD; absent for n < 2
};

SampleSummary summarize(std::span<const std::size_t> values);

struct DescriptiveStats {
  std::vector<std::size_t> marked_per_interview;      // first elicitations
  std::vector<std::size_t> recaptured_per_interview;  // repeat elicitations
  std::vector<std::size_t> elicited_per_interview;    // all elicitations
  std::vector<std::size_t> recaptures_per_code;       // M_k - 1, column order
  SampleSummary marked;                               // over interviews
  SampleSummary recaptures;                           // over codes
  std::map<std::size_t, std::size_t> recapture_frequency;  // count -> codes
};

// Parsers. All input is UTF-8 CSV with a mandatory header row.
//
//   wide:        interview_id,seq,<code id>,<code id>,...   cells 0/1
//   manifest:    interview_id,seq
//   elicitations seq,code_id
//   grouped:     start_seq,end_seq,codes_count
//
// Errors are reported as DataError with line and column.
ElicitationMatrix parse_wide(std::string_view text);
ElicitationMatrix parse_long(std::string_view manifest, std::string_view elicitations);
GroupedCounts parse_grouped(std::string_view text);

/// Parses one line of comma-separated non-negative integers (new codes per
/// interview). With `binary_only` any token other than 0 or 1 is rejected.
std::vector<std::size_t> parse_counts_line(std::string_view line, bool binary_only);

InterviewSequence derive_sequence(const ElicitationMatrix& matrix);
DescriptiveStats descriptive_stats(const ElicitationMatrix& matrix);

}  // namespace saturation
