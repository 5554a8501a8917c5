#include "saturation/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "saturation/csv.hpp"
#include "saturation/error.hpp"

namespace saturation {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

std::optional<long long> to_integer(std::string_view text) {
  text = trim(text);
  long long value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty())
    return std::nullopt;
  return value;
}

std::size_t positive_integer(std::string_view text, std::string_view what,
                             std::size_t line, std::size_t column) {
  auto v = to_integer(text);
  if (!v || *v < 1)
    throw DataError(std::string(what) + " must be a positive integer, got '" +
                        std::string(text) + "'",
                    line, column);
  return static_cast<std::size_t>(*v);
}

// Maps header names to column positions, rejecting unknown, missing and
// repeated columns.
std::vector<std::size_t> header_columns(const csv::Record& header,
                                        std::initializer_list<std::string_view> expected) {
  std::vector<std::size_t> positions(expected.size(), SIZE_MAX);
  for (std::size_t c = 0; c < header.fields.size(); ++c) {
    auto name = trim(header.fields[c]);
    auto it = std::find(expected.begin(), expected.end(), name);
    if (it == expected.end())
      throw DataError("unknown column '" + std::string(name) + "'", header.line, c + 1);
    auto idx = static_cast<std::size_t>(it - expected.begin());
    if (positions[idx] != SIZE_MAX)
      throw DataError("duplicate column '" + std::string(name) + "'", header.line, c + 1);
    positions[idx] = c;
  }
  for (std::size_t i = 0; i < positions.size(); ++i)
    if (positions[i] == SIZE_MAX)
      throw DataError("missing column '" + std::string(*(expected.begin() + i)) + "'",
                      header.line);
  return positions;
}

void require_width(const csv::Record& rec, std::size_t width) {
  if (rec.fields.size() != width)
    throw DataError("expected " + std::to_string(width) + " fields, found " +
                        std::to_string(rec.fields.size()),
                    rec.line);
}

// Sorts interviews by seq and checks it is exactly 1..J. Returns the
// permutation that maps sorted position -> original position.
std::vector<std::size_t> order_by_seq(const std::vector<Interview>& interviews,
                                      const std::vector<std::size_t>& lines = {}) {
  std::vector<std::size_t> order(interviews.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) {
    return interviews[a].seq < interviews[b].seq;
  });
  auto line_of = [&](std::size_t i) { return lines.empty() ? 0 : lines[i]; };
  for (std::size_t pos = 0; pos < order.size(); ++pos) {
    const auto& iv = interviews[order[pos]];
    if (pos > 0 && iv.seq == interviews[order[pos - 1]].seq)
      throw DataError("duplicate seq " + std::to_string(iv.seq), line_of(order[pos]));
    if (iv.seq != pos + 1)
      throw DataError("non-contiguous seq: expected " + std::to_string(pos + 1) +
                          ", found " + std::to_string(iv.seq),
                      line_of(order[pos]));
  }
  return order;
}

std::vector<std::uint8_t> recapture_from(const std::vector<std::uint8_t>& elicited,
                                         std::size_t rows, std::size_t cols) {
  std::vector<std::uint8_t> recaptured(elicited.size(), 0);
  std::vector<bool> seen(cols, false);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t k = 0; k < cols; ++k) {
      if (!elicited[r * cols + k]) continue;
      if (seen[k]) recaptured[r * cols + k] = 1;
      seen[k] = true;
    }
  }
  return recaptured;
}

}  // namespace

ElicitationMatrix ElicitationMatrix::from_cells(
    std::vector<Interview> interviews, std::vector<std::string> codes,
    std::vector<std::vector<std::uint8_t>> elicited) {
  if (elicited.size() != interviews.size())
    throw DataError("cell rows do not match interview count");

  std::unordered_set<std::string> seen_codes;
  for (const auto& code : codes)
    if (!seen_codes.insert(code).second) throw DataError("duplicate code id '" + code + "'");

  auto order = order_by_seq(interviews);

  ElicitationMatrix m;
  m.codes_ = std::move(codes);
  const std::size_t cols = m.codes_.size();
  m.elicited_.reserve(interviews.size() * cols);
  for (std::size_t pos : order) {
    const auto& row = elicited[pos];
    if (row.size() != cols)
      throw DataError("interview '" + interviews[pos].id + "' has " +
                      std::to_string(row.size()) + " cells, expected " +
                      std::to_string(cols));
    for (auto cell : row) {
      if (cell > 1) throw DataError("non-binary cell in interview '" + interviews[pos].id + "'");
      m.elicited_.push_back(cell);
    }
    m.interviews_.push_back(std::move(interviews[pos]));
  }
  for (std::size_t k = 0; k < cols; ++k) {
    bool any = false;
    for (std::size_t r = 0; r < m.interviews_.size() && !any; ++r) any = m.elicited(r, k);
    if (!any) throw DataError("code '" + m.codes_[k] + "' is never elicited");
  }
  m.recaptured_ = recapture_from(m.elicited_, m.interviews_.size(), cols);
  return m;
}

ElicitationMatrix ElicitationMatrix::from_interviews(std::span<const InterviewCodes> interviews) {
  std::vector<std::string> codes;
  std::unordered_map<std::string, std::size_t> column;
  for (const auto& iv : interviews)
    for (const auto& code : iv.codes)
      if (column.emplace(code, codes.size()).second) codes.push_back(code);

  std::vector<Interview> rows;
  std::vector<std::vector<std::uint8_t>> cells;
  rows.reserve(interviews.size());
  for (std::size_t j = 0; j < interviews.size(); ++j) {
    rows.push_back({interviews[j].interview_id, j + 1});
    std::vector<std::uint8_t> row(codes.size(), 0);
    for (const auto& code : interviews[j].codes) {
      auto& cell = row[column.at(code)];
      if (cell)
        throw DataError("code '" + code + "' repeated in interview '" +
                        interviews[j].interview_id + "'");
      cell = 1;
    }
    cells.push_back(std::move(row));
  }
  return from_cells(std::move(rows), std::move(codes), std::move(cells));
}

std::vector<std::size_t> ElicitationMatrix::first_elicitation_rows() const {
  std::vector<std::size_t> first(codes_.size(), interviews_.size());
  for (std::size_t k = 0; k < codes_.size(); ++k)
    for (std::size_t r = 0; r < interviews_.size(); ++r)
      if (elicited(r, k)) {
        first[k] = r;
        break;
      }
  return first;
}

std::vector<std::uint8_t> ElicitationMatrix::derive_recaptured() const {
  return recapture_from(elicited_, interviews_.size(), codes_.size());
}

InterviewSequence::InterviewSequence(std::vector<std::size_t> new_codes)
    : new_codes_(std::move(new_codes)) {
  if (new_codes_.empty()) throw std::invalid_argument("interview sequence is empty");
}

std::size_t InterviewSequence::total_new_codes() const noexcept {
  return std::accumulate(new_codes_.begin(), new_codes_.end(), std::size_t{0});
}

CodeFrequencyTable::CodeFrequencyTable(std::vector<std::size_t> counts)
    : counts_(std::move(counts)) {
  for (auto c : counts_) {
    total_ += c;
    if (c >= 1) ++distinct_;
    if (c == 1) ++singletons_;
  }
}

CodeFrequencyTable CodeFrequencyTable::from_matrix(const ElicitationMatrix& matrix,
                                                   std::optional<std::size_t> through_seq) {
  std::size_t rows = std::min(through_seq.value_or(matrix.interview_count()),
                              matrix.interview_count());
  std::vector<std::size_t> counts(matrix.code_count(), 0);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t k = 0; k < matrix.code_count(); ++k) counts[k] += matrix.elicited(r, k);
  return CodeFrequencyTable(std::move(counts));
}

GroupedCounts::GroupedCounts(std::vector<Group> groups) : groups_(std::move(groups)) {
  std::size_t next = 1;
  for (const auto& g : groups_) {
    if (g.end_seq < g.start_seq)
      throw DataError("group " + std::to_string(g.start_seq) + "-" + std::to_string(g.end_seq) +
                      " ends before it starts");
    if (g.start_seq > next) throw DataError("gap at seq " + std::to_string(next));
    if (g.start_seq < next) throw DataError("overlap at seq " + std::to_string(g.start_seq));
    next = g.end_seq + 1;
  }
}

std::size_t GroupedCounts::interview_count() const noexcept {
  return groups_.empty() ? 0 : groups_.back().end_seq;
}

SampleSummary summarize(std::span<const std::size_t> values) {
  SampleSummary s;
  s.n = values.size();
  if (values.empty()) return s;
  double sum = 0.0;
  for (auto v : values) sum += static_cast<double>(v);
  s.mean = sum / static_cast<double>(s.n);

  std::vector<std::size_t> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  std::size_t mid = s.n / 2;
  s.median = s.n % 2 ? static_cast<double>(sorted[mid])
                     : 0.5 * static_cast<double>(sorted[mid - 1] + sorted[mid]);
  if (s.n >= 2) {
    double ss = 0.0;
    for (auto v : values) ss += (static_cast<double>(v) - s.mean) * (static_cast<double>(v) - s.mean);
    s.sd = std::sqrt(ss / static_cast<double>(s.n - 1));
  }
  return s;
}

ElicitationMatrix parse_wide(std::string_view text) {
  auto records = csv::read(text);
  if (records.size() < 2) throw DataError("no interviews");

  const auto& header = records.front();
  if (header.fields.size() < 2 || trim(header.fields[0]) != "interview_id" ||
      trim(header.fields[1]) != "seq")
    throw DataError("header must start with interview_id,seq", header.line, 1);

  std::vector<std::string> codes;
  std::unordered_set<std::string> seen;
  for (std::size_t c = 2; c < header.fields.size(); ++c) {
    std::string code(trim(header.fields[c]));
    if (code.empty()) throw DataError("empty code id", header.line, c + 1);
    if (!seen.insert(code).second)
      throw DataError("duplicate code id '" + code + "'", header.line, c + 1);
    codes.push_back(std::move(code));
  }

  std::vector<Interview> interviews;
  std::vector<std::vector<std::uint8_t>> cells;
  std::vector<std::size_t> lines;
  for (std::size_t i = 1; i < records.size(); ++i) {
    const auto& rec = records[i];
    require_width(rec, header.fields.size());
    Interview iv{std::string(trim(rec.fields[0])), positive_integer(rec.fields[1], "seq", rec.line, 2)};
    std::vector<std::uint8_t> row;
    row.reserve(codes.size());
    for (std::size_t c = 2; c < rec.fields.size(); ++c) {
      auto cell = trim(rec.fields[c]);
      if (cell != "0" && cell != "1")
        throw DataError("non-binary cell '" + std::string(cell) + "'", rec.line, c + 1);
      row.push_back(cell == "1");
    }
    interviews.push_back(std::move(iv));
    cells.push_back(std::move(row));
    lines.push_back(rec.line);
  }
  // Validate seq here so errors carry source lines.
  order_by_seq(interviews, lines);
  for (std::size_t k = 0; k < codes.size(); ++k) {
    bool any = std::any_of(cells.begin(), cells.end(), [k](const auto& row) { return row[k]; });
    if (!any) throw DataError("code '" + codes[k] + "' is never elicited", header.line, k + 3);
  }
  return ElicitationMatrix::from_cells(std::move(interviews), std::move(codes), std::move(cells));
}

ElicitationMatrix parse_long(std::string_view manifest, std::string_view elicitations) {
  auto man = csv::read(manifest);
  if (man.size() < 2) throw DataError("no interviews");
  auto mcols = header_columns(man.front(), {"interview_id", "seq"});

  std::vector<Interview> interviews;
  std::vector<std::size_t> lines;
  for (std::size_t i = 1; i < man.size(); ++i) {
    const auto& rec = man[i];
    require_width(rec, man.front().fields.size());
    interviews.push_back({std::string(trim(rec.fields[mcols[0]])),
                          positive_integer(rec.fields[mcols[1]], "seq", rec.line, mcols[1] + 1)});
    lines.push_back(rec.line);
  }
  auto order = order_by_seq(interviews, lines);

  std::vector<InterviewCodes> rows;
  rows.reserve(order.size());
  for (auto pos : order) rows.push_back({interviews[pos].id, {}});

  auto eli = csv::read(elicitations);
  if (eli.empty()) throw DataError("elicitation file has no header");
  auto ecols = header_columns(eli.front(), {"seq", "code_id"});
  std::vector<std::unordered_set<std::string>> seen(rows.size());
  for (std::size_t i = 1; i < eli.size(); ++i) {
    const auto& rec = eli[i];
    require_width(rec, eli.front().fields.size());
    auto seq = positive_integer(rec.fields[ecols[0]], "seq", rec.line, ecols[0] + 1);
    if (seq > rows.size())
      throw DataError("unknown seq " + std::to_string(seq), rec.line, ecols[0] + 1);
    std::string code(trim(rec.fields[ecols[1]]));
    if (code.empty()) throw DataError("empty code id", rec.line, ecols[1] + 1);
    if (!seen[seq - 1].insert(code).second)
      throw DataError("duplicate elicitation (" + std::to_string(seq) + ", " + code + ")",
                      rec.line, ecols[1] + 1);
    rows[seq - 1].codes.push_back(std::move(code));
  }
  return ElicitationMatrix::from_interviews(rows);
}

GroupedCounts parse_grouped(std::string_view text) {
  auto records = csv::read(text);
  if (records.size() < 2) throw DataError("no groups");
  auto cols = header_columns(records.front(), {"start_seq", "end_seq", "codes_count"});

  std::vector<Group> groups;
  std::size_t next = 1;
  for (std::size_t i = 1; i < records.size(); ++i) {
    const auto& rec = records[i];
    require_width(rec, records.front().fields.size());
    Group g;
    g.start_seq = positive_integer(rec.fields[cols[0]], "start_seq", rec.line, cols[0] + 1);
    g.end_seq = positive_integer(rec.fields[cols[1]], "end_seq", rec.line, cols[1] + 1);
    auto count = to_integer(rec.fields[cols[2]]);
    if (!count)
      throw DataError("codes_count must be an integer", rec.line, cols[2] + 1);
    if (*count < 0)
      throw DataError("negative codes_count " + std::to_string(*count), rec.line, cols[2] + 1);
    g.codes_count = static_cast<std::size_t>(*count);
    if (g.end_seq < g.start_seq)
      throw DataError("end_seq before start_seq", rec.line, cols[1] + 1);
    if (g.start_seq > next) throw DataError("gap at seq " + std::to_string(next), rec.line, cols[0] + 1);
    if (g.start_seq < next)
      throw DataError("overlap at seq " + std::to_string(g.start_seq), rec.line, cols[0] + 1);
    next = g.end_seq + 1;
    groups.push_back(g);
  }
  return GroupedCounts(std::move(groups));
}

std::vector<std::size_t> parse_counts_line(std::string_view line, bool binary_only) {
  std::vector<std::size_t> counts;
  line = trim(line);
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  if (line.empty()) return counts;
  std::size_t column = 1;
  while (true) {
    auto comma = line.find(',');
    auto token = trim(line.substr(0, comma));
    auto value = to_integer(token);
    if (!value || *value < 0 || (binary_only && *value > 1))
      throw DataError(std::string(binary_only ? "non-binary" : "invalid") + " token '" +
                          std::string(token) + "'",
                      0, column);
    counts.push_back(static_cast<std::size_t>(*value));
    if (comma == std::string_view::npos) break;
    line.remove_prefix(comma + 1);
    ++column;
  }
  return counts;
}

InterviewSequence derive_sequence(const ElicitationMatrix& matrix) {
  std::vector<std::size_t> counts(matrix.interview_count(), 0);
  for (auto row : matrix.first_elicitation_rows()) ++counts[row];
  return InterviewSequence(std::move(counts));
}

DescriptiveStats descriptive_stats(const ElicitationMatrix& matrix) {
  const std::size_t rows = matrix.interview_count();
  const std::size_t cols = matrix.code_count();
  DescriptiveStats d;
  d.marked_per_interview.assign(rows, 0);
  d.recaptured_per_interview.assign(rows, 0);
  d.elicited_per_interview.assign(rows, 0);
  d.recaptures_per_code.assign(cols, 0);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t k = 0; k < cols; ++k) {
      if (!matrix.elicited(r, k)) continue;
      ++d.elicited_per_interview[r];
      if (matrix.recaptured(r, k)) {
        ++d.recaptured_per_interview[r];
        ++d.recaptures_per_code[k];
      } else {
        ++d.marked_per_interview[r];
      }
    }
  }
  d.marked = summarize(d.marked_per_interview);
  d.recaptures = summarize(d.recaptures_per_code);
  for (auto c : d.recaptures_per_code) ++d.recapture_frequency[c];
  return d;
}

}  // namespace saturation
