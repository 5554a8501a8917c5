#include "saturation/dataset.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

#include "saturation/error.hpp"

namespace saturation {
namespace {

std::string fixture(const std::string& name) {
  std::ifstream in(std::string(SATURATION_TEST_DATA) + "/" + name);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string error_of(auto&& fn) {
  try {
    fn();
  } catch (const DataError& e) {
    return e.what();
  }
  return "<no error>";
}

std::size_t column_of(const ElicitationMatrix& m, const std::string& code) {
  return static_cast<std::size_t>(std::find(m.codes().begin(), m.codes().end(), code) - m.codes().begin());
}

TEST(ParseWide, DerivesRecaptureFromEarlierElicitation) {
  auto m = parse_wide("interview_id,seq,A,B\naaaa,1,1,0\nbbbb,2,1,1\n");
  ASSERT_EQ(m.interview_count(), 2u);
  EXPECT_TRUE(m.recaptured(1, 0));   // R_2A
  EXPECT_FALSE(m.recaptured(1, 1));  // R_2B
  EXPECT_FALSE(m.recaptured(0, 0));
}

TEST(ParseWide, SortsRowsBySeq) {
  auto m = parse_wide("interview_id,seq,A\nsecond,2,1\nfirst,1,1\n");
  EXPECT_EQ(m.interviews()[0].id, "first");
  EXPECT_TRUE(m.recaptured(1, 0));
}

TEST(ParseWide, Errors) {
  EXPECT_NE(error_of([] { parse_wide("interview_id,seq,A\na,1,1\nb,3,1\n"); }).find("non-contiguous seq"),
            std::string::npos);
  EXPECT_NE(error_of([] { parse_wide("interview_id,seq,A\na,1,1\nb,1,1\n"); }).find("duplicate seq"),
            std::string::npos);
  auto cell = error_of([] { parse_wide("interview_id,seq,A,B\na,1,1,2\n"); });
  EXPECT_NE(cell.find("non-binary cell"), std::string::npos);
  EXPECT_NE(cell.find("line 2, column 4"), std::string::npos);
  EXPECT_NE(error_of([] { parse_wide("interview_id,seq,A,A\na,1,1,1\n"); }).find("duplicate code id"),
            std::string::npos);
  EXPECT_NE(error_of([] { parse_wide("interview_id,seq,A,B\na,1,1,0\n"); }).find("never elicited"),
            std::string::npos);
  EXPECT_NE(error_of([] { parse_wide(""); }).find("no interviews"), std::string::npos);
  EXPECT_NE(error_of([] { parse_wide("id,seq,A\na,1,1\n"); }).find("interview_id,seq"), std::string::npos);
  EXPECT_NE(error_of([] { parse_wide("interview_id,seq,A\na,0,1\n"); }).find("positive integer"),
            std::string::npos);
  EXPECT_NE(error_of([] { parse_wide("interview_id,seq,A\na,1\n"); }).find("expected 3 fields"),
            std::string::npos);
}

TEST(ParseWide, CodeMatrixMarkRecapturePairs) {
  auto m = parse_wide(fixture("code_matrix.csv"));
  const auto a = column_of(m, "A"), b = column_of(m, "B"), c = column_of(m, "C"), k = column_of(m, "K");
  // Code A at interview 3 is (1,1); at interview 1 (1,0).
  EXPECT_TRUE(m.elicited(2, a) && m.recaptured(2, a));
  EXPECT_TRUE(m.elicited(0, a) && !m.recaptured(0, a));
  // Code B: (1,0) at 3, (1,1) at 4 and 5.
  EXPECT_TRUE(m.elicited(2, b) && !m.recaptured(2, b));
  EXPECT_TRUE(m.recaptured(3, b) && m.recaptured(4, b));
  // Code C: first elicited at 2.
  EXPECT_TRUE(m.elicited(1, c) && !m.recaptured(1, c));
  // Code K: recaptured at 5. Its first elicitation (interview 2) cannot be
  // a recapture, so R is 0 there.
  EXPECT_TRUE(m.elicited(4, k) && m.recaptured(4, k));
  EXPECT_FALSE(m.recaptured(1, k));
}

TEST(ParseLong, EquivalentToWide) {
  auto m = parse_long("interview_id,seq\ni1,1\ni2,2\n", "seq,code_id\n1,A\n2,A\n2,B\n");
  EXPECT_EQ(m.codes(), (std::vector<std::string>{"A", "B"}));
  EXPECT_TRUE(m.elicited(0, 0));
  EXPECT_TRUE(m.elicited(1, 0) && m.elicited(1, 1));
  EXPECT_TRUE(m.recaptured(1, 0));
  auto wide = parse_wide("interview_id,seq,A,B\ni1,1,1,0\ni2,2,1,1\n");
  EXPECT_EQ(m, wide);
}

TEST(ParseLong, ZeroCodeInterviewsComeFromManifest) {
  auto m = parse_long(fixture("manifest.csv"), "seq,code_id\n1,A\n");
  ASSERT_EQ(m.interview_count(), 3u);
  EXPECT_FALSE(m.elicited(1, 0));
  EXPECT_FALSE(m.elicited(2, 0));
  EXPECT_EQ(derive_sequence(m).new_codes(), (std::vector<std::size_t>{1, 0, 0}));
}

TEST(ParseLong, Errors) {
  EXPECT_NE(error_of([] { parse_long("interview_id,seq\na,1\nb,2\n", "seq,code_id\n3,A\n"); })
                .find("unknown seq 3"),
            std::string::npos);
  EXPECT_NE(error_of([] { parse_long("interview_id,seq\na,1\n", "seq,code_id\n1,A\n1,A\n"); })
                .find("duplicate elicitation"),
            std::string::npos);
  EXPECT_NE(error_of([] { parse_long("interview_id,seq,site\na,1,x\n", "seq,code_id\n"); })
                .find("unknown column 'site'"),
            std::string::npos);
  EXPECT_NE(error_of([] { parse_long("interview_id\na\n", "seq,code_id\n"); }).find("missing column 'seq'"),
            std::string::npos);
}

TEST(ParseLong, ColumnOrderIsFree) {
  auto m = parse_long("seq,interview_id\n1,a\n", "code_id,seq\nX,1\n");
  EXPECT_EQ(m.interviews()[0].id, "a");
  EXPECT_EQ(m.codes()[0], "X");
}

TEST(ParseGrouped, ValidGroups) {
  auto g = parse_grouped("start_seq,end_seq,codes_count\n1,6,14\n7,12,8\n13,18,5\n");
  EXPECT_EQ(g.groups().size(), 3u);
  EXPECT_EQ(g.interview_count(), 18u);
  EXPECT_EQ(g.groups()[2], (Group{13, 18, 5}));
  auto zero = parse_grouped("start_seq,end_seq,codes_count\n1,6,0\n");
  EXPECT_EQ(zero.groups()[0].codes_count, 0u);
}

TEST(ParseGrouped, Errors) {
  EXPECT_NE(error_of([] { parse_grouped("start_seq,end_seq,codes_count\n1,6,3\n8,13,2\n"); }).find("gap at seq 7"),
            std::string::npos);
  EXPECT_NE(error_of([] { parse_grouped("start_seq,end_seq,codes_count\n1,6,3\n5,10,2\n"); }).find("overlap at seq 5"),
            std::string::npos);
  EXPECT_NE(error_of([] { parse_grouped("start_seq,end_seq,codes_count\n1,6,-1\n"); }).find("negative codes_count"),
            std::string::npos);
  EXPECT_NE(error_of([] { parse_grouped("start_seq,end_seq,codes_count\n2,6,1\n"); }).find("gap at seq 1"),
            std::string::npos);
  EXPECT_THROW(GroupedCounts({{1, 3, 1}, {5, 6, 1}}), DataError);
}

TEST(ParseCountsLine, BinaryAndCounts) {
  EXPECT_EQ(parse_counts_line("1, 0,1", true), (std::vector<std::size_t>{1, 0, 1}));
  EXPECT_EQ(parse_counts_line("3,0,12", false), (std::vector<std::size_t>{3, 0, 12}));
  EXPECT_TRUE(parse_counts_line("", true).empty());
  EXPECT_THROW(parse_counts_line("2,1", true), DataError);
  EXPECT_THROW(parse_counts_line("1,,1", false), DataError);
  EXPECT_THROW(parse_counts_line("-1", false), DataError);
}

TEST(DeriveSequence, CountsFirstElicitations) {
  std::vector<InterviewCodes> ivs{{"1", {"A", "B"}}, {"2", {"A", "C"}}, {"3", {"A"}}};
  EXPECT_EQ(derive_sequence(ElicitationMatrix::from_interviews(ivs)).new_codes(),
            (std::vector<std::size_t>{2, 1, 0}));
  std::vector<InterviewCodes> same{{"1", {"A"}}, {"2", {"A"}}, {"3", {"A"}}, {"4", {"A"}}};
  EXPECT_EQ(derive_sequence(ElicitationMatrix::from_interviews(same)).new_codes(),
            (std::vector<std::size_t>{1, 0, 0, 0}));
}

TEST(DeriveSequence, CodeMatrix) {
  auto m = parse_wide(fixture("code_matrix.csv"));
  auto seq = derive_sequence(m);
  EXPECT_EQ(seq.new_codes(), (std::vector<std::size_t>{1, 2, 1, 0, 0}));
  auto first = m.first_elicitation_rows();
  EXPECT_EQ(first[column_of(m, "A")], 0u);
  EXPECT_EQ(first[column_of(m, "C")], 1u);
  EXPECT_EQ(first[column_of(m, "K")], 1u);
}

TEST(InterviewSequence, RejectsEmpty) { EXPECT_THROW(InterviewSequence({}), std::invalid_argument); }

TEST(DescriptiveStats, TwoInterviews) {
  std::vector<InterviewCodes> ivs{{"1", {"A", "B"}}, {"2", {"A", "C"}}};
  auto m = ElicitationMatrix::from_interviews(ivs);
  auto d = descriptive_stats(m);
  EXPECT_EQ(d.marked_per_interview, (std::vector<std::size_t>{2, 1}));
  EXPECT_EQ(d.recaptures_per_code, (std::vector<std::size_t>{1, 0, 0}));  // A, B, C
  EXPECT_EQ(d.recapture_frequency, (std::map<std::size_t, std::size_t>{{0, 2}, {1, 1}}));
  EXPECT_EQ(d.elicited_per_interview, (std::vector<std::size_t>{2, 2}));
  EXPECT_DOUBLE_EQ(d.marked.mean, 1.5);
  EXPECT_DOUBLE_EQ(d.marked.median, 1.5);
  ASSERT_TRUE(d.marked.sd);
  EXPECT_NEAR(*d.marked.sd, std::sqrt(0.5), 1e-15);
}

TEST(DescriptiveStats, SingleInterview) {
  std::vector<InterviewCodes> ivs{{"1", {"A"}}};
  auto d = descriptive_stats(ElicitationMatrix::from_interviews(ivs));
  EXPECT_EQ(d.marked_per_interview, (std::vector<std::size_t>{1}));
  EXPECT_EQ(d.recaptures_per_code, (std::vector<std::size_t>{0}));
  EXPECT_FALSE(d.marked.sd);
}

TEST(DescriptiveStats, CodeARecapturedThreeTimes) {
  auto m = parse_wide(fixture("code_matrix.csv"));
  auto d = descriptive_stats(m);
  EXPECT_EQ(d.recaptures_per_code[column_of(m, "A")], 3u);
}

// Random matrices for the structural invariants.
ElicitationMatrix random_matrix(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> rows(1, 25), cols(1, 12);
  std::bernoulli_distribution bit(0.3);
  const int j = rows(rng), k = cols(rng);
  std::vector<InterviewCodes> ivs(static_cast<std::size_t>(j));
  for (int r = 0; r < j; ++r) {
    ivs[r].interview_id = "iv" + std::to_string(r);
    for (int c = 0; c < k; ++c)
      if (bit(rng)) ivs[r].codes.push_back("code" + std::to_string(c));
  }
  return ElicitationMatrix::from_interviews(ivs);
}

TEST(DatasetProperties, SumsAndIdempotentRecapture) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 300; ++trial) {
    auto m = random_matrix(rng);
    auto d = descriptive_stats(m);
    auto freq = CodeFrequencyTable::from_matrix(m);
    const std::size_t distinct = m.code_count();
    EXPECT_EQ(derive_sequence(m).total_new_codes(), distinct);
    EXPECT_EQ(std::accumulate(d.marked_per_interview.begin(), d.marked_per_interview.end(), std::size_t{0}), distinct);
    EXPECT_EQ(std::accumulate(d.recaptures_per_code.begin(), d.recaptures_per_code.end(), std::size_t{0}),
              freq.elicitations() - freq.distinct());
    std::size_t freq_total = 0;
    for (auto [_, n] : d.recapture_frequency) freq_total += n;
    EXPECT_EQ(freq_total, distinct);
    EXPECT_LE(freq.singletons(), freq.distinct());
    EXPECT_LE(freq.distinct(), freq.elicitations());

    std::vector<std::uint8_t> stored;
    for (std::size_t r = 0; r < m.interview_count(); ++r)
      for (std::size_t k = 0; k < m.code_count(); ++k) stored.push_back(m.recaptured(r, k));
    EXPECT_EQ(m.derive_recaptured(), stored);
  }
}

TEST(DatasetProperties, ColumnPermutationAndFormatAgreement) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    auto m = random_matrix(rng);
    std::vector<std::size_t> perm(m.code_count());
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);

    std::string wide = "interview_id,seq";
    for (auto k : perm) wide += "," + m.codes()[k];
    wide += "\n";
    std::string manifest = "interview_id,seq\n", longform = "seq,code_id\n";
    for (std::size_t r = 0; r < m.interview_count(); ++r) {
      wide += m.interviews()[r].id + "," + std::to_string(r + 1);
      manifest += m.interviews()[r].id + "," + std::to_string(r + 1) + "\n";
      for (auto k : perm) {
        wide += m.elicited(r, k) ? ",1" : ",0";
        if (m.elicited(r, k)) longform += std::to_string(r + 1) + "," + m.codes()[k] + "\n";
      }
      wide += "\n";
    }
    auto expected = derive_sequence(m);
    EXPECT_EQ(derive_sequence(parse_wide(wide)), expected);
    EXPECT_EQ(derive_sequence(parse_long(manifest, longform)), expected);
  }
}

}  // namespace
}  // namespace saturation
