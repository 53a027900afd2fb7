#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "biasprompt/records.hpp"

namespace biasprompt {

// Accuracy of one cell.  The percent is kept as an exact integer count of
// tenths (rounded half away from zero) so formatting and delta arithmetic
// never pick up floating-point drift; the raw fraction is retained for
// sign decisions below the rounding resolution.
struct Score {
    long n = 0;
    long k = 0;
    long accuracy_deci = 0;  // accuracy in tenths of a percent
    double raw_fraction = 0.0;

    double accuracy_percent() const { return static_cast<double>(accuracy_deci) / 10.0; }

    bool operator==(const Score&) const = default;
};

Score score(long k, long n);                          // throws ContractError on bad counts
Score score(const std::vector<EvalRecord>& records);  // throws ContractError when empty

// "66.0" — always one decimal.
std::string format_percent(long deci);

// Signed difference of two rounded percents, e.g. "+0.9%".  The magnitude
// comes from the rounded values; when they tie, the sign comes from the raw
// fractions, so a cell trailing its baseline by less than the rounding
// resolution prints "-0.0%".  A cell against itself prints "+0.0%".
std::string format_delta(const Score& cell, const Score& baseline);

// A score with the identity needed to compare it against another.
struct ScoredCell {
    std::string dataset;
    std::string model;
    Score score;
};

// format_delta with the precondition enforced: both cells must describe the
// same dataset and model (throws ContractError otherwise).
std::string delta(const ScoredCell& cell, const ScoredCell& baseline);

struct ZTestResult {
    double z = 0.0;
    double p = 1.0;
    bool significant = false;
};

// Pooled two-sided two-proportion z-test of k1/n1 against k2/n2:
//   p_pool = (k1+k2)/(n1+n2)
//   z      = (k1/n1 - k2/n2) / sqrt(p_pool (1-p_pool) (1/n1 + 1/n2))
//   p      = erfc(|z| / sqrt 2)          (two-sided normal tail)
// significant iff p < 0.05.  A degenerate pool (all correct or all wrong,
// which forces equal proportions) yields z = 0, p = 1.
// Throws ContractError unless 0 <= k_i <= n_i and n_i > 0.
ZTestResult two_proportion_z_test(long k1, long n1, long k2, long n2);

// Per-run correctness over a shared question set, keyed by an opaque run
// label (two runs of the same strategy stay distinct).
using CorrectnessByRun = std::map<std::string, std::map<std::string, bool>>;

// For each run, the number of questions it alone answers correctly while
// every other run misses.  All runs must cover the same question_id set;
// a mismatch throws ContractError naming the missing ids.
std::map<std::string, long> exclusive_wins(const CorrectnessByRun& runs);

// Convenience: builds the correctness map from record lists (throws
// ContractError on duplicate question ids within one run).
CorrectnessByRun correctness_by_run(
    const std::map<std::string, std::vector<EvalRecord>>& runs);

// Completion-token statistics over per-question totals (each question's
// total sums completion tokens over all of its calls).
struct TokenSummary {
    long total = 0;
    double mean = 0.0;
    long min = 0;
    long max = 0;
    double q1 = 0.0;
    double median = 0.0;
    double q3 = 0.0;
};

// Throws ContractError when records is empty.  Quartiles use linear
// interpolation between closest ranks (the common spreadsheet definition);
// for even counts the median is the midpoint of the central pair.
TokenSummary token_stats(const std::vector<EvalRecord>& records);

struct OrderingAccuracy {
    std::int64_t ordering_id = 0;
    long n = 0;
    long k = 0;
    double accuracy_percent = 0.0;  // rounded to one decimal, like reports
};

struct PermutationSummary {
    std::vector<OrderingAccuracy> accuracies;  // sorted by ordering_id
    double median = 0.0;
    double variance = 0.0;  // population variance of the percent values
};

// Accuracy spread across option orderings of the same question set.
// Requires at least two orderings (throws ContractError otherwise).
PermutationSummary permutation_robustness(
    const std::map<std::int64_t, std::pair<long, long>>& per_ordering);  // id -> (n, k)

}  // namespace biasprompt
