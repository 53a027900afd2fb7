#include "biasprompt/evaluation.hpp"

#include <algorithm>
#include <cmath>

#include "biasprompt/errors.hpp"

namespace biasprompt {
namespace {

// Value at quantile q of a sorted sample, interpolating linearly between
// the two closest ranks.
double quantile(const std::vector<long>& sorted, double q) {
    if (sorted.size() == 1) return static_cast<double>(sorted.front());
    const double h = q * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(h);
    const double frac = h - static_cast<double>(lo);
    if (lo + 1 >= sorted.size()) return static_cast<double>(sorted.back());
    return static_cast<double>(sorted[lo]) +
           frac * static_cast<double>(sorted[lo + 1] - sorted[lo]);
}

double median_of(std::vector<double> values) {
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    if (n % 2 == 1) return values[n / 2];
    return (values[n / 2 - 1] + values[n / 2]) / 2.0;
}

}  // namespace

Score score(long k, long n) {
    if (n <= 0) throw ContractError("cannot score an empty record set");
    if (k < 0 || k > n) {
        throw ContractError("correct count " + std::to_string(k) + " out of range for n = " +
                            std::to_string(n));
    }
    Score s;
    s.n = n;
    s.k = k;
    // Accuracy in tenths of a percent is 1000k/n rounded half-up, computed
    // in exact integer arithmetic (k <= n so 2000k cannot overflow long).
    s.accuracy_deci = (2000 * k + n) / (2 * n);
    s.raw_fraction = static_cast<double>(k) / static_cast<double>(n);
    return s;
}

Score score(const std::vector<EvalRecord>& records) {
    long k = 0;
    for (const auto& record : records) k += record.correct ? 1 : 0;
    return score(k, static_cast<long>(records.size()));
}

std::string format_percent(long deci) {
    const bool negative = deci < 0;
    const long magnitude = negative ? -deci : deci;
    std::string out = negative ? "-" : "";
    out += std::to_string(magnitude / 10);
    out += '.';
    out += static_cast<char>('0' + magnitude % 10);
    return out;
}

std::string format_delta(const Score& cell, const Score& baseline) {
    const long diff_deci = cell.accuracy_deci - baseline.accuracy_deci;
    char sign = '+';
    if (diff_deci < 0) {
        sign = '-';
    } else if (diff_deci == 0 && cell.raw_fraction < baseline.raw_fraction) {
        sign = '-';
    }
    const long magnitude = diff_deci < 0 ? -diff_deci : diff_deci;
    return std::string(1, sign) + format_percent(magnitude) + "%";
}

std::string delta(const ScoredCell& cell, const ScoredCell& baseline) {
    if (cell.dataset != baseline.dataset || cell.model != baseline.model) {
        throw ContractError("delta requires matching cells; got " + cell.dataset + "/" +
                            cell.model + " vs " + baseline.dataset + "/" + baseline.model);
    }
    return format_delta(cell.score, baseline.score);
}

ZTestResult two_proportion_z_test(long k1, long n1, long k2, long n2) {
    if (n1 <= 0 || n2 <= 0 || k1 < 0 || k1 > n1 || k2 < 0 || k2 > n2) {
        throw ContractError("z-test requires 0 <= k <= n and n > 0");
    }
    ZTestResult result;
    const double pool =
        static_cast<double>(k1 + k2) / static_cast<double>(n1 + n2);
    if (pool <= 0.0 || pool >= 1.0) {
        // All correct or all wrong in both groups: proportions are equal
        // and the test statistic is defined as zero.
        return result;
    }
    const double p1 = static_cast<double>(k1) / static_cast<double>(n1);
    const double p2 = static_cast<double>(k2) / static_cast<double>(n2);
    const double stderr_pooled = std::sqrt(
        pool * (1.0 - pool) * (1.0 / static_cast<double>(n1) + 1.0 / static_cast<double>(n2)));
    result.z = (p1 - p2) / stderr_pooled;
    // Two-sided tail of the standard normal: P(|Z| >= |z|) = erfc(|z|/sqrt 2).
    result.p = std::erfc(std::fabs(result.z) / std::sqrt(2.0));
    result.significant = result.p < 0.05;
    return result;
}

std::map<std::string, long> exclusive_wins(const CorrectnessByRun& runs) {
    if (runs.empty()) throw ContractError("exclusive wins over zero runs");

    // Every run must cover the identical question set.
    const auto& reference = runs.begin()->second;
    for (const auto& [label, questions] : runs) {
        std::vector<std::string> missing;
        for (const auto& [qid, unused] : reference) {
            if (!questions.count(qid)) missing.push_back(qid);
        }
        for (const auto& [qid, unused] : questions) {
            if (!reference.count(qid)) missing.push_back(qid);
        }
        if (!missing.empty()) {
            std::sort(missing.begin(), missing.end());
            std::string joined;
            for (const auto& qid : missing) {
                if (!joined.empty()) joined += ", ";
                joined += qid;
            }
            throw ContractError("question coverage mismatch for run \"" + label +
                                "\"; offending ids: " + joined);
        }
    }

    std::map<std::string, long> wins;
    for (const auto& [label, unused] : runs) wins[label] = 0;
    for (const auto& [qid, unused] : reference) {
        const std::string* sole_winner = nullptr;
        bool multiple = false;
        for (const auto& [label, questions] : runs) {
            if (!questions.at(qid)) continue;
            if (sole_winner != nullptr) {
                multiple = true;
                break;
            }
            sole_winner = &label;
        }
        if (sole_winner != nullptr && !multiple && runs.size() > 1) {
            ++wins[*sole_winner];
        }
    }
    return wins;
}

CorrectnessByRun correctness_by_run(
    const std::map<std::string, std::vector<EvalRecord>>& runs) {
    CorrectnessByRun out;
    for (const auto& [label, records] : runs) {
        auto& questions = out[label];
        for (const auto& record : records) {
            if (!questions.emplace(record.question_id, record.correct).second) {
                throw ContractError("run \"" + label + "\" answers question \"" +
                                    record.question_id + "\" more than once");
            }
        }
    }
    return out;
}

TokenSummary token_stats(const std::vector<EvalRecord>& records) {
    if (records.empty()) throw ContractError("token statistics over zero records");
    std::vector<long> totals;
    totals.reserve(records.size());
    for (const auto& record : records) totals.push_back(record.total_completion_tokens());
    std::sort(totals.begin(), totals.end());

    TokenSummary summary;
    for (const long total : totals) summary.total += total;
    summary.mean = static_cast<double>(summary.total) / static_cast<double>(totals.size());
    summary.min = totals.front();
    summary.max = totals.back();
    summary.q1 = quantile(totals, 0.25);
    summary.median = quantile(totals, 0.5);
    summary.q3 = quantile(totals, 0.75);
    return summary;
}

PermutationSummary permutation_robustness(
    const std::map<std::int64_t, std::pair<long, long>>& per_ordering) {
    if (per_ordering.size() < 2) {
        throw ContractError("permutation robustness requires at least 2 orderings, got " +
                            std::to_string(per_ordering.size()));
    }
    PermutationSummary summary;
    std::vector<double> percents;
    for (const auto& [ordering_id, counts] : per_ordering) {
        const Score s = score(counts.second, counts.first);
        summary.accuracies.push_back({ordering_id, s.n, s.k, s.accuracy_percent()});
        percents.push_back(s.accuracy_percent());
    }
    summary.median = median_of(percents);
    double mean = 0.0;
    for (const double value : percents) mean += value;
    mean /= static_cast<double>(percents.size());
    for (const double value : percents) {
        summary.variance += (value - mean) * (value - mean);
    }
    summary.variance /= static_cast<double>(percents.size());
    return summary;
}

}  // namespace biasprompt
