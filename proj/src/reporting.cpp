#include "biasprompt/reporting.hpp"

#include <cstdio>
#include <iterator>
#include <map>
#include <tuple>

#include "biasprompt/errors.hpp"

namespace biasprompt {
namespace {

std::string format_g(double value) {
    char buffer[64];
    std::snprintf(buffer, sizeof buffer, "%.6g", value);
    return buffer;
}

std::string format_1f(double value) {
    char buffer[64];
    std::snprintf(buffer, sizeof buffer, "%.1f", value);
    return buffer;
}

CellKey key_of(const EvalRecord& record) {
    return {std::string(to_string(record.dataset)), record.model,
            std::string(to_string(record.strategy)), record.ordering_id};
}

// A run file must describe exactly one cell.
CellKey homogeneous_key(const std::vector<EvalRecord>& records, std::size_t run_index) {
    if (records.empty()) {
        throw ContractError("run " + std::to_string(run_index) + " holds no records");
    }
    const CellKey key = key_of(records.front());
    for (const auto& record : records) {
        if (key_of(record) != key) {
            throw ContractError("run " + std::to_string(run_index) +
                                " mixes cells (dataset/model/strategy/ordering must be "
                                "constant within one run)");
        }
    }
    return key;
}

void append_row(std::string& out, const ReportRow& row, const char* separator) {
    out += row.key.dataset;
    out += separator;
    out += row.key.model;
    out += separator;
    out += row.key.strategy;
    out += separator;
    out += std::to_string(row.score.n);
    out += separator;
    out += std::to_string(row.score.k);
    out += separator;
    out += format_percent(row.score.accuracy_deci);
    out += separator;
    out += row.delta;
    out += separator;
    out += row.z;
    out += separator;
    out += row.p;
    out += separator;
    out += row.significant;
    out += separator;
    out += row.wins;
    out += separator;
    out += format_1f(row.tokens.mean);
    out += separator;
    out += std::to_string(row.tokens.min);
    out += separator;
    out += format_1f(row.tokens.q1);
    out += separator;
    out += format_1f(row.tokens.median);
    out += separator;
    out += format_1f(row.tokens.q3);
    out += separator;
    out += std::to_string(row.tokens.max);
}

constexpr const char* kColumns[] = {
    "dataset",       "model",      "strategy",  "n",
    "k",             "accuracy",   "delta",     "z",
    "p",             "significant", "wins",     "tokens_mean",
    "tokens_min",    "tokens_q1",  "tokens_median", "tokens_q3",
    "tokens_max",
};

}  // namespace

Report build_comparison(const std::vector<std::vector<EvalRecord>>& runs,
                        std::size_t baseline_index) {
    if (runs.size() < 2) {
        throw ContractError("comparison requires at least 2 runs, got " +
                            std::to_string(runs.size()));
    }
    if (baseline_index >= runs.size()) {
        throw ContractError("baseline index " + std::to_string(baseline_index) +
                            " out of range for " + std::to_string(runs.size()) + " runs");
    }

    std::vector<CellKey> keys;
    keys.reserve(runs.size());
    for (std::size_t i = 0; i < runs.size(); ++i) {
        keys.push_back(homogeneous_key(runs[i], i));
        if (keys[i].dataset != keys[0].dataset || keys[i].model != keys[0].model) {
            throw ContractError("runs must share dataset and model; run " + std::to_string(i) +
                                " is " + keys[i].dataset + "/" + keys[i].model + " but run 0 is " +
                                keys[0].dataset + "/" + keys[0].model);
        }
    }

    // Exclusive wins need per-run correctness over an identical question
    // set; runs are keyed by index so repeated strategies stay distinct.
    std::map<std::string, std::vector<EvalRecord>> labeled;
    for (std::size_t i = 0; i < runs.size(); ++i) {
        labeled.emplace(std::to_string(i), runs[i]);
    }
    const auto wins = exclusive_wins(correctness_by_run(labeled));

    const Score baseline = score(runs[baseline_index]);
    Report report;
    report.baseline_note = "baseline: run " + std::to_string(baseline_index) + " (" +
                           keys[baseline_index].strategy + ")";
    for (std::size_t i = 0; i < runs.size(); ++i) {
        ReportRow row;
        row.key = keys[i];
        row.score = score(runs[i]);
        row.delta = format_delta(row.score, baseline);
        const ZTestResult z = two_proportion_z_test(row.score.k, row.score.n, baseline.k,
                                                    baseline.n);
        row.z = format_g(z.z);
        row.p = format_g(z.p);
        row.significant = z.significant ? "true" : "false";
        row.wins = std::to_string(wins.at(std::to_string(i)));
        row.tokens = token_stats(runs[i]);
        report.rows.push_back(std::move(row));
    }
    return report;
}

Report build_report(const std::vector<EvalRecord>& records) {
    if (records.empty()) throw ContractError("no records");

    std::map<CellKey, std::vector<EvalRecord>> groups;
    for (const auto& record : records) {
        groups[key_of(record)].push_back(record);
    }

    Report report;
    for (const auto& [key, group] : groups) {
        ReportRow row;
        row.key = key;
        row.score = score(group);
        row.tokens = token_stats(group);
        report.rows.push_back(std::move(row));
    }

    // Same strategy cell across several orderings -> robustness summary.
    std::map<std::tuple<std::string, std::string, std::string>,
             std::map<std::int64_t, std::pair<long, long>>>
        by_cell;
    for (const auto& row : report.rows) {
        by_cell[{row.key.dataset, row.key.model, row.key.strategy}][row.key.ordering_id] = {
            row.score.n, row.score.k};
    }
    for (const auto& [cell, per_ordering] : by_cell) {
        if (per_ordering.size() < 2) continue;
        RobustnessRow row;
        row.dataset = std::get<0>(cell);
        row.model = std::get<1>(cell);
        row.strategy = std::get<2>(cell);
        row.summary = permutation_robustness(per_ordering);
        report.robustness.push_back(std::move(row));
    }
    return report;
}

std::string to_csv(const Report& report) {
    std::string out;
    for (std::size_t i = 0; i < std::size(kColumns); ++i) {
        if (i > 0) out += ',';
        out += kColumns[i];
    }
    out += '\n';
    for (const auto& row : report.rows) {
        append_row(out, row, ",");
        out += '\n';
    }
    return out;
}

std::string to_markdown(const Report& report) {
    std::string out = "# Evaluation report\n\n";
    if (!report.baseline_note.empty()) {
        out += report.baseline_note;
        out += "\n\n";
    }
    out += '|';
    for (const auto* column : kColumns) {
        out += ' ';
        out += column;
        out += " |";
    }
    out += "\n|";
    for (std::size_t i = 0; i < std::size(kColumns); ++i) out += " --- |";
    out += '\n';
    for (const auto& row : report.rows) {
        out += "| ";
        append_row(out, row, " | ");
        out += " |\n";
    }
    if (!report.robustness.empty()) {
        out += "\n## Option-order robustness\n\n";
        for (const auto& row : report.robustness) {
            out += "- " + row.dataset + " / " + row.model + " / " + row.strategy +
                   ": orderings [";
            for (std::size_t i = 0; i < row.summary.accuracies.size(); ++i) {
                const auto& acc = row.summary.accuracies[i];
                if (i > 0) out += ", ";
                out += std::to_string(acc.ordering_id) + ": " + format_1f(acc.accuracy_percent);
            }
            out += "], median " + format_1f(row.summary.median) + ", variance " +
                   format_g(row.summary.variance) + "\n";
        }
    }
    return out;
}

}  // namespace biasprompt
