#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "biasprompt/evaluation.hpp"
#include "biasprompt/records.hpp"

namespace biasprompt {

// Identity of one report cell.
struct CellKey {
    std::string dataset;
    std::string model;
    std::string strategy;
    std::int64_t ordering_id = 0;

    auto operator<=>(const CellKey&) const = default;
};

// One emitted table row.  Comparison columns (delta, z, p, significant,
// wins) are pre-formatted strings and stay empty in plain reports, where
// no baseline exists.
struct ReportRow {
    CellKey key;
    Score score;
    std::string delta;
    std::string z;
    std::string p;
    std::string significant;
    std::string wins;
    TokenSummary tokens;
};

// Accuracy spread across option orderings of one (dataset, model,
// strategy) cell; emitted when a report covers two or more orderings.
struct RobustnessRow {
    std::string dataset;
    std::string model;
    std::string strategy;
    PermutationSummary summary;
};

struct Report {
    std::vector<ReportRow> rows;
    std::vector<RobustnessRow> robustness;
    std::string baseline_note;  // empty in plain reports
};

// Compares runs (one homogeneous records list per run, in presentation
// order) against the run at baseline_index: every row gains a delta, a
// pooled z-test against the baseline, and its exclusive-win count.
// Throws ContractError when fewer than two runs are given, a run is empty
// or mixes cells, runs disagree on dataset/model, or question sets differ
// (naming the offending ids).
Report build_comparison(const std::vector<std::vector<EvalRecord>>& runs,
                        std::size_t baseline_index);

// Re-aggregates records into one row per (dataset, model, strategy,
// ordering_id), sorted by that key, with no comparison columns.  Cells of
// one (dataset, model, strategy) spanning two or more orderings also
// produce a robustness row.  Throws ContractError when records is empty.
Report build_report(const std::vector<EvalRecord>& records);

// Byte-deterministic emission for fixed input.
std::string to_csv(const Report& report);
std::string to_markdown(const Report& report);

}  // namespace biasprompt
