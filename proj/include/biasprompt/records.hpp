#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "biasprompt/mcq.hpp"
#include "biasprompt/strategy.hpp"

namespace biasprompt {

// One scored prediction with everything needed to re-derive any report:
// identity (question, dataset, model, strategy, ordering, seed), the
// verdict, and the full call-usage trail.
struct EvalRecord {
    std::string question_id;
    DatasetTag dataset = DatasetTag::jsonl;
    std::string model;
    Strategy strategy = Strategy::zero_shot;
    std::int64_t ordering_id = 0;
    std::int64_t seed = 0;
    char gold_label = 'A';
    std::optional<char> predicted_label;
    ParseStatus parse_status = ParseStatus::failed;
    bool correct = false;
    std::optional<ReasoningSet> reasonings;
    std::vector<char> sentinel_labels;
    std::vector<CallUsage> calls;
    std::string raw_final_text;

    long total_prompt_tokens() const;
    long total_completion_tokens() const;

    bool operator==(const EvalRecord&) const = default;
};

// Scores a prediction against its instance; `correct` holds exactly when a
// label was extracted and it equals the gold label.
EvalRecord make_record(const McqInstance& instance, const Prediction& prediction,
                       const std::string& model, std::int64_t seed);

// One record per line, keys in fixed (lexicographic) order so equal records
// serialize to equal bytes.
std::string to_json_line(const EvalRecord& record);
EvalRecord record_from_json_line(const std::string& line);  // throws IngestError

void append_record(std::ostream& out, const EvalRecord& record);
void write_records(const std::filesystem::path& path, const std::vector<EvalRecord>& records);

// Reads a records file, re-checking per line that `correct` matches the
// stored labels.  Throws IngestError (with path:line) on any malformed or
// inconsistent line; an unreadable path is also an IngestError.
std::vector<EvalRecord> read_records(const std::filesystem::path& path);

}  // namespace biasprompt
