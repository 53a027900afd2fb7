#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "biasprompt/mcq.hpp"

namespace biasprompt {

struct LoadedDataset {
    std::vector<McqInstance> instances;
    // Set when the loaded count differs from the descriptor's expected size.
    // Public splits drift, so this is a warning and never an error.
    std::optional<std::string> size_warning;
};

// Loads and normalizes a benchmark file in the native format registered for
// `tag`. Instances come back in source order with ordering_id 0 and are fully
// validated. Throws IngestError for unreadable files or rows that violate the
// schema, ConfigError for tags without a registered adapter.
//
// Registered adapters:
//   csqa        json-lines, {"id", "question": {"stem", "choices": [{"label","text"}]}, "answerKey"}
//   strategyqa  json array or json-lines, {"qid", "question", "answer": bool} -> options Yes/No
//   piqa        json-lines, {"goal", "sol1", "sol2"} with in-row "label" 0/1 or a
//               sibling "<stem>-labels.lst" file of 0/1 lines
//   bbh_date    {"examples": [{"input", "target"}]}, options parsed from the
//               "(A) ..." lines embedded in input, target like "(A)"
//   bbh_causal  {"examples": [{"input", "target"}]}, target Yes/No -> options A/B
//   jsonl       normalized records, one object per line:
//               {"question_id": str, "question": str, "options": [str], "gold_index": int}
LoadedDataset load_dataset(const std::filesystem::path& path, DatasetTag tag);

}  // namespace biasprompt
