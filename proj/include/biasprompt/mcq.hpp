#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace biasprompt {

enum class DatasetTag {
    csqa,
    strategyqa,
    piqa,
    bbh_date,
    bbh_causal,
    jsonl,  // normalized line-delimited records, see dataset.hpp
};

DatasetTag parse_dataset_tag(std::string_view name);
std::string_view to_string(DatasetTag tag);

struct McqOption {
    char label = 'A';
    std::string text;

    bool operator==(const McqOption&) const = default;
};

// One normalized multiple-choice question. Labels are always consecutive
// uppercase letters starting at A; ordering_id 0 means source option order.
struct McqInstance {
    std::string question_id;
    DatasetTag dataset = DatasetTag::jsonl;
    std::string question;
    std::vector<McqOption> options;
    char gold_label = 'A';
    std::int64_t ordering_id = 0;

    std::optional<std::size_t> index_of_label(char label) const;
    const std::string& option_text(char label) const;  // throws ContractError on unknown label
    std::string gold_text() const { return option_text(gold_label); }

    bool operator==(const McqInstance&) const = default;
};

// Throws IngestError naming question_id and the violated rule:
// 2..6 options, consecutive labels from A, gold label present, option texts
// non-empty after trimming.
void validate_instance(const McqInstance& instance);

struct DatasetDescriptor {
    DatasetTag tag;
    int min_choices = 2;
    int max_choices = 6;
    std::size_t expected_size = 0;  // 0 = no expectation
};

const DatasetDescriptor& descriptor_for(DatasetTag tag);

// The permutation a given (seed, question_id) pair draws for n options:
// result[i] is the source-order index of the option placed at position i.
// Stable across platforms and runs; per-question draws are independent
// because the stream is seeded by hashing the pair.
std::vector<std::size_t> option_permutation(std::int64_t seed, const std::string& question_id,
                                            std::size_t n);

// Returns a copy of `instance` with option order permuted by
// option_permutation(seed, ...). Labels are reassigned A.. in the new order,
// gold_label follows the gold option text, and ordering_id is set to `seed`.
// The input is not mutated.
McqInstance permute_options(const McqInstance& instance, std::int64_t seed);

struct DatasetStats {
    std::size_t count = 0;
    std::map<std::size_t, std::size_t> choices_histogram;  // option count -> questions
};

DatasetStats dataset_stats(const std::vector<McqInstance>& instances);

}  // namespace biasprompt
