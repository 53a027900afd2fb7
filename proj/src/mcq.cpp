#include "biasprompt/mcq.hpp"

#include <algorithm>
#include <numeric>

#include "biasprompt/errors.hpp"
#include "biasprompt/hash.hpp"
#include "biasprompt/text.hpp"

namespace biasprompt {

DatasetTag parse_dataset_tag(std::string_view name) {
    if (name == "csqa") return DatasetTag::csqa;
    if (name == "strategyqa") return DatasetTag::strategyqa;
    if (name == "piqa") return DatasetTag::piqa;
    if (name == "bbh_date") return DatasetTag::bbh_date;
    if (name == "bbh_causal") return DatasetTag::bbh_causal;
    if (name == "jsonl") return DatasetTag::jsonl;
    throw ConfigError("unknown dataset tag: " + std::string(name));
}

std::string_view to_string(DatasetTag tag) {
    switch (tag) {
        case DatasetTag::csqa: return "csqa";
        case DatasetTag::strategyqa: return "strategyqa";
        case DatasetTag::piqa: return "piqa";
        case DatasetTag::bbh_date: return "bbh_date";
        case DatasetTag::bbh_causal: return "bbh_causal";
        case DatasetTag::jsonl: return "jsonl";
    }
    return "unknown";
}

std::optional<std::size_t> McqInstance::index_of_label(char label) const {
    for (std::size_t i = 0; i < options.size(); ++i) {
        if (options[i].label == label) return i;
    }
    return std::nullopt;
}

const std::string& McqInstance::option_text(char label) const {
    auto idx = index_of_label(label);
    if (!idx) {
        throw ContractError("question " + question_id + ": no option labeled '" +
                            std::string(1, label) + "'");
    }
    return options[*idx].text;
}

void validate_instance(const McqInstance& instance) {
    auto fail = [&](const std::string& rule) {
        throw IngestError("question " + instance.question_id + ": " + rule);
    };
    if (instance.options.size() < 2 || instance.options.size() > 6) {
        fail("expected 2..6 options, got " + std::to_string(instance.options.size()));
    }
    for (std::size_t i = 0; i < instance.options.size(); ++i) {
        const char expected = static_cast<char>('A' + i);
        if (instance.options[i].label != expected) {
            fail(std::string("labels must be consecutive from A; position ") + std::to_string(i) +
                 " carries '" + std::string(1, instance.options[i].label) + "'");
        }
        if (trim_view(instance.options[i].text).empty()) {
            fail(std::string("option ") + expected + " text is empty");
        }
    }
    if (!instance.index_of_label(instance.gold_label)) {
        fail(std::string("gold label '") + instance.gold_label + "' not among options");
    }
    if (trim_view(instance.question).empty()) {
        fail("question text is empty");
    }
}

const DatasetDescriptor& descriptor_for(DatasetTag tag) {
    static const std::map<DatasetTag, DatasetDescriptor> table = {
        {DatasetTag::csqa, {DatasetTag::csqa, 5, 5, 1221}},
        {DatasetTag::strategyqa, {DatasetTag::strategyqa, 2, 2, 2290}},
        {DatasetTag::piqa, {DatasetTag::piqa, 2, 2, 1838}},
        {DatasetTag::bbh_date, {DatasetTag::bbh_date, 6, 6, 250}},
        {DatasetTag::bbh_causal, {DatasetTag::bbh_causal, 2, 2, 187}},
        {DatasetTag::jsonl, {DatasetTag::jsonl, 2, 6, 0}},
    };
    return table.at(tag);
}

std::vector<std::size_t> option_permutation(std::int64_t seed, const std::string& question_id,
                                            std::size_t n) {
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    if (n < 2) return perm;
    const std::uint64_t stream =
        fnv1a64(question_id) ^ (static_cast<std::uint64_t>(seed) + 0x9e3779b97f4a7c15ULL);
    SplitMix64 rng(stream);
    for (std::size_t i = n - 1; i > 0; --i) {
        const std::size_t j = static_cast<std::size_t>(rng.bounded(i + 1));
        std::swap(perm[i], perm[j]);
    }
    return perm;
}

McqInstance permute_options(const McqInstance& instance, std::int64_t seed) {
    const auto perm = option_permutation(seed, instance.question_id, instance.options.size());
    McqInstance out = instance;
    out.ordering_id = seed;
    for (std::size_t i = 0; i < perm.size(); ++i) {
        out.options[i].label = static_cast<char>('A' + i);
        out.options[i].text = instance.options[perm[i]].text;
        if (instance.options[perm[i]].label == instance.gold_label) {
            out.gold_label = static_cast<char>('A' + i);
        }
    }
    return out;
}

DatasetStats dataset_stats(const std::vector<McqInstance>& instances) {
    DatasetStats stats;
    stats.count = instances.size();
    for (const auto& instance : instances) {
        ++stats.choices_histogram[instance.options.size()];
    }
    return stats;
}

}  // namespace biasprompt
