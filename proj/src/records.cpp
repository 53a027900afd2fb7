#include "biasprompt/records.hpp"

#include <fstream>
#include <ostream>

#include <json.hpp>

#include "biasprompt/errors.hpp"
#include "biasprompt/text.hpp"

namespace biasprompt {
namespace {

using nlohmann::json;

std::string require_string(const json& row, const char* key, const std::string& where) {
    if (!row.contains(key) || !row[key].is_string()) {
        throw IngestError(where + ": missing string field \"" + key + "\"");
    }
    return row[key].get<std::string>();
}

char require_label(const json& row, const char* key, const std::string& where) {
    const std::string value = require_string(row, key, where);
    if (value.size() != 1 || value[0] < 'A' || value[0] > 'Z') {
        throw IngestError(where + ": field \"" + key + "\" is not an option label: \"" + value +
                          "\"");
    }
    return value[0];
}

// Name-parsing helpers signal ConfigError (their callers usually hold CLI
// input); inside a record file an unknown name is malformed data instead.
template <typename Parser>
auto parse_name(Parser parser, const std::string& name, const std::string& where) {
    try {
        return parser(name);
    } catch (const ConfigError& e) {
        throw IngestError(where + ": " + e.what());
    }
}

}  // namespace

long EvalRecord::total_prompt_tokens() const {
    long total = 0;
    for (const auto& call : calls) total += call.prompt_tokens;
    return total;
}

long EvalRecord::total_completion_tokens() const {
    long total = 0;
    for (const auto& call : calls) total += call.completion_tokens;
    return total;
}

EvalRecord make_record(const McqInstance& instance, const Prediction& prediction,
                       const std::string& model, std::int64_t seed) {
    if (instance.question_id != prediction.question_id) {
        throw ContractError("prediction for question \"" + prediction.question_id +
                            "\" scored against instance \"" + instance.question_id + "\"");
    }
    EvalRecord record;
    record.question_id = instance.question_id;
    record.dataset = instance.dataset;
    record.model = model;
    record.strategy = prediction.strategy;
    record.ordering_id = instance.ordering_id;
    record.seed = seed;
    record.gold_label = instance.gold_label;
    record.predicted_label = prediction.predicted_label;
    record.parse_status = prediction.parse_status;
    record.correct = prediction.predicted_label.has_value() &&
                     *prediction.predicted_label == instance.gold_label;
    record.reasonings = prediction.reasonings;
    record.sentinel_labels = prediction.sentinel_labels;
    record.calls = prediction.calls;
    record.raw_final_text = prediction.raw_final_text;
    return record;
}

std::string to_json_line(const EvalRecord& record) {
    json row;
    row["question_id"] = record.question_id;
    row["dataset"] = to_string(record.dataset);
    row["model"] = record.model;
    row["strategy"] = to_string(record.strategy);
    row["ordering_id"] = record.ordering_id;
    row["seed"] = record.seed;
    row["gold_label"] = std::string(1, record.gold_label);
    if (record.predicted_label) {
        row["predicted_label"] = std::string(1, *record.predicted_label);
    } else {
        row["predicted_label"] = nullptr;
    }
    row["parse_status"] = to_string(record.parse_status);
    row["correct"] = record.correct;
    if (record.reasonings) {
        json reasonings = json::object();
        for (const auto& [label, text] : *record.reasonings) {
            reasonings[std::string(1, label)] = text;
        }
        row["reasonings"] = std::move(reasonings);
    } else {
        row["reasonings"] = nullptr;
    }
    if (!record.sentinel_labels.empty()) {
        json labels = json::array();
        for (const char label : record.sentinel_labels) labels.push_back(std::string(1, label));
        row["sentinel_labels"] = std::move(labels);
    }
    json calls = json::array();
    for (const auto& call : record.calls) {
        calls.push_back({{"template_id", to_string(call.template_id)},
                         {"prompt_tokens", call.prompt_tokens},
                         {"completion_tokens", call.completion_tokens},
                         {"latency_ms", call.latency_ms}});
    }
    row["calls"] = std::move(calls);
    row["raw_final_text"] = record.raw_final_text;
    return row.dump();
}

EvalRecord record_from_json_line(const std::string& line) {
    json row;
    try {
        row = json::parse(line);
    } catch (const json::exception& e) {
        throw IngestError(std::string("malformed record line: ") + e.what());
    }
    EvalRecord record;
    record.question_id = require_string(row, "question_id", "record");
    const std::string where = "record \"" + record.question_id + "\"";
    record.dataset = parse_name(&parse_dataset_tag, require_string(row, "dataset", where), where);
    record.model = require_string(row, "model", where);
    record.strategy = parse_name(&parse_strategy, require_string(row, "strategy", where), where);
    if (!row.contains("ordering_id") || !row["ordering_id"].is_number_integer()) {
        throw IngestError(where + ": missing integer field \"ordering_id\"");
    }
    record.ordering_id = row["ordering_id"].get<std::int64_t>();
    if (!row.contains("seed") || !row["seed"].is_number_integer()) {
        throw IngestError(where + ": missing integer field \"seed\"");
    }
    record.seed = row["seed"].get<std::int64_t>();
    record.gold_label = require_label(row, "gold_label", where);
    if (!row.contains("predicted_label")) {
        throw IngestError(where + ": missing field \"predicted_label\"");
    }
    if (!row["predicted_label"].is_null()) {
        record.predicted_label = require_label(row, "predicted_label", where);
    }
    record.parse_status =
        parse_name(&parse_parse_status, require_string(row, "parse_status", where), where);
    if (!row.contains("correct") || !row["correct"].is_boolean()) {
        throw IngestError(where + ": missing boolean field \"correct\"");
    }
    record.correct = row["correct"].get<bool>();
    const bool expected_correct =
        record.predicted_label.has_value() && *record.predicted_label == record.gold_label;
    if (record.correct != expected_correct) {
        throw IngestError(where + ": \"correct\" contradicts the stored labels");
    }
    if (!row.contains("reasonings")) {
        throw IngestError(where + ": missing field \"reasonings\"");
    }
    if (!row["reasonings"].is_null()) {
        ReasoningSet reasonings;
        for (const auto& [label, text] : row["reasonings"].items()) {
            if (label.size() != 1 || !text.is_string()) {
                throw IngestError(where + ": malformed reasonings map");
            }
            reasonings.emplace(label[0], text.get<std::string>());
        }
        record.reasonings = std::move(reasonings);
    }
    if (row.contains("sentinel_labels")) {
        for (const auto& label : row["sentinel_labels"]) {
            if (!label.is_string() || label.get<std::string>().size() != 1) {
                throw IngestError(where + ": malformed sentinel_labels list");
            }
            record.sentinel_labels.push_back(label.get<std::string>()[0]);
        }
    }
    if (!row.contains("calls") || !row["calls"].is_array()) {
        throw IngestError(where + ": missing array field \"calls\"");
    }
    for (const auto& call : row["calls"]) {
        CallUsage usage;
        usage.template_id =
            parse_name(&parse_template_id, require_string(call, "template_id", where), where);
        usage.prompt_tokens = call.value("prompt_tokens", 0L);
        usage.completion_tokens = call.value("completion_tokens", 0L);
        usage.latency_ms = call.value("latency_ms", 0L);
        record.calls.push_back(usage);
    }
    record.raw_final_text = require_string(row, "raw_final_text", where);
    return record;
}

void append_record(std::ostream& out, const EvalRecord& record) {
    out << to_json_line(record) << '\n';
}

void write_records(const std::filesystem::path& path, const std::vector<EvalRecord>& records) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IngestError("cannot open records file for writing: " + path.string());
    }
    for (const auto& record : records) append_record(out, record);
    if (!out.good()) {
        throw IngestError("failed writing records file: " + path.string());
    }
}

std::vector<EvalRecord> read_records(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IngestError("cannot read records file: " + path.string());
    }
    std::vector<EvalRecord> records;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim_view(line).empty()) continue;
        try {
            records.push_back(record_from_json_line(line));
        } catch (const std::exception& e) {
            throw IngestError(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
        }
    }
    return records;
}

}  // namespace biasprompt
