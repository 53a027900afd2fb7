#include "biasprompt/dataset.hpp"

#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include <json.hpp>

#include "biasprompt/errors.hpp"
#include "biasprompt/text.hpp"

namespace biasprompt {
namespace {

using nlohmann::json;

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IngestError("cannot read dataset file: " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

json parse_json(const std::string& text, const std::string& where) {
    try {
        return json::parse(text);
    } catch (const json::exception& e) {
        throw IngestError(where + ": " + e.what());
    }
}

// Applies `row_fn` to every non-empty line parsed as a JSON object.
std::vector<McqInstance> for_each_jsonl_row(
    const std::filesystem::path& path,
    const std::function<McqInstance(const json&, std::size_t)>& row_fn) {
    std::ifstream in(path);
    if (!in) {
        throw IngestError("cannot read dataset file: " + path.string());
    }
    std::vector<McqInstance> instances;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim_view(line).empty()) continue;
        const std::string where = path.string() + ":" + std::to_string(line_no);
        instances.push_back(row_fn(parse_json(line, where), line_no));
    }
    return instances;
}

McqInstance finish_row(McqInstance instance, DatasetTag tag) {
    instance.dataset = tag;
    instance.ordering_id = 0;
    instance.question = trim(instance.question);
    for (auto& option : instance.options) option.text = trim(option.text);
    validate_instance(instance);
    return instance;
}

std::string require_string(const json& row, const char* key, const std::string& where) {
    if (!row.contains(key) || !row[key].is_string()) {
        throw IngestError(where + ": missing or non-string field \"" + key + "\"");
    }
    return row[key].get<std::string>();
}

// ---- normalized jsonl --------------------------------------------------

std::vector<McqInstance> load_jsonl(const std::filesystem::path& path) {
    return for_each_jsonl_row(path, [&](const json& row, std::size_t line_no) {
        const std::string where = path.string() + ":" + std::to_string(line_no);
        McqInstance instance;
        instance.question_id = require_string(row, "question_id", where);
        instance.question = require_string(row, "question", where);
        if (!row.contains("options") || !row["options"].is_array()) {
            throw IngestError(where + ": missing \"options\" array");
        }
        char label = 'A';
        for (const auto& text : row["options"]) {
            if (!text.is_string()) {
                throw IngestError(where + ": options must be strings");
            }
            instance.options.push_back({label++, text.get<std::string>()});
        }
        if (!row.contains("gold_index") || !row["gold_index"].is_number_integer()) {
            throw IngestError(where + ": missing integer \"gold_index\"");
        }
        const auto gold = row["gold_index"].get<std::int64_t>();
        if (gold < 0 || gold >= static_cast<std::int64_t>(instance.options.size())) {
            throw IngestError(where + ": gold_index " + std::to_string(gold) +
                              " out of range for " + std::to_string(instance.options.size()) +
                              " options");
        }
        instance.gold_label = static_cast<char>('A' + gold);
        return finish_row(std::move(instance), DatasetTag::jsonl);
    });
}

// ---- CommonsenseQA -----------------------------------------------------

std::vector<McqInstance> load_csqa(const std::filesystem::path& path) {
    return for_each_jsonl_row(path, [&](const json& row, std::size_t line_no) {
        const std::string where = path.string() + ":" + std::to_string(line_no);
        McqInstance instance;
        instance.question_id = require_string(row, "id", where);
        if (!row.contains("question") || !row["question"].is_object()) {
            throw IngestError(where + ": missing \"question\" object");
        }
        const auto& q = row["question"];
        instance.question = require_string(q, "stem", where);
        if (!q.contains("choices") || !q["choices"].is_array()) {
            throw IngestError(where + ": missing \"choices\" array");
        }
        const std::string answer_key = require_string(row, "answerKey", where);
        char label = 'A';
        bool key_found = false;
        for (const auto& choice : q["choices"]) {
            const std::string source_label = require_string(choice, "label", where);
            const std::string text = require_string(choice, "text", where);
            if (source_label == answer_key) {
                instance.gold_label = label;
                key_found = true;
            }
            instance.options.push_back({label++, text});
        }
        if (!key_found) {
            throw IngestError(where + ": answerKey \"" + answer_key +
                              "\" matches no choice label");
        }
        return finish_row(std::move(instance), DatasetTag::csqa);
    });
}

// ---- StrategyQA --------------------------------------------------------

McqInstance strategyqa_row(const json& row, const std::string& where, std::size_t index) {
    McqInstance instance;
    if (row.contains("qid") && row["qid"].is_string()) {
        instance.question_id = row["qid"].get<std::string>();
    } else {
        instance.question_id = "strategyqa-" + std::to_string(index);
    }
    instance.question = require_string(row, "question", where);
    if (!row.contains("answer") || !row["answer"].is_boolean()) {
        throw IngestError(where + ": missing boolean \"answer\"");
    }
    instance.options = {{'A', "Yes"}, {'B', "No"}};
    instance.gold_label = row["answer"].get<bool>() ? 'A' : 'B';
    return finish_row(std::move(instance), DatasetTag::strategyqa);
}

std::vector<McqInstance> load_strategyqa(const std::filesystem::path& path) {
    const std::string content = read_file(path);
    const auto first = trim_view(content);
    if (!first.empty() && first.front() == '[') {
        const json rows = parse_json(content, path.string());
        std::vector<McqInstance> instances;
        for (std::size_t i = 0; i < rows.size(); ++i) {
            instances.push_back(
                strategyqa_row(rows[i], path.string() + "[" + std::to_string(i) + "]", i));
        }
        return instances;
    }
    return for_each_jsonl_row(path, [&](const json& row, std::size_t line_no) {
        return strategyqa_row(row, path.string() + ":" + std::to_string(line_no), line_no - 1);
    });
}

// ---- PIQA --------------------------------------------------------------

std::filesystem::path piqa_labels_path(const std::filesystem::path& data_path) {
    std::filesystem::path labels = data_path;
    labels.replace_extension();
    labels += "-labels.lst";
    return labels;
}

std::vector<int> read_piqa_labels(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw IngestError("cannot read PIQA labels file: " + path.string());
    }
    std::vector<int> labels;
    std::string line;
    while (std::getline(in, line)) {
        const auto t = trim_view(line);
        if (t.empty()) continue;
        if (t != "0" && t != "1") {
            throw IngestError(path.string() + ": label lines must be 0 or 1, got \"" +
                              std::string(t) + "\"");
        }
        labels.push_back(t == "1" ? 1 : 0);
    }
    return labels;
}

std::vector<McqInstance> load_piqa(const std::filesystem::path& path) {
    // Official distribution keeps gold labels in a sibling .lst file; rows
    // with an in-row "label" field are also accepted.
    std::vector<int> sibling_labels;
    bool sibling_loaded = false;

    auto instances = for_each_jsonl_row(path, [&](const json& row, std::size_t line_no) {
        const std::string where = path.string() + ":" + std::to_string(line_no);
        McqInstance instance;
        if (row.contains("id") && row["id"].is_string()) {
            instance.question_id = row["id"].get<std::string>();
        } else {
            instance.question_id = "piqa-" + std::to_string(line_no - 1);
        }
        instance.question = require_string(row, "goal", where);
        // Solutions become options verbatim, however long; prompt budgeting
        // handles truncation downstream.
        instance.options = {{'A', require_string(row, "sol1", where)},
                            {'B', require_string(row, "sol2", where)}};
        int gold = -1;
        if (row.contains("label") && row["label"].is_number_integer()) {
            gold = row["label"].get<int>();
        } else {
            if (!sibling_loaded) {
                sibling_labels = read_piqa_labels(piqa_labels_path(path));
                sibling_loaded = true;
            }
            if (line_no - 1 >= sibling_labels.size()) {
                throw IngestError(where + ": no label for row in " +
                                  piqa_labels_path(path).string());
            }
            gold = sibling_labels[line_no - 1];
        }
        if (gold != 0 && gold != 1) {
            throw IngestError(where + ": label must be 0 or 1, got " + std::to_string(gold));
        }
        instance.gold_label = gold == 0 ? 'A' : 'B';
        return finish_row(std::move(instance), DatasetTag::piqa);
    });
    return instances;
}

// ---- BIG-Bench-Hard ----------------------------------------------------

const json& bbh_examples(const json& doc, const std::string& where) {
    if (!doc.contains("examples") || !doc["examples"].is_array()) {
        throw IngestError(where + ": missing \"examples\" array");
    }
    return doc["examples"];
}

// Splits a BBH input into the question text and the "(A) ..." option lines
// that follow its "Options:" marker.
std::pair<std::string, std::vector<std::string>> split_bbh_options(const std::string& input,
                                                                   const std::string& where) {
    const auto marker = input.find("Options:");
    if (marker == std::string::npos) {
        throw IngestError(where + ": input has no \"Options:\" block");
    }
    const std::string question = trim(input.substr(0, marker));
    std::vector<std::string> option_texts;
    std::istringstream rest(input.substr(marker + std::string("Options:").size()));
    std::string line;
    while (std::getline(rest, line)) {
        const auto t = trim(line);
        if (t.empty()) continue;
        if (t.size() >= 3 && t[0] == '(' && t[2] == ')') {
            option_texts.push_back(trim(t.substr(3)));
        } else if (t.rfind("- ", 0) == 0) {
            option_texts.push_back(trim(t.substr(2)));
        } else {
            throw IngestError(where + ": unrecognized option line \"" + t + "\"");
        }
    }
    return {question, option_texts};
}

std::vector<McqInstance> load_bbh_date(const std::filesystem::path& path) {
    const json doc = parse_json(read_file(path), path.string());
    std::vector<McqInstance> instances;
    const auto& examples = bbh_examples(doc, path.string());
    for (std::size_t i = 0; i < examples.size(); ++i) {
        const std::string where = path.string() + "[" + std::to_string(i) + "]";
        McqInstance instance;
        instance.question_id = "bbh_date-" + std::to_string(i);
        const std::string input = require_string(examples[i], "input", where);
        const std::string target = require_string(examples[i], "target", where);
        auto [question, option_texts] = split_bbh_options(input, where);
        instance.question = std::move(question);
        char label = 'A';
        for (auto& text : option_texts) {
            instance.options.push_back({label++, std::move(text)});
        }
        // Targets look like "(A)"; the letter indexes the source option order.
        const auto t = trim_view(target);
        if (t.size() < 3 || t.front() != '(' || t[2] != ')') {
            throw IngestError(where + ": target \"" + target + "\" is not of the form (A)");
        }
        instance.gold_label = t[1];
        instances.push_back(finish_row(std::move(instance), DatasetTag::bbh_date));
    }
    return instances;
}

std::vector<McqInstance> load_bbh_causal(const std::filesystem::path& path) {
    const json doc = parse_json(read_file(path), path.string());
    std::vector<McqInstance> instances;
    const auto& examples = bbh_examples(doc, path.string());
    for (std::size_t i = 0; i < examples.size(); ++i) {
        const std::string where = path.string() + "[" + std::to_string(i) + "]";
        McqInstance instance;
        instance.question_id = "bbh_causal-" + std::to_string(i);
        std::string input = require_string(examples[i], "input", where);
        const std::string target = trim(require_string(examples[i], "target", where));
        // Yes/no task; strip the trailing Options block when present.
        const auto marker = input.find("Options:");
        if (marker != std::string::npos) {
            input = input.substr(0, marker);
        }
        instance.question = trim(input);
        instance.options = {{'A', "Yes"}, {'B', "No"}};
        if (target == "Yes") {
            instance.gold_label = 'A';
        } else if (target == "No") {
            instance.gold_label = 'B';
        } else {
            throw IngestError(where + ": target must be Yes or No, got \"" + target + "\"");
        }
        instances.push_back(finish_row(std::move(instance), DatasetTag::bbh_causal));
    }
    return instances;
}

using Adapter = std::vector<McqInstance> (*)(const std::filesystem::path&);

const std::map<DatasetTag, Adapter>& adapter_registry() {
    static const std::map<DatasetTag, Adapter> registry = {
        {DatasetTag::csqa, &load_csqa},
        {DatasetTag::strategyqa, &load_strategyqa},
        {DatasetTag::piqa, &load_piqa},
        {DatasetTag::bbh_date, &load_bbh_date},
        {DatasetTag::bbh_causal, &load_bbh_causal},
        {DatasetTag::jsonl, &load_jsonl},
    };
    return registry;
}

}  // namespace

LoadedDataset load_dataset(const std::filesystem::path& path, DatasetTag tag) {
    const auto& registry = adapter_registry();
    const auto it = registry.find(tag);
    if (it == registry.end()) {
        throw ConfigError("no adapter registered for tag " + std::string(to_string(tag)));
    }
    LoadedDataset loaded;
    loaded.instances = it->second(path);
    const auto& descriptor = descriptor_for(tag);
    if (descriptor.expected_size != 0 && loaded.instances.size() != descriptor.expected_size) {
        loaded.size_warning = "loaded " + std::to_string(loaded.instances.size()) + " " +
                              std::string(to_string(tag)) + " questions, expected " +
                              std::to_string(descriptor.expected_size);
    }
    return loaded;
}

}  // namespace biasprompt
