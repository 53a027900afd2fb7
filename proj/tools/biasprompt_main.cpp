// Command-line harness for multiple-choice inference experiments: runs the
// direct and reasoning-guided strategies against a chat endpoint or a
// scripted mock, persists per-question records, and aggregates them into
// comparison and robustness reports.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <iterator>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <CLI11.hpp>

#include "biasprompt/dataset.hpp"
#include "biasprompt/errors.hpp"
#include "biasprompt/evaluation.hpp"
#include "biasprompt/http_backend.hpp"
#include "biasprompt/mock_backend.hpp"
#include "biasprompt/records.hpp"
#include "biasprompt/reporting.hpp"
#include "biasprompt/runner.hpp"
#include "biasprompt/strategy.hpp"

namespace bp = biasprompt;

namespace {

struct RunOptions {
    std::string dataset_path;
    std::string format;
    std::string strategy;
    std::string endpoint;
    std::string mock_path;
    std::string model = "default";
    std::string out_path;
    std::string templates_dir;
    std::string system_message;
    std::int64_t seed = 0;
    std::int64_t ordering = 0;
    int concurrency = 4;
    int max_tokens = 256;
    int min_tokens = 1;
    int context_window = 1024;
    double temperature = 0.0;
    long limit = 0;  // 0 = whole dataset
};

struct PermuteOptions {
    RunOptions base;
    int orderings = 3;
    bool include_source = false;
    bool reuse_reasonings = false;
};

struct FilesOptions {
    std::vector<std::string> files;
    int baseline = 0;
    std::string out_prefix;
};

std::string format_1f(double value) {
    char buffer[64];
    std::snprintf(buffer, sizeof buffer, "%.1f", value);
    return buffer;
}

std::string format_g(double value) {
    char buffer[64];
    std::snprintf(buffer, sizeof buffer, "%.6g", value);
    return buffer;
}

void add_run_flags(CLI::App* cmd, RunOptions& opt, const char* out_help) {
    cmd->add_option("--dataset", opt.dataset_path, "Benchmark file to load")->required();
    cmd->add_option("--format", opt.format,
                    "Input format: csqa, strategyqa, piqa, bbh_date, bbh_causal, or jsonl")
        ->required();
    cmd->add_option("--strategy", opt.strategy, "zero_shot, cot, bias, or bias_cot")->required();
    cmd->add_option("--endpoint", opt.endpoint,
                    "Chat-completions base URL, e.g. http://localhost:8000/v1");
    cmd->add_option("--mock", opt.mock_path, "Scripted mock fixture (line-delimited)");
    cmd->add_option("--model", opt.model,
                    "Model name sent to the endpoint and stamped on records");
    cmd->add_option("--out", opt.out_path, out_help)->required();
    cmd->add_option("--seed", opt.seed, "Run seed stamped on records");
    cmd->add_option("--concurrency", opt.concurrency, "Questions processed in parallel")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--max-tokens", opt.max_tokens, "Completion token cap per call")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--min-tokens", opt.min_tokens,
                    "Minimum completion tokens (empty outputs are re-asked once)")
        ->check(CLI::NonNegativeNumber);
    cmd->add_option("--context-window", opt.context_window,
                    "Joint prompt+completion token budget")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--temperature", opt.temperature, "Sampling temperature (0 = greedy)");
    cmd->add_option("--limit", opt.limit, "Cap on questions taken from the dataset")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--templates-dir", opt.templates_dir,
                    "Directory of prompt template overrides (<template_id>.txt)");
    cmd->add_option("--system", opt.system_message, "System message prepended to every prompt");
}

bp::GenerationParams make_params(const RunOptions& opt) {
    bp::GenerationParams params;
    params.temperature = opt.temperature;
    params.max_new_tokens = opt.max_tokens;
    params.min_new_tokens = opt.min_tokens;
    params.context_window = opt.context_window;
    params.ensure_valid();
    return params;
}

bp::PromptLibrary make_library(const RunOptions& opt) {
    auto library = opt.templates_dir.empty()
                       ? bp::PromptLibrary()
                       : bp::PromptLibrary::from_directory(opt.templates_dir);
    if (!opt.system_message.empty()) library.set_system_message(opt.system_message);
    return library;
}

std::unique_ptr<bp::ModelBackend> make_backend(const RunOptions& opt) {
    if (opt.endpoint.empty() == opt.mock_path.empty()) {
        throw bp::ConfigError("exactly one of --endpoint or --mock is required");
    }
    if (!opt.mock_path.empty()) {
        return std::make_unique<bp::MockBackend>(bp::MockBackend::from_file(opt.mock_path));
    }
    bp::HttpBackendOptions http;
    http.base_url = opt.endpoint;
    http.model = opt.model;
    return std::make_unique<bp::HttpBackend>(std::move(http));
}

std::vector<bp::McqInstance> load_instances(const RunOptions& opt) {
    auto loaded = bp::load_dataset(opt.dataset_path, bp::parse_dataset_tag(opt.format));
    if (loaded.size_warning) {
        std::cerr << "warning: " << *loaded.size_warning << "\n";
    }
    auto instances = std::move(loaded.instances);
    if (opt.limit > 0 && instances.size() > static_cast<std::size_t>(opt.limit)) {
        instances.resize(static_cast<std::size_t>(opt.limit));
    }
    if (instances.empty()) {
        throw bp::ConfigError("dataset holds no questions: " + opt.dataset_path);
    }
    return instances;
}

// Stage-1 reasonings cached across orderings, keyed per question by option
// text (labels move when options are permuted; texts do not).
using ReasoningCache = std::map<std::string, std::map<std::string, std::string>>;

bp::StrategyResult run_with_cached_reasonings(const bp::McqInstance& instance,
                                              bp::Strategy strategy,
                                              const bp::PromptLibrary& library,
                                              bp::ModelBackend& backend,
                                              const bp::GenerationParams& params,
                                              const std::map<std::string, std::string>& by_text) {
    bp::ReasoningSet reasonings;
    std::vector<char> sentinels;
    for (const auto& option : instance.options) {
        const auto it = by_text.find(option.text);
        std::string reasoning =
            it == by_text.end() ? std::string(bp::kReasoningSentinel) : it->second;
        if (reasoning == bp::kReasoningSentinel) sentinels.push_back(option.label);
        reasonings.emplace(option.label, std::move(reasoning));
    }
    auto consensus = bp::run_consensus(instance, reasonings, library, backend, params,
                                       strategy == bp::Strategy::bias_cot);
    if (auto* error = std::get_if<bp::StrategyError>(&consensus)) {
        return std::move(*error);
    }
    auto& outcome = std::get<bp::ConsensusOutcome>(consensus);
    bp::Prediction prediction;
    prediction.question_id = instance.question_id;
    prediction.strategy = strategy;
    prediction.predicted_label = outcome.label;
    prediction.parse_status = outcome.status;
    prediction.raw_final_text = std::move(outcome.raw_text);
    prediction.reasonings = std::move(reasonings);
    prediction.sentinel_labels = std::move(sentinels);
    prediction.calls.push_back(outcome.usage);
    return prediction;
}

struct RunOutcome {
    std::vector<bp::EvalRecord> records;
    std::optional<std::string> failure;
};

// Executes one strategy over the given instances, appending records to
// `out` in question order as they are delivered.  A backend failure on the
// answer-producing call stops the run; records written so far stay valid.
RunOutcome execute_run(const RunOptions& opt, const std::vector<bp::McqInstance>& instances,
                       const bp::PromptLibrary& library, bp::ModelBackend& backend,
                       const bp::GenerationParams& params, std::ostream& out,
                       ReasoningCache* cache) {
    const bp::Strategy strategy = bp::parse_strategy(opt.strategy);
    RunOutcome outcome;
    outcome.records.reserve(instances.size());

    const std::function<bp::StrategyResult(std::size_t)> job =
        [&](std::size_t index) -> bp::StrategyResult {
        const auto& instance = instances[index];
        if (cache != nullptr && bp::is_bias_strategy(strategy)) {
            const auto it = cache->find(instance.question_id);
            if (it != cache->end()) {
                return run_with_cached_reasonings(instance, strategy, library, backend, params,
                                                  it->second);
            }
        }
        return bp::run_strategy(instance, strategy, library, backend, params, opt.concurrency);
    };

    const std::function<bool(std::size_t, bp::StrategyResult)> sink =
        [&](std::size_t index, bp::StrategyResult result) {
        if (auto* error = std::get_if<bp::StrategyError>(&result)) {
            outcome.failure =
                "question \"" + instances[index].question_id + "\": " + error->message;
            return false;
        }
        auto& prediction = std::get<bp::Prediction>(result);
        if (cache != nullptr && prediction.reasonings &&
            !cache->count(prediction.question_id)) {
            auto& by_text = (*cache)[prediction.question_id];
            for (const auto& [label, reasoning] : *prediction.reasonings) {
                by_text[instances[index].option_text(label)] = reasoning;
            }
        }
        auto record = bp::make_record(instances[index], prediction, opt.model, opt.seed);
        bp::append_record(out, record);
        outcome.records.push_back(std::move(record));
        return true;
    };

    bp::run_ordered<bp::StrategyResult>(instances.size(), opt.concurrency, job, sink);
    out.flush();
    return outcome;
}

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw bp::ConfigError("cannot open output file: " + path);
    return out;
}

int cmd_run(const RunOptions& opt) {
    auto instances = load_instances(opt);
    if (opt.ordering != 0) {
        for (auto& instance : instances) instance = bp::permute_options(instance, opt.ordering);
    }
    const auto library = make_library(opt);
    const auto backend = make_backend(opt);
    const auto params = make_params(opt);

    auto out = open_output(opt.out_path);
    const auto outcome = execute_run(opt, instances, library, *backend, params, out, nullptr);
    if (outcome.failure) {
        std::cerr << "error: " << *outcome.failure << "\n";
        return 3;
    }
    const auto s = bp::score(outcome.records);
    std::cout << s.k << "/" << s.n << ", " << bp::format_percent(s.accuracy_deci) << "\n";
    return 0;
}

// records.jsonl -> records.ord<seed>.jsonl
std::string ordered_out_path(const std::string& base, std::int64_t ordering_seed) {
    const std::filesystem::path path(base);
    const std::string ext = path.extension().string();
    std::filesystem::path stem = path;
    stem.replace_extension();
    return stem.string() + ".ord" + std::to_string(ordering_seed) + ext;
}

int cmd_permute(const PermuteOptions& popt) {
    const RunOptions& opt = popt.base;
    if (popt.orderings < 2) {
        throw bp::ConfigError("permutation study requires --orderings >= 2, got " +
                              std::to_string(popt.orderings));
    }
    const auto instances = load_instances(opt);
    const auto library = make_library(opt);
    const auto backend = make_backend(opt);
    const auto params = make_params(opt);

    std::vector<std::int64_t> ordering_seeds;
    if (popt.include_source) ordering_seeds.push_back(0);
    for (int i = 0; i < popt.orderings; ++i) {
        ordering_seeds.push_back(opt.seed * 1000 + i + 1);
    }

    ReasoningCache cache;
    ReasoningCache* cache_ptr = popt.reuse_reasonings ? &cache : nullptr;
    std::map<std::int64_t, std::pair<long, long>> per_ordering;
    for (const std::int64_t ordering_seed : ordering_seeds) {
        std::vector<bp::McqInstance> permuted = instances;
        if (ordering_seed != 0) {
            for (auto& instance : permuted) {
                instance = bp::permute_options(instance, ordering_seed);
            }
        }
        auto out = open_output(ordered_out_path(opt.out_path, ordering_seed));
        const auto outcome =
            execute_run(opt, permuted, library, *backend, params, out, cache_ptr);
        if (outcome.failure) {
            std::cerr << "error: ordering " << ordering_seed << ": " << *outcome.failure << "\n";
            return 3;
        }
        const auto s = bp::score(outcome.records);
        per_ordering[ordering_seed] = {s.n, s.k};
        std::cout << "ordering " << ordering_seed << ": " << s.k << "/" << s.n << ", "
                  << bp::format_percent(s.accuracy_deci) << "\n";
    }

    const auto summary = bp::permutation_robustness(per_ordering);
    std::cout << "median " << format_1f(summary.median) << ", variance "
              << format_g(summary.variance) << "\n";
    return 0;
}

void emit_report(const bp::Report& report, const std::string& out_prefix) {
    if (out_prefix.empty()) {
        std::cout << bp::to_markdown(report);
        return;
    }
    auto csv = open_output(out_prefix + ".csv");
    csv << bp::to_csv(report);
    auto md = open_output(out_prefix + ".md");
    md << bp::to_markdown(report);
}

int cmd_compare(const FilesOptions& opt) {
    if (opt.files.size() < 2) {
        throw bp::ConfigError("compare needs at least 2 records files");
    }
    if (opt.baseline < 0 || static_cast<std::size_t>(opt.baseline) >= opt.files.size()) {
        throw bp::ConfigError("--baseline index out of range");
    }
    std::vector<std::vector<bp::EvalRecord>> runs;
    runs.reserve(opt.files.size());
    for (const auto& file : opt.files) runs.push_back(bp::read_records(file));
    emit_report(bp::build_comparison(runs, static_cast<std::size_t>(opt.baseline)),
                opt.out_prefix);
    return 0;
}

int cmd_report(const FilesOptions& opt) {
    std::vector<bp::EvalRecord> records;
    for (const auto& file : opt.files) {
        auto batch = bp::read_records(file);
        records.insert(records.end(), std::make_move_iterator(batch.begin()),
                       std::make_move_iterator(batch.end()));
    }
    if (records.empty()) throw bp::ConfigError("no records");
    emit_report(bp::build_report(records), opt.out_prefix);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "Multiple-choice inference harness: direct and reasoning-guided strategies "
        "over benchmark datasets, with records, comparisons, and ordering-robustness "
        "reports."};
    app.require_subcommand(1);

    RunOptions run_opt;
    auto* run_cmd =
        app.add_subcommand("run", "Run one strategy over a dataset and write records");
    add_run_flags(run_cmd, run_opt, "Records output path");
    run_cmd->add_option("--ordering", run_opt.ordering,
                        "Option-ordering seed (0 = source order)");

    PermuteOptions permute_opt;
    auto* permute_cmd = app.add_subcommand(
        "permute", "Run one strategy across several seeded option orderings");
    add_run_flags(permute_cmd, permute_opt.base,
                  "Records output base path; each ordering writes <base>.ord<seed>");
    permute_cmd->add_option("--orderings", permute_opt.orderings,
                            "Number of seeded orderings (at least 2)");
    permute_cmd->add_flag("--include-source", permute_opt.include_source,
                          "Also run the source option order (ordering 0)");
    permute_cmd->add_flag("--reuse-reasonings", permute_opt.reuse_reasonings,
                          "Generate stage-1 reasonings once and reuse them across orderings");

    FilesOptions compare_opt;
    auto* compare_cmd =
        app.add_subcommand("compare", "Compare run records against a baseline run");
    compare_cmd->add_option("files", compare_opt.files, "Records files (2 or more)")
        ->required();
    compare_cmd->add_option("--baseline", compare_opt.baseline,
                            "0-based index of the baseline run");
    compare_cmd->add_option("--out", compare_opt.out_prefix,
                            "Output prefix; writes <out>.csv and <out>.md (default: stdout)");

    FilesOptions report_opt;
    auto* report_cmd =
        app.add_subcommand("report", "Re-aggregate records into accuracy/token tables");
    report_cmd->add_option("files", report_opt.files, "Records files")->required();
    report_cmd->add_option("--out", report_opt.out_prefix,
                           "Output prefix; writes <out>.csv and <out>.md (default: stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*run_cmd) return cmd_run(run_opt);
        if (*permute_cmd) return cmd_permute(permute_opt);
        if (*compare_cmd) return cmd_compare(compare_opt);
        return cmd_report(report_opt);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
