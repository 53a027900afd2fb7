// Generates scripted mock-backend fixtures for a dataset: for every prompt
// the harness would issue (stage-1 reasoning requests, consensus requests,
// direct requests), emits a {"hash", "text", ...} line keyed by the prompt's
// content hash.  Prompts are rendered through the same library and budget
// the harness uses, so the fixture and a later run agree byte for byte.

#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "biasprompt/dataset.hpp"
#include "biasprompt/errors.hpp"
#include "biasprompt/strategy.hpp"
#include "biasprompt/tokens.hpp"

namespace bp = biasprompt;
using nlohmann::json;

namespace {

struct Options {
    std::string dataset_path;
    std::string format;
    std::string out_path;
    std::vector<std::string> strategies;  // empty = all four
    std::string answer_mode = "label";    // label | text | const:<L>
    std::int64_t permute_seed = 0;
    int permute_count = 0;
    bool include_source = false;
    long garbage_every = 0;  // every Nth question answers unparseable text
    long fail_every = 0;     // every Nth question's answer call is scripted to fail
    long tokens_per_call = 0;  // 0 = estimate from the completion text
    long limit = 0;
    int max_tokens = 256;
    int context_window = 1024;
    std::string templates_dir;
    std::string system_message;
};

long prompt_token_estimate(const bp::RenderedPrompt& prompt) {
    long total = 0;
    for (const auto& message : prompt.messages) {
        total += static_cast<long>(bp::estimate_tokens(message.text));
    }
    return total;
}

std::string final_answer(const bp::McqInstance& instance, const std::string& mode) {
    if (mode == "label") return std::string(1, instance.gold_label);
    if (mode == "text") return instance.gold_text();
    if (mode.rfind("const:", 0) == 0 && mode.size() == 7) return mode.substr(6);
    throw bp::ConfigError("unknown --answer-mode: " + mode +
                          " (expected label, text, or const:<L>)");
}

std::string reasoning_for(const bp::McqOption& option) {
    return "The answer is '" + option.text +
           "'. This option matches the situation described in the question.";
}

int run_mockgen(const Options& opt) {
    auto loaded = bp::load_dataset(opt.dataset_path, bp::parse_dataset_tag(opt.format));
    auto instances = std::move(loaded.instances);
    if (opt.limit > 0 && instances.size() > static_cast<std::size_t>(opt.limit)) {
        instances.resize(static_cast<std::size_t>(opt.limit));
    }
    if (instances.empty()) {
        throw bp::ConfigError("dataset holds no questions: " + opt.dataset_path);
    }

    auto library = opt.templates_dir.empty()
                       ? bp::PromptLibrary()
                       : bp::PromptLibrary::from_directory(opt.templates_dir);
    if (!opt.system_message.empty()) library.set_system_message(opt.system_message);

    bp::GenerationParams params;
    params.max_new_tokens = opt.max_tokens;
    params.context_window = opt.context_window;
    params.ensure_valid();
    const std::size_t budget = bp::consensus_prompt_char_budget(params);

    std::vector<bp::Strategy> strategies;
    if (opt.strategies.empty()) {
        strategies = bp::all_strategies();
    } else {
        for (const auto& name : opt.strategies) strategies.push_back(bp::parse_strategy(name));
    }

    std::vector<std::int64_t> ordering_seeds;
    if (opt.permute_count == 0 || opt.include_source) ordering_seeds.push_back(0);
    for (int i = 0; i < opt.permute_count; ++i) {
        ordering_seeds.push_back(opt.permute_seed * 1000 + i + 1);
    }

    // hash -> fixture row; the map deduplicates prompts shared across
    // orderings and keeps the output deterministically sorted.
    std::map<std::string, json> entries;
    const auto add = [&](const bp::RenderedPrompt& prompt, const std::string& text, bool fail) {
        json row;
        row["hash"] = prompt.content_hash;
        row["text"] = text;
        row["prompt_tokens"] = prompt_token_estimate(prompt);
        row["completion_tokens"] = opt.tokens_per_call > 0
                                       ? opt.tokens_per_call
                                       : static_cast<long>(bp::estimate_tokens(text));
        row["fail"] = fail;
        entries[prompt.content_hash] = std::move(row);
    };

    for (const std::int64_t ordering_seed : ordering_seeds) {
        for (std::size_t index = 0; index < instances.size(); ++index) {
            const bp::McqInstance instance =
                ordering_seed == 0 ? instances[index]
                                   : bp::permute_options(instances[index], ordering_seed);
            const bool garbage =
                opt.garbage_every > 0 &&
                (static_cast<long>(index) + 1) % opt.garbage_every == 0;
            const bool fail =
                opt.fail_every > 0 && (static_cast<long>(index) + 1) % opt.fail_every == 0;
            const std::string answer_text =
                garbage ? "It depends."
                        : "So the answer is: " + final_answer(instance, opt.answer_mode);

            for (const bp::Strategy strategy : strategies) {
                if (!bp::is_bias_strategy(strategy)) {
                    add(library.render_direct(instance, strategy == bp::Strategy::cot),
                        answer_text, fail);
                    continue;
                }
                bp::ReasoningSet reasonings;
                for (const auto& option : instance.options) {
                    const auto prompt =
                        library.render_reasoning_generation(instance.question, option.text);
                    const std::string reasoning = reasoning_for(option);
                    add(prompt, reasoning, false);
                    reasonings.emplace(option.label, reasoning);
                }
                add(library.render_consensus(instance, reasonings,
                                             strategy == bp::Strategy::bias_cot, budget),
                    answer_text, fail);
            }
        }
    }

    std::ofstream out(opt.out_path, std::ios::binary);
    if (!out) throw bp::ConfigError("cannot open output file: " + opt.out_path);
    for (const auto& [hash, row] : entries) out << row.dump() << '\n';
    std::cout << entries.size() << " scripted responses -> " << opt.out_path << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "Builds a scripted mock fixture covering every prompt a run over the "
        "given dataset would issue."};

    Options opt;
    app.add_option("--dataset", opt.dataset_path, "Benchmark file to load")->required();
    app.add_option("--format", opt.format,
                   "Input format: csqa, strategyqa, piqa, bbh_date, bbh_causal, or jsonl")
        ->required();
    app.add_option("--out", opt.out_path, "Fixture output path")->required();
    app.add_option("--strategy", opt.strategies,
                   "Strategy to cover (repeatable; default: all four)");
    app.add_option("--answer-mode", opt.answer_mode,
                   "What the scripted answer names: label (gold label), text (gold "
                   "option text), or const:<L> (fixed label)");
    app.add_option("--permute-seed", opt.permute_seed,
                   "Run seed whose derived orderings to cover");
    app.add_option("--permute-count", opt.permute_count,
                   "Cover N seeded orderings (seeds seed*1000+1..N)")
        ->check(CLI::NonNegativeNumber);
    app.add_flag("--include-source", opt.include_source,
                 "With --permute-count, also cover the source order");
    app.add_option("--garbage-every", opt.garbage_every,
                   "Every Nth question answers with unparseable text")
        ->check(CLI::NonNegativeNumber);
    app.add_option("--fail-every", opt.fail_every,
                   "Every Nth question's answer call is scripted to fail")
        ->check(CLI::NonNegativeNumber);
    app.add_option("--tokens-per-call", opt.tokens_per_call,
                   "Fixed completion_tokens per scripted call (default: estimated)")
        ->check(CLI::NonNegativeNumber);
    app.add_option("--limit", opt.limit, "Cap on questions taken from the dataset")
        ->check(CLI::PositiveNumber);
    app.add_option("--max-tokens", opt.max_tokens,
                   "Completion token cap the runs will use (affects prompt budget)")
        ->check(CLI::PositiveNumber);
    app.add_option("--context-window", opt.context_window,
                   "Context window the runs will use (affects prompt budget)")
        ->check(CLI::PositiveNumber);
    app.add_option("--templates-dir", opt.templates_dir,
                   "Directory of prompt template overrides");
    app.add_option("--system", opt.system_message, "System message prepended to every prompt");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        return run_mockgen(opt);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
