#include "biasprompt/strategy.hpp"

#include <algorithm>
#include <cctype>

#include "biasprompt/errors.hpp"
#include "biasprompt/text.hpp"
#include "biasprompt/tokens.hpp"

namespace biasprompt {
namespace {

constexpr std::string_view kPlaceholderMarker = "so the answer is:";
constexpr std::string_view kAnswerIsMarker = "answer is";

// Characters models wrap answers in: quotes, brackets, emphasis markers.
bool is_wrapper(char c) {
    return c == '\'' || c == '"' || c == '(' || c == '[' || c == '{' || c == '*' || c == '_' ||
           c == '`';
}

std::string lowered(std::string_view text) {
    std::string out(text);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

bool has_label(const std::vector<McqOption>& options, char label) {
    return std::any_of(options.begin(), options.end(),
                       [label](const McqOption& o) { return o.label == label; });
}

// Matches the span that follows an answer marker against option labels
// ("C", "C.", "(C)", quoted variants) and, when allow_text, against option
// texts anchored at the start of the span's first line (longest text wins).
std::optional<char> match_span(std::string_view span, const std::vector<McqOption>& options,
                               bool allow_text) {
    std::size_t i = 0;
    while (i < span.size() && (is_space(span[i]) || is_wrapper(span[i]) || span[i] == ':')) ++i;
    if (i >= span.size()) return std::nullopt;

    const char candidate = static_cast<char>(std::toupper(static_cast<unsigned char>(span[i])));
    if (has_label(options, candidate) &&
        (i + 1 >= span.size() || !is_alnum(span[i + 1]))) {
        return candidate;
    }
    if (!allow_text) return std::nullopt;

    // Option-text match is scoped to the rest of the current line.
    std::string_view line = span.substr(i);
    if (const auto newline = line.find('\n'); newline != std::string_view::npos) {
        line = line.substr(0, newline);
    }
    const std::string line_lower = lowered(line);

    std::optional<char> best;
    std::size_t best_len = 0;
    for (const auto& option : options) {
        const std::string text = lowered(trim_view(option.text));
        if (text.empty() || text.size() < best_len) continue;
        if (line_lower.size() < text.size()) continue;
        if (line_lower.compare(0, text.size(), text) != 0) continue;
        if (text.size() < line_lower.size() && is_alnum(line_lower[text.size()])) continue;
        best = option.label;
        best_len = text.size();
    }
    return best;
}

std::optional<char> tier_placeholder(const std::string& text, const std::string& lower,
                                     const std::vector<McqOption>& options) {
    const auto pos = lower.rfind(kPlaceholderMarker);
    if (pos == std::string::npos) return std::nullopt;
    return match_span(std::string_view(text).substr(pos + kPlaceholderMarker.size()), options,
                      /*allow_text=*/true);
}

std::optional<char> tier_label_fallback(const std::string& text, const std::string& lower,
                                        const std::vector<McqOption>& options) {
    // Last "answer is <label>" occurrence wins.
    for (auto pos = lower.rfind(kAnswerIsMarker); pos != std::string::npos;
         pos = pos == 0 ? std::string::npos : lower.rfind(kAnswerIsMarker, pos - 1)) {
        const auto hit = match_span(std::string_view(text).substr(pos + kAnswerIsMarker.size()),
                                    options, /*allow_text=*/false);
        if (hit) return hit;
        if (pos == 0) break;
    }

    // Lone trailing label: an uppercase label token ending the completion,
    // ignoring trailing punctuation.  Uppercase-only so a sentence ending
    // in the article "a" is not read as option A.
    std::size_t end = text.size();
    while (end > 0 && !is_alnum(text[end - 1])) --end;
    if (end == 0) return std::nullopt;
    const char candidate = text[end - 1];
    if (candidate < 'A' || candidate > 'Z' || !has_label(options, candidate)) {
        return std::nullopt;
    }
    if (end >= 2 && is_alnum(text[end - 2])) return std::nullopt;
    return candidate;
}

std::optional<char> tier_text_fallback(const std::string& lower,
                                       const std::vector<McqOption>& options) {
    std::optional<char> found;
    for (const auto& option : options) {
        const std::string text = lowered(trim_view(option.text));
        if (text.empty()) continue;
        bool present = false;
        for (auto pos = lower.find(text); pos != std::string::npos;
             pos = lower.find(text, pos + 1)) {
            const bool left_ok = pos == 0 || !is_alnum(lower[pos - 1]);
            const auto right = pos + text.size();
            const bool right_ok = right >= lower.size() || !is_alnum(lower[right]);
            if (left_ok && right_ok) {
                present = true;
                break;
            }
        }
        if (!present) continue;
        if (found) return std::nullopt;  // more than one option mentioned
        found = option.label;
    }
    return found;
}

CallUsage usage_from(const RenderedPrompt& prompt, const ModelResponse& response) {
    return {prompt.template_id, response.prompt_tokens, response.completion_tokens,
            response.latency_ms};
}

}  // namespace

std::size_t consensus_prompt_char_budget(const GenerationParams& params) {
    if (params.context_window <= params.max_new_tokens) return 1;
    return static_cast<std::size_t>(kApproxCharsPerToken) *
           static_cast<std::size_t>(params.context_window - params.max_new_tokens);
}

Strategy parse_strategy(std::string_view name) {
    if (name == "zero_shot") return Strategy::zero_shot;
    if (name == "cot") return Strategy::cot;
    if (name == "bias") return Strategy::bias;
    if (name == "bias_cot") return Strategy::bias_cot;
    throw ConfigError("unknown strategy: " + std::string(name) +
                      " (expected zero_shot, cot, bias, or bias_cot)");
}

std::string_view to_string(Strategy strategy) {
    switch (strategy) {
        case Strategy::zero_shot: return "zero_shot";
        case Strategy::cot: return "cot";
        case Strategy::bias: return "bias";
        case Strategy::bias_cot: return "bias_cot";
    }
    throw ContractError("unhandled strategy value");
}

std::vector<Strategy> all_strategies() {
    return {Strategy::zero_shot, Strategy::cot, Strategy::bias, Strategy::bias_cot};
}

ParseStatus parse_parse_status(std::string_view name) {
    if (name == "placeholder") return ParseStatus::placeholder;
    if (name == "label_fallback") return ParseStatus::label_fallback;
    if (name == "text_fallback") return ParseStatus::text_fallback;
    if (name == "failed") return ParseStatus::failed;
    throw ConfigError("unknown parse status: " + std::string(name));
}

std::string_view to_string(ParseStatus status) {
    switch (status) {
        case ParseStatus::placeholder: return "placeholder";
        case ParseStatus::label_fallback: return "label_fallback";
        case ParseStatus::text_fallback: return "text_fallback";
        case ParseStatus::failed: return "failed";
    }
    throw ContractError("unhandled parse status value");
}

long Prediction::total_prompt_tokens() const {
    long total = 0;
    for (const auto& call : calls) total += call.prompt_tokens;
    return total;
}

long Prediction::total_completion_tokens() const {
    long total = 0;
    for (const auto& call : calls) total += call.completion_tokens;
    return total;
}

ExtractedAnswer extract_answer(const std::string& text, const std::vector<McqOption>& options) {
    const std::string lower = lowered(text);
    if (const auto hit = tier_placeholder(text, lower, options)) {
        return {hit, ParseStatus::placeholder};
    }
    if (const auto hit = tier_label_fallback(text, lower, options)) {
        return {hit, ParseStatus::label_fallback};
    }
    if (const auto hit = tier_text_fallback(lower, options)) {
        return {hit, ParseStatus::text_fallback};
    }
    return {std::nullopt, ParseStatus::failed};
}

ReasoningStage generate_reasonings(const McqInstance& instance, const PromptLibrary& library,
                                   ModelBackend& backend, const GenerationParams& params,
                                   int max_in_flight) {
    std::vector<RenderedPrompt> prompts;
    prompts.reserve(instance.options.size());
    for (const auto& option : instance.options) {
        prompts.push_back(library.render_reasoning_generation(instance.question, option.text));
    }
    const int bound = max_in_flight > 0 ? max_in_flight : static_cast<int>(prompts.size());
    const auto outcomes = backend.complete_many(prompts, params, bound);

    ReasoningStage stage;
    for (std::size_t i = 0; i < outcomes.size(); ++i) {
        const char label = instance.options[i].label;
        CallUsage usage{TemplateId::reasoning_gen, 0, 0, 0};
        std::string reasoning;
        if (outcomes[i].ok) {
            usage = usage_from(prompts[i], outcomes[i].response);
            reasoning = trim(outcomes[i].response.text);
        }
        if (reasoning.empty()) {
            reasoning = std::string(kReasoningSentinel);
            stage.sentinel_labels.push_back(label);
        }
        stage.reasonings.emplace(label, std::move(reasoning));
        stage.calls.push_back(usage);
    }
    return stage;
}

std::variant<ConsensusOutcome, StrategyError> run_consensus(const McqInstance& instance,
                                                            const ReasoningSet& reasonings,
                                                            const PromptLibrary& library,
                                                            ModelBackend& backend,
                                                            const GenerationParams& params,
                                                            bool cot) {
    const auto prompt =
        library.render_consensus(instance, reasonings, cot, consensus_prompt_char_budget(params));
    auto outcome = backend.complete(prompt, params);
    if (!outcome.ok) {
        return StrategyError{"consensus call failed: " + outcome.error.message, {}};
    }
    ConsensusOutcome consensus;
    const auto extracted = extract_answer(outcome.response.text, instance.options);
    consensus.label = extracted.label;
    consensus.status = extracted.status;
    consensus.raw_text = std::move(outcome.response.text);
    consensus.usage = {prompt.template_id, outcome.response.prompt_tokens,
                       outcome.response.completion_tokens, outcome.response.latency_ms};
    return consensus;
}

StrategyResult run_strategy(const McqInstance& instance, Strategy strategy,
                            const PromptLibrary& library, ModelBackend& backend,
                            const GenerationParams& params, int reasoning_concurrency) {
    Prediction prediction;
    prediction.question_id = instance.question_id;
    prediction.strategy = strategy;

    if (!is_bias_strategy(strategy)) {
        const auto prompt = library.render_direct(instance, strategy == Strategy::cot);
        auto outcome = backend.complete(prompt, params);
        if (!outcome.ok) {
            return StrategyError{"completion failed: " + outcome.error.message, {}};
        }
        const auto extracted = extract_answer(outcome.response.text, instance.options);
        prediction.predicted_label = extracted.label;
        prediction.parse_status = extracted.status;
        prediction.raw_final_text = std::move(outcome.response.text);
        prediction.calls.push_back(usage_from(prompt, outcome.response));
        return prediction;
    }

    auto stage = generate_reasonings(instance, library, backend, params, reasoning_concurrency);
    auto consensus = run_consensus(instance, stage.reasonings, library, backend, params,
                                   strategy == Strategy::bias_cot);
    if (auto* error = std::get_if<StrategyError>(&consensus)) {
        error->partial_calls = std::move(stage.calls);
        return std::move(*error);
    }
    auto& outcome = std::get<ConsensusOutcome>(consensus);
    prediction.predicted_label = outcome.label;
    prediction.parse_status = outcome.status;
    prediction.raw_final_text = std::move(outcome.raw_text);
    prediction.reasonings = std::move(stage.reasonings);
    prediction.sentinel_labels = std::move(stage.sentinel_labels);
    prediction.calls = std::move(stage.calls);
    prediction.calls.push_back(outcome.usage);
    return prediction;
}

}  // namespace biasprompt
