#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "biasprompt/backend.hpp"
#include "biasprompt/mcq.hpp"
#include "biasprompt/prompts.hpp"

namespace biasprompt {

// The four inference strategies.  zero_shot and cot ask the question
// directly (one completion); bias and bias_cot first generate one
// supportive reasoning per option, then ask a consensus question that
// presents all reasonings side by side (n + 1 completions).
enum class Strategy {
    zero_shot,
    cot,
    bias,
    bias_cot,
};

Strategy parse_strategy(std::string_view name);  // throws ConfigError on unknown name
std::string_view to_string(Strategy strategy);
std::vector<Strategy> all_strategies();

inline constexpr bool is_bias_strategy(Strategy s) {
    return s == Strategy::bias || s == Strategy::bias_cot;
}

// How the final answer was recovered from the completion text, from the
// strictest tier to none.  Reports can be recomputed placeholder-only by
// filtering on this; failed parses always score as incorrect.
enum class ParseStatus {
    placeholder,      // answer wrapped in "So the answer is:" as instructed
    label_fallback,   // recovered from "answer is X" or a lone trailing label
    text_fallback,    // exactly one option text appears in the completion
    failed,           // no recoverable answer
};

ParseStatus parse_parse_status(std::string_view name);  // throws ConfigError
std::string_view to_string(ParseStatus status);

// Usage of one backend call, tagged with the template that produced it.
struct CallUsage {
    TemplateId template_id = TemplateId::zero_shot;
    long prompt_tokens = 0;
    long completion_tokens = 0;
    long latency_ms = 0;

    bool operator==(const CallUsage&) const = default;
};

// One strategy's verdict on one question, with a full usage trail.
struct Prediction {
    std::string question_id;
    Strategy strategy = Strategy::zero_shot;
    std::optional<char> predicted_label;
    ParseStatus parse_status = ParseStatus::failed;
    // Present for bias strategies only: one reasoning per option label.
    std::optional<ReasoningSet> reasonings;
    // Labels whose reasoning degraded to the sentinel (failed or empty
    // stage-1 completion); empty when every reasoning came back usable.
    std::vector<char> sentinel_labels;
    // One entry per backend call, in order of issuance: reasoning calls in
    // label order (bias strategies), then the answer-producing call.
    std::vector<CallUsage> calls;
    // Completion text of the answer-producing call.
    std::string raw_final_text;

    long total_prompt_tokens() const;
    long total_completion_tokens() const;
};

// The answer-producing call failed; partial_calls preserves the usage of
// whatever calls did complete so token accounting stays conservative.
struct StrategyError {
    std::string message;
    std::vector<CallUsage> partial_calls;
};

using StrategyResult = std::variant<Prediction, StrategyError>;

struct ExtractedAnswer {
    std::optional<char> label;
    ParseStatus status = ParseStatus::failed;
};

// Pure three-tier answer extraction:
//   1. placeholder — the span after the LAST case-insensitive
//      "so the answer is:" is matched against labels ("C", "C.", "(C)",
//      quoted/bracketed variants) and then against full option texts
//      (case-insensitive, punctuation-trimmed, longest option wins).
//   2. label_fallback — the last "answer is <label>" occurrence, or a lone
//      trailing uppercase label token.
//   3. text_fallback — exactly one option's text occurs in the completion
//      (case-insensitive, on word boundaries).
// Anything else is (absent, failed).  A returned label is always a member
// of the option set.
ExtractedAnswer extract_answer(const std::string& text, const std::vector<McqOption>& options);

// Output of the reasoning-generation stage.
struct ReasoningStage {
    ReasoningSet reasonings;          // exactly one entry per option label
    std::vector<char> sentinel_labels;
    std::vector<CallUsage> calls;     // one per option, label order
};

// Requests one supportive reasoning per option (concurrently, up to
// max_in_flight; 0 means "all n at once").  Failed or whitespace-only
// completions degrade to the sentinel and are flagged; this stage never
// fails the question.
ReasoningStage generate_reasonings(const McqInstance& instance, const PromptLibrary& library,
                                   ModelBackend& backend, const GenerationParams& params,
                                   int max_in_flight = 0);

struct ConsensusOutcome {
    std::optional<char> label;
    ParseStatus status = ParseStatus::failed;
    std::string raw_text;
    CallUsage usage;
};

// Character budget the consensus prompt must fit in: the approximate bytes
// of the context-window tokens the completion does not claim.  Anything
// rendering consensus prompts outside run_consensus (e.g. fixture
// generation) must use the same budget to reproduce its output.
std::size_t consensus_prompt_char_budget(const GenerationParams& params);

// Renders the consensus prompt over the full reasoning set (trimming each
// reasoning to the prompt character budget implied by params), makes one
// completion, and extracts the answer.
std::variant<ConsensusOutcome, StrategyError> run_consensus(const McqInstance& instance,
                                                            const ReasoningSet& reasonings,
                                                            const PromptLibrary& library,
                                                            ModelBackend& backend,
                                                            const GenerationParams& params,
                                                            bool cot);

// Runs one strategy over one instance.  Direct strategies make exactly one
// backend call; bias strategies make exactly n + 1.  A backend error on the
// answer-producing call yields a StrategyError carrying the usage of the
// calls that did succeed.
StrategyResult run_strategy(const McqInstance& instance, Strategy strategy,
                            const PromptLibrary& library, ModelBackend& backend,
                            const GenerationParams& params, int reasoning_concurrency = 0);

}  // namespace biasprompt
