#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "biasprompt/mcq.hpp"

namespace biasprompt {

enum class TemplateId {
    reasoning_gen,
    consensus,
    consensus_cot,
    zero_shot,
    zero_shot_cot,
};

std::string_view to_string(TemplateId id);
TemplateId parse_template_id(std::string_view name);

struct PromptMessage {
    std::string role;  // "system" or "user"
    std::string text;

    bool operator==(const PromptMessage&) const = default;
};

struct RenderedPrompt {
    TemplateId template_id = TemplateId::zero_shot;
    std::vector<PromptMessage> messages;
    std::string content_hash;  // hex fnv-1a over the message texts

    const std::string& user_text() const;  // text of the last user message
};

// Hash over message texts only (roles excluded); texts are length-delimited
// so distinct sequences never collide by concatenation.
std::string content_hash(const std::vector<PromptMessage>& messages);

// Stage-1 reasonings keyed by option label.
using ReasoningSet = std::map<char, std::string>;

// Stored in place of a reasoning the model failed to produce.
inline constexpr std::string_view kReasoningSentinel = "(no reasoning produced)";

// The answer-wrapping instruction shared verbatim by the consensus and direct
// templates; extraction keys off the "So the answer is:" marker inside it.
inline constexpr std::string_view kPlaceholderInstruction =
    "Wrap your final answer by filling in the placeholder below: 'So the answer is: "
    "{{placeholder}}'";

inline constexpr std::string_view kStepByStepSentence =
    "Let's think step by step before answering.";

// Renders the three prompt families. Templates are embedded; any of them can
// be overridden by a directory holding "<template_id>.txt" files with the
// same substitution slots ({question}, {option}, {choices}, {reasonings}).
//
// Layout conventions for the embedded templates: lines are joined with a
// single "\n", no trailing whitespace on any line, exactly one blank line
// before the final answer instruction, and no trailing newline.
class PromptLibrary {
public:
    PromptLibrary();

    // Missing files fall back to the embedded template. Throws IngestError on
    // unreadable present files.
    static PromptLibrary from_directory(const std::filesystem::path& dir);

    // When set, every rendered prompt gains a leading system message. By
    // default prompts are a single bare user message.
    void set_system_message(std::string text);

    // "Given the following question: ... Provide reasoning proving that
    // '<option>' is the correct choice ..." Throws ContractError on empty input.
    RenderedPrompt render_reasoning_generation(const std::string& question,
                                               const std::string& option_text) const;

    // Question, "A. x | B. y" choice row, one reasoning line per option in
    // label order, then the placeholder instruction. `cot` inserts the
    // step-by-step sentence directly before the instruction.
    //
    // When max_prompt_chars is nonzero and the assembled text would exceed
    // it, every reasoning is cut to an equal character budget (prompt minus
    // scaffold, split n ways), preferring a sentence boundary.
    RenderedPrompt render_consensus(const McqInstance& instance, const ReasoningSet& reasonings,
                                    bool cot, std::size_t max_prompt_chars = 0) const;

    // Question + choices + placeholder instruction, no reasonings.
    RenderedPrompt render_direct(const McqInstance& instance, bool cot) const;

private:
    std::map<TemplateId, std::string> templates_;
    std::optional<std::string> system_message_;

    RenderedPrompt finish(TemplateId id, std::string text) const;
};

}  // namespace biasprompt
