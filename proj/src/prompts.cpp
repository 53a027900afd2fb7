#include "biasprompt/prompts.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "biasprompt/errors.hpp"
#include "biasprompt/hash.hpp"
#include "biasprompt/text.hpp"

namespace biasprompt {
namespace {

constexpr std::string_view kReasoningGenTemplate =
    "Given the following question:\n"
    "{question}\n"
    "Provide reasoning proving that '{option}' is the correct choice without any textual "
    "description in one sentence.";

constexpr std::string_view kConsensusTemplate =
    "### Question: {question}\n"
    "### Answer choices: {choices}\n"
    "{reasonings}\n"
    "\n"
    "Wrap your final answer by filling in the placeholder below: 'So the answer is: "
    "{{placeholder}}'";

constexpr std::string_view kConsensusCotTemplate =
    "### Question: {question}\n"
    "### Answer choices: {choices}\n"
    "{reasonings}\n"
    "\n"
    "Let's think step by step before answering.\n"
    "Wrap your final answer by filling in the placeholder below: 'So the answer is: "
    "{{placeholder}}'";

constexpr std::string_view kZeroShotTemplate =
    "### Question: {question}\n"
    "### Answer choices: {choices}\n"
    "\n"
    "Wrap your final answer by filling in the placeholder below: 'So the answer is: "
    "{{placeholder}}'";

constexpr std::string_view kZeroShotCotTemplate =
    "### Question: {question}\n"
    "### Answer choices: {choices}\n"
    "\n"
    "Let's think step by step before answering.\n"
    "Wrap your final answer by filling in the placeholder below: 'So the answer is: "
    "{{placeholder}}'";

// Plain literal substitution; only the named slot tokens are replaced, so
// the {{placeholder}} braces in the instruction survive untouched.
std::string substitute(std::string text, std::string_view slot, const std::string& value) {
    const std::string token = "{" + std::string(slot) + "}";
    std::size_t pos = 0;
    while ((pos = text.find(token, pos)) != std::string::npos) {
        text.replace(pos, token.size(), value);
        pos += value.size();
    }
    return text;
}

std::string choices_row(const McqInstance& instance) {
    std::string row;
    for (std::size_t i = 0; i < instance.options.size(); ++i) {
        if (i > 0) row += " | ";
        row += instance.options[i].label;
        row += ". ";
        row += instance.options[i].text;
    }
    return row;
}

// Cuts `text` to at most `budget` characters, preferring the last sentence
// end that fits.
std::string truncate_to_budget(const std::string& text, std::size_t budget) {
    if (text.size() <= budget) return text;
    std::size_t cut = std::string::npos;
    for (std::size_t i = 0; i < budget; ++i) {
        if (text[i] == '.' || text[i] == '!' || text[i] == '?') cut = i + 1;
    }
    std::string out = text.substr(0, cut == std::string::npos ? budget : cut);
    while (!out.empty() && is_space(out.back())) out.pop_back();
    return out;
}

}  // namespace

std::string_view to_string(TemplateId id) {
    switch (id) {
        case TemplateId::reasoning_gen: return "reasoning_gen";
        case TemplateId::consensus: return "consensus";
        case TemplateId::consensus_cot: return "consensus_cot";
        case TemplateId::zero_shot: return "zero_shot";
        case TemplateId::zero_shot_cot: return "zero_shot_cot";
    }
    return "unknown";
}

TemplateId parse_template_id(std::string_view name) {
    if (name == "reasoning_gen") return TemplateId::reasoning_gen;
    if (name == "consensus") return TemplateId::consensus;
    if (name == "consensus_cot") return TemplateId::consensus_cot;
    if (name == "zero_shot") return TemplateId::zero_shot;
    if (name == "zero_shot_cot") return TemplateId::zero_shot_cot;
    throw ConfigError("unknown template id: " + std::string(name));
}

const std::string& RenderedPrompt::user_text() const {
    for (auto it = messages.rbegin(); it != messages.rend(); ++it) {
        if (it->role == "user") return it->text;
    }
    throw ContractError("rendered prompt has no user message");
}

std::string content_hash(const std::vector<PromptMessage>& messages) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const auto& message : messages) {
        const std::string len = std::to_string(message.text.size()) + ":";
        h = fnv1a64(len, h);
        h = fnv1a64(message.text, h);
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return std::string(buf);
}

PromptLibrary::PromptLibrary() {
    templates_ = {
        {TemplateId::reasoning_gen, std::string(kReasoningGenTemplate)},
        {TemplateId::consensus, std::string(kConsensusTemplate)},
        {TemplateId::consensus_cot, std::string(kConsensusCotTemplate)},
        {TemplateId::zero_shot, std::string(kZeroShotTemplate)},
        {TemplateId::zero_shot_cot, std::string(kZeroShotCotTemplate)},
    };
}

PromptLibrary PromptLibrary::from_directory(const std::filesystem::path& dir) {
    PromptLibrary library;
    for (auto& [id, text] : library.templates_) {
        const auto file = dir / (std::string(to_string(id)) + ".txt");
        if (!std::filesystem::exists(file)) continue;
        std::ifstream in(file, std::ios::binary);
        if (!in) {
            throw IngestError("cannot read template file: " + file.string());
        }
        std::ostringstream buf;
        buf << in.rdbuf();
        text = buf.str();
        // Editors append a final newline; rendered prompts never carry one.
        while (!text.empty() && (text.back() == '\n' || text.back() == '\r')) text.pop_back();
    }
    return library;
}

void PromptLibrary::set_system_message(std::string text) {
    system_message_ = std::move(text);
}

RenderedPrompt PromptLibrary::finish(TemplateId id, std::string text) const {
    RenderedPrompt prompt;
    prompt.template_id = id;
    if (system_message_) {
        prompt.messages.push_back({"system", *system_message_});
    }
    prompt.messages.push_back({"user", std::move(text)});
    prompt.content_hash = content_hash(prompt.messages);
    return prompt;
}

RenderedPrompt PromptLibrary::render_reasoning_generation(const std::string& question,
                                                          const std::string& option_text) const {
    if (trim_view(question).empty() || trim_view(option_text).empty()) {
        throw ContractError("reasoning generation needs non-empty question and option text");
    }
    std::string text = templates_.at(TemplateId::reasoning_gen);
    text = substitute(std::move(text), "question", question);
    text = substitute(std::move(text), "option", option_text);
    return finish(TemplateId::reasoning_gen, std::move(text));
}

RenderedPrompt PromptLibrary::render_consensus(const McqInstance& instance,
                                               const ReasoningSet& reasonings, bool cot,
                                               std::size_t max_prompt_chars) const {
    std::string missing, extra;
    for (const auto& option : instance.options) {
        if (!reasonings.count(option.label)) missing += option.label;
    }
    for (const auto& [label, text] : reasonings) {
        if (!instance.index_of_label(label)) extra += label;
    }
    if (!missing.empty() || !extra.empty()) {
        throw ContractError("reasoning set does not match option labels (missing: [" + missing +
                            "], extra: [" + extra + "])");
    }

    const TemplateId id = cot ? TemplateId::consensus_cot : TemplateId::consensus;
    const std::string& shell = templates_.at(id);

    auto assemble = [&](std::size_t reasoning_budget) {
        std::string lines;
        for (std::size_t i = 0; i < instance.options.size(); ++i) {
            const auto& option = instance.options[i];
            if (i > 0) lines += "\n";
            lines += "### Reasoning for answer choice ";
            lines += option.label;
            lines += ": ";
            const std::string& reasoning = reasonings.at(option.label);
            lines += reasoning_budget == 0 ? reasoning
                                           : truncate_to_budget(reasoning, reasoning_budget);
        }
        std::string text = substitute(shell, "question", instance.question);
        text = substitute(std::move(text), "choices", choices_row(instance));
        return substitute(std::move(text), "reasonings", lines);
    };

    std::string text = assemble(0);
    if (max_prompt_chars != 0 && text.size() > max_prompt_chars) {
        // Scaffold = the prompt with no reasoning content at all; whatever
        // room is left splits evenly across the n reasonings.
        std::string scaffold = substitute(shell, "question", instance.question);
        scaffold = substitute(std::move(scaffold), "choices", choices_row(instance));
        {
            std::string lines;
            for (std::size_t i = 0; i < instance.options.size(); ++i) {
                if (i > 0) lines += "\n";
                lines += "### Reasoning for answer choice ";
                lines += instance.options[i].label;
                lines += ": ";
            }
            scaffold = substitute(std::move(scaffold), "reasonings", lines);
        }
        const std::size_t room =
            max_prompt_chars > scaffold.size() ? max_prompt_chars - scaffold.size() : 0;
        const std::size_t per_reasoning = room / instance.options.size();
        text = assemble(per_reasoning == 0 ? 1 : per_reasoning);
    }
    return finish(id, std::move(text));
}

RenderedPrompt PromptLibrary::render_direct(const McqInstance& instance, bool cot) const {
    const TemplateId id = cot ? TemplateId::zero_shot_cot : TemplateId::zero_shot;
    std::string text = substitute(templates_.at(id), "question", instance.question);
    text = substitute(std::move(text), "choices", choices_row(instance));
    return finish(id, std::move(text));
}

}  // namespace biasprompt
