#include "biasprompt/mock_backend.hpp"

#include <chrono>
#include <fstream>
#include <thread>

#include <json.hpp>

#include "biasprompt/errors.hpp"
#include "biasprompt/text.hpp"
#include "biasprompt/tokens.hpp"

namespace biasprompt {

using nlohmann::json;

MockBackend::MockBackend() {
    default_response_ = {"(unscripted response)", 0, 0, 0, false};
    default_response_.prompt_tokens = 0;
    default_response_.completion_tokens =
        static_cast<long>(estimate_tokens(default_response_.text));
}

MockBackend MockBackend::from_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw IngestError("cannot read mock fixture: " + path.string());
    }
    MockBackend mock;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim_view(line).empty()) continue;
        json row;
        try {
            row = json::parse(line);
        } catch (const json::exception& e) {
            throw IngestError(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
        }
        if (!row.contains("hash") || !row["hash"].is_string()) {
            throw IngestError(path.string() + ":" + std::to_string(line_no) +
                              ": missing \"hash\" field");
        }
        Entry entry;
        entry.text = row.value("text", std::string{});
        entry.prompt_tokens = row.value("prompt_tokens", 0L);
        entry.completion_tokens = row.value("completion_tokens", 0L);
        entry.latency_ms = row.value("latency_ms", 0L);
        entry.fail = row.value("fail", false);
        mock.script_[row["hash"].get<std::string>()] = std::move(entry);
    }
    return mock;
}

void MockBackend::script(std::string hash, Entry entry) {
    script_[std::move(hash)] = std::move(entry);
}

void MockBackend::set_default_response(Entry entry) {
    default_response_ = std::move(entry);
}

CompletionOutcome MockBackend::complete(const RenderedPrompt& prompt,
                                        const GenerationParams& params) {
    params.ensure_valid();
    calls_.fetch_add(1);

    const auto it = script_.find(prompt.content_hash);
    const Entry& entry = it == script_.end() ? default_response_ : it->second;

    if (simulate_latency_ && entry.latency_ms > 0) {
        std::this_thread::sleep_for(std::chrono::milliseconds(entry.latency_ms));
    }
    if (entry.fail) {
        return CompletionOutcome::failure(
            {"scripted failure for hash " + prompt.content_hash, 0, 1});
    }
    ModelResponse response;
    response.text = entry.text;
    response.prompt_tokens = entry.prompt_tokens;
    response.completion_tokens = entry.completion_tokens;
    response.latency_ms = entry.latency_ms;
    response.backend_id = id();
    return CompletionOutcome::success(std::move(response));
}

}  // namespace biasprompt
