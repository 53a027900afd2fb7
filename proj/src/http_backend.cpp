#include "biasprompt/http_backend.hpp"

#include <chrono>
#include <cstdlib>
#include <thread>
#include <utility>

#include <httplib.h>
#include <json.hpp>

#include "biasprompt/errors.hpp"
#include "biasprompt/hash.hpp"
#include "biasprompt/text.hpp"
#include "biasprompt/tokens.hpp"

namespace biasprompt {
namespace {

using nlohmann::json;

constexpr const char* kCompletionsPath = "/chat/completions";
constexpr const char* kNudgeSentence = "Answer in at least one full sentence.";
constexpr const char* kApiKeyEnvVar = "BIASPROMPT_API_KEY";

// Transient conditions worth another attempt: the request never reached the
// server (status 0), or the server asked us to back off / fell over.
bool is_retryable(int status) {
    return status == 0 || status == 408 || status == 429 || (status >= 500 && status < 600);
}

// Splits "scheme://authority/some/path" into the authority part httplib
// wants and the path prefix to prepend to request paths.
std::pair<std::string, std::string> split_base_url(const std::string& base_url) {
    const auto scheme_end = base_url.find("://");
    const std::size_t authority_start = scheme_end == std::string::npos ? 0 : scheme_end + 3;
    const auto path_start = base_url.find('/', authority_start);
    if (path_start == std::string::npos) {
        return {base_url, ""};
    }
    std::string host = base_url.substr(0, path_start);
    std::string prefix = base_url.substr(path_start);
    while (!prefix.empty() && prefix.back() == '/') prefix.pop_back();
    return {host, prefix};
}

HttpResult send_request(const std::string& host, const std::string& path,
                        const std::string& body) {
    httplib::Client client(host);
    client.set_connection_timeout(30, 0);
    client.set_read_timeout(300, 0);
    client.set_follow_location(true);

    httplib::Headers headers;
    if (const char* key = std::getenv(kApiKeyEnvVar); key != nullptr && *key != '\0') {
        headers.emplace("Authorization", std::string("Bearer ") + key);
    }

    auto res = client.Post(path, headers, body, "application/json");
    if (!res) {
        return {0, "", httplib::to_string(res.error())};
    }
    return {res->status, res->body, ""};
}

long sum_estimated_prompt_tokens(const RenderedPrompt& prompt) {
    long total = 0;
    for (const auto& message : prompt.messages) {
        total += static_cast<long>(estimate_tokens(message.text));
    }
    return total;
}

}  // namespace

HttpBackend::HttpBackend(HttpBackendOptions options) : options_(std::move(options)) {
    if (options_.base_url.empty() && !options_.transport) {
        throw ConfigError("http backend requires a base_url or an injected transport");
    }
    if (options_.retries < 0) {
        throw ConfigError("http backend retries must be non-negative");
    }
    auto [host, prefix] = split_base_url(options_.base_url);
    host_ = std::move(host);
    path_prefix_ = std::move(prefix);
    if (!options_.transport) {
        options_.transport = [this](const std::string& path, const std::string& body) {
            return send_request(host_, path, body);
        };
    }
}

std::string HttpBackend::id() const {
    return options_.model.empty() ? "http" : "http:" + options_.model;
}

CompletionOutcome HttpBackend::complete(const RenderedPrompt& prompt,
                                        const GenerationParams& params) {
    params.ensure_valid();

    CompletionOutcome first = request_completion(prompt, params, "");
    if (!first.ok) return first;

    // Endpoints have no portable minimum-token knob, so an empty completion
    // is retried once with an explicit request for non-empty output.
    if (params.min_new_tokens > 0 && trim_view(first.response.text).empty()) {
        CompletionOutcome nudged = request_completion(prompt, params, kNudgeSentence);
        if (!nudged.ok) return nudged;
        nudged.response.prompt_tokens += first.response.prompt_tokens;
        nudged.response.completion_tokens += first.response.completion_tokens;
        nudged.response.latency_ms += first.response.latency_ms;
        nudged.response.usage_estimated =
            nudged.response.usage_estimated || first.response.usage_estimated;
        return nudged;
    }
    return first;
}

CompletionOutcome HttpBackend::request_completion(const RenderedPrompt& prompt,
                                                  const GenerationParams& params,
                                                  const std::string& nudge) {
    json messages = json::array();
    for (const auto& message : prompt.messages) {
        messages.push_back({{"role", message.role}, {"content", message.text}});
    }
    if (!nudge.empty()) {
        for (auto it = messages.rbegin(); it != messages.rend(); ++it) {
            if ((*it)["role"] == "user") {
                (*it)["content"] = (*it)["content"].get<std::string>() + "\n" + nudge;
                break;
            }
        }
    }
    const json body = {
        {"model", options_.model},
        {"messages", messages},
        {"temperature", params.temperature},
        {"max_tokens", params.max_new_tokens},
    };
    const std::string body_text = body.dump();
    const std::string path = path_prefix_ + kCompletionsPath;

    HttpResult result;
    int attempts = 0;
    SplitMix64 jitter(fnv1a64(prompt.content_hash));
    for (int attempt = 0; attempt <= options_.retries; ++attempt) {
        if (attempt > 0 && options_.backoff_ms > 0) {
            const long delay = (options_.backoff_ms << (attempt - 1)) +
                               static_cast<long>(jitter.bounded(
                                   static_cast<std::uint64_t>(options_.backoff_ms / 4 + 1)));
            std::this_thread::sleep_for(std::chrono::milliseconds(delay));
        }
        const auto started = std::chrono::steady_clock::now();
        result = options_.transport(path, body_text);
        const auto elapsed = std::chrono::steady_clock::now() - started;
        ++attempts;
        if (is_retryable(result.status)) continue;

        if (result.status != 200) {
            return CompletionOutcome::failure(
                {"endpoint returned HTTP " + std::to_string(result.status), result.status,
                 attempts});
        }
        json payload;
        try {
            payload = json::parse(result.body);
        } catch (const json::exception& e) {
            return CompletionOutcome::failure(
                {std::string("endpoint returned unparseable JSON: ") + e.what(), result.status,
                 attempts});
        }
        const json* content = nullptr;
        if (payload.contains("choices") && payload["choices"].is_array() &&
            !payload["choices"].empty()) {
            const json& choice = payload["choices"][0];
            if (choice.contains("message") && choice["message"].contains("content") &&
                choice["message"]["content"].is_string()) {
                content = &choice["message"]["content"];
            }
        }
        if (content == nullptr) {
            return CompletionOutcome::failure(
                {"endpoint response missing choices[0].message.content", result.status,
                 attempts});
        }
        ModelResponse response;
        response.text = content->get<std::string>();
        response.backend_id = id();
        response.latency_ms = static_cast<long>(
            std::chrono::duration_cast<std::chrono::milliseconds>(elapsed).count());
        if (payload.contains("usage") && payload["usage"].contains("prompt_tokens") &&
            payload["usage"].contains("completion_tokens")) {
            response.prompt_tokens = payload["usage"]["prompt_tokens"].get<long>();
            response.completion_tokens = payload["usage"]["completion_tokens"].get<long>();
        } else {
            response.prompt_tokens = sum_estimated_prompt_tokens(prompt);
            response.completion_tokens = static_cast<long>(estimate_tokens(response.text));
            response.usage_estimated = true;
        }
        return CompletionOutcome::success(std::move(response));
    }
    std::string detail = result.error.empty() ? "HTTP " + std::to_string(result.status)
                                              : result.error;
    return CompletionOutcome::failure(
        {"endpoint unreachable after " + std::to_string(attempts) + " attempts: " + detail,
         result.status, attempts});
}

}  // namespace biasprompt
