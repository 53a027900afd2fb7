#pragma once

#include <string>
#include <vector>

#include "biasprompt/prompts.hpp"

namespace biasprompt {

// Decoding contract. Temperature 0.0 asks the endpoint for greedy decoding;
// the context window is the joint prompt+completion token budget.
struct GenerationParams {
    double temperature = 0.0;
    int max_new_tokens = 256;
    int min_new_tokens = 1;
    int context_window = 1024;

    // Throws ContractError before any request leaves the process.
    void ensure_valid() const;
};

struct ModelResponse {
    std::string text;
    long prompt_tokens = 0;
    long completion_tokens = 0;
    long latency_ms = 0;
    std::string backend_id;
    // True when the endpoint omitted usage and the counts above came from
    // estimate_tokens.
    bool usage_estimated = false;
};

struct BackendError {
    std::string message;
    int http_status = 0;
    int attempts = 0;
};

// Value-style result so one failed prompt in a batch fails only its own slot.
struct CompletionOutcome {
    bool ok = false;
    ModelResponse response;
    BackendError error;

    static CompletionOutcome success(ModelResponse r) { return {true, std::move(r), {}}; }
    static CompletionOutcome failure(BackendError e) { return {false, {}, std::move(e)}; }
};

// Uniform completion interface. Implementations must be safely invocable from
// multiple concurrent workers.
class ModelBackend {
public:
    virtual ~ModelBackend() = default;

    virtual std::string id() const = 0;

    // One completion. Backend failures come back through the error arm after
    // the retry policy is exhausted; contract violations throw.
    virtual CompletionOutcome complete(const RenderedPrompt& prompt,
                                       const GenerationParams& params) = 0;

    // Completes a batch with at most max_in_flight requests outstanding.
    // Results are returned in input order regardless of completion order.
    std::vector<CompletionOutcome> complete_many(const std::vector<RenderedPrompt>& prompts,
                                                 const GenerationParams& params,
                                                 int max_in_flight);
};

}  // namespace biasprompt
