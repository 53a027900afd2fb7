#include "biasprompt/backend.hpp"

#include <atomic>
#include <thread>

#include "biasprompt/errors.hpp"

namespace biasprompt {

void GenerationParams::ensure_valid() const {
    if (max_new_tokens <= 0) {
        throw ContractError("max_new_tokens must be positive");
    }
    if (min_new_tokens < 0 || min_new_tokens > max_new_tokens) {
        throw ContractError("min_new_tokens must lie in [0, max_new_tokens]");
    }
    if (context_window < max_new_tokens) {
        throw ContractError("context_window must be at least max_new_tokens");
    }
    if (temperature < 0.0) {
        throw ContractError("temperature must be non-negative");
    }
}

std::vector<CompletionOutcome> ModelBackend::complete_many(
    const std::vector<RenderedPrompt>& prompts, const GenerationParams& params,
    int max_in_flight) {
    if (max_in_flight < 1) {
        throw ContractError("max_in_flight must be at least 1");
    }
    params.ensure_valid();

    std::vector<CompletionOutcome> results(prompts.size());
    if (prompts.empty()) return results;

    const std::size_t workers =
        std::min<std::size_t>(static_cast<std::size_t>(max_in_flight), prompts.size());
    if (workers == 1) {
        for (std::size_t i = 0; i < prompts.size(); ++i) {
            results[i] = complete(prompts[i], params);
        }
        return results;
    }

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= prompts.size()) return;
            results[i] = complete(prompts[i], params);
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    return results;
}

}  // namespace biasprompt
