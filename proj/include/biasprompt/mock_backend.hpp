#pragma once

#include <atomic>
#include <filesystem>
#include <map>

#include "biasprompt/backend.hpp"

namespace biasprompt {

// Deterministic scripted backend keyed by prompt content hash. The script
// table is read-only once runs start, so concurrent completion is safe.
class MockBackend final : public ModelBackend {
public:
    struct Entry {
        std::string text;
        long prompt_tokens = 0;
        long completion_tokens = 0;
        long latency_ms = 0;
        bool fail = false;
    };

    MockBackend();

    // Movable so factory functions can return by value; the call counter
    // carries over. Not copyable (one counter per backend).
    MockBackend(MockBackend&& other) noexcept
        : script_(std::move(other.script_)),
          default_response_(std::move(other.default_response_)),
          simulate_latency_(other.simulate_latency_),
          calls_(other.calls_.load()) {}

    // Loads a line-delimited fixture of
    // {"hash", "text", "prompt_tokens", "completion_tokens", "fail"} records
    // (optional "latency_ms"). A repeated hash overrides the earlier entry.
    static MockBackend from_file(const std::filesystem::path& path);

    void script(std::string hash, Entry entry);
    void set_default_response(Entry entry);

    // When on, complete() sleeps for the entry's latency_ms, which lets tests
    // force out-of-order completion in concurrent batches.
    void set_simulate_latency(bool on) { simulate_latency_ = on; }

    std::size_t scripted_count() const { return script_.size(); }
    long calls_made() const { return calls_.load(); }

    std::string id() const override { return "mock"; }
    CompletionOutcome complete(const RenderedPrompt& prompt,
                               const GenerationParams& params) override;

private:
    std::map<std::string, Entry> script_;
    Entry default_response_;
    bool simulate_latency_ = false;
    std::atomic<long> calls_{0};
};

}  // namespace biasprompt
