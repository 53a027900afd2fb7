#pragma once

#include <functional>
#include <string>

#include "biasprompt/backend.hpp"

namespace biasprompt {

// Raw result of one HTTP exchange.  `status == 0` means the request never
// completed (connection refused, timeout, DNS failure, ...) and `error`
// carries the transport's description of what went wrong.
struct HttpResult {
    int status = 0;
    std::string body;
    std::string error;
};

// Transport seam: maps (path, request-body JSON) to an HttpResult.  The
// default transport speaks HTTP(S) via cpp-httplib; tests substitute a
// function that replays canned responses or counts attempts.
using HttpTransport = std::function<HttpResult(const std::string& path, const std::string& body)>;

struct HttpBackendOptions {
    // Server root, e.g. "http://localhost:8000/v1".  The chat-completions
    // path is appended to whatever path component the URL already has.
    std::string base_url;
    std::string model;
    // Additional attempts after the first; total attempts = retries + 1.
    int retries = 3;
    // Base backoff before the second attempt; doubles per retry, plus a
    // small deterministic jitter so synchronized workers fan out.
    long backoff_ms = 250;
    // Leave unset to use the built-in transport for `base_url`.
    HttpTransport transport;
};

// Chat-completions client for OpenAI-compatible inference servers.
//
// One `complete()` call makes one POST to {base_url}/chat/completions with
// the prompt's messages, then parses `choices[0].message.content` and the
// `usage` block from the response.  Transient failures (connection errors,
// HTTP 408/429/5xx) are retried with exponential backoff; anything else is
// surfaced as a failed CompletionOutcome after the first attempt.
//
// If the server omits `usage`, token counts fall back to the byte-length
// estimator and the response is flagged `usage_estimated` so downstream
// accounting can tell measured and approximated numbers apart.
//
// Servers occasionally return an empty completion even when asked for at
// least one token.  When that happens and `min_new_tokens > 0`, the client
// re-asks once with a sentence appended to the final user message nudging
// the model to produce text; usage from both exchanges is summed.
//
// If the BIASPROMPT_API_KEY environment variable is set, its value is sent
// as a bearer token on every request.
class HttpBackend final : public ModelBackend {
  public:
    explicit HttpBackend(HttpBackendOptions options);

    std::string id() const override;

    CompletionOutcome complete(const RenderedPrompt& prompt,
                               const GenerationParams& params) override;

  private:
    // One logical completion request (including its retry cycle).  When
    // `nudge` is non-empty it is appended to the last user message.
    CompletionOutcome request_completion(const RenderedPrompt& prompt,
                                         const GenerationParams& params,
                                         const std::string& nudge);

    HttpBackendOptions options_;
    std::string host_;           // scheme://authority
    std::string path_prefix_;    // path component of base_url, no trailing '/'
};

}  // namespace biasprompt
