#pragma once

#include <cstddef>
#include <string_view>

namespace biasprompt {

// Rough bytes-per-token ratio for English chat text.
inline constexpr std::size_t kApproxCharsPerToken = 4;

// Crude token estimate: ceil(bytes / 4). Deterministic and monotone in text
// length. Used for prompt budgeting and as a fallback when an endpoint omits
// usage; endpoint-reported counts are never overwritten by it.
inline std::size_t estimate_tokens(std::string_view text) {
    return (text.size() + kApproxCharsPerToken - 1) / kApproxCharsPerToken;
}

}  // namespace biasprompt
