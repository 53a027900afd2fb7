#pragma once

#include <stdexcept>
#include <string>

namespace biasprompt {

// Malformed or unloadable input data (dataset files, record files, fixtures).
class IngestError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// An operation was invoked outside its contract (bad preconditions,
// mismatched inputs, empty aggregates).
class ContractError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Invalid run configuration: unknown tags, incompatible flags.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace biasprompt
