#pragma once
#include <stdexcept>
#include <string>

namespace kerag {

// Error categories map onto CLI exit codes:
//   ConfigError → 2 (usage/config), data-shaped errors → 3, infrastructure → 4.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Usage / configuration problems.
struct ConfigError : Error {
    using Error::Error;
};

// Malformed input data (fixtures, record files, registries).
struct FormatError : Error {
    FormatError(const std::string& source, int line, const std::string& what)
        : Error(source + ":" + std::to_string(line) + ": " + what) {}
    explicit FormatError(const std::string& what) : Error(what) {}
};

// Structurally valid input that violates an invariant.
struct ValidationError : Error {
    using Error::Error;
};

// Record-file level problems (missing ids, duplicate ids, bad fields).
struct DataError : Error {
    using Error::Error;
};

// Unknown function name in an API registry.
struct RegistryError : Error {
    using Error::Error;
};

// A call with missing required arguments or an invalid argument value.
struct ArgumentError : Error {
    using Error::Error;
};

// Network / provider transport failure; retried once before surfacing.
struct TransportError : Error {
    using Error::Error;
};

// Strict scripted provider saw a prompt it has no response for.
struct ScriptMissError : Error {
    ScriptMissError(const std::string& fingerprint, const std::string& template_id)
        : Error("no scripted response for prompt fingerprint " + fingerprint +
                " (template " + template_id + ")"),
          fingerprint(fingerprint),
          template_id(template_id) {}
    std::string fingerprint;
    std::string template_id;
};

// A template rendered with an unbound required placeholder.
struct RenderError : Error {
    using Error::Error;
};

// Expected tag set not found in a completion.
struct TagParseError : Error {
    using Error::Error;
};

// Planning failed terminally; the pipeline answers missing.
struct PlanningError : Error {
    using Error::Error;
};

// Every backend call of a retrieval failed.
struct RetrievalError : Error {
    using Error::Error;
};

struct IoError : Error {
    using Error::Error;
};

}  // namespace kerag
