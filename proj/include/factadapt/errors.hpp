#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace factadapt {

// Base class for every error raised by the library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct MissingField : Error {
    explicit MissingField(const std::string& field)
        : Error("missing field: " + field), field(field) {}
    MissingField(const std::string& field, std::size_t line)
        : Error("line " + std::to_string(line) + ": missing field: " + field),
          field(field), line(line) {}
    std::string field;
    std::size_t line = 0;
};

struct EmptyText : Error {
    explicit EmptyText(const std::string& field)
        : Error("empty text in field: " + field) {}
};

struct DuplicateId : Error {
    explicit DuplicateId(const std::string& msg) : Error(msg) {}
};

struct ParseError : Error {
    ParseError(std::size_t line, const std::string& detail)
        : Error("line " + std::to_string(line) + ": " + detail), line(line) {}
    std::size_t line;
};

struct InvalidProbability : Error {
    explicit InvalidProbability(double value)
        : Error("probability out of [0,1]: " + std::to_string(value)) {}
};

struct BadPattern : Error {
    using Error::Error;
};

struct EmptyCorpus : Error {
    EmptyCorpus() : Error("corpus is empty") {}
};

struct UnknownCategory : Error {
    explicit UnknownCategory(const std::string& category)
        : Error("no candidates for category: " + category) {}
};

struct EmptyEntity : Error {
    EmptyEntity() : Error("entity surface is empty") {}
};

struct EntityNotFound : Error {
    using Error::Error;
};

struct DegenerateReplacement : Error {
    DegenerateReplacement(const std::string& original, const std::string& replacement)
        : Error("replacement \"" + replacement + "\" contains original \"" + original +
                "\"; the original surface could never be fully removed") {}
};

struct EmptyGroup : Error {
    using Error::Error;
};

struct PositionMismatch : Error {
    using Error::Error;
};

struct GeneratorFailure : Error {
    using Error::Error;
};

struct EmptyInput : Error {
    using Error::Error;
};

struct MetadataMismatch : Error {
    using Error::Error;
};

// Threshold search cannot reach the requested extraction fraction anywhere
// on the grid.
struct ThresholdUnreachable : Error {
    using Error::Error;
};

struct ConfigError : Error {
    using Error::Error;
};

struct IoError : Error {
    using Error::Error;
};

}  // namespace factadapt
