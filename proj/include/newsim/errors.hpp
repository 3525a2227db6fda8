#pragma once

#include <stdexcept>
#include <string>

namespace newsim {

// Root of every error the engine raises. Catch this at process boundaries.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Input data violates a documented format (CSV header, cache file, JSON schema).
class FormatError : public Error {
public:
    using Error::Error;
};

// A numeric argument is outside its documented domain.
class RangeError : public Error {
public:
    using Error::Error;
};

// Sizes or lengths of arguments do not agree, or a sequence is empty.
class ArgumentError : public Error {
public:
    using Error::Error;
};

class DimensionError : public Error {
public:
    using Error::Error;
};

class EmptyDatasetError : public Error {
public:
    using Error::Error;
};

class NotFoundError : public Error {
public:
    using Error::Error;
};

class EmptyBodyError : public Error {
public:
    using Error::Error;
};

// NER provider failed (as opposed to returning no entities).
class ProviderError : public Error {
public:
    using Error::Error;
};

class MissingEmbeddingError : public Error {
public:
    MissingEmbeddingError(std::string key)
        : Error("no cached embedding for key " + key), key_(std::move(key)) {}

    const std::string& key() const noexcept { return key_; }

private:
    std::string key_;
};

class ZeroVectorError : public Error {
public:
    using Error::Error;
};

// Statistic undefined for the input (e.g. Pearson on a constant series).
class DegenerateError : public Error {
public:
    using Error::Error;
};

// Report is missing data for a (metric, approach) cell.
class IncompleteError : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

} // namespace newsim
