#pragma once

#include <stdexcept>
#include <string>

namespace hgr {

/// Base class for all engine errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Input files, corpora or datasets that fail to parse.
class ParseError : public Error {
public:
    explicit ParseError(const std::string& msg) : Error(msg) {}
};

/// Failures talking to an external HTTP service (extractor, embedder, generator).
class ProviderError : public Error {
public:
    explicit ProviderError(const std::string& msg) : Error(msg) {}
};

/// Corrupt, truncated or incompatible on-disk index data.
class IndexError : public Error {
public:
    explicit IndexError(const std::string& msg) : Error(msg) {}
};

/// Shape or argument violations inside the numeric kernels.
class DimensionError : public Error {
public:
    explicit DimensionError(const std::string& msg) : Error(msg) {}
};

} // namespace hgr
