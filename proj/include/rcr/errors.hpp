#pragma once

#include <stdexcept>
#include <string>

namespace rcr {

/// A symmetric matrix failed the positive-definiteness pivot test.
struct NotPositiveDefinite : std::runtime_error {
  explicit NotPositiveDefinite(const std::string& what) : std::runtime_error(what) {}
};

struct DomainError : std::invalid_argument {
  explicit DomainError(const std::string& what) : std::invalid_argument(what) {}
};

struct EmptySample : std::invalid_argument {
  explicit EmptySample(const std::string& what) : std::invalid_argument(what) {}
};

struct InvalidConfig : std::invalid_argument {
  explicit InvalidConfig(const std::string& what) : std::invalid_argument(what) {}
};

/// Input file could not be parsed; message carries the line number.
struct ParseError : std::runtime_error {
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

struct IoError : std::runtime_error {
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

/// All observations identical: the sample variance degenerated to zero.
struct DegenerateVariance : std::runtime_error {
  explicit DegenerateVariance(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace rcr
