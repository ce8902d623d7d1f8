#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace darksra {

/// Base class for every error raised by the library. The CLI maps any
/// `darksra::Error` to exit code 1.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Too few samples for the requested operation.
class InsufficientDataError : public Error {
 public:
  using Error::Error;
};

/// A time-tag sequence decreased. `index()` is the position of the first
/// element smaller than its predecessor; `line()` is set when the sequence
/// came from a file.
class OrderingError : public Error {
 public:
  OrderingError(std::size_t index, std::optional<std::size_t> line = std::nullopt);

  std::size_t index() const noexcept { return index_; }
  std::optional<std::size_t> line() const noexcept { return line_; }

 private:
  std::size_t index_;
  std::optional<std::size_t> line_;
};

/// The SRA prediction diverges at rank 1.
class SingularityError : public Error {
 public:
  using Error::Error;
};

/// An index lies outside its admissible range.
class RangeError : public Error {
 public:
  using Error::Error;
};

/// A numeric parameter is outside its domain (nonpositive rate, bin width...).
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// The data cannot be normalized, e.g. every interval is zero.
class DegenerateDataError : public Error {
 public:
  using Error::Error;
};

/// Observed values are constant, so the total sum of squares vanishes.
class DegenerateVarianceError : public Error {
 public:
  using Error::Error;
};

/// Paired sequences have different lengths.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// Invalid simulator configuration, or a stop condition that was not
/// reached within the event budget.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Structurally invalid file contents (missing mandatory metadata etc.).
class FormatError : public Error {
 public:
  using Error::Error;
};

/// A token could not be parsed. Lines are 1-based; 0 means no line context.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what);

  std::size_t line() const noexcept { return line_; }
  /// Message without the line prefix.
  const std::string& detail() const noexcept { return detail_; }

 private:
  std::size_t line_;
  std::string detail_;
};

/// Failure to open, read or write a file.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace darksra
