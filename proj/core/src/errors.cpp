#include "darksra/errors.hpp"

namespace darksra {

namespace {

std::string ordering_message(std::size_t index, std::optional<std::size_t> line) {
  std::string msg = "time tags decrease at index " + std::to_string(index);
  if (line) msg += " (line " + std::to_string(*line) + ")";
  return msg;
}

}  // namespace

OrderingError::OrderingError(std::size_t index, std::optional<std::size_t> line)
    : Error(ordering_message(index, line)), index_(index), line_(line) {}

ParseError::ParseError(std::size_t line, const std::string& what)
    : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
      line_(line),
      detail_(what) {}

}  // namespace darksra
