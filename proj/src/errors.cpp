#include "pdw/errors.hpp"

#include <fmt/format.h>

namespace pdw {

ConflictError::ConflictError(double time_min)
    : Error(fmt::format("conflict: separation reaches 0 km at t = {:.9g} min", time_min)),
      time_min_(time_min) {}

ValidationError::ValidationError(std::string field, const std::string& message)
    : Error(fmt::format("{}: {}", field, message)), field_(std::move(field)) {}

namespace {

std::string with_position(const std::string& detail, std::optional<std::size_t> line,
                          std::optional<std::size_t> column, const std::string& source) {
  std::string out = source;
  if (line) {
    if (!out.empty()) out += ':';
    out += std::to_string(*line);
    if (column) out += ':' + std::to_string(*column);
  }
  return out.empty() ? detail : out + ": " + detail;
}

}  // namespace

ParseError::ParseError(std::string detail, std::optional<std::size_t> line,
                       std::optional<std::size_t> column, const std::string& source)
    : Error(with_position(detail, line, column, source)),
      detail_(std::move(detail)),
      line_(line),
      column_(column) {}

}  // namespace pdw
