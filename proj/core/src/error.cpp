#include "holodet/error.hpp"

#include <utility>

namespace holodet {

namespace {

std::string locate(const std::string& source, std::size_t line, std::size_t column,
                   const std::string& what) {
  std::string out = source.empty() ? std::string("<input>") : source;
  if (line > 0) {
    out += ":" + std::to_string(line);
    if (column > 0) out += ":" + std::to_string(column);
  }
  return out + ": " + what;
}

}  // namespace

ParseError::ParseError(std::string source, std::size_t line, std::size_t column,
                       const std::string& what)
    : Error(locate(source, line, column, what)),
      source_(std::move(source)),
      line_(line),
      column_(column) {}

}  // namespace holodet
