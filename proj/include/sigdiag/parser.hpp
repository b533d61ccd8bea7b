#pragma once

#include <stdexcept>
#include <string>

#include "sigdiag/ast.hpp"

namespace sigdiag {

struct ParseError : std::runtime_error {
  ParseError(const std::string& msg, int line, int column)
      : std::runtime_error(msg + " (line " + std::to_string(line) + ", column " +
                           std::to_string(column) + ")"),
        line(line),
        column(column) {}
  int line;
  int column;
};

/// Parses one property. '#' starts a line comment.
Property parse_property(const std::string& text);
Property load_property_file(const std::string& path);

}  // namespace sigdiag
