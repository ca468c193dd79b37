// errors.hpp -- exception types shared across the library
#pragma once

#include <stdexcept>
#include <string>

namespace avass {

struct error : std::runtime_error {
  explicit error(const std::string& msg) : std::runtime_error(msg) {}
};

struct dimension_error : error {
  explicit dimension_error(const std::string& msg) : error(msg) {}
};

struct state_mismatch_error : error {
  explicit state_mismatch_error(const std::string& msg) : error(msg) {}
};

struct precondition_error : error {
  explicit precondition_error(const std::string& msg) : error(msg) {}
};

struct not_nonnegative_error : precondition_error {
  explicit not_nonnegative_error(const std::string& msg) : precondition_error(msg) {}
};

struct internal_error : error {
  explicit internal_error(const std::string& msg) : error(msg) {}
};

struct parse_error : error {
  int line;
  parse_error(int line_, const std::string& msg)
      : error("line " + std::to_string(line_) + ": " + msg), line(line_) {}
};

}  // namespace avass
