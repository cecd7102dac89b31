#pragma once

#include <stdexcept>
#include <string>

namespace mbti {

// All library failures surface as mbti::Error (or a subclass). The message
// names the offending input so CLI users can act on it.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t row)
      : Error("row " + std::to_string(row) + ": " + what), row_(row) {}

  std::size_t row() const noexcept { return row_; }

 private:
  std::size_t row_;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace mbti
