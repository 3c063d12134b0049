#ifndef MORPHSIM_ERRORS_HPP_
#define MORPHSIM_ERRORS_HPP_

#include <cstdint>
#include <stdexcept>
#include <string>

namespace morphsim {

// Syntax or validation failure while reading workloads, clusterings or traces.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& message)
      : std::runtime_error("parse error at " + std::to_string(line) + ":" +
                           std::to_string(column) + ": " + message),
        line_(line),
        column_(column),
        message_(message) {}

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }
  const std::string& message() const { return message_; }

 private:
  std::size_t line_;
  std::size_t column_;
  std::string message_;
};

// A configured cap (states, traces, game pairs) was exceeded.  Exploration
// never truncates silently; it reports this instead.
class ResourceLimit : public std::runtime_error {
 public:
  ResourceLimit(const std::string& what, std::uint64_t limit)
      : std::runtime_error("resource limit exceeded: " + what + " (cap " +
                           std::to_string(limit) + ")"),
        resource_(what),
        limit_(limit) {}

  const std::string& resource() const { return resource_; }
  std::uint64_t limit() const { return limit_; }

 private:
  std::string resource_;
  std::uint64_t limit_;
};

// Raised when an operation needs a unique reduct but the state has
// disagreeing dirty copies of some variable.
class IncoherentError : public std::runtime_error {
 public:
  explicit IncoherentError(const std::string& var)
      : std::runtime_error("state is not coherent for variable '" + var + "'"),
        var_(var) {}

  const std::string& var() const { return var_; }

 private:
  std::string var_;
};

}  // namespace morphsim

#endif  // MORPHSIM_ERRORS_HPP_
