#pragma once

#include <stdexcept>
#include <string>

namespace eigenscale {

enum class ErrorKind {
  config,     // bad flags, schedule or ranks
  io,         // unreadable/unwritable paths
  data,       // input validation
  numerical,  // solver failure, degenerate factors
};

/// CLI exit code: 2 usage/config/io, 3 data validation, 4 numerical failure.
constexpr int exit_code(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::data: return 3;
    case ErrorKind::numerical: return 4;
    default: return 2;
  }
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }
  int exit_code() const noexcept { return eigenscale::exit_code(kind_); }

 private:
  ErrorKind kind_;
};

inline Error config_error(const std::string& msg) { return {ErrorKind::config, msg}; }
inline Error io_error(const std::string& msg) { return {ErrorKind::io, msg}; }
inline Error data_error(const std::string& msg) { return {ErrorKind::data, msg}; }
inline Error numerical_error(const std::string& msg) { return {ErrorKind::numerical, msg}; }

const char* kind_name(ErrorKind kind) noexcept;

}  // namespace eigenscale
