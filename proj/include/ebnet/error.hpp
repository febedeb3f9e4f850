#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace ebnet {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on an argument was violated.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A file or document did not match its schema. `where` carries the row/column
/// coordinate or JSON pointer of the offending item.
class FormatError : public Error {
 public:
  FormatError(std::string where, const std::string& what)
      : Error(where.empty() ? what : where + ": " + what), where_(std::move(where)) {}

  const std::string& where() const noexcept { return where_; }

 private:
  std::string where_;
};

}  // namespace ebnet
