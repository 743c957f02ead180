#pragma once

#include <stdexcept>
#include <string>

namespace gtop {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Operands belong to different ambient groups, or an element is not a valid
// member of the group it is used with.
class GroupMismatch : public Error {
 public:
  using Error::Error;
};

class PreconditionError : public Error {
 public:
  using Error::Error;
};

// The requested operation has no exact implementation for this combination
// of set representations.
class UnsupportedOperation : public Error {
 public:
  using Error::Error;
};

// An explicit enumeration or search would exceed its configured limit.
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

class InvalidGroupTable : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::string location = {})
      : Error(location.empty() ? what : location + ": " + what), location_(std::move(location)) {}

  const std::string& location() const { return location_; }

 private:
  std::string location_;
};

}  // namespace gtop
