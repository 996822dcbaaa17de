#pragma once

#include <stdexcept>
#include <string>

namespace hbsg {

/// Root of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operands live in different groups.
class SpecMismatch : public Error {
 public:
  using Error::Error;
};

/// An integer-window sum or difference left the window. Never wrapped.
class WindowOverflow : public Error {
 public:
  using Error::Error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A materialization or enumeration would exceed a configured limit.
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

}  // namespace hbsg
