#pragma once

#include <stdexcept>
#include <string>

namespace sdom {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent input data (files, ids, parameters).
class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// Lattice constants admit no radius choice satisfying every cell property.
class InfeasibleConstants : public Error {
 public:
  InfeasibleConstants(const std::string& what, int level) : Error(what), level_(level) {}
  int level() const noexcept { return level_; }

 private:
  int level_;
};

/// An oracle or recursion budget was exceeded.
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

}  // namespace sdom
