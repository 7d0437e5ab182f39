#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace lipquot {

// Malformed or inconsistent input (dimension mismatch, bad JSON, unknown tag).
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// An operation was called outside its documented domain.
class PreconditionError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A map fails a Lipschitz requirement; carries the offending pair.
class LipschitzViolation : public std::domain_error {
 public:
  LipschitzViolation(const std::string& what, std::size_t a, std::size_t b)
      : std::domain_error(what), pair_(a, b) {}
  std::pair<std::size_t, std::size_t> pair() const noexcept { return pair_; }

 private:
  std::pair<std::size_t, std::size_t> pair_;
};

// A decomposition produced a shape its construction rules out.
class StructuralError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// A numerical solver failed to certify its own answer.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace lipquot
