#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace mtc {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A numerical procedure (quadrature, root search) failed to reach its target.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input file; carries the 1-based line number of the offending line
/// (0 when the problem is not tied to a line).
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : std::runtime_error(what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// A simulation replicate threw; reports which stream it was drawn from.
class ReplicateError : public std::runtime_error {
 public:
  ReplicateError(const std::string& what, std::uint64_t replicate_seed)
      : std::runtime_error(what), seed_(replicate_seed) {}
  std::uint64_t replicate_seed() const noexcept { return seed_; }

 private:
  std::uint64_t seed_;
};

}  // namespace mtc
