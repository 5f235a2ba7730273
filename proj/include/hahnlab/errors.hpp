#pragma once

#include <stdexcept>
#include <string>

namespace hahnlab {

// Interval refinement hit its budget before separating two values.  Callers
// that can live with "don't know" catch this and report inconclusive instead
// of wrong.
class RefinementBudgetError : public std::runtime_error {
 public:
  explicit RefinementBudgetError(const std::string& what) : std::runtime_error(what) {}
};

// A term stream was asked to materialize more terms (or more merge work) than
// its budget allows.  This is a first-class outcome for streams with infinite
// support below a bound, not a crash.
class BudgetExceededError : public std::runtime_error {
 public:
  explicit BudgetExceededError(const std::string& what) : std::runtime_error(what) {}
};

// Operands built over different basis contexts or coefficient fields.
class ContextMismatchError : public std::invalid_argument {
 public:
  explicit ContextMismatchError(const std::string& what) : std::invalid_argument(what) {}
};

// A term stream violated its contract: exponents out of order or a zero
// coefficient emitted.
class SeriesFormatError : public std::runtime_error {
 public:
  explicit SeriesFormatError(const std::string& what) : std::runtime_error(what) {}
};

// Text input rejected; carries the byte offset of the offending token.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : std::runtime_error(what + " (at offset " + std::to_string(position) + ")"),
        position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

}  // namespace hahnlab
