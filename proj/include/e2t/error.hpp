#pragma once

#include <stdexcept>
#include <string>

namespace e2t {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A structural law failed on a loaded or constructed object.
class InvariantViolation : public Error {
 public:
  InvariantViolation(std::string block, std::string law, std::string counterexample)
      : Error(block + ": " + law + " violated (" + counterexample + ")"),
        block_(std::move(block)),
        law_(std::move(law)),
        counterexample_(std::move(counterexample)) {}

  const std::string& block() const noexcept { return block_; }
  const std::string& law() const noexcept { return law_; }
  const std::string& counterexample() const noexcept { return counterexample_; }

 private:
  std::string block_;
  std::string law_;
  std::string counterexample_;
};

class SyntaxError : public Error {
 public:
  SyntaxError(std::string file, int line, int col, const std::string& what)
      : Error(file + ":" + std::to_string(line) + ":" + std::to_string(col) + ": " + what),
        line_(line),
        col_(col) {}

  int line() const noexcept { return line_; }
  int col() const noexcept { return col_; }

 private:
  int line_;
  int col_;
};

/// A precondition of an operation is not met by its arguments.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

}  // namespace e2t
