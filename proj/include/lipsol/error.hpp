/*
 Copyright 2026 The lipsol Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/

#ifndef LIPSOL_ERROR_HPP
#define LIPSOL_ERROR_HPP

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace lipsol {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Malformed expression text. offset is the byte position of the failure.
class ParseError : public Error {
public:
  ParseError(const std::string &msg, std::size_t offset)
      : Error(msg + " at offset " + std::to_string(offset)), offset_(offset) {}
  std::size_t offset() const { return offset_; }

private:
  std::size_t offset_;
};

// Evaluation failed: sqrt of a negative, division by zero, missing variable.
class EvalError : public Error {
public:
  using Error::Error;
};

// Structurally invalid problem definition (dimensions, variables, domain).
class ProblemError : public Error {
public:
  using Error::Error;
};

// A standing assumption of the reformulation does not hold at some x,
// e.g. the feasible point violates constraint `constraint` (0-based).
class AssumptionViolation : public Error {
public:
  AssumptionViolation(const std::string &msg,
                      std::optional<std::size_t> constraint = std::nullopt)
      : Error(msg), constraint_(constraint) {}
  std::optional<std::size_t> constraint() const { return constraint_; }

private:
  std::optional<std::size_t> constraint_;
};

// Constraint row with (numerically) zero normal.
class DegenerateRowError : public AssumptionViolation {
public:
  DegenerateRowError(const std::string &msg, std::size_t row)
      : AssumptionViolation(msg, row) {}
};

// Numerical routine could not deliver its postcondition.
class SolverError : public Error {
public:
  using Error::Error;
};

} // namespace lipsol

#endif // LIPSOL_ERROR_HPP
