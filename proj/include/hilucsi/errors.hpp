#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace hilucsi {

/// \brief malformed user input (bad indices, dimension mismatch, unreadable file)
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// \brief file declares a format we do not handle (e.g. complex or pattern fields)
class UnsupportedFormatError : public InputError {
 public:
  using InputError::InputError;
};

/// \brief no perfect matching exists; carries the rows left unmatched
class StructurallySingularError : public std::runtime_error {
 public:
  StructurallySingularError(std::string msg, std::vector<std::int64_t> rows)
      : std::runtime_error(std::move(msg)), unmatched_rows(std::move(rows)) {}

  std::vector<std::int64_t> unmatched_rows;
};

/// \brief multilevel factorization could not be completed
class BuildError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// \brief NaN/Inf appeared in Krylov iterates
class DivergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace hilucsi
