#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace cliffgrad {

// Wrong shape of an input: vertex counts, dimension mismatches, bad indices.
struct ShapeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A vector or blade too close to zero to invert or reflect through.
struct DegenerateInput : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Simplex volume below the scale-relative tolerance.
struct DegenerateSimplex : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Mean-ratio operations need mirror samples that were not supplied.
struct IncompleteSample : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Tabulated field queried off its support set.
struct MissingSample : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Invalid run configuration (CLI flags, mesh files).
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A field evaluation left the field's domain. Carries the offending point
// when known.
struct DomainError : std::runtime_error {
  std::vector<double> point;
  explicit DomainError(const std::string& msg, std::vector<double> at = {})
      : std::runtime_error(msg), point(std::move(at)) {}
};

// Expression text that does not parse. `offset` is the byte position.
struct SyntaxError : std::runtime_error {
  std::size_t offset;
  SyntaxError(std::size_t at, const std::string& msg)
      : std::runtime_error(msg + " (at offset " + std::to_string(at) + ")"),
        offset(at) {}
};

struct UnknownIdentifier : SyntaxError {
  using SyntaxError::SyntaxError;
};

// A product result carried unexpected grades above tolerance.
struct ResidualError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace cliffgrad
