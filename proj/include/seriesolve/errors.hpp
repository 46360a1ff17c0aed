#pragma once

#include <stdexcept>
#include <string>

namespace seriesolve {

// Base class for all library errors. Subclasses mirror the distinct failure
// modes a caller may want to handle separately.
struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct DivisionByZero : Error {
  explicit DivisionByZero(const std::string& msg = "division by zero") : Error(msg) {}
};

struct MixedFields : Error {
  explicit MixedFields(const std::string& msg = "operands belong to different fields") : Error(msg) {}
};

struct CharacteristicTooSmall : Error {
  explicit CharacteristicTooSmall(const std::string& msg) : Error(msg) {}
};

struct IndexOutOfRange : Error {
  explicit IndexOutOfRange(const std::string& msg) : Error(msg) {}
};

struct NotInvertible : Error {
  explicit NotInvertible(const std::string& msg) : Error(msg) {}
};

struct DimensionMismatch : Error {
  explicit DimensionMismatch(const std::string& msg) : Error(msg) {}
};

struct SingularMatrix : Error {
  explicit SingularMatrix(const std::string& msg = "matrix is singular") : Error(msg) {}
};

struct InconsistentBaseCase : Error {
  explicit InconsistentBaseCase(const std::string& msg) : Error(msg) {}
};

struct NotOrdinaryPoint : Error {
  explicit NotOrdinaryPoint(const std::string& msg) : Error(msg) {}
};

struct PadeFailure : Error {
  explicit PadeFailure(const std::string& msg) : Error(msg) {}
};

struct ResidualNonzero : Error {
  explicit ResidualNonzero(const std::string& msg) : Error(msg) {}
};

struct ParseError : Error {
  explicit ParseError(const std::string& msg) : Error(msg) {}
};

struct EngineUnsupported : Error {
  explicit EngineUnsupported(const std::string& msg) : Error(msg) {}
};

}  // namespace seriesolve
