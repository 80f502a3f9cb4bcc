#pragma once

#include <stdexcept>
#include <string>

namespace weil {

enum class Err {
  // linear kernel
  DimensionMismatch,
  InvalidRational,
  // algebra verification
  InvalidTable,
  UnitLawViolation,
  NotCommutative,
  NotAssociative,
  NotAdaptedBasis,
  NotNilpotent,
  // elements / morphisms
  AlgebraMismatch,
  NotInvertible,
  MorphismInvalid,
  NotEpimorphism,
  SourceMismatch,
  NotClosed,
  // ideals
  GeneratorNotInMaximalIdeal,
  NotProper,
  // constructions
  SquareDoesNotCommute,
  NonUniqueFactorization,
  // truncated families
  InclusionFails,
  ParameterOutOfRange,
  // expressions / evaluation
  ParseError,
  UnknownIdentifier,
  ExactModeUnsupported,
  PoleAtPoint,
  DomainError,
  WrongAlgebraKind,
  // polarization
  OrderTooLarge,
  NonConvergent,
  // io / cli
  SchemaError,
  UsageError,
};

inline const char* err_name(Err e) {
  switch (e) {
    case Err::DimensionMismatch: return "DimensionMismatch";
    case Err::InvalidRational: return "InvalidRational";
    case Err::InvalidTable: return "InvalidTable";
    case Err::UnitLawViolation: return "UnitLawViolation";
    case Err::NotCommutative: return "NotCommutative";
    case Err::NotAssociative: return "NotAssociative";
    case Err::NotAdaptedBasis: return "NotAdaptedBasis";
    case Err::NotNilpotent: return "NotNilpotent";
    case Err::AlgebraMismatch: return "AlgebraMismatch";
    case Err::NotInvertible: return "NotInvertible";
    case Err::MorphismInvalid: return "MorphismInvalid";
    case Err::NotEpimorphism: return "NotEpimorphism";
    case Err::SourceMismatch: return "SourceMismatch";
    case Err::NotClosed: return "NotClosed";
    case Err::GeneratorNotInMaximalIdeal: return "GeneratorNotInMaximalIdeal";
    case Err::NotProper: return "NotProper";
    case Err::SquareDoesNotCommute: return "SquareDoesNotCommute";
    case Err::NonUniqueFactorization: return "NonUniqueFactorization";
    case Err::InclusionFails: return "InclusionFails";
    case Err::ParameterOutOfRange: return "ParameterOutOfRange";
    case Err::ParseError: return "ParseError";
    case Err::UnknownIdentifier: return "UnknownIdentifier";
    case Err::ExactModeUnsupported: return "ExactModeUnsupported";
    case Err::PoleAtPoint: return "PoleAtPoint";
    case Err::DomainError: return "DomainError";
    case Err::WrongAlgebraKind: return "WrongAlgebraKind";
    case Err::OrderTooLarge: return "OrderTooLarge";
    case Err::NonConvergent: return "NonConvergent";
    case Err::SchemaError: return "SchemaError";
    case Err::UsageError: return "UsageError";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(Err kind, const std::string& what)
      : std::runtime_error(std::string(err_name(kind)) + ": " + what), kind_(kind) {}
  Err kind() const { return kind_; }

 private:
  Err kind_;
};

[[noreturn]] inline void fail(Err kind, const std::string& what) {
  throw Error(kind, what);
}

}  // namespace weil
