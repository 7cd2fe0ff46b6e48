#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace imcoalg {

enum class ErrorKind {
  DuplicateLabel,
  UnknownLabel,
  NotAntisymmetric,
  NotTransitive,
  NotMonotone,
  NotPMorphism,
  StageTooLarge,
  LiftOutsideStage,
  EnumerationTooLarge,
  MixLawViolation,
  ValueNotUpset,
  ProjectionNotPMorphism,
  IncompatibleValuations,
  SyntaxError,
  UnknownToken,
  UndeclaredLetter,
  TooManyGenerators,
  NotNeighbourhoodFrame,
  ParseError,
  InvalidArgument,
};

constexpr std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::DuplicateLabel: return "DuplicateLabel";
    case ErrorKind::UnknownLabel: return "UnknownLabel";
    case ErrorKind::NotAntisymmetric: return "NotAntisymmetric";
    case ErrorKind::NotTransitive: return "NotTransitive";
    case ErrorKind::NotMonotone: return "NotMonotone";
    case ErrorKind::NotPMorphism: return "NotPMorphism";
    case ErrorKind::StageTooLarge: return "StageTooLarge";
    case ErrorKind::LiftOutsideStage: return "LiftOutsideStage";
    case ErrorKind::EnumerationTooLarge: return "EnumerationTooLarge";
    case ErrorKind::MixLawViolation: return "MixLawViolation";
    case ErrorKind::ValueNotUpset: return "ValueNotUpset";
    case ErrorKind::ProjectionNotPMorphism: return "ProjectionNotPMorphism";
    case ErrorKind::IncompatibleValuations: return "IncompatibleValuations";
    case ErrorKind::SyntaxError: return "SyntaxError";
    case ErrorKind::UnknownToken: return "UnknownToken";
    case ErrorKind::UndeclaredLetter: return "UndeclaredLetter";
    case ErrorKind::TooManyGenerators: return "TooManyGenerators";
    case ErrorKind::NotNeighbourhoodFrame: return "NotNeighbourhoodFrame";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the kinds above.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Text errors (formula syntax, frame files) remember where they happened.
/// `line` and `column` are 1-based; `offset` is the 0-based character offset.
class SourceError : public Error {
 public:
  SourceError(ErrorKind kind, const std::string& what, std::size_t line, std::size_t column,
              std::size_t offset)
      : Error(kind, what + " at " + std::to_string(line) + ":" + std::to_string(column)),
        line_(line),
        column_(column),
        offset_(offset) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t line_;
  std::size_t column_;
  std::size_t offset_;
};

}  // namespace imcoalg
