/**
 * @file error.hpp
 * @brief Error type shared by all modules.
 */
#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace graphdarcy {

enum class ErrorCode {
  InvalidArgument,
  NotSimple,
  NotConnected,
  EdgeCrossing,
  DuplicateCoordinate,
  IsomorphismTimeout,
  InternalCycle,
  DegenerateGeometry,
  EpsilonTooLarge,
  UnionFailure,
  HasBridge,
  TooSmall,
  NotBipartite,
  ValidationFailed,
  CorridorBlocked,
  QualityFailure,
  SyntaxError,
  UnknownIdentifier,
  DomainError,
  EmptyColorClass,
  NonPositiveA,
  AllZeroBeta,
  QuadratureDomainError,
  SingularSystem,
  ResidualTooLarge,
  SingularNeumann,
  UnknownCase,
  TooLarge,
  Io,
};

const char* error_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_name(code)) + ": " + what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// EdgeCrossing carries the offending edge pair.
class EdgeCrossingError : public Error {
 public:
  EdgeCrossingError(int e0, int e1, const std::string& what)
      : Error(ErrorCode::EdgeCrossing, what), pair_(e0, e1) {}
  std::pair<int, int> edges() const noexcept { return pair_; }

 private:
  std::pair<int, int> pair_;
};

/// SyntaxError carries the byte offset of the offending token.
class SyntaxError : public Error {
 public:
  SyntaxError(std::size_t offset, const std::string& what)
      : Error(ErrorCode::SyntaxError, what + " at offset " + std::to_string(offset)),
        offset_(offset) {}
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

}  // namespace graphdarcy
