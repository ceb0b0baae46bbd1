#include "graphdarcy/error.hpp"

namespace graphdarcy {

const char* error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::NotSimple: return "NotSimple";
    case ErrorCode::NotConnected: return "NotConnected";
    case ErrorCode::EdgeCrossing: return "EdgeCrossing";
    case ErrorCode::DuplicateCoordinate: return "DuplicateCoordinate";
    case ErrorCode::IsomorphismTimeout: return "IsomorphismTimeout";
    case ErrorCode::InternalCycle: return "InternalCycle";
    case ErrorCode::DegenerateGeometry: return "DegenerateGeometry";
    case ErrorCode::EpsilonTooLarge: return "EpsilonTooLarge";
    case ErrorCode::UnionFailure: return "UnionFailure";
    case ErrorCode::HasBridge: return "HasBridge";
    case ErrorCode::TooSmall: return "TooSmall";
    case ErrorCode::NotBipartite: return "NotBipartite";
    case ErrorCode::ValidationFailed: return "ValidationFailed";
    case ErrorCode::CorridorBlocked: return "CorridorBlocked";
    case ErrorCode::QualityFailure: return "QualityFailure";
    case ErrorCode::SyntaxError: return "SyntaxError";
    case ErrorCode::UnknownIdentifier: return "UnknownIdentifier";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::EmptyColorClass: return "EmptyColorClass";
    case ErrorCode::NonPositiveA: return "NonPositiveA";
    case ErrorCode::AllZeroBeta: return "AllZeroBeta";
    case ErrorCode::QuadratureDomainError: return "QuadratureDomainError";
    case ErrorCode::SingularSystem: return "SingularSystem";
    case ErrorCode::ResidualTooLarge: return "ResidualTooLarge";
    case ErrorCode::SingularNeumann: return "SingularNeumann";
    case ErrorCode::UnknownCase: return "UnknownCase";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

}  // namespace graphdarcy
