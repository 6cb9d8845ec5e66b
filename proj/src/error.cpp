#include "mfpop/error.hpp"

namespace mfpop {

std::string_view error_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::NotGCM: return "NotGCM";
    case ErrorCode::NotSymmetrizable: return "NotSymmetrizable";
    case ErrorCode::NonPositiveSymmetrizer: return "NonPositiveSymmetrizer";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::SingularCartan: return "SingularCartan";
    case ErrorCode::ZeroPolynomial: return "ZeroPolynomial";
    case ErrorCode::NotSquarefree: return "NotSquarefree";
    case ErrorCode::HigherOrderPole: return "HigherOrderPole";
    case ErrorCode::DuplicatePoints: return "DuplicatePoints";
    case ErrorCode::NonDominantWeight: return "NonDominantWeight";
    case ErrorCode::GramShapeMismatch: return "GramShapeMismatch";
    case ErrorCode::NotSquarefreeDirection: return "NotSquarefreeDirection";
    case ErrorCode::ZeroMember: return "ZeroMember";
    case ErrorCode::MissingGram: return "MissingGram";
    case ErrorCode::NonGenericTuple: return "NonGenericTuple";
    case ErrorCode::StartNotFertile: return "StartNotFertile";
    case ErrorCode::ClusteredRoots: return "ClusteredRoots";
    case ErrorCode::Parse: return "Parse";
    case ErrorCode::DegreeCapRequired: return "DegreeCapRequired";
  }
  return "Unknown";
}

}  // namespace mfpop
