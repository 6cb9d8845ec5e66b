#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace mfpop {

enum class ErrorCode {
  NotGCM,
  NotSymmetrizable,
  NonPositiveSymmetrizer,
  ShapeMismatch,
  IndexOutOfRange,
  SingularCartan,
  ZeroPolynomial,
  NotSquarefree,
  HigherOrderPole,
  DuplicatePoints,
  NonDominantWeight,
  GramShapeMismatch,
  NotSquarefreeDirection,
  ZeroMember,
  MissingGram,
  NonGenericTuple,
  StartNotFertile,
  ClusteredRoots,
  Parse,
  DegreeCapRequired,
};

std::string_view error_name(ErrorCode code) noexcept;

// Every domain failure carries a stable code; what() starts with the code's
// name so CLI diagnostics can be matched by string.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail)
      : std::runtime_error(std::string(error_name(code)) +
                           (detail.empty() ? "" : ": " + detail)),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace mfpop
