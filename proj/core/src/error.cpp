#include "flatcone/error.hpp"

namespace flatcone {

std::string_view ToString(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kNotHermitian: return "NotHermitian";
    case ErrorKind::kNotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorKind::kDimensionMismatch: return "DimensionMismatch";
    case ErrorKind::kInvalidArgument: return "InvalidArgument";
    case ErrorKind::kNotInApartment: return "NotInApartment";
    case ErrorKind::kSingularBasis: return "SingularBasis";
    case ErrorKind::kLengthMismatch: return "LengthMismatch";
    case ErrorKind::kNotConvex: return "NotConvex";
    case ErrorKind::kNotDecreasing: return "NotDecreasing";
    case ErrorKind::kUnsortedBreakpoints: return "UnsortedBreakpoints";
    case ErrorKind::kOutOfDomain: return "OutOfDomain";
    case ErrorKind::kNegativeScale: return "NegativeScale";
    case ErrorKind::kDomainMismatch: return "DomainMismatch";
    case ErrorKind::kQuadratureNonConvergent: return "QuadratureNonConvergent";
    case ErrorKind::kNonDiagonalPair: return "NonDiagonalPair";
    case ErrorKind::kEmptySchemeSet: return "EmptySchemeSet";
  }
  return "Unknown";
}

}  // namespace flatcone
