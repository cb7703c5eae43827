#ifndef FLATCONE_ERROR_HPP_
#define FLATCONE_ERROR_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

namespace flatcone {

enum class ErrorKind {
  kNotHermitian,
  kNotPositiveDefinite,
  kDimensionMismatch,
  kInvalidArgument,
  kNotInApartment,
  kSingularBasis,
  kLengthMismatch,
  kNotConvex,
  kNotDecreasing,
  kUnsortedBreakpoints,
  kOutOfDomain,
  kNegativeScale,
  kDomainMismatch,
  kQuadratureNonConvergent,
  kNonDiagonalPair,
  kEmptySchemeSet,
};

std::string_view ToString(ErrorKind kind);

// Every failure raised by the library carries one of the kinds above so that
// callers (and the CLI exit-code mapping) can dispatch without parsing text.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(ToString(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace flatcone

#endif  // FLATCONE_ERROR_HPP_
