#ifndef ZONOVOL_ERRORS_HPP_
#define ZONOVOL_ERRORS_HPP_

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace zonovol {

/// Spectrum classification used to gate the eigenvalue-based routes.
enum class SpectrumClass {
  AllPositiveDistinct,
  AllNegativeDistinct,
  MixedSign,
  Degenerate,
  Complex,
  NearSingularFactor,
};

std::string_view to_string(SpectrumClass cls) noexcept;

/// Thresholds for the distinctness, singular-factor and complex-pair checks.
/// `eps_distinct` is relative to the spectral radius.
struct Tolerances {
  double eps_distinct = 1e-8;
  double eps_sing = 1e-10;
  double eps_complex = 1e-10;
};

/// Malformed input: bad dimensions, non-finite entries, violated preconditions.
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Input is well formed but outside the domain of the requested formula.
class DomainError : public std::domain_error {
 public:
  explicit DomainError(const std::string& what,
                       std::optional<SpectrumClass> cls = std::nullopt)
      : std::domain_error(what), cls_(cls) {}

  std::optional<SpectrumClass> spectrum_class() const noexcept { return cls_; }

 private:
  std::optional<SpectrumClass> cls_;
};

/// A factor denominator is (numerically) zero.  Indices are 1-based positions
/// in the list handed to the failing operation; `second` is 0 for
/// single-eigenvalue factors.
class SingularFactorError : public DomainError {
 public:
  SingularFactorError(const std::string& what, int first, int second)
      : DomainError(what, SpectrumClass::NearSingularFactor),
        first_(first),
        second_(second) {}

  int first() const noexcept { return first_; }
  int second() const noexcept { return second_; }

 private:
  int first_;
  int second_;
};

}  // namespace zonovol

#endif  // ZONOVOL_ERRORS_HPP_
