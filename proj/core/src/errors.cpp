#include "zonovol/errors.hpp"

namespace zonovol {

std::string_view to_string(SpectrumClass cls) noexcept {
  switch (cls) {
    case SpectrumClass::AllPositiveDistinct:
      return "AllPositiveDistinct";
    case SpectrumClass::AllNegativeDistinct:
      return "AllNegativeDistinct";
    case SpectrumClass::MixedSign:
      return "MixedSign";
    case SpectrumClass::Degenerate:
      return "Degenerate";
    case SpectrumClass::Complex:
      return "Complex";
    case SpectrumClass::NearSingularFactor:
      return "NearSingularFactor";
  }
  return "Unknown";
}

}  // namespace zonovol
