#ifndef ZONOVOL_TOOLS_MODEL_IO_HPP_
#define ZONOVOL_TOOLS_MODEL_IO_HPP_

#include <optional>
#include <stdexcept>
#include <string>

#include "zonovol/ldt_model.hpp"

namespace zonovol::cli {

/// Malformed model file.  The message carries the parse location.
class ModelFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A model file in either matrix form {"A", "B"} or spectral form
/// {"lambda", "beta"}.  Spectral files also produce the diagonal model.
struct LoadedModel {
  StateSpaceModel model;
  std::optional<EigenStructure> spectral;
};

LoadedModel parse_model(const std::string& text, const std::string& origin = "<input>");
LoadedModel load_model(const std::string& path);

}  // namespace zonovol::cli

#endif  // ZONOVOL_TOOLS_MODEL_IO_HPP_
