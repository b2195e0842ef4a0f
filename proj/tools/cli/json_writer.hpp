#ifndef ZONOVOL_TOOLS_JSON_WRITER_HPP_
#define ZONOVOL_TOOLS_JSON_WRITER_HPP_

#include <ostream>
#include <string>

#include <nlohmann/json.hpp>

namespace zonovol::cli {

/// Floating-point values as %.17g so golden files round-trip exactly.
/// Non-finite values become null.
std::string format_number(double v);

/// Pretty-printed JSON with fixed 17-digit floats and insertion-ordered keys.
void write_json(std::ostream& out, const nlohmann::ordered_json& doc);

}  // namespace zonovol::cli

#endif  // ZONOVOL_TOOLS_JSON_WRITER_HPP_
