#include "json_writer.hpp"

#include <cmath>
#include <cstdio>

namespace zonovol::cli {

namespace {

using nlohmann::ordered_json;

void indent(std::ostream& out, int depth) {
  for (int i = 0; i < depth; ++i) out << "  ";
}

bool is_flat(const ordered_json& v) {
  for (const auto& e : v) {
    if (e.is_structured()) return false;
  }
  return true;
}

void write_value(std::ostream& out, const ordered_json& v, int depth) {
  switch (v.type()) {
    case ordered_json::value_t::number_float:
      out << format_number(v.get<double>());
      return;
    case ordered_json::value_t::object: {
      if (v.empty()) {
        out << "{}";
        return;
      }
      out << "{\n";
      std::size_t k = 0;
      for (auto it = v.begin(); it != v.end(); ++it, ++k) {
        indent(out, depth + 1);
        out << ordered_json(it.key()).dump() << ": ";
        write_value(out, it.value(), depth + 1);
        out << (k + 1 < v.size() ? ",\n" : "\n");
      }
      indent(out, depth);
      out << "}";
      return;
    }
    case ordered_json::value_t::array: {
      if (v.empty() || is_flat(v)) {
        out << "[";
        for (std::size_t i = 0; i < v.size(); ++i) {
          if (i) out << ", ";
          write_value(out, v[i], depth);
        }
        out << "]";
        return;
      }
      out << "[\n";
      for (std::size_t i = 0; i < v.size(); ++i) {
        indent(out, depth + 1);
        write_value(out, v[i], depth + 1);
        out << (i + 1 < v.size() ? ",\n" : "\n");
      }
      indent(out, depth);
      out << "]";
      return;
    }
    default:
      out << v.dump();
  }
}

}  // namespace

std::string format_number(double v) {
  if (!std::isfinite(v)) return "null";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_json(std::ostream& out, const ordered_json& doc) {
  write_value(out, doc, 0);
  out << "\n";
}

}  // namespace zonovol::cli
