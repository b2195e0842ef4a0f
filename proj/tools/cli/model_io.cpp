#include "model_io.hpp"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace zonovol::cli {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& origin, const std::string& what) {
  throw ModelFormatError(origin + ": " + what);
}

double number(const json& v, const std::string& origin, const std::string& where) {
  if (!v.is_number()) fail(origin, where + " must be a number");
  return v.get<double>();
}

std::vector<double> vector_field(const json& doc, const char* key, const std::string& origin) {
  if (!doc.contains(key)) fail(origin, std::string("missing field \"") + key + "\"");
  const json& v = doc.at(key);
  if (!v.is_array() || v.empty()) fail(origin, std::string("\"") + key + "\" must be a non-empty array");
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    out.push_back(number(v[i], origin, std::string(key) + "[" + std::to_string(i) + "]"));
  }
  return out;
}

// Rows of numbers.  A flat array is read as a single column.
Matrix matrix_field(const json& doc, const char* key, const std::string& origin) {
  if (!doc.contains(key)) fail(origin, std::string("missing field \"") + key + "\"");
  const json& v = doc.at(key);
  if (!v.is_array() || v.empty()) fail(origin, std::string("\"") + key + "\" must be a non-empty array");
  if (!v.front().is_array()) {
    const std::vector<double> col = vector_field(doc, key, origin);
    return Eigen::Map<const Vector>(col.data(), static_cast<Eigen::Index>(col.size()));
  }
  const std::size_t cols = v.front().size();
  Matrix M(static_cast<Eigen::Index>(v.size()), static_cast<Eigen::Index>(cols));
  for (std::size_t i = 0; i < v.size(); ++i) {
    const std::string row = std::string(key) + "[" + std::to_string(i) + "]";
    if (!v[i].is_array() || v[i].size() != cols || cols == 0) {
      fail(origin, row + " must be an array of " + std::to_string(cols) + " numbers");
    }
    for (std::size_t j = 0; j < cols; ++j) {
      M(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          number(v[i][j], origin, row + "[" + std::to_string(j) + "]");
    }
  }
  return M;
}

}  // namespace

LoadedModel parse_model(const std::string& text, const std::string& origin) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    // e.byte is 1-based; report line and column as well.
    std::size_t line = 1;
    std::size_t col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    std::ostringstream msg;
    msg << "JSON parse error at line " << line << ", column " << col << " (byte " << e.byte
        << ")";
    fail(origin, msg.str());
  }
  if (!doc.is_object()) fail(origin, "model must be a JSON object");

  try {
    if (doc.contains("lambda") || doc.contains("beta")) {
      if (doc.contains("A") || doc.contains("B")) {
        fail(origin, "use either {\"A\", \"B\"} or {\"lambda\", \"beta\"}, not both");
      }
      const std::vector<double> lambda = vector_field(doc, "lambda", origin);
      const std::vector<double> beta = vector_field(doc, "beta", origin);
      if (lambda.size() != beta.size()) fail(origin, "\"lambda\" and \"beta\" differ in length");
      EigenStructure eig = EigenStructure::from_spectrum(lambda, beta);
      const auto n = static_cast<Eigen::Index>(lambda.size());
      Matrix A = Matrix::Zero(n, n);
      Matrix B(n, 1);
      for (Eigen::Index i = 0; i < n; ++i) {
        A(i, i) = eig.lambdas[static_cast<std::size_t>(i)];
        B(i, 0) = eig.betas[static_cast<std::size_t>(i)];
      }
      return {StateSpaceModel(std::move(A), std::move(B)), std::move(eig)};
    }
    return {StateSpaceModel(matrix_field(doc, "A", origin), matrix_field(doc, "B", origin)),
            std::nullopt};
  } catch (const ArgumentError& e) {
    fail(origin, e.what());
  }
}

LoadedModel load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ModelFormatError(path + ": cannot open model file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_model(buf.str(), path);
}

}  // namespace zonovol::cli
