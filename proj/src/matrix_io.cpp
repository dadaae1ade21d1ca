#include "tracefn/matrix_io.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "tracefn/errors.hpp"

namespace tracefn {

namespace {

RMatrix read_square(const nlohmann::json& rows, Eigen::Index n, const char* key) {
  if (!rows.is_array() || static_cast<Eigen::Index>(rows.size()) != n)
    throw ParseError(std::string("'") + key + "' must be an array of n rows");
  RMatrix out(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& row = rows[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n)
      throw ParseError(std::string("'") + key + "' row " + std::to_string(i) + " must have n entries");
    for (Eigen::Index j = 0; j < n; ++j) {
      const auto& x = row[static_cast<std::size_t>(j)];
      if (!x.is_number())
        throw ParseError(std::string("'") + key + "' entry (" + std::to_string(i) + ", " + std::to_string(j) +
                         ") is not a number");
      out(i, j) = x.get<double>();
    }
  }
  return out;
}

}  // namespace

HermitianMatrix matrix_from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) throw ParseError("matrix file must contain a JSON object");
  static const std::set<std::string> allowed = {"n", "re", "im"};
  for (const auto& [key, value] : doc.items()) {
    if (!allowed.contains(key)) throw ParseError("unexpected key '" + key + "' (allowed: n, re, im)");
  }
  if (!doc.contains("n") || !doc.contains("re")) throw ParseError("matrix file needs keys 'n' and 're'");
  const auto& n_field = doc["n"];
  if (!n_field.is_number_integer() || n_field.get<long long>() < 1)
    throw ParseError("'n' must be a positive integer");
  const auto n = static_cast<Eigen::Index>(n_field.get<long long>());

  CMatrix m = read_square(doc["re"], n, "re").cast<Complex>();
  if (doc.contains("im")) m += Complex(0.0, 1.0) * read_square(doc["im"], n, "im").cast<Complex>();
  try {
    return HermitianMatrix(std::move(m));
  } catch (const Error& e) {
    throw ParseError(std::string("matrix is not a valid Hermitian matrix: ") + e.what());
  }
}

nlohmann::json matrix_to_json(const HermitianMatrix& m) {
  const Eigen::Index n = m.dim();
  nlohmann::json re = nlohmann::json::array();
  nlohmann::json im = nlohmann::json::array();
  bool complex = false;
  for (Eigen::Index i = 0; i < n; ++i) {
    nlohmann::json re_row = nlohmann::json::array();
    nlohmann::json im_row = nlohmann::json::array();
    for (Eigen::Index j = 0; j < n; ++j) {
      re_row.push_back(m(i, j).real());
      im_row.push_back(m(i, j).imag());
      complex = complex || m(i, j).imag() != 0.0;
    }
    re.push_back(std::move(re_row));
    im.push_back(std::move(im_row));
  }
  nlohmann::json doc = {{"n", n}, {"re", std::move(re)}};
  if (complex) doc["im"] = std::move(im);
  return doc;
}

HermitianMatrix read_matrix_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open matrix file " + path.string());
  try {
    return matrix_from_json(nlohmann::json::parse(in));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path.string() + ": malformed JSON: " + e.what());
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

void write_matrix_file(const std::filesystem::path& path, const HermitianMatrix& m) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write matrix file " + path.string());
  out << matrix_to_json(m).dump(2) << '\n';
  if (!out) throw ParseError("write failed for " + path.string());
}

}  // namespace tracefn
