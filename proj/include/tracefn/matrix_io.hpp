#pragma once

// JSON matrix files: a single object with exactly the keys
//   n  : positive integer
//   re : n x n array of numbers
//   im : optional n x n array of numbers (absent means real symmetric)

#include <filesystem>
#include <string>

#include "json.hpp"
#include "tracefn/hermitian.hpp"

namespace tracefn {

/// Throws ParseError on schema violations and on non-Hermitian contents.
HermitianMatrix matrix_from_json(const nlohmann::json& doc);
/// `im` is written only when some imaginary part is nonzero.
nlohmann::json matrix_to_json(const HermitianMatrix& m);

/// Throws ParseError for unreadable files, malformed JSON, or invalid content;
/// the message names the file.
HermitianMatrix read_matrix_file(const std::filesystem::path& path);
void write_matrix_file(const std::filesystem::path& path, const HermitianMatrix& m);

}  // namespace tracefn
