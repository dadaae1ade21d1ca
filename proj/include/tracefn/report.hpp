#pragma once

// Machine-readable run reports. Keys are emitted in sorted order so that two
// runs of the same command differ only in the wall-time field.

#include <string>
#include <string_view>

#include "json.hpp"
#include "tracefn/trace_functional.hpp"

namespace tracefn {

/// A finite double as a JSON number; ±∞ and NaN as the strings "+inf",
/// "-inf", "nan".
nlohmann::json number_json(double v);
nlohmann::json extended_json(const ExtendedReal& v);

/// Shortest round-trip decimal form, with ".0" appended to integral values.
std::string format_number(double v);
std::string format_extended(const ExtendedReal& v);

/// 64-bit FNV-1a, as 16 lowercase hex digits.
std::string fnv1a_hex(std::string_view bytes);

enum class Provenance { formula, finite_difference, quadrature };
const char* to_string(Provenance p);

struct RunReport {
  std::string command;
  std::string input_digest;
  nlohmann::json results = nlohmann::json::object();
  nlohmann::json verdicts = nlohmann::json::object();
  double wall_time_seconds = 0.0;

  void add_result(const std::string& name, const nlohmann::json& value, Provenance provenance);
  nlohmann::json to_json() const;
};

}  // namespace tracefn
