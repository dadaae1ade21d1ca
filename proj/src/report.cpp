#include "tracefn/report.hpp"

#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>

namespace tracefn {

nlohmann::json number_json(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "+inf" : "-inf";
  return v;
}

nlohmann::json extended_json(const ExtendedReal& v) {
  return v.is_finite() ? number_json(v.value()) : nlohmann::json("+inf");
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "+inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  std::string s(buf, res.ptr);
  if (s.find_first_of(".e") == std::string::npos) s += ".0";
  return s;
}

std::string format_extended(const ExtendedReal& v) {
  return v.is_finite() ? format_number(v.value()) : "+inf";
}

std::string fnv1a_hex(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

const char* to_string(Provenance p) {
  switch (p) {
    case Provenance::formula: return "formula";
    case Provenance::finite_difference: return "finite_difference";
    case Provenance::quadrature: return "quadrature";
  }
  return "?";
}

void RunReport::add_result(const std::string& name, const nlohmann::json& value, Provenance provenance) {
  results[name] = {{"value", value}, {"provenance", to_string(provenance)}};
}

nlohmann::json RunReport::to_json() const {
  return {{"command", command},
          {"input_digest", input_digest},
          {"results", results},
          {"verdicts", verdicts},
          {"wall_time_seconds", wall_time_seconds}};
}

}  // namespace tracefn
