#include "entbound/bound_check.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <string>

namespace entbound {

std::string_view to_string(BoundId id) {
  switch (id) {
    case BoundId::EntropyGeLinear: return "ENTROPY_GE_LINEAR";
    case BoundId::TraceProduct: return "TRACE_PRODUCT";
    case BoundId::Thm1Upper: return "THM1_UPPER";
    case BoundId::Thm1Lower: return "THM1_LOWER";
    case BoundId::Thm2Dim: return "THM2_DIM";
    case BoundId::Thm3Full: return "THM3_FULL";
    case BoundId::Thm3Weak: return "THM3_WEAK";
    case BoundId::Cor1Product: return "COR1_PRODUCT";
    case BoundId::Cor2ProductN: return "COR2_PRODUCT_N";
    case BoundId::Cor2SumN: return "COR2_SUM_N";
  }
  return "UNKNOWN";
}

std::optional<BoundId> parse_bound_id(std::string_view text) {
  std::string key;
  for (char c : text) {
    key.push_back(c == '-' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
  }
  for (BoundId id : kAllBounds) {
    if (to_string(id) == key) return id;
  }
  struct Alias {
    std::string_view name;
    BoundId id;
  };
  static constexpr Alias aliases[] = {
      {"ENTROPY_LINEAR", BoundId::EntropyGeLinear}, {"EQ2", BoundId::EntropyGeLinear},
      {"TRACE_PRODUCT", BoundId::TraceProduct},     {"EQ4", BoundId::TraceProduct},
      {"THM1", BoundId::Thm1Upper},                 {"THM1_LOWER", BoundId::Thm1Lower},
      {"THM2", BoundId::Thm2Dim},                   {"THM3", BoundId::Thm3Full},
      {"THM3_WEAK", BoundId::Thm3Weak},             {"COR1", BoundId::Cor1Product},
      {"COR2", BoundId::Cor2ProductN},              {"COR2_PRODUCT", BoundId::Cor2ProductN},
      {"COR2_SUM", BoundId::Cor2SumN},
  };
  for (const auto& a : aliases) {
    if (a.name == key) return a.id;
  }
  return std::nullopt;
}

BoundSense sense_of(BoundId id) {
  return id == BoundId::Thm1Lower ? BoundSense::Lower : BoundSense::Upper;
}

BoundCheck make_check(BoundId id, double lhs, double rhs, int dim, int n, double rel_tol) {
  BoundCheck c;
  c.id = id;
  c.lhs = lhs;
  c.rhs = rhs;
  c.dim = dim;
  c.n = n;
  c.margin = sense_of(id) == BoundSense::Upper ? rhs - lhs : lhs - rhs;
  // + 0.0 turns a -0 ratio into +0.
  if (std::abs(rhs) > tol::ratio_floor) c.ratio = lhs / rhs + 0.0;
  c.satisfied = c.margin >= -rel_tol * std::max(1.0, std::abs(rhs));
  return c;
}

}  // namespace entbound
