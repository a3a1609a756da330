#pragma once

#include <array>
#include <optional>
#include <string_view>

#include "entbound/tolerances.hpp"

namespace entbound {

enum class BoundId {
  EntropyGeLinear,  // S >= Tr(rho - rho^2)
  TraceProduct,     // |Tr(DA)| <= Tr|D| Tr|A|, D diagonal
  Thm1Upper,        // <A> <= Tr|A| (S + purity)
  Thm1Lower,        // <A> >= -Tr|A| (S + purity)
  Thm2Dim,          // var <= <A> Tr(A) (d - 1), A >= 0
  Thm3Full,         // var + <A>^2 <= Tr(A^2) (S + purity)
  Thm3Weak,         // var <= Tr(A^2) (S + purity)
  Cor1Product,      // sigma S <= f(d) sqrt(Tr(A^2))
  Cor2ProductN,     // prod var_i <= prod Tr(A_i^2) (S + purity)^n
  Cor2SumN,         // sum var_i <= Tr(sum A_i^2) (S + purity)
};

inline constexpr std::array<BoundId, 10> kAllBounds = {
    BoundId::EntropyGeLinear, BoundId::TraceProduct, BoundId::Thm1Upper,
    BoundId::Thm1Lower,       BoundId::Thm2Dim,      BoundId::Thm3Full,
    BoundId::Thm3Weak,        BoundId::Cor1Product,  BoundId::Cor2ProductN,
    BoundId::Cor2SumN,
};

/// Canonical upper-case name, e.g. "THM1_UPPER".
std::string_view to_string(BoundId id);
/// Accepts canonical names and CLI short forms ("thm1", "cor1", "entropy-linear", ...).
std::optional<BoundId> parse_bound_id(std::string_view text);

enum class BoundSense { Upper, Lower };

/// True for THM1_LOWER; every other bound reads lhs <= rhs.
BoundSense sense_of(BoundId id);

/// One evaluated inequality.
///
/// margin is rhs - lhs for upper bounds and lhs - rhs for lower bounds.
/// ratio is lhs / rhs whenever |rhs| > 1e-12, so ratio <= 1 iff the bound
/// holds in both senses; it is empty otherwise.
struct BoundCheck {
  BoundId id = BoundId::EntropyGeLinear;
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;
  std::optional<double> ratio;
  bool satisfied = true;
  int dim = 0;
  int n = 1;
  /// Index of the observable a per-observable check refers to.
  std::optional<int> observable;
};

BoundCheck make_check(BoundId id, double lhs, double rhs, int dim, int n = 1,
                      double rel_tol = tol::bound_margin);

}  // namespace entbound
