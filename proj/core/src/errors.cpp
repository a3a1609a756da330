#include "entbound/errors.hpp"

#include <cstdio>

namespace entbound {

namespace {
std::string format_asymmetry(double asymmetry, double tolerance) {
  char buf[128];
  std::snprintf(buf, sizeof buf, "NotHermitian: max |M_ij - conj(M_ji)| = %.3e exceeds %.1e",
                asymmetry, tolerance);
  return buf;
}
}  // namespace

NotHermitian::NotHermitian(double asymmetry, double tolerance)
    : Error(format_asymmetry(asymmetry, tolerance)), asymmetry_(asymmetry) {}

DimensionMismatch::DimensionMismatch(long expected, long actual)
    : Error("DimensionMismatch: expected dimension " + std::to_string(expected) + ", got " +
            std::to_string(actual)) {}

}  // namespace entbound
