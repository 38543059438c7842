#pragma once

#include "aivf/rational.hpp"

namespace aivf {

struct LpSolution {
  RationalVector z;
  Rational objective;
};

/// maximize c.z subject to A z <= b, z >= 0, in exact arithmetic.
/// Two-phase dense tableau simplex with Bland's rule, so degenerate pivots
/// cannot cycle. Throws LpInfeasible or LpUnbounded.
LpSolution lp_maximize(const RationalMatrix& a, const RationalVector& b, const RationalVector& c);

}  // namespace aivf
