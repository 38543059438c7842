#pragma once

#include "aivf/rational.hpp"

namespace aivf {

/// Solves A x = b exactly. Rows are scaled to integers and eliminated with
/// fraction-free (Bareiss) steps; pivots are the smallest-magnitude nonzero
/// candidates, which only affects intermediate sizes. Throws
/// Error(SingularSystem) when A is singular.
RationalVector solve_exact(const RationalMatrix& a, const RationalVector& b);

}  // namespace aivf
