#pragma once

#include <vector>

#include "ncsphere/scalar.hpp"

namespace ncsphere {

// Dense matrix over the exact scalar ring, stored row-major.
using ScalarRow = std::vector<Scalar>;
using ScalarRows = std::vector<ScalarRow>;

// Fraction-free (Bareiss-style) row echelon reduction.
//
// The scalar ring is an integral domain but not a field, so plain Gaussian
// elimination is unavailable.  Each elimination step replaces row_i by
// pivot*row_i - a_ik*row_k, which stays inside the ring; the accumulated
// pivot factor is divided back out exactly whenever every entry of the row
// is exactly divisible (all-or-none per row, so each row remains a uniform
// ring multiple of the "true" echelon row and rank/consistency questions are
// unaffected when a division is skipped).
//
// Returns the echelon form; rows are permuted in place, zero rows sink to
// the bottom.
ScalarRows row_echelon(ScalarRows m);

// Rank of the matrix over the fraction field of the scalar ring.
int matrix_rank(const ScalarRows& m);

// Consistency of the linear system whose augmented matrix is `aug`, with the
// first `unknowns` columns holding coefficients and the remaining columns
// holding (one or more) right-hand sides.  The system is consistent iff no
// echelon row vanishes on all unknown columns while remaining nonzero in a
// right-hand-side column.
bool system_consistent(const ScalarRows& aug, int unknowns);

}  // namespace ncsphere
