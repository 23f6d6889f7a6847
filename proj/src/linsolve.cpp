#include "ncsphere/linsolve.hpp"

#include <cstddef>
#include <utility>

#include "ncsphere/errors.hpp"

namespace ncsphere {

namespace {

// Divide every entry of `row` by `d` if all entries are exactly divisible;
// otherwise leave the row untouched.  Partial division would destroy the
// property that the stored row is a uniform ring multiple of the reduced row,
// so it is all-or-none.
void divide_row_if_exact(ScalarRow& row, const Scalar& d) {
    if (d.is_zero() || d == Scalar::one()) return;
    ScalarRow out;
    out.reserve(row.size());
    for (const Scalar& e : row) {
        if (e.is_zero()) {
            out.push_back(e);
            continue;
        }
        try {
            out.push_back(e.div_exact(d));
        } catch (const NotDivisible&) {
            return;
        }
    }
    row = std::move(out);
}

}  // namespace

ScalarRows row_echelon(ScalarRows m) {
    if (m.empty()) return m;
    const std::size_t rows = m.size();
    std::size_t cols = 0;
    for (const auto& r : m) {
        if (r.size() > cols) cols = r.size();
    }
    for (auto& r : m) r.resize(cols, Scalar::zero());

    std::size_t top = 0;
    for (std::size_t col = 0; col < cols && top < rows; ++col) {
        // Prefer a single-term pivot: division by it always succeeds exactly.
        std::size_t piv = rows;
        for (std::size_t i = top; i < rows; ++i) {
            if (m[i][col].is_zero()) continue;
            if (piv == rows) piv = i;
            if (m[i][col].is_single_term()) {
                piv = i;
                break;
            }
        }
        if (piv == rows) continue;
        std::swap(m[top], m[piv]);

        const Scalar pivot = m[top][col];
        for (std::size_t i = top + 1; i < rows; ++i) {
            if (m[i][col].is_zero()) continue;
            const Scalar factor = m[i][col];
            for (std::size_t j = 0; j < cols; ++j) {
                m[i][j] = m[i][j] * pivot - m[top][j] * factor;
            }
            // Undo the pivot blow-up where exactly possible to keep the
            // entries small; correctness does not depend on it succeeding.
            divide_row_if_exact(m[i], pivot);
        }
        ++top;
    }
    return m;
}

int matrix_rank(const ScalarRows& m) {
    ScalarRows e = row_echelon(m);
    int rank = 0;
    for (const auto& row : e) {
        for (const auto& entry : row) {
            if (!entry.is_zero()) {
                ++rank;
                break;
            }
        }
    }
    return rank;
}

bool system_consistent(const ScalarRows& aug, int unknowns) {
    ScalarRows e = row_echelon(aug);
    for (const auto& row : e) {
        bool lhs_zero = true;
        for (int j = 0; j < unknowns && j < static_cast<int>(row.size()); ++j) {
            if (!row[static_cast<std::size_t>(j)].is_zero()) {
                lhs_zero = false;
                break;
            }
        }
        if (!lhs_zero) continue;
        for (std::size_t j = static_cast<std::size_t>(unknowns); j < row.size(); ++j) {
            if (!row[j].is_zero()) return false;
        }
    }
    return true;
}

}  // namespace ncsphere
