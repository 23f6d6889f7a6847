#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "ncsphere/psi.hpp"

namespace ncsphere {

// Batch table kinds exposed by the CLI.
enum class TableKind { Structure, Reduced, Norms, Hahn, Cg, Classical };
enum class TableFormat { Csv, Json };

// Hard cap on the doubled label range; product cost grows factorially, so
// larger requests must acknowledge the runtime explicitly.
inline constexpr int kTableHardCap2 = 8;

struct TableRequest {
    TableKind kind = TableKind::Norms;
    int n2_max = 4;                  // doubled: labels with n <= n2_max/2
    std::vector<ParamPoint> points;  // evaluation points; empty -> symbolic
    int jobs = 1;                    // >1 enables the parallel kernels
    bool allow_large = false;        // required when n2_max > kTableHardCap2
    unsigned seed = 12345;           // classical-table angle sampling
    int samples = 5;                 // classical: Euler samples per label
};

// In-memory table: column names plus rows of exact strings (floats are
// pre-formatted).  Serialization is deterministic: stable row order, no
// locale dependence.
struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    std::string to_csv() const;
    std::string to_json() const;
};

// Generate the requested table.  Work is split over independent label
// tuples: with req.jobs > 1 the tuples are computed by an OpenMP pool and
// assembled in index order, so the output is byte-identical to the serial
// reference for any job count.  Throws CapExceeded when n2_max exceeds the
// hard cap without allow_large.
Table generate_table(const TableRequest& req);

// Serial reference implementation (always single-threaded), kept for
// byte-equality testing against the parallel path and for benchmarking.
Table generate_table_serial(const TableRequest& req);

// The Wigner-Eckart reduction seam used by the Reduced table: `candidates`
// maps (m1_2, m2_2) to the structure coefficient of the output label
// (n_2, r1_2 + r2_2, m1_2 + m2_2).  Returns the common ratio
// coefficient / CG(n1, n2, n; m1, m2) over all pairs with CG != 0, checking
// every pair; a disagreement, or a nonzero coefficient where CG = 0, throws
// InconsistentReduction.
Scalar wigner_eckart_reduce(
    int n1_2, int n2_2, int n_2,
    const std::map<std::pair<int, int>, Scalar>& candidates);

// Canonical fraction rendering of a doubled label: 4 -> "2", 3 -> "3/2".
std::string frac_str(int doubled);

// Canonical point descriptor used in the "point" column.
std::string point_str(const ParamPoint& p);

}  // namespace ncsphere
