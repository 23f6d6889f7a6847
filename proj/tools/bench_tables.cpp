// Benchmark: serial reference vs parallel table generation.  Times the
// structure-constant table at a symbolic and a level point, checks that every
// parallel run is byte-identical to the serial reference, and prints the
// speedups.  Exits nonzero on any byte mismatch.
//
// Usage: bench_tables [nmax2] [repeat]
//   nmax2   doubled label cap (default 4, i.e. n <= 2)
//   repeat  timed repetitions per configuration (default 3, best-of)

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "ncsphere/psi.hpp"
#include "ncsphere/tables.hpp"

using namespace ncsphere;

namespace {

template <typename Fn>
double best_of(int repeat, std::string& out, Fn fn) {
    double best = 1e100;
    for (int i = 0; i < repeat; ++i) {
        const auto t0 = std::chrono::steady_clock::now();
        out = fn();
        const auto t1 = std::chrono::steady_clock::now();
        best = std::min(best,
                        std::chrono::duration<double>(t1 - t0).count());
    }
    return best;
}

}  // namespace

int main(int argc, char** argv) {
    TableRequest req;
    req.kind = TableKind::Structure;
    req.n2_max = argc > 1 ? std::atoi(argv[1]) : 4;
    req.allow_large = true;
    req.points = {ParamPoint::symbolic(), ParamPoint::level_at(4, Rational(1))};
    const int repeat = argc > 2 ? std::atoi(argv[2]) : 3;

    // Warm the shared caches once so the serial baseline is not charged for
    // first-touch construction.
    {
        TableRequest warm = req;
        (void)generate_table_serial(warm);
    }

    std::string serial_out;
    const double t_serial =
        best_of(repeat, serial_out, [&] { return generate_table_serial(req).to_csv(); });
    std::printf("structure table, nmax = %s, 2 points, %zu data rows\n",
                frac_str(req.n2_max).c_str(),
                serial_out.empty() ? 0 : (size_t)0 + generate_table_serial(req).rows.size());
    std::printf("%-22s %10.4f s   (reference)\n", "serial", t_serial);

    bool all_equal = true;
    for (int jobs : {2, 4, 8}) {
        TableRequest par = req;
        par.jobs = jobs;
        std::string out;
        const double t =
            best_of(repeat, out, [&] { return generate_table(par).to_csv(); });
        const bool equal = out == serial_out;
        all_equal = all_equal && equal;
        std::printf("%-22s %10.4f s   speedup %5.2fx   bytes %s\n",
                    ("parallel, jobs = " + std::to_string(jobs)).c_str(), t,
                    t > 0 ? t_serial / t : 0.0,
                    equal ? "identical" : "MISMATCH");
    }
    if (!all_equal) {
        std::fprintf(stderr, "byte mismatch between serial and parallel runs\n");
        return 1;
    }
    return 0;
}
