#include "ncsphere/tables.hpp"

#include <cmath>
#include <complex>
#include <cstdio>
#include <exception>
#include <functional>
#include <random>
#include <sstream>

#include "ncsphere/errors.hpp"
#include "ncsphere/special.hpp"

#if defined(NCSPHERE_HAVE_OPENMP)
#include <omp.h>
#endif

namespace ncsphere {

namespace {

std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string fmt_complex(const std::complex<double>& z) {
    if (z.imag() == 0.0) return fmt_double(z.real());
    return fmt_double(z.real()) + (z.imag() < 0 ? "" : "+") +
           fmt_double(z.imag()) + "i";
}

bool point_is_numeric(const ParamPoint& p) {
    return p.eps_known() && p.kind() != ParamPoint::Kind::Symbolic;
}

// Float rendering of an exact coefficient at a numeric point; empty when the
// point leaves symbols unbound.
std::string float_str(const Scalar& c, const ParamPoint& p) {
    if (!point_is_numeric(p)) return "";
    const double e = to_double(p.eps());
    const double rh = p.rhat().to_complex(e, 0.0).real();
    return fmt_complex(c.to_complex(e, rh));
}

std::string rational_str(const Rational& q) {
    std::ostringstream os;
    os << q;
    return os.str();
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out += '"';
        out += ch;
    }
    out += "\"";
    return out;
}

std::vector<BasisLabel> labels_up_to(int n2max) {
    std::vector<BasisLabel> out;
    for (int n2 = 0; n2 <= n2max; ++n2) {
        for (int r2 = -n2; r2 <= n2; r2 += 2) {
            for (int m2 = -n2; m2 <= n2; m2 += 2) out.emplace_back(n2, r2, m2);
        }
    }
    return out;
}

PsiElement project(const WElement& w, const ParamPoint& p) {
    return p.kind() == ParamPoint::Kind::Symbolic ? rho_symbolic(w) : rho(w, p);
}

using Rows = std::vector<std::vector<std::string>>;

// ----- per-kind row generators (one work item -> zero or more rows) -------

Rows structure_rows(const BasisLabel& l1, const BasisLabel& l2,
                    const ParamPoint& p) {
    Rows rows;
    const PsiElement prod =
        project(xi(l1) * xi(l2), p);
    for (const auto& [l, c] : prod.coeffs()) {
        // Selection rules are structural facts of the product; violation
        // would be an engine bug, surfaced rather than silently emitted.
        if (l.m2 != l1.m2 + l2.m2 || l.r2 != l1.r2 + l2.r2 ||
            l.n2 < std::abs(l1.n2 - l2.n2) || l.n2 > l1.n2 + l2.n2) {
            throw InconsistentReduction("selection rule violated at " +
                                        l.to_string());
        }
        rows.push_back({frac_str(l1.n2), frac_str(l1.r2), frac_str(l1.m2),
                        frac_str(l2.n2), frac_str(l2.r2), frac_str(l2.m2),
                        frac_str(l.n2), frac_str(l.r2), frac_str(l.m2),
                        c.to_string(), float_str(c, p), point_str(p)});
    }
    return rows;
}

Rows reduced_rows(int n1_2, int r1_2, int n2_2, int r2_2, const ParamPoint& p) {
    Rows rows;
    const int r_2 = r1_2 + r2_2;
    // Structure coefficients for every (m1, m2) pair, grouped by output n.
    std::map<int, std::map<std::pair<int, int>, Scalar>> cand_by_n;
    for (int n_2 = std::abs(n1_2 - n2_2); n_2 <= n1_2 + n2_2; n_2 += 2) {
        if (BasisLabel::valid(n_2, r_2, n_2)) cand_by_n[n_2];
    }
    if (cand_by_n.empty()) return rows;
    for (int m1_2 = -n1_2; m1_2 <= n1_2; m1_2 += 2) {
        for (int m2_2 = -n2_2; m2_2 <= n2_2; m2_2 += 2) {
            const int m_2 = m1_2 + m2_2;
            const PsiElement prod = project(
                xi(BasisLabel(n1_2, r1_2, m1_2)) * xi(BasisLabel(n2_2, r2_2, m2_2)),
                p);
            for (auto& [n_2, cands] : cand_by_n) {
                if (std::abs(m_2) > n_2) continue;
                Scalar c;
                const auto& cm = prod.coeffs();
                const auto it = cm.find(BasisLabel(n_2, r_2, m_2));
                if (it != cm.end()) c = it->second;
                cands.emplace(std::make_pair(m1_2, m2_2), c);
            }
        }
    }
    for (const auto& [n_2, cands] : cand_by_n) {
        const Scalar value = wigner_eckart_reduce(n1_2, n2_2, n_2, cands);
        if (value.is_zero()) continue;
        rows.push_back({frac_str(n1_2), frac_str(n2_2), frac_str(n_2),
                        frac_str(r1_2), frac_str(r2_2), value.to_string(),
                        float_str(value, p), point_str(p)});
    }
    return rows;
}

Rows norm_rows(int n2, int r2, const ParamPoint& p) {
    const Scalar ns = norm_sq(n2, r2, p);
    std::string sign;
    try {
        sign = std::to_string(norm_sign(n2, r2, p));
    } catch (const SymbolicPointUnsupported&) {
        sign = "";
    }
    return {{frac_str(n2), frac_str(r2), ns.to_string(), sign,
             float_str(ns, p), point_str(p)}};
}

Rows hahn_rows(const BasisLabel& l, const ParamPoint& p) {
    Rows rows;
    const ReducedSector sec = xi_closed_form(l.n2, l.r2, l.m2, p);
    for (std::size_t j = 0; j < sec.q.size(); ++j) {
        if (sec.q[j].is_zero()) continue;
        rows.push_back({frac_str(l.n2), frac_str(l.r2), frac_str(l.m2),
                        std::to_string(j), sec.q[j].to_string(),
                        float_str(sec.q[j], p), point_str(p)});
    }
    return rows;
}

Rows cg_rows(int j1_2, int j2_2) {
    Rows rows;
    for (int j_2 = std::abs(j1_2 - j2_2); j_2 <= j1_2 + j2_2; j_2 += 2) {
        for (int m1_2 = -j1_2; m1_2 <= j1_2; m1_2 += 2) {
            for (int m2_2 = -j2_2; m2_2 <= j2_2; m2_2 += 2) {
                const int m_2 = m1_2 + m2_2;
                if (std::abs(m_2) > j_2) continue;
                const Scalar v =
                    clebsch_gordan(j1_2, j2_2, j_2, m1_2, m2_2, m_2);
                if (v.is_zero()) continue;
                rows.push_back({frac_str(j1_2), frac_str(j2_2), frac_str(j_2),
                                frac_str(m1_2), frac_str(m2_2), frac_str(m_2),
                                v.to_string(),
                                fmt_double(v.to_complex(1.0, 1.0).real())});
            }
        }
    }
    return rows;
}

Rows classical_rows(const BasisLabel& l, unsigned seed, int samples) {
    Rows rows;
    // Deterministic portable angles: raw mt19937 draws mapped to [0, 2pi).
    std::mt19937 gen(seed ^ (static_cast<unsigned>(l.n2) << 16) ^
                     (static_cast<unsigned>(l.r2 + 64) << 8) ^
                     static_cast<unsigned>(l.m2 + 64));
    const double two_pi = 8.0 * std::atan(1.0);
    auto draw = [&] {
        return two_pi * (static_cast<double>(gen()) / 4294967296.0);
    };
    for (int s = 0; s < samples; ++s) {
        EulerAngles ang{draw(), draw() / 2.0, draw()};  // beta in [0, pi)
        const std::complex<double> direct = xi_classical(l.n2, l.r2, l.m2, 1.0, ang);
        const std::complex<double> closed =
            xi_classical_closed(l.n2, l.r2, l.m2, 1.0, ang);
        rows.push_back({frac_str(l.n2), frac_str(l.r2), frac_str(l.m2),
                        fmt_double(ang.alpha), fmt_double(ang.beta),
                        fmt_double(ang.gamma), fmt_double(direct.real()),
                        fmt_double(direct.imag()), fmt_double(closed.real()),
                        fmt_double(closed.imag()),
                        fmt_double(std::abs(direct - closed))});
    }
    return rows;
}

// ----- request -> work items ----------------------------------------------

std::vector<ParamPoint> effective_points(const TableRequest& req) {
    if (req.points.empty()) return {ParamPoint::symbolic()};
    return req.points;
}

struct Plan {
    std::vector<std::string> columns;
    std::vector<std::function<Rows()>> items;
};

Plan make_plan(const TableRequest& req) {
    Plan plan;
    const auto points = effective_points(req);
    const int n2max = req.n2_max;
    switch (req.kind) {
        case TableKind::Structure: {
            plan.columns = {"n1", "r1", "m1", "n2", "r2", "m2",
                            "n",  "r",  "m",  "coeff", "float", "point"};
            const auto ls = labels_up_to(n2max);
            for (const auto& p : points) {
                for (const auto& l1 : ls) {
                    for (const auto& l2 : ls) {
                        plan.items.push_back(
                            [l1, l2, p] { return structure_rows(l1, l2, p); });
                    }
                }
            }
            break;
        }
        case TableKind::Reduced: {
            plan.columns = {"n1", "n2", "n", "r1", "r2", "R", "float", "point"};
            for (const auto& p : points) {
                for (int n1_2 = 0; n1_2 <= n2max; ++n1_2) {
                    for (int n2_2 = 0; n2_2 <= n2max; ++n2_2) {
                        for (int r1_2 = -n1_2; r1_2 <= n1_2; r1_2 += 2) {
                            for (int r2_2 = -n2_2; r2_2 <= n2_2; r2_2 += 2) {
                                plan.items.push_back([=] {
                                    return reduced_rows(n1_2, r1_2, n2_2, r2_2, p);
                                });
                            }
                        }
                    }
                }
            }
            break;
        }
        case TableKind::Norms: {
            plan.columns = {"n", "r", "norm_sq", "sign", "float", "point"};
            for (const auto& p : points) {
                for (int n2 = 0; n2 <= n2max; ++n2) {
                    for (int r2 = -n2; r2 <= n2; r2 += 2) {
                        plan.items.push_back([=] { return norm_rows(n2, r2, p); });
                    }
                }
            }
            break;
        }
        case TableKind::Hahn: {
            plan.columns = {"n", "r", "m", "j", "q_j", "float", "point"};
            for (const auto& p : points) {
                for (const auto& l : labels_up_to(n2max)) {
                    plan.items.push_back([l, p] { return hahn_rows(l, p); });
                }
            }
            break;
        }
        case TableKind::Cg: {
            plan.columns = {"j1", "j2", "j", "m1", "m2", "m", "value", "float"};
            for (int j1_2 = 0; j1_2 <= n2max; ++j1_2) {
                for (int j2_2 = 0; j2_2 <= n2max; ++j2_2) {
                    plan.items.push_back([=] { return cg_rows(j1_2, j2_2); });
                }
            }
            break;
        }
        case TableKind::Classical: {
            plan.columns = {"n", "r", "m", "alpha", "beta", "gamma",
                            "re_direct", "im_direct", "re_closed", "im_closed",
                            "abs_diff"};
            for (const auto& l : labels_up_to(n2max)) {
                plan.items.push_back(
                    [l, seed = req.seed, samples = req.samples] {
                        return classical_rows(l, seed, samples);
                    });
            }
            break;
        }
    }
    return plan;
}

void check_cap(const TableRequest& req) {
    if (req.n2_max < 0) throw InvalidLabel("n_max must be >= 0");
    if (req.n2_max > kTableHardCap2 && !req.allow_large) {
        throw CapExceeded("requested n_max " + frac_str(req.n2_max) +
                          " exceeds the hard cap " + frac_str(kTableHardCap2) +
                          "; pass allow_large to acknowledge the runtime");
    }
}

// Warm the xi representative cache single-threaded so the parallel phase
// reads it without contention.
void warm_cache(const TableRequest& req) {
    if (req.kind == TableKind::Cg || req.kind == TableKind::Classical) return;
    for (const auto& l : labels_up_to(req.n2_max)) (void)xi(l);
}

Table assemble(const Plan& plan, std::vector<Rows>& results) {
    Table t;
    t.columns = plan.columns;
    for (auto& rs : results) {
        for (auto& r : rs) t.rows.push_back(std::move(r));
    }
    return t;
}

}  // namespace

std::string frac_str(int doubled) {
    if (doubled % 2 == 0) return std::to_string(doubled / 2);
    return std::to_string(doubled) + "/2";
}

std::string point_str(const ParamPoint& p) {
    switch (p.kind()) {
        case ParamPoint::Kind::Symbolic:
            return "symbolic";
        case ParamPoint::Kind::Level:
            if (!p.eps_known()) return "k=" + frac_str(p.k2());
            return "eps=" + rational_str(p.eps()) + ";k=" + frac_str(p.k2());
        case ParamPoint::Kind::Numeric: {
            const Scalar rh = p.rhat();
            const auto q = rh.as_rational();
            return "eps=" + rational_str(p.eps()) +
                   ";rhat=" + (q ? rational_str(*q) : rh.to_string());
        }
    }
    return "";
}

Scalar wigner_eckart_reduce(
    int n1_2, int n2_2, int n_2,
    const std::map<std::pair<int, int>, Scalar>& candidates) {
    bool have = false;
    Scalar ratio;
    for (const auto& [ms, coeff] : candidates) {
        const int m_2 = ms.first + ms.second;
        const Scalar cg =
            clebsch_gordan(n1_2, n2_2, n_2, ms.first, ms.second, m_2);
        if (cg.is_zero()) {
            if (!coeff.is_zero()) {
                throw InconsistentReduction(
                    "nonzero coefficient at vanishing CG, (m1,m2)=(" +
                    frac_str(ms.first) + "," + frac_str(ms.second) + ")");
            }
            continue;
        }
        const Scalar r = coeff * cg.inverse_single();
        if (!have) {
            ratio = r;
            have = true;
        } else if (!(r == ratio)) {
            throw InconsistentReduction(
                "m-dependent reduced element at (n1,n2,n)=(" +
                frac_str(n1_2) + "," + frac_str(n2_2) + "," + frac_str(n_2) +
                "), (m1,m2)=(" + frac_str(ms.first) + "," +
                frac_str(ms.second) + ")");
        }
    }
    if (!have) {
        throw InconsistentReduction("no CG support for (n1,n2,n)=(" +
                                    frac_str(n1_2) + "," + frac_str(n2_2) +
                                    "," + frac_str(n_2) + ")");
    }
    return ratio;
}

std::string Table::to_csv() const {
    std::string out;
    for (std::size_t j = 0; j < columns.size(); ++j) {
        if (j) out += ',';
        out += csv_field(columns[j]);
    }
    out += '\n';
    for (const auto& row : rows) {
        for (std::size_t j = 0; j < row.size(); ++j) {
            if (j) out += ',';
            out += csv_field(row[j]);
        }
        out += '\n';
    }
    return out;
}

std::string Table::to_json() const {
    std::string out = "{\n  \"columns\": [";
    for (std::size_t j = 0; j < columns.size(); ++j) {
        if (j) out += ", ";
        out += '"' + columns[j] + '"';
    }
    out += "],\n  \"rows\": [";
    for (std::size_t i = 0; i < rows.size(); ++i) {
        out += (i ? ",\n    [" : "\n    [");
        for (std::size_t j = 0; j < rows[i].size(); ++j) {
            if (j) out += ", ";
            std::string esc;
            for (char ch : rows[i][j]) {
                if (ch == '"' || ch == '\\') esc += '\\';
                esc += ch;
            }
            out += '"' + esc + '"';
        }
        out += ']';
    }
    out += "\n  ]\n}\n";
    return out;
}

Table generate_table_serial(const TableRequest& req) {
    check_cap(req);
    Plan plan = make_plan(req);
    std::vector<Rows> results(plan.items.size());
    for (std::size_t i = 0; i < plan.items.size(); ++i) {
        results[i] = plan.items[i]();
    }
    return assemble(plan, results);
}

Table generate_table(const TableRequest& req) {
    if (req.jobs <= 1) return generate_table_serial(req);
    check_cap(req);
    warm_cache(req);
    Plan plan = make_plan(req);
    std::vector<Rows> results(plan.items.size());
#if defined(NCSPHERE_HAVE_OPENMP)
    // Exceptions must not escape the parallel region; capture and rethrow.
    std::exception_ptr error;
    const auto n = static_cast<long>(plan.items.size());
#pragma omp parallel for schedule(dynamic) num_threads(req.jobs)
    for (long i = 0; i < n; ++i) {
        try {
            results[static_cast<std::size_t>(i)] =
                plan.items[static_cast<std::size_t>(i)]();
        } catch (...) {
#pragma omp critical(ncsphere_tables_error)
            if (!error) error = std::current_exception();
        }
    }
    if (error) std::rethrow_exception(error);
#else
    for (std::size_t i = 0; i < plan.items.size(); ++i) {
        results[i] = plan.items[i]();
    }
#endif
    return assemble(plan, results);
}

}  // namespace ncsphere
