// Tests for batch table generation: content pins, selection rules,
// Wigner-Eckart reduction, determinism of serial vs parallel runs, caps,
// and output formats.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>

#include <algorithm>
#include <cstdlib>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "ncsphere/errors.hpp"
#include "ncsphere/psi.hpp"
#include "ncsphere/special.hpp"
#include "ncsphere/tables.hpp"

#include "support/testutil.hpp"

using namespace ncsphere;

namespace {

// Parse a half-integer rendered by frac_str back into doubled form.
int unfrac(const std::string& s) {
    const auto slash = s.find('/');
    if (slash == std::string::npos) return 2 * std::atoi(s.c_str());
    return std::atoi(s.substr(0, slash).c_str());
}

int col(const Table& t, const std::string& name) {
    const auto it = std::find(t.columns.begin(), t.columns.end(), name);
    REQUIRE(it != t.columns.end());
    return static_cast<int>(it - t.columns.begin());
}

}  // namespace

TEST_CASE("fraction and point rendering") {
    CHECK(frac_str(0) == "0");
    CHECK(frac_str(4) == "2");
    CHECK(frac_str(3) == "3/2");
    CHECK(frac_str(-1) == "-1/2");
    CHECK(frac_str(-6) == "-3");

    CHECK(point_str(ParamPoint::symbolic()) == "symbolic");
    CHECK(point_str(ParamPoint::level(4)) == "k=2");
    CHECK(point_str(ParamPoint::level_at(4, Rational(1))) == "eps=1;k=2");
    CHECK(point_str(ParamPoint::level_at(3, Rational(1, 3))) ==
          "eps=1/3;k=3/2");
    CHECK(point_str(ParamPoint::numeric(Rational(1, 2), Rational(5, 2))) ==
          "eps=1/2;rhat=5/2");
}

TEST_CASE("structure table: unit products, selection rules, known entry") {
    TableRequest req;
    req.kind = TableKind::Structure;
    req.n2_max = 2;
    req.points = {ParamPoint::symbolic()};
    const Table t = generate_table(req);
    REQUIRE(!t.rows.empty());

    const int cn1 = col(t, "n1"), cr1 = col(t, "r1"), cm1 = col(t, "m1");
    const int cn2 = col(t, "n2"), cr2 = col(t, "r2"), cm2 = col(t, "m2");
    const int cn = col(t, "n"), cr = col(t, "r"), cm = col(t, "m");
    const int cc = col(t, "coeff");

    int left_unit_rows = 0;
    int right_unit_rows = 0;
    std::set<std::vector<std::string>> seen;
    for (const auto& row : t.rows) {
        // Additive quantum numbers and the triangle bound.
        CHECK(unfrac(row[cm]) == unfrac(row[cm1]) + unfrac(row[cm2]));
        CHECK(unfrac(row[cr]) == unfrac(row[cr1]) + unfrac(row[cr2]));
        CHECK(unfrac(row[cn]) >= std::abs(unfrac(row[cm])));
        CHECK(unfrac(row[cn]) <= unfrac(row[cn1]) + unfrac(row[cn2]));
        CHECK(unfrac(row[cn]) >=
              std::abs(unfrac(row[cn1]) - unfrac(row[cn2])));
        CHECK(!Scalar::parse(row[cc]).is_zero());
        // Multiplication by the identity element is trivial on both sides.
        if (row[cn1] == "0") {
            ++left_unit_rows;
            CHECK(row[cn] == row[cn2]);
            CHECK(row[cr] == row[cr2]);
            CHECK(row[cm] == row[cm2]);
            CHECK(row[cc] == "1");
        }
        if (row[cn2] == "0") {
            ++right_unit_rows;
            CHECK(row[cn] == row[cn1]);
            CHECK(row[cr] == row[cr1]);
            CHECK(row[cm] == row[cm1]);
            CHECK(row[cc] == "1");
        }
        CHECK(seen.insert(row).second);  // no duplicate rows
    }
    // 14 labels with n <= 1, so 14 unit rows on each side (minus the double
    // count of 1*1).
    CHECK(left_unit_rows == 14);
    CHECK(right_unit_rows == 14);

    // The highest-weight square: only one output component, coefficient 1.
    int hw_rows = 0;
    for (const auto& row : t.rows) {
        if (row[cn1] == "1" && row[cr1] == "0" && row[cm1] == "1" &&
            row[cn2] == "1" && row[cr2] == "0" && row[cm2] == "1") {
            ++hw_rows;
            CHECK(row[cn] == "2");
            CHECK(row[cr] == "0");
            CHECK(row[cm] == "2");
            CHECK(row[cc] == "1");
        }
    }
    CHECK(hw_rows == 1);
}

TEST_CASE("structure table: serial, parallel, and repeated runs agree byte for byte") {
    TableRequest req;
    req.kind = TableKind::Structure;
    req.n2_max = 2;
    req.points = {ParamPoint::level_at(4, Rational(1)),
                  ParamPoint::symbolic()};

    const Table serial = generate_table_serial(req);
    const std::string base_csv = serial.to_csv();
    const std::string base_json = serial.to_json();
    REQUIRE(!serial.rows.empty());

    const Table serial_again = generate_table_serial(req);
    CHECK(serial_again.to_csv() == base_csv);

    for (int jobs : {2, 4}) {
        TableRequest par = req;
        par.jobs = jobs;
        const Table tp = generate_table(par);
        CHECK(tp.to_csv() == base_csv);
        CHECK(tp.to_json() == base_json);
    }
}

TEST_CASE("table caps") {
    TableRequest req;
    req.kind = TableKind::Norms;
    req.n2_max = 9;
    CHECK_THROWS_AS(generate_table(req), CapExceeded);
    req.n2_max = -1;
    CHECK_THROWS_AS(generate_table(req), InvalidLabel);

    // Acknowledging the cap makes large requests legal.
    TableRequest big;
    big.kind = TableKind::Cg;
    big.n2_max = 9;
    big.allow_large = true;
    const Table t = generate_table(big);
    CHECK(!t.rows.empty());
}

TEST_CASE("reduced table: trivial couplings are 1 and reduction is m-independent") {
    TableRequest req;
    req.kind = TableKind::Reduced;
    req.n2_max = 3;
    req.points = {ParamPoint::symbolic(), ParamPoint::level_at(4, Rational(1)),
                  ParamPoint::numeric(Rational(1, 3), Rational(5, 2))};
    // Internally every (m1, m2) pair must reduce to the same element; a
    // mismatch would throw.
    Table t;
    REQUIRE_NOTHROW(t = generate_table(req));
    REQUIRE(!t.rows.empty());

    const int cn1 = col(t, "n1"), cn2 = col(t, "n2"), cn = col(t, "n");
    const int cR = col(t, "R");
    int trivial = 0;
    for (const auto& row : t.rows) {
        if (row[cn1] == "0" || row[cn2] == "0") {
            ++trivial;
            CHECK(row[cn] == (row[cn1] == "0" ? row[cn2] : row[cn1]));
            CHECK(row[cR] == "1");
        }
    }
    CHECK(trivial > 0);
}

TEST_CASE("wigner_eckart_reduce: recovery, corruption, missing support") {
    // Candidates proportional to genuine Clebsch-Gordan coefficients reduce
    // to the constant of proportionality.
    std::map<std::pair<int, int>, Scalar> cands;
    const Scalar reduced = Scalar(Rational(3, 2)) * Scalar::rhat();
    for (int m1_2 = -2; m1_2 <= 2; m1_2 += 2) {
        for (int m2_2 = -2; m2_2 <= 2; m2_2 += 2) {
            if (std::abs(m1_2 + m2_2) > 4) continue;
            cands[{m1_2, m2_2}] =
                reduced * clebsch_gordan(2, 2, 4, m1_2, m2_2, m1_2 + m2_2);
        }
    }
    CHECK(wigner_eckart_reduce(2, 2, 4, cands) == reduced);

    // A corrupted coefficient makes the ratio m-dependent.
    auto bad = cands;
    bad[{2, 0}] = Rational(2) * bad[{2, 0}];
    CHECK_THROWS_AS(wigner_eckart_reduce(2, 2, 4, bad), InconsistentReduction);

    // A nonzero coefficient where the CG coefficient vanishes is flagged:
    // (1,1,1;0,0,0) vanishes by symmetry.
    std::map<std::pair<int, int>, Scalar> vanish;
    vanish[{0, 0}] = Scalar::one();
    CHECK_THROWS_AS(wigner_eckart_reduce(2, 2, 2, vanish),
                    InconsistentReduction);

    // No usable equations at all.
    std::map<std::pair<int, int>, Scalar> empty;
    CHECK_THROWS_AS(wigner_eckart_reduce(2, 2, 4, empty),
                    InconsistentReduction);
}

TEST_CASE("norms table: values and sign column") {
    TableRequest req;
    req.kind = TableKind::Norms;
    req.n2_max = 2;
    req.points = {ParamPoint::symbolic(), ParamPoint::level_at(4, Rational(1))};
    const Table t = generate_table(req);
    const int cn = col(t, "n"), cr = col(t, "r"), cv = col(t, "norm_sq");
    const int cs = col(t, "sign"), cf = col(t, "float");
    const int cp = col(t, "point");

    std::map<std::pair<std::string, std::string>, const std::vector<std::string>*>
        sym, lvl;
    for (const auto& row : t.rows) {
        auto key = std::make_pair(row[cn], row[cr]);
        if (row[cp] == "symbolic") sym[key] = &row;
        else lvl[key] = &row;
    }
    // Symbolic closed forms round-trip through the printer and match the
    // library values.
    REQUIRE(sym.count({"1", "1"}));
    CHECK(Scalar::parse((*sym[{"1", "1"}])[cv]) ==
          norm_sq(2, 2, ParamPoint::symbolic()));
    CHECK((*sym[{"0", "0"}])[cv] == "1");
    CHECK((*sym[{"0", "0"}])[cs] == "1");
    // Indefinite symbolic polynomials leave the sign blank.
    CHECK((*sym[{"1/2", "-1/2"}])[cs].empty());
    CHECK((*sym[{"1/2", "-1/2"}])[cf].empty());

    // Evaluations at eps = 1, k = 2 (independently derived values).
    CHECK((*lvl[{"1/2", "-1/2"}])[cv] == "2");
    CHECK((*lvl[{"1/2", "1/2"}])[cv] == "3");
    CHECK((*lvl[{"1", "-1"}])[cv] == "4");
    CHECK((*lvl[{"1", "0"}])[cv] == "4");
    CHECK((*lvl[{"1", "1"}])[cv] == "14");
    for (const auto& [key, row] : lvl) {
        CHECK((*row)[cs] == "1");          // all positive at this level
        CHECK((*row)[cf] == (*row)[cv]);   // integers print identically
    }
}

TEST_CASE("hahn table: scalar ladder expansions") {
    TableRequest req;
    req.kind = TableKind::Hahn;
    req.n2_max = 2;
    req.points = {ParamPoint::symbolic()};
    const Table t = generate_table(req);
    const int cn = col(t, "n"), cr = col(t, "r"), cm = col(t, "m");
    const int cj = col(t, "j"), cq = col(t, "q_j");

    int identity_rows = 0;
    std::set<std::string> labels_seen;
    for (const auto& row : t.rows) {
        CHECK(!Scalar::parse(row[cq]).is_zero());
        labels_seen.insert(row[cn] + "|" + row[cr] + "|" + row[cm]);
        if (row[cn] == "0") {
            ++identity_rows;
            CHECK(row[cj] == "0");
            CHECK(row[cq] == "1");
        }
        // The ladder degree never exceeds what the label supports.
        CHECK(2 * std::atoi(row[cj].c_str()) <=
              unfrac(row[cn]) - std::abs(unfrac(row[cm])) + 2);
    }
    CHECK(identity_rows == 1);
    CHECK(labels_seen.size() == 14);  // every label up to n = 1 appears
}

TEST_CASE("cg table: completeness and a pinned value") {
    TableRequest req;
    req.kind = TableKind::Cg;
    req.n2_max = 2;
    const Table t = generate_table(req);
    const int cj1 = col(t, "j1"), cj2 = col(t, "j2"), cj = col(t, "j");
    const int cm1 = col(t, "m1"), cm2 = col(t, "m2"), cm = col(t, "m");
    const int cv = col(t, "value");

    int half_half = 0;
    bool found_pin = false;
    for (const auto& row : t.rows) {
        CHECK(unfrac(row[cm]) == unfrac(row[cm1]) + unfrac(row[cm2]));
        CHECK(!Scalar::parse(row[cv]).is_zero());
        if (row[cj1] == "1/2" && row[cj2] == "1/2") ++half_half;
        if (row[cj1] == "1/2" && row[cj2] == "1/2" && row[cj] == "1" &&
            row[cm1] == "1/2" && row[cm2] == "-1/2") {
            found_pin = true;
            CHECK(Scalar::parse(row[cv]) == clebsch_gordan(1, 1, 2, 1, -1, 0));
        }
    }
    // Spin 1/2 x 1/2: two singlet and four triplet entries survive.
    CHECK(half_half == 6);
    CHECK(found_pin);
}

TEST_CASE("classical table: direct and closed evaluations agree") {
    TableRequest req;
    req.kind = TableKind::Classical;
    req.n2_max = 2;
    req.samples = 3;
    req.seed = 777;
    const Table t = generate_table(req);
    const int cd = col(t, "abs_diff");
    CHECK(t.rows.size() == 14u * 3u);
    for (const auto& row : t.rows) {
        CHECK(std::atof(row[cd].c_str()) <= 1e-9);
    }
    // Fixed seed, fixed bytes.
    const Table t2 = generate_table(req);
    CHECK(t2.to_csv() == t.to_csv());
    // A different seed draws different sample angles.
    TableRequest other = req;
    other.seed = 778;
    CHECK(generate_table(other).to_csv() != t.to_csv());
}

TEST_CASE("output encodings") {
    Table t;
    t.columns = {"a", "b"};
    t.rows = {{"x,y", "plain"}, {"q\"z", "l\nm"}};
    CHECK(t.to_csv() == "a,b\n\"x,y\",plain\n\"q\"\"z\",\"l\nm\"\n");

    TableRequest req;
    req.kind = TableKind::Norms;
    req.n2_max = 1;
    req.points = {ParamPoint::level_at(4, Rational(1))};
    const Table nt = generate_table(req);
    const auto parsed = nlohmann::json::parse(nt.to_json());
    REQUIRE(parsed.contains("columns"));
    REQUIRE(parsed.contains("rows"));
    CHECK(parsed["columns"].size() == nt.columns.size());
    REQUIRE(parsed["rows"].size() == nt.rows.size());
    for (std::size_t i = 0; i < nt.rows.size(); ++i) {
        for (std::size_t j = 0; j < nt.columns.size(); ++j) {
            CHECK(parsed["rows"][i][j].get<std::string>() == nt.rows[i][j]);
        }
    }
}
