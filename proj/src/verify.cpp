#include "ncsphere/verify.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <utility>

#include <json.hpp>

#include "ncsphere/errors.hpp"
#include "ncsphere/geometry.hpp"
#include "ncsphere/hilbert.hpp"
#include "ncsphere/linsolve.hpp"
#include "ncsphere/special.hpp"
#include "ncsphere/tables.hpp"
#include "ncsphere/weil.hpp"

namespace ncsphere {

namespace {

const Scalar kEps = Scalar::eps();
const Scalar kRh = Scalar::rhat();
const ParamPoint kSym = ParamPoint::symbolic();

std::string fmt(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

std::vector<BasisLabel> labels_up_to(int n2max) {
    std::vector<BasisLabel> out;
    for (int n2 = 0; n2 <= n2max; ++n2)
        for (int r2 = -n2; r2 <= n2; r2 += 2)
            for (int m2 = -n2; m2 <= n2; m2 += 2) out.emplace_back(n2, r2, m2);
    return out;
}

WElement subs_eps(const WElement& w, const Rational& e) {
    WElement out;
    for (const auto& [m, c] : w.coeffs())
        out += WElement::monomial(m, c.substitute_eps(e));
    return out;
}

// Accumulates one named property over a parameter grid: remembers the first
// failure and the number of instances checked.
struct Prop {
    bool ok = true;
    std::string residual = "0";
    long count = 0;

    void expect(bool cond, const std::string& where) {
        ++count;
        if (!cond && ok) {
            ok = false;
            residual = where;
        }
    }
    void expect_zero(const Scalar& v, const std::string& where) {
        expect(v.is_zero(), where + ": " + v.to_string());
    }
    void expect_zero(const PsiElement& v, const std::string& where) {
        expect(v.is_zero(), where + ": " + v.to_string());
    }
    void expect_zero(const WElement& v, const std::string& where) {
        expect(v.is_zero(), where + ": " + v.to_string());
    }
};

struct Ctx {
    const VerifyOptions& opt;
    VerifyReport& rep;
    std::mt19937_64 eng;
    std::string suite;

    Ctx(const VerifyOptions& o, VerifyReport& r) : opt(o), rep(r), eng(o.seed) {}

    void add(const std::string& property, const std::string& params, bool pass,
             const std::string& residual) {
        rep.checks.push_back({suite, property, params, pass, residual});
    }
    void add(const std::string& property, std::string params, const Prop& p) {
        if (p.count > 0) {
            if (!params.empty()) params += "; ";
            params += std::to_string(p.count) + " instances";
        }
        rep.checks.push_back({suite, property, params, p.ok, p.residual});
    }

    long intval(long lo, long hi) {
        return std::uniform_int_distribution<long>(lo, hi)(eng);
    }
    Rational rational(long maxabs = 6, long maxden = 4) {
        return Rational(intval(-maxabs, maxabs)) / intval(1, maxden);
    }
    Scalar scalar(int maxterms = 3, bool with_symbols = true, bool with_i = true) {
        Scalar s;
        const long surds[] = {1, 2, 3, 5, 6};
        const int nterms = static_cast<int>(intval(0, maxterms));
        for (int t = 0; t < nterms; ++t) {
            Scalar term = Scalar::sqrt_int(surds[intval(0, 4)]);
            term *= Scalar::gaussian(rational(), with_i ? rational() : Rational(0));
            if (with_symbols) {
                term *= Scalar::eps_pow(static_cast<int>(intval(-2, 3)));
                term *= Scalar::rhat_pow(static_cast<int>(intval(-1, 2)));
            }
            s += term;
        }
        return s;
    }
    NormalMonomial monomial(int max_degree) {
        NormalMonomial m;
        long budget = intval(0, max_degree);
        for (int* e : {&m.ap, &m.am, &m.bp, &m.bm}) {
            *e = static_cast<int>(intval(0, budget));
            budget -= *e;
        }
        return m;
    }
    WElement welement(int max_degree, int terms = 3, bool with_symbols = true) {
        WElement w;
        for (int k = 0; k < terms; ++k)
            w += WElement::monomial(monomial(max_degree),
                                    scalar(2, with_symbols, true));
        return w;
    }
    SymElement symelement(int max_degree, int terms = 3) {
        SymElement x;
        for (int k = 0; k < terms; ++k) {
            NormalMonomial m = monomial(max_degree);
            x.add({m.am, m.ap, m.bm, m.bp}, scalar(2, true, true));
        }
        return x;
    }
    BasisLabel label(int n2max) {
        const int n2 = static_cast<int>(intval(0, n2max));
        const int r2 = n2 == 0 ? 0 : n2 - 2 * static_cast<int>(intval(0, n2));
        const int m2 = n2 == 0 ? 0 : n2 - 2 * static_cast<int>(intval(0, n2));
        return {n2, r2, m2};
    }
    PsiElement psi(int n2max, int terms, bool with_symbols = false) {
        PsiElement x;
        for (int k = 0; k < terms; ++k)
            x.add(label(n2max), scalar(2, with_symbols, true));
        return x;
    }
    PsiElement psi_sector(int r2, int n2max, int terms) {
        PsiElement x;
        for (int k = 0; k < terms; ++k) {
            std::vector<int> ns;
            for (int n2 = std::abs(r2); n2 <= n2max; n2 += 2) ns.push_back(n2);
            const int n2 = ns[intval(0, static_cast<long>(ns.size()) - 1)];
            const int m2 = n2 == 0 ? 0 : n2 - 2 * static_cast<int>(intval(0, n2));
            x.add(BasisLabel(n2, r2, m2), scalar(2, false, true));
        }
        return x;
    }
    EulerAngles angles() {
        const double two_pi = 8.0 * std::atan(1.0);
        auto draw = [&] {
            return two_pi *
                   (static_cast<double>(eng() & 0xffffffffu) / 4294967296.0);
        };
        const double a = draw(), b = draw() / 2.0, g = draw();
        return {a, b, g};
    }
};

// ---------------------------------------------------------------------------
// ring

void suite_ring(Ctx& c) {
    Prop assoc, distrib, conj, eval;
    for (int k = 0; k < 30; ++k) {
        const Scalar x = c.scalar(), y = c.scalar(), z = c.scalar();
        assoc.expect((x * y) * z == x * (y * z), "triple #" + std::to_string(k));
        distrib.expect(x * (y + z) == x * y + x * z,
                       "triple #" + std::to_string(k));
        conj.expect((x * y).conjugate() == x.conjugate() * y.conjugate(),
                    "pair #" + std::to_string(k));
        const std::complex<double> lhs = (x * y).to_complex(0.37, 1.9);
        const std::complex<double> rhs =
            x.to_complex(0.37, 1.9) * y.to_complex(0.37, 1.9);
        const double resid = std::abs(lhs - rhs);
        eval.expect(resid < 1e-9 * (1.0 + std::abs(rhs)), fmt(resid));
    }
    c.add("product is associative", "random scalars", assoc);
    c.add("product distributes over sums", "random scalars", distrib);
    c.add("conjugation is multiplicative", "random scalars", conj);
    c.add("numeric evaluation is a ring homomorphism",
          "eps=0.37, rhat=1.9, relative 1e-9", eval);

    Prop surd;
    for (long d = 1; d <= 20; ++d) {
        const Scalar s = Scalar::sqrt_int(d);
        surd.expect(s * s == Scalar(Rational(d)), "d=" + std::to_string(d));
    }
    surd.expect(Scalar::sqrt_int(12) == Scalar(2) * Scalar::sqrt_int(3),
                "sqrt(12)");
    surd.expect(Scalar::sqrt_int(49) == Scalar(7), "sqrt(49)");
    surd.expect(Scalar::sqrt_rational(Rational(9, 8)) ==
                    Rational(3, 4) * Scalar::sqrt_int(2),
                "sqrt(9/8)");
    c.add("square roots square back and stay squarefree", "d <= 20", surd);

    Prop parse;
    for (int k = 0; k < 20; ++k) {
        const Scalar x = c.scalar();
        parse.expect(Scalar::parse(x.to_string()) == x, x.to_string());
    }
    c.add("text round-trip", "random scalars", parse);
}

// ---------------------------------------------------------------------------
// weil

void suite_weil(Ctx& c) {
    Prop assoc;
    for (int k = 0; k < 20; ++k) {
        const WElement w1 = c.welement(4, 2), w2 = c.welement(4, 2),
                       w3 = c.welement(4, 2);
        assoc.expect((w1 * w2) * w3 == w1 * (w2 * w3),
                     "triple #" + std::to_string(k));
    }
    c.add("normal-ordered product is associative", "degree <= 4", assoc);

    const WElement j0 = WElement::generator(Generator::J0);
    const WElement jp = WElement::generator(Generator::Jp);
    const WElement jm = WElement::generator(Generator::Jm);
    const WElement k0 = WElement::generator(Generator::K0);
    const WElement kp = WElement::generator(Generator::Kp);
    const WElement km = WElement::generator(Generator::Km);
    const Scalar half(Rational(1, 2));
    const Scalar qeps2 = Scalar(Rational(1, 4)) * kEps * kEps;
    Prop cas;
    cas.expect(j0 * j0 + half * (jp * jm) + half * (jm * jp) ==
                   k0 * k0 - WElement::monomial({}, qeps2),
               "su(2) Casimir");
    cas.expect(k0 * k0 - half * (kp * km) - half * (km * kp) ==
                   j0 * j0 - WElement::monomial({}, qeps2),
               "su(1,1) Casimir");
    c.add("Casimir identities", "exact element identities", cas);

    auto ad_on_sym = [](Generator g, const SymElement& x) {
        return to_sym_basis(ad_generator(g, from_sym_basis(x)));
    };
    Prop trad;
    for (Generator g :
         {Generator::J0, Generator::Jp, Generator::Jm, Generator::K0}) {
        for (int k = 0; k < 8; ++k) {
            const SymElement x = c.symelement(6);
            trad.expect(formal_trace(ad_on_sym(g, x)) ==
                            ad_on_sym(g, formal_trace(x)),
                        "instance #" + std::to_string(k));
        }
    }
    c.add("formal trace commutes with the J0, J+, J-, K0 adjoints",
          "degree <= 6", trad);

    bool found = false;
    for (int s = 0; s <= 2 && !found; ++s)
        for (int t = 0; s + t <= 2 && !found; ++t)
            for (int u = 0; s + t + u <= 2 && !found; ++u) {
                const SymElement x =
                    SymElement::basis({s, t, u, 2 - s - t - u});
                found = formal_trace(ad_on_sym(Generator::Kp, x)) !=
                        ad_on_sym(Generator::Kp, formal_trace(x));
            }
    c.add("formal trace does not commute with the K+ adjoint",
          "witness among degree-2 basis elements", found,
          found ? "0" : "no witness found");

    Prop trdag;
    for (int k = 0; k < 10; ++k) {
        const SymElement x = c.symelement(6);
        trdag.expect(formal_trace(sym_dagger(x)) == sym_dagger(formal_trace(x)),
                     "sym instance #" + std::to_string(k));
        const WElement w = c.welement(5);
        trdag.expect(to_sym_basis(w.dagger()) == sym_dagger(to_sym_basis(w)),
                     "dagger transport #" + std::to_string(k));
    }
    c.add("formal trace commutes with conjugation", "degree <= 6", trdag);

    Prop sect;
    for (int k = 0; k < 10; ++k) {
        const WElement w = c.welement(4);
        WElement sum;
        for (const auto& part : sector_decompose(w)) {
            sum += part.part;
            sect.expect(
                ad(k0, part.part) ==
                    part.part.scaled(Scalar(Rational(part.r2, 2)) * kEps),
                "K0 weight of sector (" + std::to_string(part.r2) + "," +
                    std::to_string(part.m2) + ")/2");
            sect.expect(
                ad(j0, part.part) ==
                    part.part.scaled(Scalar(Rational(part.m2, 2)) * kEps),
                "J0 weight of sector (" + std::to_string(part.r2) + "," +
                    std::to_string(part.m2) + ")/2");
        }
        sect.expect(sum == w, "parts reassemble #" + std::to_string(k));
    }
    c.add("sector decomposition yields weight eigenparts that reassemble",
          "degree <= 4", sect);

    Prop grade;
    for (int k = 0; k < 50; ++k) {
        const NormalMonomial m1 = c.monomial(4), m2 = c.monomial(4);
        const int d = m1.degree() + m2.degree();
        const WElement p = WElement::monomial(m1) * WElement::monomial(m2);
        for (const auto& [m, coeff] : p.coeffs()) {
            const int drop = d - m.degree();
            grade.expect(drop % 2 == 0 && coeff.eps_order() >= drop / 2,
                         "degree drop " + std::to_string(drop));
        }
    }
    c.add("products grade in eps: each lost degree pair costs one eps",
          "monomials of degree <= 4", grade);
}

// ---------------------------------------------------------------------------
// basis

void suite_basis(Ctx& c) {
    const auto labels = labels_up_to(4);

    Prop traceless;
    for (const auto& l : labels) {
        const WElement w = xi(l);
        traceless.expect(!w.is_zero() &&
                             formal_trace(to_sym_basis(w)).is_zero(),
                         l.to_string());
    }
    c.add("basis elements are formally traceless", "all labels n <= 2",
          traceless);

    const WElement j0 = WElement::generator(Generator::J0);
    const WElement jp = WElement::generator(Generator::Jp);
    const WElement jm = WElement::generator(Generator::Jm);
    const WElement k0 = WElement::generator(Generator::K0);
    auto lap = [&](const WElement& w) {
        return ad(j0, ad(j0, w)) +
               (ad(jp, ad(jm, w)) + ad(jm, ad(jp, w)))
                   .scaled(Scalar(Rational(1, 2)));
    };
    auto ladder = [&](const BasisLabel& l, int dir) {
        // eps * sqrt((n -+ m)(n +- m + 2)/4) Xi(m +- 1), zero off the top.
        const int m2n = l.m2 + 2 * dir;
        if (std::abs(m2n) > l.n2) return WElement::zero();
        const Rational f = dir > 0
                               ? Rational((l.n2 - l.m2) * (l.n2 + l.m2 + 2), 4)
                               : Rational((l.n2 + l.m2) * (l.n2 - l.m2 + 2), 4);
        return xi(BasisLabel(l.n2, l.r2, m2n))
            .scaled(kEps * Scalar::sqrt_rational(f));
    };

    Prop eig_j0, eig_k0, eig_jp, eig_jm, eig_lap;
    for (const auto& l : labels) {
        const WElement w = xi(l);
        eig_j0.expect(
            ad(j0, w) == w.scaled(Scalar(Rational(l.m2, 2)) * kEps),
            l.to_string());
        eig_k0.expect(
            ad(k0, w) == w.scaled(Scalar(Rational(l.r2, 2)) * kEps),
            l.to_string());
        eig_jp.expect(ad(jp, w) == ladder(l, +1), l.to_string());
        eig_jm.expect(ad(jm, w) == ladder(l, -1), l.to_string());
        eig_lap.expect(
            lap(w) == w.scaled(Scalar(Rational(l.n2 * (l.n2 + 2), 4)) *
                               Scalar::eps_pow(4)),
            l.to_string());
    }
    c.add("Ad J0 eigenvalue eps*m", "all labels n <= 2", eig_j0);
    c.add("Ad K0 eigenvalue eps*r", "all labels n <= 2", eig_k0);
    c.add("Ad J+ ladder with coefficient eps*sqrt((n-m)(n+m+1))",
          "all labels n <= 2", eig_jp);
    c.add("Ad J- ladder with coefficient eps*sqrt((n+m)(n-m+1))",
          "all labels n <= 2", eig_jm);
    c.add("Laplacian eigenvalue eps^2*n(n+1)", "all labels n <= 2", eig_lap);

    Prop dims;
    for (int n2 = 0; n2 <= 6; ++n2) {
        ScalarRows rows;
        std::map<SymLabel, std::size_t> col_of;
        std::size_t ncols = 0;
        for (int r2 = -n2; r2 <= n2; r2 += 2) {
            for (int m2 = -n2; m2 <= n2; m2 += 2) {
                const SymElement s = to_sym_basis(xi(BasisLabel(n2, r2, m2)));
                ScalarRow row;
                for (const auto& [sl, coeff] : s.coeffs()) {
                    auto it = col_of.find(sl);
                    if (it == col_of.end()) it = col_of.emplace(sl, ncols++).first;
                    if (row.size() <= it->second)
                        row.resize(it->second + 1, Scalar::zero());
                    row[it->second] = coeff;
                }
                rows.push_back(std::move(row));
            }
        }
        const int expect = (n2 + 1) * (n2 + 1);
        dims.expect(matrix_rank(rows) == expect,
                    "n=" + frac_str(n2) + ": rank != " + std::to_string(expect));
    }
    c.add("level-n family is linearly independent of dimension (2n+1)^2",
          "n <= 3", dims);

    if (c.opt.eps) {
        const Rational e = *c.opt.eps;
        Prop sub;
        for (const auto& l : labels) {
            const WElement w = xi(l);
            sub.expect(subs_eps(ad(j0, w), e) ==
                           subs_eps(w.scaled(Scalar(Rational(l.m2, 2)) * kEps), e),
                       l.to_string());
            sub.expect(subs_eps(lap(w), e) ==
                           subs_eps(w.scaled(Scalar(Rational(l.n2 * (l.n2 + 2), 4)) *
                                             Scalar::eps_pow(4)),
                                    e),
                       l.to_string());
        }
        std::ostringstream ename;
        ename << e;
        c.add("eigen-relations after substituting eps", "eps=" + ename.str(),
              sub);

        if (e == 0) {
            // The eps-free derivative form of the adjoint action stays
            // nontrivial at eps = 0: ad_eps0 = (1/eps) ad as polynomials.
            Prop eps0;
            for (const auto& l : labels) {
                const WElement w = xi(l);
                eps0.expect(ad_eps0(Generator::J0, w) ==
                                w.scaled(Scalar(Rational(l.m2, 2))),
                            l.to_string());
                eps0.expect(ad_eps0(Generator::K0, w) ==
                                w.scaled(Scalar(Rational(l.r2, 2))),
                            l.to_string());
                eps0.expect(kEps * ad_eps0(Generator::Jp, w) == ad(jp, w),
                            l.to_string());
                eps0.expect(kEps * ad_eps0(Generator::Jm, w) == ad(jm, w),
                            l.to_string());
            }
            c.add("eps-free adjoint derivative form at eps = 0",
                  "all labels n <= 2", eps0);
        }
    }
}

// ---------------------------------------------------------------------------
// orthogonality

void suite_orthogonality(Ctx& c) {
    std::vector<ParamPoint> points = {kSym, ParamPoint::level_at(2, Rational(1)),
                                      ParamPoint::level_at(5, Rational(1)),
                                      ParamPoint::level_at(4, Rational(1, 3))};
    std::string pdesc = "symbolic; (eps,k)=(1,1),(1,5/2),(1/3,2)";
    if (c.opt.point) {
        points.push_back(*c.opt.point);
        pdesc += "; " + point_str(*c.opt.point);
    }
    const auto labels = labels_up_to(3);
    Prop diag, offd;
    for (const auto& p : points) {
        for (std::size_t i = 0; i < labels.size(); ++i) {
            const PsiElement xi_i = PsiElement::basis(labels[i]);
            for (std::size_t j = i; j < labels.size(); ++j) {
                const Scalar v =
                    inner(xi_i, PsiElement::basis(labels[j]), p);
                if (i == j)
                    diag.expect(v == norm_sq(labels[i].n2, labels[i].r2, p),
                                labels[i].to_string() + " at " + point_str(p));
                else
                    offd.expect_zero(v, labels[i].to_string() + "," +
                                            labels[j].to_string() + " at " +
                                            point_str(p));
            }
        }
    }
    c.add("diagonal inner products equal the closed-form norm",
          "all labels n <= 3/2; " + pdesc, diag);
    c.add("distinct basis elements are orthogonal",
          "all pairs n <= 3/2; " + pdesc, offd);

    Prop herm;
    for (int k = 0; k < 15; ++k) {
        const PsiElement x = c.psi(3, 2), y = c.psi(3, 2);
        herm.expect(inner(x, y, kSym) == inner(y, x, kSym).conjugate(),
                    "pair #" + std::to_string(k));
    }
    c.add("inner product is hermitian", "random elements, symbolic point",
          herm);
}

// ---------------------------------------------------------------------------
// norms

void suite_norms(Ctx& c) {
    Prop routes;
    for (const auto& l : labels_up_to(4)) {
        const WElement w = xi(l);
        for (int k2 = 2; k2 <= 5; ++k2) {
            const ParamPoint p = ParamPoint::level_at(k2, Rational(1));
            const Scalar closed = norm_sq(l.n2, l.r2, p);
            const Scalar traced =
                pi0_trace(w.dagger() * w, FuzzyLevel(k2), Rational(1));
            const Scalar piped =
                inner(PsiElement::basis(l), PsiElement::basis(l), p);
            routes.expect(closed == traced && closed == piped,
                          l.to_string() + " at k=" + frac_str(k2));
        }
    }
    c.add("closed form, averaged Hilbert diagonal, and projection pipeline "
          "norms coincide",
          "n <= 2; eps=1; k in {1,3/2,2,5/2}", routes);

    Prop signs;
    {
        const ParamPoint pos = ParamPoint::level_at(4, Rational(1));
        signs.expect(norm_sign(4, -4, pos) == 1 &&
                         !norm_sq(4, -4, pos).is_zero(),
                     "positive case");
        const ParamPoint zero = ParamPoint::numeric(Rational(1), Scalar(1));
        signs.expect(norm_sign(4, -2, zero) == 0 &&
                         norm_sq(4, -2, zero).is_zero(),
                     "degenerate zero at 2Rh/eps = 2, n-r = 3");
        const ParamPoint neg =
            ParamPoint::numeric(Rational(1), Scalar(Rational(5, 4)));
        const double v = norm_sq(4, -2, neg).to_complex(1.0, 1.25).real();
        signs.expect(norm_sign(4, -2, neg) == -1 && v < 0,
                     "negative case, value " + fmt(v));
    }
    c.add("norm sign function covers positive, degenerate-zero, and negative "
          "cases",
          "three pinned points", signs);

    // At 2Rh/eps = 2 the norms with n - r >= 2 vanish and no others do.
    Prop degen;
    {
        const ParamPoint p = ParamPoint::numeric(Rational(1), Scalar(1));
        int predicted = 0, actual = 0;
        for (const auto& l : labels_up_to(4)) {
            if (l.n2 - l.r2 >= 4) ++predicted;
            if (norm_sq(l.n2, l.r2, p).is_zero()) {
                ++actual;
                degen.expect(norm_sign(l.n2, l.r2, p) == 0, l.to_string());
            }
        }
        degen.expect(predicted == actual,
                     "predicted " + std::to_string(predicted) + ", got " +
                         std::to_string(actual));
    }
    c.add("degenerate-level zero count matches the rule 2Rh/eps in [1, n-r]",
          "n <= 2 at eps=1, Rh=1", degen);
}

// ---------------------------------------------------------------------------
// assoc

void suite_assoc(Ctx& c) {
    const WElement ap = WElement::letter(Letter::APlus);
    const WElement am = WElement::letter(Letter::AMinus);
    {
        const PsiElement lhs = rho_symbolic(lift(rho_symbolic(ap * am)) * am);
        const PsiElement rhs = rho_symbolic(ap * lift(rho_symbolic(am * am)));
        const PsiElement wit =
            rho_symbolic(am).scaled(Scalar(Rational(1, 2)) * kEps);
        const bool ok = (lhs - rhs == wit) && !wit.is_zero();
        c.add("left/right nesting of the double product differ by "
              "(eps/2) * the lowering generator",
              "pinned witness", ok, ok ? "0" : (lhs - rhs).to_string());
    }

    Prop right, defect;
    int sharp = 0;
    for (int k = 0; k < 100; ++k) {
        const WElement x1 = lift(c.psi(2, 2));
        const WElement x2 = lift(c.psi(2, 2));
        const WElement x3 = lift(c.psi(2, 2));
        right.expect(rho_symbolic(x1 * lift(rho_symbolic(x2 * x3))) ==
                         rho_symbolic(x1 * x2 * x3),
                     "triple #" + std::to_string(k));
        const PsiElement d = rho_symbolic(lift(rho_symbolic(x1 * x2)) * x3) -
                             rho_symbolic(x1 * x2 * x3);
        for (const auto& [l, coeff] : d.coeffs()) {
            defect.expect(coeff.eps_order() >= 2,
                          "triple #" + std::to_string(k) + " at " +
                              l.to_string());
            if (coeff.eps_order() == 2) ++sharp;
        }
    }
    c.add("right-nested products collapse exactly", "100 random triples, n <= 1",
          right);
    c.add("left-nested association defect is first order in eps",
          "100 random triples, n <= 1; first-order terms seen " +
              std::to_string(sharp) + " times",
          defect);

    Prop module;
    for (int k = 0; k < 20; ++k) {
        const PsiElement xi_el = c.psi(3, 2);
        const PsiElement f = c.psi_sector(0, 4, 2);
        const PsiElement g = c.psi_sector(0, 4, 2);
        const PsiElement whole =
            rho_symbolic(lift(xi_el) * lift(f) * lift(g));
        module.expect(
            product_rho(product_rho(xi_el, f, kSym), g, kSym) == whole &&
                product_rho(xi_el, product_rho(f, g, kSym), kSym) == whole,
            "instance #" + std::to_string(k));
    }
    c.add("right-module law over the scalar sector", "random elements", module);

    Prop grading;
    for (int k = 0; k < 20; ++k) {
        const int r1 = static_cast<int>(c.intval(-2, 2));
        const int r2 = static_cast<int>(c.intval(-2, 2));
        const PsiElement x = c.psi_sector(r1, 4, 2);
        const PsiElement y = c.psi_sector(r2, 4, 2);
        grading.expect(on_sector(product_rho(x, y, kSym), r1 + r2),
                       "sectors " + frac_str(r1) + "," + frac_str(r2));
    }
    c.add("products add sector labels", "random sector pairs", grading);

    Prop r0;
    for (int k = 0; k < 15; ++k) {
        const PsiElement f = c.psi_sector(0, 4, 2);
        const PsiElement g = c.psi_sector(0, 4, 2);
        const PsiElement h = c.psi_sector(0, 4, 2);
        const PsiElement fg = product_rho(f, g, kSym);
        r0.expect(on_sector(fg, 0), "closure #" + std::to_string(k));
        r0.expect(fg == product_rho_star(f, g, kSym),
                  "rho vs rho* #" + std::to_string(k));
        r0.expect(product_rho(fg, h, kSym) ==
                      product_rho(f, product_rho(g, h, kSym), kSym),
                  "associativity #" + std::to_string(k));
    }
    c.add("the scalar sector is a closed associative algebra where both "
          "projections agree",
          "random scalar-sector elements", r0);
}

// ---------------------------------------------------------------------------
// hahn

void suite_hahn(Ctx& c) {
    Prop closed;
    std::map<std::pair<bool, bool>, int> regions;
    for (const auto& l : labels_up_to(4)) {
        const ReducedSector got = xi_closed_form(l.n2, l.r2, l.m2, kSym);
        const auto parts = sector_decompose(xi(l));
        bool ok = parts.size() == 1;
        if (ok) {
            const ReducedSector want = to_reduced_sector(reduced_form(parts[0]));
            ok = got.r2 == want.r2 && got.m2 == want.m2 &&
                 got.q.size() == want.q.size();
            for (std::size_t i = 0; ok && i < got.q.size(); ++i)
                ok = got.q[i] == want.q[i];
        }
        closed.expect(ok, l.to_string());
        ++regions[{l.r2 + l.m2 >= 0, l.r2 - l.m2 >= 0}];
    }
    std::string rdesc = "region sizes";
    for (const auto& [key, n] : regions) rdesc += " " + std::to_string(n);
    bool all_regions = regions.size() == 4;
    for (const auto& [key, n] : regions) all_regions = all_regions && n >= 3;
    c.add("closed form equals the projection pipeline on every label",
          "n <= 2; " + rdesc, closed);
    c.add("all four closed-form case regions are exercised (>= 3 labels each)",
          rdesc, all_regions, all_regions ? "0" : rdesc);

    Prop points;
    for (const auto& p :
         {ParamPoint::level_at(4, Rational(2, 3)),
          ParamPoint::numeric(Rational(1, 2), Scalar(Rational(5, 2)))}) {
        for (const auto& l : labels_up_to(3)) {
            const ReducedSector got = xi_closed_form(l.n2, l.r2, l.m2, p);
            const auto parts = sector_decompose(xi(l));
            ReducedSector want = to_reduced_sector(reduced_form(parts[0]));
            for (auto& q : want.q) q = p.apply(q);
            while (!want.q.empty() && want.q.back().is_zero())
                want.q.pop_back();
            bool ok = got.q.size() == want.q.size();
            for (std::size_t i = 0; ok && i < got.q.size(); ++i)
                ok = got.q[i] == want.q[i];
            points.expect(ok, l.to_string() + " at " + point_str(p));
        }
    }
    c.add("closed form evaluates correctly at level and numeric points",
          "n <= 3/2; 2 points", points);

    Prop ortho;
    for (int alpha = 0; alpha <= 3; ++alpha)
        for (int beta = 0; beta <= 3; ++beta)
            for (int N = 4; N <= 9; ++N) {
                std::vector<Rational> w(N);
                for (int x = 0; x < N; ++x)
                    w[x] = Rational(factorial(x + beta) *
                                    factorial(N - 1 - x + alpha)) /
                           Rational(factorial(x) * factorial(N - 1 - x));
                for (int n = 0; n <= 3; ++n)
                    for (int np = 0; np < n; ++np) {
                        Scalar s = Scalar::zero();
                        for (int x = 0; x < N; ++x)
                            s += Scalar(w[x]) *
                                 hahn(HahnSpec{n, alpha, beta,
                                               Scalar(Rational(x)),
                                               Scalar(Rational(N))}) *
                                 hahn(HahnSpec{np, alpha, beta,
                                               Scalar(Rational(x)),
                                               Scalar(Rational(N))});
                        ortho.expect_zero(
                            s, "(n,n',alpha,beta,N)=(" + std::to_string(n) +
                                   "," + std::to_string(np) + "," +
                                   std::to_string(alpha) + "," +
                                   std::to_string(beta) + "," +
                                   std::to_string(N) + ")");
                    }
            }
    c.add("discrete orthogonality under the lattice weight",
          "alpha,beta <= 3; N <= 9; degrees <= 3", ortho);

    Prop cg;
    for (int j1 = 0; j1 <= 3; ++j1)
        for (int j2 = 0; j2 <= 3; ++j2)
            for (int j = std::abs(j1 - j2); j <= j1 + j2; j += 2)
                for (int jq = std::abs(j1 - j2); jq <= j1 + j2; jq += 2)
                    for (int m = -std::min(j, jq); m <= std::min(j, jq);
                         m += 2) {
                        Scalar s = Scalar::zero();
                        for (int m1 = -j1; m1 <= j1; m1 += 2) {
                            const int m2 = m - m1;
                            if (std::abs(m2) > j2) continue;
                            s += clebsch_gordan(j1, j2, j, m1, m2, m) *
                                 clebsch_gordan(j1, j2, jq, m1, m2, m);
                        }
                        const Scalar want =
                            j == jq ? Scalar(1) : Scalar::zero();
                        cg.expect(s == want,
                                  "(j1,j2,j,j')=(" + frac_str(j1) + "," +
                                      frac_str(j2) + "," + frac_str(j) + "," +
                                      frac_str(jq) + ")");
                    }
    c.add("Clebsch-Gordan columns are orthonormal", "j1, j2 <= 3/2", cg);
}

// ---------------------------------------------------------------------------
// matrix

void suite_matrix(Ctx& c) {
    const Rational eps(1);
    Prop homo, dagg;
    for (int k2 = 1; k2 <= 3; ++k2) {
        for (int r2 = -2; r2 <= 2; ++r2) {
            if (k2 + r2 < 0) continue;
            const ParamPoint pt = ParamPoint::level_at(k2, eps);
            const FuzzyLevel k(k2);
            for (int trial = 0; trial < 3; ++trial) {
                const PsiElement x = c.psi_sector(r2, 4, 2);
                const PsiElement f = c.psi_sector(0, 4, 2);
                homo.expect(phi_matrix(product_rho(x, f, pt), r2, k, eps) ==
                                phi_matrix(x, r2, k, eps) *
                                    phi_matrix(f, 0, k, eps),
                            "k=" + frac_str(k2) + ", r=" + frac_str(r2));
                const PsiElement z = c.psi_sector(r2, 4, 2);
                dagg.expect(
                    phi_matrix(x, r2, k, eps).dagger() *
                            phi_matrix(z, r2, k, eps) ==
                        phi_matrix(product_rho(dagger_label(x), z, pt), 0, k,
                                   eps),
                    "k=" + frac_str(k2) + ", r=" + frac_str(r2));
            }
        }
    }
    c.add("matrices realize the right product against the scalar sector",
          "k in {1/2,1,3/2}; r in {-1..1}; n <= 2", homo);
    c.add("conjugate-transposed matrices realize the pairing",
          "k in {1/2,1,3/2}; r in {-1..1}; n <= 2", dagg);

    Prop zero;
    for (const auto& l : labels_up_to(6)) {
        for (int k2 = 1; k2 <= 3; ++k2) {
            if (k2 + l.r2 < 0 || std::abs(l.r2) > 2) continue;
            const RectMatrix m =
                phi_matrix(PsiElement::basis(l), l.r2, FuzzyLevel(k2), eps);
            const bool expect_zero = l.n2 >= 2 * k2 + l.r2 + 2;
            zero.expect(m.is_zero() == expect_zero,
                        l.to_string() + " at k=" + frac_str(k2));
        }
    }
    c.add("matrices vanish exactly at the norm threshold n >= 2k + r + 1",
          "n <= 3; k in {1/2,1,3/2}; r in {-1..1}", zero);

    Prop frob;
    for (const auto& l : labels_up_to(4)) {
        for (int k2 = 1; k2 <= 3; ++k2) {
            if (k2 + l.r2 < 0 || std::abs(l.r2) > 2) continue;
            const RectMatrix m =
                phi_matrix(PsiElement::basis(l), l.r2, FuzzyLevel(k2), eps);
            frob.expect(Rational(1, k2 + 1) * m.abs_sq_sum() ==
                            norm_sq(l.n2, l.r2,
                                    ParamPoint::level_at(k2, eps)),
                        l.to_string() + " at k=" + frac_str(k2));
        }
    }
    c.add("normalized Frobenius sums reproduce the closed-form norms",
          "n <= 2; k in {1/2,1,3/2}", frob);

    Prop cons;
    for (int k2 = 0; k2 <= 3; ++k2) {
        for (int trial = 0; trial < 3; ++trial) {
            cons.expect(rho_consistency(lift(c.psi(3, 2)), FuzzyLevel(k2), eps),
                        "k=" + frac_str(k2));
        }
    }
    c.add("projection agrees with the direct level action", "k <= 3/2", cons);

    Prop sep;
    sep.expect(annihilates_levels(WElement::zero(), 6, eps), "zero element");
    for (const auto& l : labels_up_to(2)) {
        const WElement w = xi(l);
        sep.expect(!annihilates_levels(w, 2 * (l.n2 + 2), eps),
                   l.to_string());
    }
    c.add("level actions separate elements from zero",
          "n <= 1; level bound degree+2 is a recorded heuristic, not a "
          "theorem",
          sep);
}

// ---------------------------------------------------------------------------
// geometry

void suite_geometry(Ctx& c) {
    const std::vector<ParamPoint> numeric_points = {
        ParamPoint::level_at(4, Rational(1)),
        ParamPoint::level_at(3, Rational(2, 3)),
        ParamPoint::numeric(Rational(1, 3), Scalar(Rational(5, 2)))};

    Prop contract;
    for (const auto& p : numeric_points) {
        const auto xs = coordinates(p);
        const auto Xs = vector_fields(p);
        PsiElement s1, s2;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            s1 += product_rho(xs[i], Xs[i], p);
            s2 += product_rho(Xs[i], xs[i], p);
        }
        contract.expect(s1.is_zero() && s2.is_zero(), point_str(p));
    }
    c.add("coordinates contract with the dual frame to zero on both sides",
          "3 numeric points", contract);

    Prop dx;
    for (const auto& p : {ParamPoint::level_at(4, Rational(1)),
                          ParamPoint::numeric(Rational(1, 2),
                                              Scalar(Rational(5, 2)))}) {
        const auto xs = coordinates(p);
        const auto dxs = one_forms(p);
        for (std::size_t i = 0; i < xs.size(); ++i)
            dx.expect(exterior_d(xs[i], p) == dxs[i],
                      "component " + std::to_string(i) + " at " + point_str(p));
    }
    c.add("the exterior derivative of each coordinate is its one-form",
          "2 numeric points", dx);

    {
        const PsiElement one = PsiElement::basis(BasisLabel(0, 0, 0));
        const Scalar casimir =
            Scalar(2) * kRh * kRh - Scalar(Rational(1, 2)) * kEps * kEps;
        const bool ok0 = omega(0, 0, 0, one, kSym) == one;
        const bool ok1 = omega(0, 0, 2, one, kSym) ==
                         PsiElement::basis(BasisLabel(0, 0, 0), casimir);
        c.add("contraction of the identity reproduces 2R^2",
              "omega^{00}_1(1) = (2Rh^2 - eps^2/2) * 1, exact", ok0 && ok1,
              ok0 && ok1 ? "0" : omega(0, 0, 2, one, kSym).to_string());
    }

    Prop commute;
    for (int k = 0; k < 5; ++k) {
        const PsiElement x =
            PsiElement::basis(BasisLabel(2, 0, 2), c.scalar(2, false, true)) +
            PsiElement::basis(BasisLabel(4, 2, 0), c.scalar(2, false, true)) +
            PsiElement::basis(BasisLabel(2, -2, -2), c.scalar(2, false, true));
        commute.expect(omega(0, 2, 2, ad_Jp(x), kSym) ==
                           ad_Jp(omega(0, 2, 2, x, kSym)),
                       "Ad J+");
        commute.expect(omega(2, 0, 2, ad_Jm(x), kSym) ==
                           ad_Jm(omega(2, 0, 2, x, kSym)),
                       "Ad J-");
        commute.expect(omega(0, 0, 2, ad_J0(x), kSym) ==
                           ad_J0(omega(0, 0, 2, x, kSym)),
                       "Ad J0");
        commute.expect(omega(0, 2, 2, laplacian(x), kSym) ==
                           laplacian(omega(0, 2, 2, x, kSym)),
                       "Laplacian");
    }
    c.add("contractions commute with the rotation adjoints and the Laplacian",
          "random mixed-sector inputs, symbolic point", commute);

    Prop book;
    for (const auto& [r1, r2] : std::vector<std::pair<int, int>>{
             {2, 0}, {0, 2}, {0, 0}, {2, -2}, {-2, 0}}) {
        const PsiElement x =
            PsiElement::basis(BasisLabel(2, 2, 2), c.scalar(2, false, true)) +
            PsiElement::basis(BasisLabel(4, 0, 0), c.scalar(2, false, true)) +
            PsiElement::basis(BasisLabel(2, -2, 0), c.scalar(2, false, true));
        const PsiElement w = omega(r1, r2, 2, x, kSym);
        book.expect(ad_K0(w) ==
                        omega(r1, r2, 2, ad_K0(x), kSym) +
                            w.scaled(Scalar(Rational(r1 - r2, 2)) * kEps),
                    "(r1,r2)=(" + frac_str(r1) + "," + frac_str(r2) + ")");
    }
    c.add("contractions shift the Ad K0 eigenvalue by eps (r1 - r2)",
          "5 sector pairs", book);

    {
        auto D = [&](const PsiElement& f) { return omega(0, 2, 2, f, kSym); };
        const PsiElement f = PsiElement::basis(BasisLabel(2, 0, 2));
        const PsiElement g = PsiElement::basis(BasisLabel(2, 0, -2));
        const PsiElement leib = D(product_rho(f, g, kSym)) -
                                product_rho(D(f), g, kSym) -
                                product_rho(f, D(g), kSym);
        int lmin = 1000;
        for (const auto& [l, coeff] : leib.coeffs())
            lmin = std::min(lmin, coeff.eps_order());
        // The cleared contraction carries a uniform extra factor of
        // eps (2Rh+eps)^{3/2} over the normalized derivative, so first order
        // there means doubled order >= 4 here.
        const bool lok = !leib.is_zero() && lmin >= 4;
        c.add("Leibniz defect of d is first order in eps (prefactor cleared)",
              "pinned scalar pair; min doubled eps order " +
                  std::to_string(lmin),
              lok, lok ? "0" : leib.to_string());

        const PsiElement Xt = PsiElement::basis(BasisLabel(2, 2, 0), Scalar(-1));
        auto act = [&](const PsiElement& h) {
            return product_rho(D(h), Xt, kSym);
        };
        const PsiElement der = act(product_rho(f, g, kSym)) -
                               product_rho(act(f), g, kSym) -
                               product_rho(f, act(g), kSym);
        int dmin = 1000;
        for (const auto& [l, coeff] : der.coeffs())
            dmin = std::min(dmin, coeff.eps_order());
        const bool dok = !der.is_zero() && dmin >= 4;
        c.add("derivation defect of a frame field is first order in eps "
              "(prefactor cleared)",
              "pinned scalar pair; min doubled eps order " +
                  std::to_string(dmin),
              dok, dok ? "0" : der.to_string());
    }

    {
        // Oracle: the diagonal action on scalar levels carries coefficient
        // eps (2n Rh + n^2 eps); dividing by eps and a candidate denominator
        // must give the normalized d.  Exactly one candidate survives.
        Prop oracle;
        for (int n2 = 2; n2 <= 6; n2 += 2) {
            const Scalar lam =
                kEps * (Rational(n2) * kRh + Rational(n2 * n2, 4) * kEps);
            for (int m2 = -n2; m2 <= n2; m2 += 2)
                oracle.expect(
                    omega(0, 2, 2, PsiElement::basis(BasisLabel(n2, 0, m2)),
                          kSym) ==
                        PsiElement::basis(BasisLabel(n2, -2, m2), lam),
                    "n=" + frac_str(n2) + ", m=" + frac_str(m2));
        }
        c.add("scalar-level contraction oracle: coefficient "
              "eps (2n Rh + n^2 eps)",
              "n <= 3, all m, symbolic", oracle);

        Prop good, rival_rejected;
        std::string rival_example;
        for (const auto& p : {ParamPoint::level_at(4, Rational(1)),
                              ParamPoint::numeric(Rational(1, 3),
                                                  Scalar(Rational(5, 2)))}) {
            const Rational rh2 = *p.apply(Rational(2) * kRh).as_rational();
            const Rational e = p.eps();
            for (int n2 = 2; n2 <= 6; n2 += 2) {
                const Rational num = Rational(n2, 2) * (rh2 + e * Rational(n2, 2));
                const PsiElement df =
                    exterior_d(PsiElement::basis(BasisLabel(n2, 0, 0)), p);
                const PsiElement cand_b = PsiElement::basis(
                    BasisLabel(n2, -2, 0), Scalar(num / (rh2 + e)));
                const PsiElement cand_a = PsiElement::basis(
                    BasisLabel(n2, -2, 0), Scalar(num / (rh2 / 2 + e)));
                good.expect(df == cand_b,
                            "n=" + frac_str(n2) + " at " + point_str(p));
                rival_rejected.expect(df != cand_a, "n=" + frac_str(n2) +
                                                        " at " + point_str(p));
                if (rival_example.empty())
                    rival_example = "at n=1, " + point_str(p) + ": d gives " +
                                    Scalar(num / (rh2 + e)).to_string() +
                                    ", rival predicts " +
                                    Scalar(num / (rh2 / 2 + e)).to_string();
            }
        }
        c.add("d coefficient candidate 2n(Rh + eps n/2)/(2Rh + eps) matches "
              "the oracle",
              "n <= 3; 2 numeric points", good);
        rival_rejected.residual = rival_rejected.ok
                                      ? rival_example
                                      : rival_rejected.residual;
        c.add("d coefficient candidate with denominator (Rh + eps) is "
              "rejected by the oracle",
              "n <= 3; 2 numeric points", rival_rejected);
    }

    Prop triple;
    for (int k = 0; k < 4; ++k) {
        const PsiElement x = c.psi_sector(0, 4, 2) +
                             PsiElement::basis(BasisLabel(2, 2, 0),
                                               c.scalar(2, false, true));
        for (const auto& [r1, r2] : std::vector<std::pair<int, int>>{
                 {0, 0}, {2, 0}, {0, 2}, {2, 2}}) {
            const PsiElement single = omega(r1, r2, 2, x, kSym);
            triple.expect(single == omega(r1, r2, 2, x, kSym,
                                          TripleProduct::RightNested),
                          "(r1,r2)=(" + frac_str(r1) + "," + frac_str(r2) +
                              ") right");
        }
        triple.expect(omega(0, 2, 2, x, kSym, TripleProduct::LeftNested) ==
                          omega(0, 2, 2, x, kSym),
                      "left nesting at r1 = 0");
    }
    c.add("right-nested triple products collapse to a single projection, and "
          "left nesting does too when the right slot is scalar",
          "sector pairs (0,0),(1,0),(0,1),(1,1)", triple);
    {
        const PsiElement y = PsiElement::basis(BasisLabel(2, 0, 0));
        const PsiElement single = omega(2, 0, 2, y, kSym);
        const PsiElement leftn =
            omega(2, 0, 2, y, kSym, TripleProduct::LeftNested);
        const PsiElement d = single - leftn;
        int wmin = 1000;
        for (const auto& [l, coeff] : d.coeffs())
            wmin = std::min(wmin, coeff.eps_order());
        const bool lw = !d.is_zero() && wmin >= 2;
        c.add("left-nested reading differs at first order in eps for r1 != 0",
              "witness at (r1,r2)=(1,0); min doubled eps order " +
                  std::to_string(wmin),
              lw, lw ? d.to_string() : "no defect found");
    }

    {
        // Signed-sum form of the contraction: D(f) equals
        // sum_m (-1)^m Xi(1,-1,-m) o Ad_{Xi(1,0,m)} f with the dictionary
        // Xi(1,0,1) = J+, Xi(1,0,0) = -sqrt(2) J0, Xi(1,0,-1) = -J-.
        auto rhs_with_sign = [&](const PsiElement& f, int sigma) {
            PsiElement out;
            for (int m = 1; m >= -1; --m) {
                PsiElement adf = m == 1 ? ad_Jp(f)
                                 : m == 0
                                     ? ad_J0(f).scaled(Scalar(-1) *
                                                       Scalar::sqrt_int(2))
                                     : ad_Jm(f).scaled(Scalar(-1));
                const int sign = ((m + sigma) % 2 == 0) ? 1 : -1;
                out += product_rho(
                           PsiElement::basis(BasisLabel(2, -2, -2 * m)), adf,
                           kSym)
                           .scaled(Scalar(sign));
            }
            return out;
        };
        Prop sgood, srej;
        for (const auto& l :
             {BasisLabel(2, 0, 0), BasisLabel(4, 0, 2), BasisLabel(2, 0, -2)}) {
            const PsiElement f = PsiElement::basis(l);
            const PsiElement Df = omega(0, 2, 2, f, kSym);
            sgood.expect(Df == rhs_with_sign(f, 0), l.to_string());
            srej.expect(Df != rhs_with_sign(f, 1), l.to_string());
        }
        c.add("signed adjoint sum with sign (-1)^m reproduces the contraction",
              "3 scalar labels, symbolic", sgood);
        c.add("signed adjoint sum with sign (-1)^{m+1} is rejected",
              "3 scalar labels, symbolic", srej);
    }

    {
        const ParamPoint p = ParamPoint::level_at(4, Rational(1));
        ScalarRows rows;
        std::map<BasisLabel, std::size_t> col_of;
        std::size_t ncols = 0, nlabels = 0;
        bool nonzero = true;
        for (int n2 = 2; n2 <= 4; n2 += 2) {
            for (int m2 = -n2; m2 <= n2; m2 += 2) {
                ++nlabels;
                const PsiElement img =
                    exterior_d(PsiElement::basis(BasisLabel(n2, 0, m2)), p);
                nonzero = nonzero && !img.is_zero();
                ScalarRow row;
                for (const auto& [l, coeff] : img.coeffs()) {
                    auto it = col_of.find(l);
                    if (it == col_of.end())
                        it = col_of.emplace(l, ncols++).first;
                    if (row.size() <= it->second)
                        row.resize(it->second + 1, Scalar::zero());
                    row[it->second] = coeff;
                }
                rows.push_back(std::move(row));
            }
        }
        const bool ok = nonzero && nlabels == 8 && ncols == 8 &&
                        matrix_rank(rows) == 8;
        c.add("every one-form is an exact image: d spans the r = -1 sector",
              "1 <= n <= 2 at (eps,k)=(1,2)", ok,
              ok ? "0" : "rank " + std::to_string(matrix_rank(rows)));

        const PsiElement ddf = exterior_d_any(
            exterior_d(PsiElement::basis(BasisLabel(4, 0, 0)), p), p);
        const bool dd = !ddf.is_zero() && on_sector(ddf, -4);
        c.add("d extended to lower sectors is not square-zero",
              "witness d(d Xi(2,0,0)) != 0", dd,
              dd ? ddf.to_string() : "vanished");
    }

    {
        const ParamPoint p = ParamPoint::level_at(4, Rational(1));
        const auto Xs = vector_fields(p);
        Prop met;
        const Scalar diag = p.apply(Rational(2, 3) * (kRh + kEps));
        for (std::size_t i = 0; i < Xs.size(); ++i)
            for (std::size_t j = 0; j < Xs.size(); ++j) {
                const Scalar g = pi0(metric(Xs[i], Xs[j], p));
                met.expect(g == (i == j ? diag : Scalar::zero()),
                           "(i,j)=(" + std::to_string(i) + "," +
                               std::to_string(j) + "): " + g.to_string());
            }
        const ParamPoint unit =
            ParamPoint::numeric(Rational(1, 4), Scalar(Rational(5, 4)));
        const auto Xu = vector_fields(unit);
        bool exact_unit = true;
        for (std::size_t i = 0; i < Xu.size() && exact_unit; ++i)
            exact_unit = pi0(metric(Xu[i], Xu[i], unit)) == Scalar(1);
        met.expect(exact_unit, "unit diagonal at 2Rh + 2eps = 3");
        c.add("frame metric has scalar part delta_ij (2Rh + 2eps)/3",
              "(eps,k)=(1,2) and the unit point eps=1/4, Rh=5/4", met);
    }

    {
        Prop br;
        const PsiElement x100 = PsiElement::basis(BasisLabel(2, 0, 0));
        const PsiElement x101 = PsiElement::basis(BasisLabel(2, 0, 2));
        // {Xi(1,0,0), Xi(1,0,1)} = i sqrt(2) Xi(1,0,1), from -sqrt(2)[J0, J+].
        br.expect(bracket_eps_limit(x100, x101) ==
                      PsiElement::basis(BasisLabel(2, 0, 2),
                                        Scalar::i() * Scalar::sqrt_int(2)),
                  "{Xi(1,0,0), Xi(1,0,1)}");
        const PsiElement mix = x101 + PsiElement::basis(BasisLabel(4, 0, 0));
        br.expect(bracket_eps_limit(mix, mix).is_zero(), "{x, x} = 0");
        br.expect(bracket_eps_limit(x100, x101) ==
                      bracket_eps_limit(x101, x100).scaled(Scalar(-1)),
                  "antisymmetry");
        c.add("classical bracket limit on the sphere generators",
              "pinned pairs", br);
    }
}

// ---------------------------------------------------------------------------
// spinor

void suite_spinor(Ctx& c) {
    Prop sign;
    for (const auto& l : labels_up_to(4)) {
        const int expect = l.n2 % 2 == 0 ? 1 : -1;
        sign.expect(two_pi_rotation_sign(PsiElement::basis(l)) == expect,
                    l.to_string());
    }
    c.add("full-turn rotation sign is (-1)^{2n}", "all labels n <= 2", sign);

    {
        bool mixed_throws = false;
        try {
            (void)two_pi_rotation_sign(
                PsiElement::basis(BasisLabel(0, 0, 0)) +
                PsiElement::basis(BasisLabel(1, 1, 1)));
        } catch (const MixedParity&) {
            mixed_throws = true;
        }
        c.add("mixed-parity elements have no rotation sign",
              "integer plus half-integer input", mixed_throws,
              mixed_throws ? "0" : "no error raised");
    }

    Prop member;
    for (const auto& p :
         {ParamPoint::level_at(4, Rational(1)),
          ParamPoint::numeric(Rational(1, 3), Scalar(Rational(5, 2)))}) {
        const SpinorColumn unit = spinor_membership(
            PsiElement::basis(BasisLabel(0, 0, 0)), PsiElement(), p);
        member.expect(unit.top == PsiElement::basis(BasisLabel(1, 1, 1)) &&
                          unit.bottom ==
                              PsiElement::basis(BasisLabel(1, 1, -1)),
                      "unit column components at " + point_str(p));
        for (int k = 0; k < 3; ++k) {
            const PsiElement f1 = p.apply(c.psi_sector(0, 4, 2));
            const PsiElement f2 = p.apply(c.psi_sector(0, 4, 2));
            const SpinorColumn col = spinor_membership(f1, f2, p);
            member.expect(in_spinor_set(col, p, 4),
                          "member at " + point_str(p));
        }
        SpinorColumn bad;
        bad.top = PsiElement::basis(BasisLabel(1, 1, 1));
        member.expect(!in_spinor_set(bad, p, 4),
                      "one-sided column at " + point_str(p));
        SpinorColumn off;
        off.top = PsiElement::basis(BasisLabel(2, 0, 0));
        member.expect(!in_spinor_set(off, p, 4),
                      "off-sector column at " + point_str(p));
    }
    c.add("spinor set membership: generated columns pass, one-sided and "
          "off-sector columns fail",
          "2 numeric points, cap n <= 2", member);
}

// ---------------------------------------------------------------------------
// classical

std::complex<double> closed_via_rotation(int n2, int r2, int m2, double R,
                                         const EulerAngles& ang, bool shifted) {
    // i^{m-r} (-1)^{n-r} (2R)^n C(2n, X)^{-1/2} D^n_{mr} with X = n + r
    // (shifted) or X = r (unshifted; integer labels with r >= 0 only).
    const int mr = (m2 - r2) / 2;
    const int nr = (n2 - r2) / 2;
    const int X = shifted ? (n2 + r2) / 2 : r2 / 2;
    const std::complex<double> I(0, 1);
    std::complex<double> phase = std::pow(I, ((mr % 4) + 4) % 4);
    if (nr % 2 != 0) phase = -phase;
    const double bin = to_double(Rational(binomial(n2, X)));
    return phase * std::pow(2 * R, n2 / 2.0) / std::sqrt(bin) *
           wigner_D(n2, m2, r2, ang);
}

void suite_classical(Ctx& c) {
    std::vector<EulerAngles> angles;
    for (int s = 0; s < 20; ++s) angles.push_back(c.angles());

    double worst_closed = 0;
    for (const auto& l : labels_up_to(4))
        for (const auto& ang : angles)
            worst_closed = std::max(
                worst_closed, std::abs(xi_classical(l.n2, l.r2, l.m2, 1.0, ang) -
                                       xi_classical_closed(l.n2, l.r2, l.m2,
                                                           1.0, ang)));
    c.add("direct word substitution matches the Jacobi closed form",
          "eps=0, R=1; n <= 2; 20 random angle samples; tol 1e-10",
          worst_closed < 1e-10, fmt(worst_closed));

    double worst_shifted = 0, worst_plain = 0;
    for (const auto& l : labels_up_to(4)) {
        for (const auto& ang : angles) {
            const auto direct = xi_classical(l.n2, l.r2, l.m2, 1.0, ang);
            worst_shifted = std::max(
                worst_shifted,
                std::abs(direct -
                         closed_via_rotation(l.n2, l.r2, l.m2, 1.0, ang, true)));
            if (l.n2 % 2 == 0 && l.r2 >= 0)
                worst_plain = std::max(
                    worst_plain,
                    std::abs(direct - closed_via_rotation(l.n2, l.r2, l.m2, 1.0,
                                                          ang, false)));
        }
    }
    c.add("rotation-matrix form holds with the shifted binomial index "
          "C(2n, n+r)",
          "eps=0, R=1; n <= 2; 20 samples; tol 1e-10", worst_shifted < 1e-10,
          fmt(worst_shifted));
    c.add("rotation-matrix form with unshifted index C(2n, r) is rejected",
          "residuals reported for both candidates; unshifted worst " +
              fmt(worst_plain),
          worst_plain > 1e-10, fmt(worst_plain));

    Prop pins;
    for (int s = 0; s < 5; ++s) {
        const EulerAngles& ang = angles[static_cast<std::size_t>(s)];
        const double R = 1.0;
        // Dictionary Xi(1,0,0) = -sqrt(2) J0 with classical J0 = R cos(beta);
        // |Xi(1,0,1)| = |J+| = R sin(beta); the three symbols square-sum to
        // the rotation invariant 2 R^2.
        pins.expect(std::abs(xi_classical(2, 0, 0, R, ang) +
                             std::sqrt(2.0) * R * std::cos(ang.beta)) < 1e-12,
                    "J0 symbol, sample " + std::to_string(s));
        pins.expect(std::abs(std::abs(xi_classical(2, 0, 2, R, ang)) -
                             R * std::sin(ang.beta)) < 1e-12,
                    "|J+| symbol, sample " + std::to_string(s));
        double sq = 0;
        for (int m2 = -2; m2 <= 2; m2 += 2)
            sq += std::norm(xi_classical(2, 0, m2, R, ang));
        pins.expect(std::abs(sq - 2.0 * R * R) < 1e-12,
                    "square sum, sample " + std::to_string(s));
    }
    c.add("spin-1 classical symbols are the sphere coordinates",
          "5 angle samples", pins);
}

// ---------------------------------------------------------------------------
// structure

void suite_structure(Ctx& c) {
    {
        TableRequest req;
        req.kind = TableKind::Reduced;
        req.n2_max = 3;
        req.points = {ParamPoint::level_at(4, Rational(1)),
                      ParamPoint::numeric(Rational(1, 3), Scalar(Rational(5, 2)))};
        bool ok = true;
        std::string residual = "0";
        std::size_t rows = 0;
        try {
            rows = generate_table(req).rows.size();
        } catch (const InconsistentReduction& e) {
            ok = false;
            residual = e.what();
        }
        c.add("reduced elements are independent of the magnetic labels",
              "n1, n2 <= 3/2; 2 numeric points; " + std::to_string(rows) +
                  " reduced rows",
              ok, residual);
    }

    {
        TableRequest req;
        req.kind = TableKind::Structure;
        req.n2_max = 2;
        req.points = {ParamPoint::level_at(4, Rational(1))};
        const std::string serial = generate_table_serial(req).to_csv();
        const std::string serial2 = generate_table_serial(req).to_csv();
        TableRequest par = req;
        par.jobs = 2;
        const std::string jobs2 = generate_table(par).to_csv();
        par.jobs = 4;
        const std::string jobs4 = generate_table(par).to_csv();
        const bool ok = serial == serial2 && serial == jobs2 && serial == jobs4;
        c.add("tables are byte-deterministic across runs and job counts",
              "structure table, n <= 1, jobs in {1,2,4}", ok,
              ok ? "0" : "byte mismatch");
    }

    {
        TableRequest req;
        req.kind = TableKind::Structure;
        req.n2_max = 2;
        const Table t = generate_table(req);
        Prop rules;
        for (const auto& row : t.rows) {
            // columns: n1 r1 m1 n2 r2 m2 n r m coeff float point
            auto half = [](const std::string& s) {
                const auto slash = s.find('/');
                if (slash == std::string::npos)
                    return 2 * std::atoi(s.c_str());
                return std::atoi(s.substr(0, slash).c_str());
            };
            const int n1 = half(row[0]), m1 = half(row[2]);
            const int n2 = half(row[3]), m2 = half(row[5]);
            const int n = half(row[6]), m = half(row[8]);
            rules.expect(m == m1 + m2 && n >= std::abs(m) &&
                             n <= n1 + n2 && n >= std::abs(n1 - n2) &&
                             !Scalar::parse(row[9]).is_zero(),
                         "row with n=" + row[6]);
            if (row[0] == "0")
                rules.expect(row[9] == "1" && row[6] == row[3] &&
                                 row[8] == row[5],
                             "unit product row");
        }
        c.add("structure rows obey the selection rules and unit products",
              "symbolic, n <= 1; " + std::to_string(t.rows.size()) + " rows",
              rules);
    }

    {
        TableRequest req;
        req.kind = TableKind::Norms;
        req.n2_max = kTableHardCap2 + 1;
        bool threw = false;
        try {
            (void)generate_table(req);
        } catch (const CapExceeded&) {
            threw = true;
        }
        c.add("oversized requests are refused without the explicit override",
              "n_max = " + frac_str(kTableHardCap2 + 1), threw,
              threw ? "0" : "no error raised");
    }
}

using SuiteFn = void (*)(Ctx&);

const std::vector<std::pair<std::string, SuiteFn>>& suite_table() {
    static const std::vector<std::pair<std::string, SuiteFn>> table = {
        {"ring", suite_ring},
        {"weil", suite_weil},
        {"basis", suite_basis},
        {"orthogonality", suite_orthogonality},
        {"norms", suite_norms},
        {"assoc", suite_assoc},
        {"hahn", suite_hahn},
        {"matrix", suite_matrix},
        {"geometry", suite_geometry},
        {"spinor", suite_spinor},
        {"classical", suite_classical},
        {"structure", suite_structure},
    };
    return table;
}

}  // namespace

const std::vector<std::string>& verify_suite_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> out;
        for (const auto& [name, fn] : suite_table()) out.push_back(name);
        return out;
    }();
    return names;
}

int VerifyReport::passed() const {
    int n = 0;
    for (const auto& ch : checks) n += ch.pass ? 1 : 0;
    return n;
}

int VerifyReport::failed() const {
    return static_cast<int>(checks.size()) - passed();
}

std::string VerifyReport::to_json() const {
    nlohmann::ordered_json out;
    out["seed"] = seed;
    out["suites"] = suites_run;
    out["passed"] = passed();
    out["failed"] = failed();
    out["all_pass"] = all_pass();
    out["checks"] = nlohmann::ordered_json::array();
    for (const auto& ch : checks) {
        out["checks"].push_back({{"suite", ch.suite},
                                 {"property", ch.property},
                                 {"params", ch.params},
                                 {"pass", ch.pass},
                                 {"residual", ch.residual}});
    }
    return out.dump(2) + "\n";
}

std::string VerifyReport::summary() const {
    std::ostringstream os;
    std::vector<std::string> order;
    std::map<std::string, std::pair<int, int>> tally;
    for (const auto& ch : checks) {
        if (!tally.count(ch.suite)) order.push_back(ch.suite);
        auto& t = tally[ch.suite];
        ++t.second;
        if (ch.pass) ++t.first;
    }
    for (const auto& s : order) {
        os << (tally[s].first == tally[s].second ? "PASS" : "FAIL") << "  "
           << s << ": " << tally[s].first << "/" << tally[s].second
           << " properties\n";
        for (const auto& ch : checks)
            if (ch.suite == s && !ch.pass)
                os << "      failed: " << ch.property << " [" << ch.params
                   << "] residual " << ch.residual << "\n";
    }
    os << (all_pass() ? "PASS" : "FAIL") << "  total: " << passed() << "/"
       << checks.size() << " properties\n";
    return os.str();
}

VerifyReport run_verify(const VerifyOptions& opt) {
    VerifyReport rep;
    rep.seed = opt.seed;
    Ctx ctx(opt, rep);
    std::set<std::string> wanted(opt.suites.begin(), opt.suites.end());
    for (const auto& name : wanted) {
        bool known = false;
        for (const auto& [sname, fn] : suite_table())
            known = known || sname == name;
        if (!known) throw InvalidLabel("unknown verify suite: " + name);
    }
    for (const auto& [name, fn] : suite_table()) {
        if (!wanted.empty() && !wanted.count(name)) continue;
        rep.suites_run.push_back(name);
        ctx.suite = name;
        fn(ctx);
    }
    return rep;
}

}  // namespace ncsphere
