#pragma once

#include "ncsphere/scalar.hpp"

#include <map>
#include <string>
#include <vector>

namespace ncsphere {

// Exponents of the normal-ordered word a+^ap a-^am b+^bp b-^bm.
struct NormalMonomial {
    int ap = 0, am = 0, bp = 0, bm = 0;

    int degree() const { return ap + am + bp + bm; }
    NormalMonomial dagger() const { return {am, ap, bm, bp}; }
    bool operator<(const NormalMonomial& o) const {
        if (ap != o.ap) return ap < o.ap;
        if (am != o.am) return am < o.am;
        if (bp != o.bp) return bp < o.bp;
        return bm < o.bm;
    }
    bool operator==(const NormalMonomial& o) const {
        return ap == o.ap && am == o.am && bp == o.bp && bm == o.bm;
    }
};

enum class Letter { APlus, AMinus, BPlus, BMinus };
enum class Generator { J0, Jp, Jm, K0, Kp, Km };

/**
 * Element of the two-oscillator algebra W(eps) in normal-ordered form
 * (creation letters left).  Products use the closed reordering rule
 *   a-^t a+^s = sum_i C(t,i) C(s,i) i! eps^i a+^(s-i) a-^(t-i)
 * so the cost is quadratic in the exponents, not exponential in words.
 */
class WElement {
public:
    using CoeffMap = std::map<NormalMonomial, Scalar>;

    WElement() = default;

    static WElement zero() { return {}; }
    static WElement one() { return monomial(NormalMonomial{}); }
    static WElement monomial(const NormalMonomial& m, const Scalar& c = Scalar(1));
    static WElement letter(Letter l);
    static WElement generator(Generator g);

    bool is_zero() const { return coeffs_.empty(); }
    bool operator==(const WElement& o) const { return coeffs_ == o.coeffs_; }
    bool operator!=(const WElement& o) const { return !(*this == o); }

    WElement operator-() const;
    WElement operator+(const WElement& o) const;
    WElement operator-(const WElement& o) const;
    WElement operator*(const WElement& o) const;
    WElement& operator+=(const WElement& o) { return *this = *this + o; }
    WElement& operator-=(const WElement& o) { return *this = *this - o; }
    WElement& operator*=(const WElement& o) { return *this = *this * o; }

    WElement scaled(const Scalar& c) const;
    WElement dagger() const;

    int max_degree() const;  // -1 for zero
    const CoeffMap& coeffs() const { return coeffs_; }

    std::string to_string() const;

private:
    CoeffMap coeffs_;
    void add(const NormalMonomial& m, const Scalar& c);
    friend WElement ad_eps0(Generator, const WElement&);
};

WElement operator*(const Scalar& c, const WElement& w);

// Commutator [t, w].
WElement ad(const WElement& t, const WElement& w);
// Commutator with a named generator: exact in eps, linear cost.
WElement ad_generator(Generator g, const WElement& w);
// The formal-derivative form: equals (1/eps) * ad_generator(g, w) with the
// overall eps cancelled symbolically.  Only the raising*lowering bilinears
// J0, J+, J-, K0 admit it; K+- throw UnsupportedGenerator.
WElement ad_eps0(Generator g, const WElement& w);

// ---------------------------------------------------------------------------
// symmetric basis

// Label of S(s,t,u,v): the symmetric sum over permutations of
// a-^s a+^t b-^u b+^v with unit coefficients.
struct SymLabel {
    int s = 0, t = 0, u = 0, v = 0;
    bool operator<(const SymLabel& o) const {
        if (s != o.s) return s < o.s;
        if (t != o.t) return t < o.t;
        if (u != o.u) return u < o.u;
        return v < o.v;
    }
    bool operator==(const SymLabel& o) const {
        return s == o.s && t == o.t && u == o.u && v == o.v;
    }
    int degree() const { return s + t + u + v; }
};

class SymElement {
public:
    using CoeffMap = std::map<SymLabel, Scalar>;

    SymElement() = default;
    static SymElement basis(const SymLabel& l, const Scalar& c = Scalar(1));

    bool is_zero() const { return coeffs_.empty(); }
    bool operator==(const SymElement& o) const { return coeffs_ == o.coeffs_; }
    bool operator!=(const SymElement& o) const { return !(*this == o); }

    SymElement operator+(const SymElement& o) const;
    SymElement operator-(const SymElement& o) const;
    SymElement scaled(const Scalar& c) const;
    SymElement& operator+=(const SymElement& o) { return *this = *this + o; }

    const CoeffMap& coeffs() const { return coeffs_; }
    void add(const SymLabel& l, const Scalar& c);

    std::string to_string() const;

private:
    CoeffMap coeffs_;
};

// S(s,t,u,v) as a normal-ordered element (memoised).
WElement sym_basis(const SymLabel& l);

// Basis change; triangular in total degree, exact both ways.
SymElement to_sym_basis(const WElement& w);
WElement from_sym_basis(const SymElement& x);

// Formal trace: tr S(s,t,u,v) = 2 S(s-1,t-1,u,v) + 2 S(s,t,u-1,v-1),
// negative-index terms dropped.
SymElement formal_trace(const SymElement& x);

bool is_traceless(const WElement& w);

// Dagger transported to the symmetric basis: S(s,t,u,v) -> S(t,s,v,u).
SymElement sym_dagger(const SymElement& x);

// ---------------------------------------------------------------------------
// sector decomposition

// Simultaneous Ad K0 / Ad J0 eigenpart: eigenvalues eps*r and eps*m with
// r = r2/2, m = m2/2.  Per monomial r+m = ap-am and r-m = bp-bm.
struct SectorPart {
    int r2 = 0, m2 = 0;
    WElement part;
};

std::vector<SectorPart> sector_decompose(const WElement& w);

// Reduced form of a sector part: prefix a_sgn^|r+m| b_sgn^|r-m| times a
// polynomial q(J0, K0) on the right.  q keys are (J0 power, K0 power).
struct SectorPoly {
    int r2 = 0, m2 = 0;
    std::map<std::pair<int, int>, Scalar> q;
};

SectorPoly reduced_form(const SectorPart& p);
WElement from_reduced(const SectorPoly& sp);

// Powers of the balanced products: a+^k a-^k and J0^j K0^k as WElements.
WElement j0k0_monomial(int j0pow, int k0pow);

}  // namespace ncsphere
