#pragma once

#include "ncsphere/scalar.hpp"
#include "ncsphere/weil.hpp"

#include <map>
#include <string>
#include <vector>

namespace ncsphere {

// Label of the basis element Xi(n, r, m); half-integers stored doubled.
struct BasisLabel {
    int n2 = 0, r2 = 0, m2 = 0;

    BasisLabel() = default;
    BasisLabel(int n2_, int r2_, int m2_);  // throws InvalidLabel

    static bool valid(int n2, int r2, int m2);

    bool operator<(const BasisLabel& o) const {
        if (n2 != o.n2) return n2 < o.n2;
        if (r2 != o.r2) return r2 < o.r2;
        return m2 < o.m2;
    }
    bool operator==(const BasisLabel& o) const {
        return n2 == o.n2 && r2 == o.r2 && m2 == o.m2;
    }

    std::string to_string() const;  // Xi(3/2,1/2,-1/2)
};

// Finite linear combination of Xi basis elements.
class PsiElement {
public:
    using CoeffMap = std::map<BasisLabel, Scalar>;

    PsiElement() = default;
    static PsiElement basis(const BasisLabel& l, const Scalar& c = Scalar(1));

    bool is_zero() const { return coeffs_.empty(); }
    bool operator==(const PsiElement& o) const { return coeffs_ == o.coeffs_; }
    bool operator!=(const PsiElement& o) const { return !(*this == o); }

    PsiElement operator+(const PsiElement& o) const;
    PsiElement operator-(const PsiElement& o) const;
    PsiElement scaled(const Scalar& c) const;
    PsiElement& operator+=(const PsiElement& o) { return *this = *this + o; }
    PsiElement& operator-=(const PsiElement& o) { return *this = *this - o; }

    void add(const BasisLabel& l, const Scalar& c);
    const CoeffMap& coeffs() const { return coeffs_; }

    std::string to_string() const;
    std::string to_json() const;

private:
    CoeffMap coeffs_;
};

// Evaluation point for the parameters (eps, Rhat).  Fully symbolic points
// keep both as symbols; level points pin Rhat = eps*(k+1/2) with eps either
// symbolic or numeric; numeric points pin both.  Numeric rhat may be a
// rational or rational*sqrt(d) and must satisfy rhat > 0 and
// R^2 = rhat^2 - eps^2/4 >= 0.
class ParamPoint {
public:
    enum class Kind { Symbolic, Level, Numeric };

    static ParamPoint symbolic();
    static ParamPoint level(int k2);                      // eps stays symbolic
    static ParamPoint level_at(int k2, const Rational& eps);
    static ParamPoint numeric(const Rational& eps, const Scalar& rhat);

    Kind kind() const { return kind_; }
    bool eps_known() const { return eps_set_; }
    const Rational& eps() const { return eps_; }
    int k2() const { return k2_; }
    // Rhat as a Scalar in the remaining symbols: Rh, (k+1/2)*eps, or the
    // numeric value.
    Scalar rhat() const;

    // Substitute Rhat and (when known) eps into a coefficient.
    Scalar apply(const Scalar& s) const;
    PsiElement apply(const PsiElement& x) const;

private:
    ParamPoint() = default;
    Kind kind_ = Kind::Symbolic;
    bool eps_set_ = false;
    Rational eps_{0};
    Scalar rhat_;
    int k2_ = 0;
};

// ---------------------------------------------------------------------------
// basis elements

// Xi(n,r,m) = eps^{m-n} sqrt((n+m)!/((2n)!(n-m)!)) (Ad J-)^{n-m}(a+^{n+r} b-^{n-r}).
// Each Ad J- carries exactly one eps, cancelling the prefactor, so the result
// has eps-free coefficients.  Cached; thread-safe.
WElement xi(const BasisLabel& l);

// Lift a PsiElement to its canonical WElement representative.
WElement lift(const PsiElement& x);

// One (r,m) sector after evaluating K0 at the Rhat symbol: the element
// a_sgn^{|r+m|} b_sgn^{|r-m|} * q(J0) with q[i] the J0^i coefficient.
struct ReducedSector {
    int r2 = 0, m2 = 0;
    std::vector<Scalar> q;  // trailing zeros trimmed
};

// Collapse a two-variable sector polynomial by K0 -> Rhat.
ReducedSector to_reduced_sector(const SectorPoly& sp);

// Express a reduced sector in the Xi basis by the back-substitution from the
// top J0 degree.  The divisions are only by the leading coefficients of the
// cached Xi polynomials, which are eps- and Rhat-free single surds, so the
// result is exact for symbolic parameters and any evaluation point.
PsiElement decompose_reduced(const ReducedSector& s, const ParamPoint& p);

// Projection along the right ideal generated by (K0 - Rhat): sector
// decomposition, reduction, K0 -> Rhat, then Xi decomposition.
PsiElement rho_symbolic(const WElement& w);
PsiElement rho(const WElement& w, const ParamPoint& p);
// Projection along the left ideal generated by (K0 - Rhat).
PsiElement rho_star_symbolic(const WElement& w);
PsiElement rho_star(const WElement& w, const ParamPoint& p);

// The nonassociative products on Psi.
PsiElement product_rho(const PsiElement& x, const PsiElement& y, const ParamPoint& p);
PsiElement product_rho_star(const PsiElement& x, const PsiElement& y, const ParamPoint& p);

// Coefficient of Xi(0,0,0), and the level-n component.
Scalar pi0(const PsiElement& x);
PsiElement pi_n(const PsiElement& x, int n2);

// <x, y> = pi0(rho(dagger(x) y)).  Sesquilinear, conjugate-linear in x.
Scalar inner(const PsiElement& x, const PsiElement& y, const ParamPoint& p);

// Closed-form norm: ||Xi(n,r,m)||^2 =
//   (n+r)!(n-r)!/(2n+1)! prod_{s=1}^{n-r}(2Rh - eps s) prod_{s=1}^{n+r}(2Rh + eps s),
// independent of m.
Scalar norm_sq(int n2, int r2, const ParamPoint& p);
// Sign of norm_sq at a point where 2Rhat/eps is decidable: +1 when
// 2Rh/eps > n-r, 0 when 2Rh/eps is an integer in [1, n-r], otherwise
// (-1)^{n-r-floor(2Rh/eps)}.  Throws SymbolicPointUnsupported at fully
// symbolic points.
int norm_sign(int n2, int r2, const ParamPoint& p);

// Label-level adjoint actions (exact WElement identities on representatives):
//   Ad J0 Xi = eps m Xi,                Ad K0 Xi = eps r Xi,
//   Ad J+ Xi = eps sqrt((n-m)(n+m+1)) Xi(m+1),
//   Ad J- Xi = eps sqrt((n+m)(n-m+1)) Xi(m-1).
PsiElement ad_J0(const PsiElement& x);
PsiElement ad_Jp(const PsiElement& x);
PsiElement ad_Jm(const PsiElement& x);
PsiElement ad_K0(const PsiElement& x);
// Delta = AdJ0 AdJ0 + 1/2 AdJ+ AdJ- + 1/2 AdJ- AdJ+; eigenvalue eps^2 n(n+1).
PsiElement laplacian(const PsiElement& x);

// (Xi(n,r,m))^dagger = (-1)^{r+m} Xi(n,-r,-m), coefficients conjugated.
PsiElement dagger_label(const PsiElement& x);

}  // namespace ncsphere
