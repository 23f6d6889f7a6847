#pragma once

#include <vector>

#include "ncsphere/psi.hpp"

namespace ncsphere {

// True when every basis label appearing in x carries the Ad K0 eigenvalue
// eps*r, i.e. label.r2 == r2 (the zero element lies in every sector).
bool on_sector(const PsiElement& x, int r2);

// A PsiElement tagged with its Ad K0 sector; construction checks the tag.
struct FieldSector {
    int r2 = 0;
    PsiElement element;

    FieldSector() = default;
    FieldSector(int r2_, PsiElement element_);  // throws SectorMismatch
};

// How to evaluate the triple product rho(xi1 xi2 xi3) inside omega:
//   SingleRho    rho applied once to the full product (the definition);
//   RightNested  rho(xi1 * lift(rho(xi2 xi3))): provably equal to SingleRho,
//                since the projection kernel is the right ideal W*(K0-Rhat);
//   LeftNested   rho(lift(rho(xi1 xi2)) * xi3): genuinely different in
//                general (the difference is eps * r(xi3) * rho(w xi3)).
enum class TripleProduct { SingleRho, RightNested, LeftNested };

// The sector-shifting contraction
//   omega^{r1 r2}_n(x) = sum_m rho( Xi(n, r2, m)^dagger * x * Xi(n, r1, m) ),
// which maps the sector s to the sector s + r1 - r2 and commutes with the
// rotation actions Ad J0, Ad J+-.  Sector arguments are doubled: r1_2, r2_2,
// n2.  Throws InvalidLabel unless |r1_2|, |r2_2| <= n2 with n2 + r_i2 even.
PsiElement omega(int r1_2, int r2_2, int n2, const PsiElement& x,
                 const ParamPoint& p,
                 TripleProduct mode = TripleProduct::SingleRho);

// Coordinate functions, coordinate one-forms, and the dual vector fields,
// indexed m = -1, 0, 1 (array index m+1):
//   x^m  = (2Rhat+eps)^{-1/2} Xi(1, 0, m)    (sector 0,  x^m sum to the
//                                             round-sphere embedding)
//   dx^m = (2Rhat+eps)^{-1/2} Xi(1, -1, m)   (sector -1)
//   X_m  = (-1)^{m+1} (2Rhat+eps)^{-1/2} Xi(1, 1, -m)   (sector +1)
// The prefactor needs 2Rhat+eps to evaluate to a positive rational at p;
// otherwise SymbolicPointUnsupported is thrown.
std::vector<PsiElement> coordinates(const ParamPoint& p);
std::vector<PsiElement> one_forms(const ParamPoint& p);
std::vector<PsiElement> vector_fields(const ParamPoint& p);

// Exterior derivative d f = (eps (2Rhat+eps))^{-1} omega^{01}_1(f) for f in
// the scalar sector (throws SectorMismatch otherwise).  The contraction
// omega^{01}_1 is O(eps) on every function (each adjoint commutator carries
// one eps), so the eps division is what makes d(x^m) = dx^m exact:
//   d Xi(n,0,m) = 2n (Rhat + eps n/2) (2Rhat+eps)^{-1} Xi(n,-1,m).
// Needs a point with positive rational eps and 2Rhat+eps (else
// SymbolicPointUnsupported).  The _any variant applies the same formula
// verbatim to any element, no sector check (it is not a differential:
// d(df) need not vanish).
PsiElement exterior_d(const PsiElement& f, const ParamPoint& p);
PsiElement exterior_d_any(const PsiElement& x, const ParamPoint& p);

// Action of a vector field on a scalar: X(f) = rho((df) X).
PsiElement vector_action(const PsiElement& X, const PsiElement& f,
                         const ParamPoint& p);

// Metric pairing of two vector fields (sector +1 each, else SectorMismatch):
// g(X, Y) = rho(X^dagger Y).
PsiElement metric(const PsiElement& X, const PsiElement& Y,
                  const ParamPoint& p);

// Classical Poisson-type bracket {x, y} = lim_{eps->0} (1/(i eps)) rho([x,y])
// at the symbolic point (Rhat survives as the classical radius).  Throws
// NotEpsDivisible when some coefficient of rho([x,y]) is not O(eps).
PsiElement bracket_eps_limit(const PsiElement& x, const PsiElement& y);

// Number operator scaled to level: delta_N(Xi(n,r,m)) = n Xi(n,r,m).
PsiElement delta_N(const PsiElement& x);

// A two-component column over Psi.
struct SpinorColumn {
    PsiElement top, bottom;
};

// The spinor combination (a+; b+) f1 + (a-; b-) f2 with f1, f2 in the scalar
// sector (else SectorMismatch), components projected by rho at p.
SpinorColumn spinor_membership(const PsiElement& f1, const PsiElement& f2,
                               const ParamPoint& p);

// Whether the column lies in the spinor set, i.e. arises from some f1, f2 in
// the scalar sector supported on labels with n2 <= n2_cap.  Columns must be
// supported on the sectors +-1 (split by chirality); membership of each
// chirality half is a linear consistency question over the scalar ring's
// fraction field, solved by fraction-free elimination.
bool in_spinor_set(const SpinorColumn& col, const ParamPoint& p, int n2_cap);

// Sign picked up under a 2 pi rotation: (-1)^{2n} on the level-n component.
// +1 for integer levels (and for 0), -1 for half-integer levels; throws
// MixedParity when the support mixes the two.
int two_pi_rotation_sign(const PsiElement& x);

}  // namespace ncsphere
