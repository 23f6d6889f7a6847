#pragma once

#include "ncsphere/numeric.hpp"
#include "ncsphere/psi.hpp"
#include "ncsphere/scalar.hpp"

#include <complex>
#include <vector>

namespace ncsphere {

/**
 * Terminating Gauss sum F(a, b; c; z) = sum_s (a)_s (b)_s / ((c)_s s!) z^s.
 * Needs a or b a nonpositive integer.  When c is also a nonpositive integer
 * the sum is read as the kappa -> 0 limit of F(a, b; c + kappa; z): terms
 * whose numerator Pochhammer vanished at or before the denominator zero are
 * dropped; a denominator zero with a live numerator is a genuine pole and
 * throws NonTerminating.
 */
Scalar hyp2f1_terminating(const Rational& a, const Rational& b, const Rational& c,
                          const Rational& z = Rational(1));

// Same rules for the Saalschutz-style F(a1, a2, a3; b1, b2; z) finite sum.
Scalar hyp3f2_terminating(const Rational& a1, const Rational& a2, const Rational& a3,
                          const Rational& b1, const Rational& b2,
                          const Rational& z = Rational(1));

/**
 * Hahn polynomial h^{(alpha,beta)}_n(x, N) on the lattice x = 0..N-1 with
 * weight (x+beta)! (N-1-x+alpha)! / (x! (N-1-x)!), in the discrete-variable
 * normalization whose x^n coefficient is (alpha+beta+n+1)_n / n!.  The
 * polynomial is a polynomial in both x and N, so N may be symbolic
 * (e.g. 2*Rh/eps) and no division by N-dependent factors ever happens.
 */
struct HahnSpec {
    int n = 0;      // degree >= 0
    int alpha = 0;  // >= 0
    int beta = 0;   // >= 0
    Scalar x;
    Scalar N;
};

// Coefficients of h^{(alpha,beta)}_n(x, N) in ascending powers of x; entries
// are exact polynomials in N.
std::vector<Scalar> hahn_coeffs(int n, int alpha, int beta, const Scalar& N);
Scalar hahn(const HahnSpec& spec);
// The normalization constant multiplying the unit (3F2 = 1 + ...) series:
// (beta+1)_n (1-N)_n / n!.
Scalar hahn_nik_prefactor(int n, int beta, const Scalar& N);

/**
 * The closed form of Xi(n,r,m) as a reduced sector element
 * a_sgn^{|r+m|} b_sgn^{|r-m|} q(J0): one of four Hahn-polynomial cases picked
 * by the ordering of r and m, with the parameter point applied to the
 * coefficients at the end.  Agrees exactly with the projection pipeline.
 */
ReducedSector xi_closed_form(int n2, int r2, int m2, const ParamPoint& p);

// Jacobi polynomial P^{(alpha,beta)}_n(z), exact and double versions.
Scalar jacobi(int n, int alpha, int beta, const Scalar& z);
double jacobi(int n, int alpha, int beta, double z);

struct EulerAngles {
    double alpha = 0, beta = 0, gamma = 0;
};

/**
 * Wigner rotation matrices for the doubled spin labels n2, m2, r2:
 * D^n_{mr}(alpha,beta,gamma) = e^{-i m alpha} d^n_{mr}(beta) e^{-i r gamma},
 * with the little-d convention pinned by d^{1/2}_{1/2,1/2} = cos(beta/2),
 * d^{1/2}_{-1/2,1/2} = sin(beta/2) (required by the classical limit of a+
 * and b+).
 */
double wigner_d(int n2, int m2, int r2, double beta);
std::complex<double> wigner_D(int n2, int m2, int r2, const EulerAngles& a);

/**
 * Exact Clebsch-Gordan coefficient <j1 m1 j2 m2 | j m> via the Racah sum:
 * a single surd prefactor times a rational sum.  All labels doubled.
 * Throws InvalidCoupling when the labels violate |m_i| <= j_i, parity,
 * m != m1 + m2, or the triangle rule.
 */
Scalar clebsch_gordan(int j1_2, int j2_2, int j_2, int m1_2, int m2_2, int m_2);

/**
 * The eps = 0 limit of Xi(n,r,m) as a function on SU(2) in Euler angles:
 * xi_classical substitutes
 *   a+ = sqrt(2R) cos(beta/2) e^{-i(alpha+gamma)/2},
 *   a- = conj(a+),
 *   b+ = -i sqrt(2R) sin(beta/2) e^{ i(alpha-gamma)/2},
 *   b- = conj(b+)
 * into the symmetric word; xi_classical_closed evaluates the Jacobi-polynomial
 * closed form
 *   (-1)^{n-max(r,m)} (2R)^{n-max(|r|,|m|)} C(2n,n+m)^{1/2}
 *   C(2n, n-max(|r|,|m|))^{-1} a_sgn^{r+m} b_sgn^{r-m}
 *   P^{(|r-m|,|r+m|)}_{n-max(|r|,|m|)}(J0/R),   J0 = R cos(beta).
 */
std::complex<double> xi_classical(int n2, int r2, int m2, double R, const EulerAngles& a);
std::complex<double> xi_classical_closed(int n2, int r2, int m2, double R, const EulerAngles& a);

}  // namespace ncsphere
