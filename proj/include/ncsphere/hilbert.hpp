#pragma once

#include "ncsphere/psi.hpp"
#include "ncsphere/scalar.hpp"
#include "ncsphere/weil.hpp"

#include <map>
#include <string>
#include <utility>
#include <vector>

namespace ncsphere {

/**
 * Truncation level k (half-integer >= 0, stored doubled).  At level k the
 * symbol Rh takes the value eps*(k + 1/2), so R^2 = Rh^2 - eps^2/4 equals
 * eps^2 k(k+1).
 */
struct FuzzyLevel {
    int k2 = 0;  // doubled: k = k2/2

    explicit FuzzyLevel(int k2_value);  // throws InvalidLabel if k2 < 0
    Rational k() const { return Rational(k2) / 2; }
    int dim() const { return k2 + 1; }      // 2k + 1
    Scalar rhat(const Rational& eps) const; // eps*(k + 1/2)
};

/**
 * Sparse vector over the orthonormal kets |k, j> with 2k and k + j integers,
 * k >= 0 and |j| <= k.  Labels are stored doubled as (k2, j2).  A vector may
 * span several levels k, since the oscillator letters move k by 1/2.
 */
class KetVector {
public:
    using Key = std::pair<int, int>;  // (k2, j2)
    using TermMap = std::map<Key, Scalar>;

    KetVector() = default;

    static KetVector zero() { return {}; }
    // The unit basis ket |k, j>.  Throws InvalidLabel on a bad label.
    static KetVector basis(int k2, int j2);

    bool is_zero() const { return terms_.empty(); }
    bool operator==(const KetVector& o) const { return terms_ == o.terms_; }
    bool operator!=(const KetVector& o) const { return !(*this == o); }

    KetVector operator+(const KetVector& o) const;
    KetVector operator-(const KetVector& o) const;
    KetVector scaled(const Scalar& c) const;

    // Dual pairing <k, j | v>: the coefficient of |k, j>.
    Scalar bra(int k2, int j2) const;

    // Adds c * |k2/2, j2/2>, dropping the key if the sum cancels.
    void add_term(int k2, int j2, const Scalar& c);

    const TermMap& terms() const { return terms_; }
    std::string to_string() const;

private:
    TermMap terms_;
};

/**
 * Left action of a normal-ordered word on a ket vector with eps set to the
 * given positive rational:
 *
 *   a+|k,j> = eps^(1/2) (k+j+1)^(1/2) |k+1/2, j+1/2>
 *   a-|k,j> = eps^(1/2) (k+j)^(1/2)   |k-1/2, j-1/2>
 *   b+|k,j> = eps^(1/2) (k-j+1)^(1/2) |k+1/2, j-1/2>
 *   b-|k,j> = eps^(1/2) (k-j)^(1/2)   |k-1/2, j+1/2>
 *
 * eps in coefficients of w is substituted; Rh is rejected with
 * SymbolicPointUnsupported because a ket vector may span several levels, so
 * there is no single value for Rh to take (use pi0_trace / phi_matrix /
 * rho_consistency for level-pinned operations).
 */
KetVector apply(const WElement& w, const KetVector& v, const Rational& eps);

/**
 * The averaged diagonal (1/(2k+1)) sum_j <k,j| w |k,j> at level k.  Equals
 * pi0(rho(w)) at the parameter point (eps, Rh = eps*(k+1/2)); both eps and
 * Rh in coefficients of w are substituted at that point first.
 */
Scalar pi0_trace(const WElement& w, FuzzyLevel k, const Rational& eps);

/**
 * Exact rectangular matrix in M_{(2k+2r+1) x (2k+1)}.  Entries are stored
 * 0-based row-major internally; the emitted CSV/JSON uses the 1-based
 * (mu, nu) convention with mu the row index and nu the column index.
 */
class RectMatrix {
public:
    RectMatrix(int rows, int cols);  // zero-filled; throws InvalidLabel on negative dims
    static RectMatrix identity(int n);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    const Scalar& at(int i, int j) const;  // 0-based
    Scalar& at(int i, int j);

    bool is_zero() const;
    bool operator==(const RectMatrix& o) const;
    bool operator!=(const RectMatrix& o) const { return !(*this == o); }

    RectMatrix operator+(const RectMatrix& o) const;
    RectMatrix operator-(const RectMatrix& o) const;
    RectMatrix operator*(const RectMatrix& o) const;  // throws SectorMismatch on shape clash
    RectMatrix dagger() const;                        // conjugate transpose
    Scalar trace() const;                             // square matrices only
    // Sum of entry * conj(entry) over all entries, exact.
    Scalar abs_sq_sum() const;

    // Nonzero entries as "mu,nu,value" rows (1-based indices, exact value
    // strings).  With floats = true two extra columns re,im give the value
    // rounded to the requested number of significant digits.
    std::string to_csv(bool floats = false, int precision = 17) const;
    // JSON object {rows, cols, entries: [{mu, nu, value[, re, im]}]}.
    std::string to_json(bool floats = false, int precision = 17) const;

private:
    int rows_ = 0, cols_ = 0;
    std::vector<Scalar> entries_;  // row-major
};

/**
 * The matrix (phi^r_k(x))_{mu nu} = <k+r, mu-k-r-1| x |k, nu-k-1> of the
 * sector-r element x at level k, with Rh = eps*(k+1/2).  Every basis label
 * of x must lie in the Ad K0 eigensector r2 (throws SectorMismatch
 * otherwise); r2 is passed explicitly so the zero element still has a
 * well-defined shape.  Requires k2 + r2 >= 0 (the target level k + r must
 * exist); throws InvalidLabel otherwise.
 */
RectMatrix phi_matrix(const PsiElement& x, int r2, FuzzyLevel k, const Rational& eps);

/**
 * Checks rho_R(w)|k,j> = w|k,j> on every basis ket of level k, where
 * R corresponds to Rh = eps*(k+1/2).  The left side lifts rho(w) back to a
 * word and acts; the right side acts directly.
 */
bool rho_consistency(const WElement& w, FuzzyLevel k, const Rational& eps);

/**
 * True when w annihilates every basis ket of every level k <= k2_max/2.
 * A nullity certificate only up to the tested range: a word of degree d
 * needs levels up to about d + 2 before a zero action implies w = 0 there.
 */
bool annihilates_levels(const WElement& w, int k2_max, const Rational& eps);

}  // namespace ncsphere
