#pragma once

#include "ncsphere/numeric.hpp"

#include <climits>
#include <complex>
#include <map>
#include <optional>
#include <string>

namespace ncsphere {

// Gaussian rational a + b*i with exact components.
struct Gaussian {
    Rational re, im;

    Gaussian() = default;
    Gaussian(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}

    bool is_zero() const { return re == 0 && im == 0; }
    Gaussian conj() const { return {re, -im}; }
    Gaussian operator-() const { return {-re, -im}; }
    Gaussian operator+(const Gaussian& o) const { return {re + o.re, im + o.im}; }
    Gaussian operator-(const Gaussian& o) const { return {re - o.re, im - o.im}; }
    Gaussian operator*(const Gaussian& o) const {
        return {re * o.re - im * o.im, re * o.im + im * o.re};
    }
    Gaussian inverse() const;  // throws NotDivisible on zero
    bool operator==(const Gaussian& o) const { return re == o.re && im == o.im; }
};

// One basis monomial of the coefficient ring: sqrt(d) * eps^(p/2) * Rh^h,
// with d squarefree >= 1.  The eps exponent is stored doubled so half powers
// stay integral; p and h may be negative (Laurent in both symbols).
struct SurdKey {
    Int d = 1;
    int p = 0;  // doubled eps exponent
    int h = 0;  // Rh exponent

    bool operator<(const SurdKey& o) const {
        if (d != o.d) return d < o.d;
        if (p != o.p) return p < o.p;
        return h < o.h;
    }
    bool operator==(const SurdKey& o) const { return d == o.d && p == o.p && h == o.h; }
};

/**
 * Exact coefficient: a finite sum of Gaussian-rational multiples of
 * sqrt(d) * eps^(p/2) * Rh^h.  Closed under +, -, *, conjugation and the
 * substitutions eps -> rational, Rh -> positive single term.  Division is
 * exact-or-error (NotDivisible); there is no general field inverse because
 * multi-term elements like 2*Rh + eps are not invertible in the ring.
 */
class Scalar {
public:
    using TermMap = std::map<SurdKey, Gaussian>;

    Scalar() = default;
    Scalar(long v) { add_term(SurdKey{}, Gaussian(Rational(v), 0)); }  // NOLINT(implicit)
    Scalar(const Rational& v) { add_term(SurdKey{}, Gaussian(v, 0)); } // NOLINT(implicit)

    static Scalar zero() { return Scalar(); }
    static Scalar one() { return Scalar(1); }
    static Scalar i() {
        Scalar s;
        s.add_term(SurdKey{}, Gaussian(0, 1));
        return s;
    }
    static Scalar gaussian(const Rational& re, const Rational& im) {
        Scalar s;
        s.add_term(SurdKey{}, Gaussian(re, im));
        return s;
    }
    // sqrt of a nonnegative integer / rational, reduced to canonical surd form:
    // sqrt(a/b) = sqrt(a*b)/b, square part extracted by trial division.
    static Scalar sqrt_int(const Int& n);
    static Scalar sqrt_rational(const Rational& q);
    // eps^(p2/2) and Rh^h symbols.
    static Scalar eps_pow(int p2);
    static Scalar rhat_pow(int h);
    static Scalar eps() { return eps_pow(2); }
    static Scalar rhat() { return rhat_pow(1); }

    bool is_zero() const { return terms_.empty(); }
    bool operator==(const Scalar& o) const { return terms_ == o.terms_; }
    bool operator!=(const Scalar& o) const { return !(*this == o); }

    Scalar operator-() const;
    Scalar operator+(const Scalar& o) const;
    Scalar operator-(const Scalar& o) const;
    Scalar operator*(const Scalar& o) const;
    Scalar& operator+=(const Scalar& o) { return *this = *this + o; }
    Scalar& operator-=(const Scalar& o) { return *this = *this - o; }
    Scalar& operator*=(const Scalar& o) { return *this = *this * o; }

    Scalar conjugate() const;  // i -> -i; sqrt(d), eps, Rh are real

    // Minimum doubled eps exponent over all terms; kEpsOrderInf for zero.
    static constexpr int kEpsOrderInf = INT_MAX;
    int eps_order() const;

    bool is_single_term() const { return terms_.size() == 1; }
    bool is_real() const;
    // The rational value if the element is a plain rational (or zero).
    std::optional<Rational> as_rational() const;

    // Exact division: returns q with q * y == x.  Fast path for single-term
    // divisors; otherwise reduction by leading terms over the surd field.
    // Throws NotDivisible if y is not an exact factor (e.g. 1 / (2*Rh + eps)).
    Scalar div_exact(const Scalar& y) const;
    // Inverse of a single-term element; NotDivisible otherwise.
    Scalar inverse_single() const;

    // Substitute Rh -> value (positive real single term, may contain eps,
    // e.g. (k+1/2)*eps).  Result has no Rh symbol.
    Scalar substitute_rhat(const Scalar& value) const;
    // Substitute eps -> e >= 0.  e == 0 drops positive eps powers and rejects
    // negative ones.  Result has no eps symbol.
    Scalar substitute_eps(const Rational& e) const;

    std::complex<double> to_complex(double eps, double rhat) const;

    const TermMap& terms() const { return terms_; }

    // Canonical text form, e.g. "(3/2)*sqrt(2)*eps^(1/2)*Rh^-1 + i*eps".
    // parse() accepts everything to_string() emits (round-trip identity)
    // plus parenthesised sums, products and integer powers of them.
    std::string to_string() const;
    static Scalar parse(const std::string& text);

private:
    TermMap terms_;

    void add_term(const SurdKey& k, const Gaussian& c);
    // Raw surd insert: coefficient * sqrt(n) * eps^(p/2) * Rh^h with n not
    // necessarily squarefree.
    void add_surd(const Int& n, int p, int h, const Gaussian& c);
    // Inverse of an element with p == h == 0 everywhere (lives in the surd
    // field Q(i, sqrt(2), sqrt(3), ...)); used by the exact-division reducer.
    Scalar field_inverse() const;
    static Scalar single_term_pow(const SurdKey& k, const Gaussian& c, int e);
};

Scalar operator*(const Rational& a, const Scalar& b);

// Spec-level convenience: substitute eps and Rh in one call.
Scalar evaluate(const Scalar& x, const Rational& eps, const Scalar& rhat);
// Evaluate-then-divide escape hatch for non-ring quotients like 1/(2*Rh+eps).
Scalar div_at(const Scalar& x, const Scalar& y, const Rational& eps, const Scalar& rhat);

std::ostream& operator<<(std::ostream& os, const Scalar& s);

}  // namespace ncsphere
