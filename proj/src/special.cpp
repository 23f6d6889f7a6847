#include "ncsphere/special.hpp"

#include "ncsphere/errors.hpp"
#include "ncsphere/weil.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <vector>

namespace ncsphere {

namespace {

bool nonpositive_int(const Rational& a) {
    return denominator(a) == 1 && numerator(a) <= 0;
}

// Common core of the terminating hypergeometric sums.  Termination requires
// some numerator parameter to be a nonpositive integer; denominator
// parameters at nonpositive integers are handled as the limit of c + kappa,
// kappa -> 0: once a numerator Pochhammer has vanished every later term is
// zero regardless of the denominator, while a denominator zero with a live
// numerator is a pole.
Scalar hyp_terminating(const std::vector<Rational>& num, const std::vector<Rational>& den,
                       const Rational& z) {
    long smax = -1;
    for (const auto& a : num) {
        if (!nonpositive_int(a)) continue;
        const long s = static_cast<long>(-numerator(a));
        if (smax < 0 || s < smax) smax = s;
    }
    if (smax < 0) throw NonTerminating("hypergeometric sum does not terminate");
    Rational sum(1);
    Rational numprod(1), denprod(1), zpow(1);
    for (long s = 1; s <= smax; ++s) {
        for (const auto& a : num) numprod *= a + (s - 1);
        if (numprod == 0) break;
        Rational denfac(s);
        for (const auto& b : den) denfac *= b + (s - 1);
        if (denfac == 0)
            throw NonTerminating("denominator parameter reaches a pole before termination");
        denprod *= denfac;
        zpow *= z;
        sum += numprod / denprod * zpow;
    }
    return Scalar(sum);
}

}  // namespace

Scalar hyp2f1_terminating(const Rational& a, const Rational& b, const Rational& c,
                          const Rational& z) {
    return hyp_terminating({a, b}, {c}, z);
}

Scalar hyp3f2_terminating(const Rational& a1, const Rational& a2, const Rational& a3,
                          const Rational& b1, const Rational& b2, const Rational& z) {
    return hyp_terminating({a1, a2, a3}, {b1, b2}, z);
}

std::vector<Scalar> hahn_coeffs(int n, int alpha, int beta, const Scalar& N) {
    if (n < 0 || alpha < 0 || beta < 0)
        throw InvalidLabel("hahn: need n >= 0, alpha >= 0, beta >= 0");
    // h^{(alpha,beta)}_n(x, N) =
    //   sum_s (beta+s+1)_{n-s} (1-N+s)_{n-s} (-n)_s (alpha+beta+n+1)_s (-x)_s
    //         / (n! s!),
    // obtained by cancelling the denominator Pochhammers of the 3F2 into the
    // prefactor; every factor is a polynomial in N, so N may be symbolic.
    std::vector<Scalar> P(n + 1);  // P[s] = (1 - N + s)_{n-s}
    P[n] = Scalar(1);
    for (int s = n - 1; s >= 0; --s) P[s] = (Scalar(Rational(1 + s)) - N) * P[s + 1];

    std::vector<Scalar> out(n + 1, Scalar::zero());
    std::vector<Scalar> c{Scalar(1)};  // coefficients of (-x)_s, ascending in x
    const Rational nfact(factorial(n));
    for (int s = 0; s <= n; ++s) {
        const Rational f = pochhammer(Rational(-n), s) *
                           pochhammer(Rational(alpha + beta + n + 1), s) *
                           pochhammer(Rational(beta + s + 1), n - s) /
                           (nfact * Rational(factorial(s)));
        if (f != 0) {
            const Scalar w = Scalar(f) * P[s];
            for (std::size_t i = 0; i < c.size(); ++i) out[i] += w * c[i];
        }
        if (s < n) {
            // (-x)_{s+1} = (-x)_s * (s - x)
            std::vector<Scalar> nc(c.size() + 1, Scalar::zero());
            for (std::size_t i = 0; i < c.size(); ++i) {
                nc[i] += c[i] * Scalar(Rational(s));
                nc[i + 1] -= c[i];
            }
            c = std::move(nc);
        }
    }
    return out;
}

Scalar hahn(const HahnSpec& spec) {
    const std::vector<Scalar> cs = hahn_coeffs(spec.n, spec.alpha, spec.beta, spec.N);
    Scalar acc = Scalar::zero();
    for (auto it = cs.rbegin(); it != cs.rend(); ++it) acc = acc * spec.x + *it;
    return acc;
}

Scalar hahn_nik_prefactor(int n, int beta, const Scalar& N) {
    if (n < 0 || beta < 0) throw InvalidLabel("hahn: need n >= 0, beta >= 0");
    Scalar out{pochhammer(Rational(beta + 1), n) / Rational(factorial(n))};
    for (int t = 0; t < n; ++t) out = out * (Scalar(Rational(1 + t)) - N);
    return out;
}

ReducedSector xi_closed_form(int n2, int r2, int m2, const ParamPoint& p) {
    const BasisLabel l(n2, r2, m2);  // validates the label
    const int rp = (r2 + m2) / 2;    // r + m
    const int rm = (r2 - m2) / 2;    // r - m

    // One Hahn polynomial per ordering of r and m.  In each region the
    // normal-ordered prefix is exactly the canonical one for the sector
    // (r, m), and q(J0) = sign * eps^deg * surd * h^{(alpha,beta)}_deg(x, N)
    // with x = (J0 + Rh)/eps - 1/2 + xshift and N = 2 Rh/eps + nshift.
    int alpha, beta, deg, xshift, nshift, sign_pow;
    bool inv_sqrt;  // true: C(2n,n+m)^{-1/2}; false: C(2n,n+m)^{1/2} C(2n,n+r)^{-1}
    if (std::abs(r2) >= std::abs(m2)) {
        if (r2 >= 0) {  // a+^{r+m} b+^{r-m}
            alpha = rm;
            beta = rp;
            deg = (n2 - r2) / 2;
            xshift = 0;
            nshift = 0;
            sign_pow = deg;
            inv_sqrt = false;
        } else {  // a-^{-r-m} b-^{m-r}
            alpha = -rm;
            beta = -rp;
            deg = (n2 + r2) / 2;
            xshift = rp;
            nshift = r2;
            sign_pow = (n2 - m2) / 2;
            inv_sqrt = false;
        }
    } else if (m2 > 0) {  // a+^{r+m} b-^{m-r}
        alpha = -rm;
        beta = rp;
        deg = (n2 - m2) / 2;
        xshift = 0;
        nshift = rm;
        sign_pow = deg;
        inv_sqrt = true;
    } else {  // a-^{-r-m} b+^{r-m}
        alpha = rm;
        beta = -rp;
        deg = (n2 + m2) / 2;
        xshift = rp;
        nshift = rp;
        sign_pow = (n2 - r2) / 2;
        inv_sqrt = true;
    }

    const Scalar epsinv = Scalar::eps_pow(-2);
    const Scalar rh_over_eps = Scalar::rhat() * epsinv;
    const Scalar N = Scalar(2) * rh_over_eps + Scalar(Rational(nshift));
    const std::vector<Scalar> h = hahn_coeffs(deg, alpha, beta, N);

    const Int c1 = binomial(n2, (n2 + m2) / 2);
    Rational surd_arg;
    if (inv_sqrt) {
        surd_arg = Rational(1) / Rational(c1);
    } else {
        const Int c2 = binomial(n2, (n2 + r2) / 2);
        surd_arg = Rational(c1) / Rational(c2 * c2);
    }
    Scalar factor = Scalar::sqrt_rational(surd_arg) * Scalar::eps_pow(2 * deg);
    if (sign_pow % 2 != 0) factor = Scalar(-1) * factor;

    // x = J0/eps + v with v = Rh/eps - 1/2 + xshift; expand x^j binomially.
    const Scalar v = rh_over_eps + Scalar(Rational(2 * xshift - 1, 2));
    std::vector<Scalar> upow(deg + 1), vpow(deg + 1);
    upow[0] = Scalar(1);
    vpow[0] = Scalar(1);
    for (int t = 1; t <= deg; ++t) {
        upow[t] = upow[t - 1] * epsinv;
        vpow[t] = vpow[t - 1] * v;
    }
    std::vector<Scalar> q(deg + 1, Scalar::zero());
    for (int j = 0; j <= deg; ++j) {
        if (h[j].is_zero()) continue;
        const Scalar hj = factor * h[j];
        for (int i = 0; i <= j; ++i)
            q[i] += hj * Scalar(Rational(binomial(j, i))) * upow[i] * vpow[j - i];
    }
    for (auto& qc : q) qc = p.apply(qc);
    while (!q.empty() && q.back().is_zero()) q.pop_back();
    return ReducedSector{r2, m2, q};
}

Scalar jacobi(int n, int alpha, int beta, const Scalar& z) {
    if (n < 0 || alpha < 0 || beta < 0)
        throw InvalidLabel("jacobi: need n >= 0, alpha >= 0, beta >= 0");
    const Scalar half{Rational(1, 2)};
    const Scalar zm = (z - Scalar(1)) * half;
    const Scalar zp = (z + Scalar(1)) * half;
    std::vector<Scalar> zmp(n + 1), zpp(n + 1);
    zmp[0] = Scalar(1);
    zpp[0] = Scalar(1);
    for (int t = 1; t <= n; ++t) {
        zmp[t] = zmp[t - 1] * zm;
        zpp[t] = zpp[t - 1] * zp;
    }
    Scalar acc = Scalar::zero();
    for (int s = 0; s <= n; ++s) {
        const Rational cf = Rational(binomial(n + alpha, n - s)) * Rational(binomial(n + beta, s));
        acc += Scalar(cf) * zmp[s] * zpp[n - s];
    }
    return acc;
}

double jacobi(int n, int alpha, int beta, double z) {
    if (n < 0 || alpha < 0 || beta < 0)
        throw InvalidLabel("jacobi: need n >= 0, alpha >= 0, beta >= 0");
    const double zm = (z - 1) / 2, zp = (z + 1) / 2;
    double acc = 0;
    for (int s = 0; s <= n; ++s) {
        const double cf = to_double(Rational(binomial(n + alpha, n - s) * binomial(n + beta, s)));
        acc += cf * std::pow(zm, s) * std::pow(zp, n - s);
    }
    return acc;
}

double wigner_d(int n2, int m2, int r2, double beta) {
    if (n2 < 0 || std::abs(m2) > n2 || std::abs(r2) > n2 || (n2 - m2) % 2 != 0 ||
        (n2 - r2) % 2 != 0)
        throw InvalidLabel("wigner_d: bad (n, m, r) labels");
    const int jpr = (n2 + r2) / 2, jmr = (n2 - r2) / 2;
    const int jpm = (n2 + m2) / 2, jmm = (n2 - m2) / 2;
    const int mr = (m2 - r2) / 2;  // m - r
    const double c = std::cos(beta / 2), s = std::sin(beta / 2);
    const double pref = std::sqrt(to_double(
        Rational(factorial(jpr) * factorial(jmr) * factorial(jpm) * factorial(jmm))));
    const int tlo = std::max(0, -mr), thi = std::min(jpr, jmm);
    double sum = 0;
    for (int t = tlo; t <= thi; ++t) {
        const double den = to_double(Rational(
            factorial(jpr - t) * factorial(t) * factorial(mr + t) * factorial(jmm - t)));
        const double term =
            pref / den * std::pow(c, jpr + jmm - 2 * t) * std::pow(s, mr + 2 * t);
        sum += ((mr + t) % 2 == 0) ? term : -term;
    }
    return sum;
}

std::complex<double> wigner_D(int n2, int m2, int r2, const EulerAngles& a) {
    const std::complex<double> I(0, 1);
    const double d = wigner_d(n2, m2, r2, a.beta);
    return std::exp(-I * (m2 / 2.0) * a.alpha) * d * std::exp(-I * (r2 / 2.0) * a.gamma);
}

Scalar clebsch_gordan(int j1_2, int j2_2, int j_2, int m1_2, int m2_2, int m_2) {
    if (j1_2 < 0 || j2_2 < 0 || j_2 < 0) throw InvalidCoupling("negative spin label");
    if ((j1_2 - m1_2) % 2 != 0 || (j2_2 - m2_2) % 2 != 0 || (j_2 - m_2) % 2 != 0)
        throw InvalidCoupling("m must differ from j by an integer");
    if (std::abs(m1_2) > j1_2 || std::abs(m2_2) > j2_2 || std::abs(m_2) > j_2)
        throw InvalidCoupling("|m| exceeds j");
    if (m_2 != m1_2 + m2_2) throw InvalidCoupling("m != m1 + m2");
    if ((j1_2 + j2_2 + j_2) % 2 != 0)
        throw InvalidCoupling("j1 + j2 + j must be an integer");
    if (j_2 < std::abs(j1_2 - j2_2) || j_2 > j1_2 + j2_2)
        throw InvalidCoupling("triangle rule violated");

    const long A = (j1_2 + j2_2 - j_2) / 2;
    const long B = (j1_2 - j2_2 + j_2) / 2;
    const long C = (-j1_2 + j2_2 + j_2) / 2;
    const long jm = (j_2 + m_2) / 2, jmm = (j_2 - m_2) / 2;
    const long j1m = (j1_2 + m1_2) / 2, j1mm = (j1_2 - m1_2) / 2;
    const long j2m = (j2_2 + m2_2) / 2, j2mm = (j2_2 - m2_2) / 2;

    Rational pre = Rational(j_2 + 1) * Rational(factorial(A) * factorial(B) * factorial(C)) /
                   Rational(factorial((j1_2 + j2_2 + j_2) / 2 + 1));
    pre *= Rational(factorial(jm) * factorial(jmm) * factorial(j1m) * factorial(j1mm) *
                    factorial(j2m) * factorial(j2mm));

    const long d1 = (j_2 - j2_2 + m1_2) / 2;  // j - j2 + m1
    const long d2 = (j_2 - j1_2 - m2_2) / 2;  // j - j1 - m2
    const long klo = std::max({0L, -d1, -d2});
    const long khi = std::min({A, j1mm, j2m});
    Rational sum(0);
    for (long k = klo; k <= khi; ++k) {
        const Rational term =
            Rational(1) / Rational(factorial(k) * factorial(A - k) * factorial(j1mm - k) *
                                   factorial(j2m - k) * factorial(d1 + k) * factorial(d2 + k));
        if (k % 2 == 0)
            sum += term;
        else
            sum -= term;
    }
    if (sum == 0) return Scalar::zero();
    return Scalar::sqrt_rational(pre) * Scalar(sum);
}

namespace {

struct ClassicalLetters {
    std::complex<double> ap, am, bp, bm;
};

// a+ -> sqrt(2R) cos(beta/2) e^{-i(alpha+gamma)/2},
// b+ -> -i sqrt(2R) sin(beta/2) e^{+i(alpha-gamma)/2}, with a-, b- conjugate.
ClassicalLetters classical_letters(double R, const EulerAngles& ang) {
    const std::complex<double> I(0, 1);
    const double sq = std::sqrt(2 * R);
    const double c = std::cos(ang.beta / 2), s = std::sin(ang.beta / 2);
    ClassicalLetters out;
    out.ap = sq * c * std::exp(-I * ((ang.alpha + ang.gamma) / 2));
    out.am = std::conj(out.ap);
    out.bp = -I * sq * s * std::exp(I * ((ang.alpha - ang.gamma) / 2));
    out.bm = std::conj(out.bp);
    return out;
}

}  // namespace

std::complex<double> xi_classical(int n2, int r2, int m2, double R, const EulerAngles& a) {
    const WElement w = xi(BasisLabel(n2, r2, m2));
    const ClassicalLetters L = classical_letters(R, a);
    std::complex<double> sum = 0;
    for (const auto& [mono, coeff] : w.coeffs()) {
        sum += coeff.to_complex(0.0, R) * std::pow(L.ap, mono.ap) * std::pow(L.am, mono.am) *
               std::pow(L.bp, mono.bp) * std::pow(L.bm, mono.bm);
    }
    return sum;
}

std::complex<double> xi_classical_closed(int n2, int r2, int m2, double R,
                                         const EulerAngles& a) {
    const BasisLabel l(n2, r2, m2);  // validates the label
    const int M2 = std::max(std::abs(r2), std::abs(m2));
    const int deg = (n2 - M2) / 2;                    // n - max(|r|, |m|)
    const int sign_pow = (n2 - std::max(r2, m2)) / 2; // n - max(r, m)
    const int rp = (r2 + m2) / 2, rm = (r2 - m2) / 2;
    const ClassicalLetters L = classical_letters(R, a);
    const std::complex<double> aw = rp >= 0 ? std::pow(L.ap, rp) : std::pow(L.am, -rp);
    const std::complex<double> bw = rm >= 0 ? std::pow(L.bp, rm) : std::pow(L.bm, -rm);
    const double c1 = to_double(Rational(binomial(n2, (n2 + m2) / 2)));
    const double c2 = to_double(Rational(binomial(n2, deg)));
    double val = std::pow(2 * R, deg) * std::sqrt(c1) / c2;
    if (sign_pow % 2 != 0) val = -val;
    return val * jacobi(deg, std::abs(rm), std::abs(rp), std::cos(a.beta)) * aw * bw;
}

}  // namespace ncsphere
