#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ncsphere/errors.hpp"
#include "ncsphere/psi.hpp"
#include "ncsphere/special.hpp"
#include "ncsphere/weil.hpp"
#include "support/testutil.hpp"

#include <cmath>
#include <complex>
#include <vector>

using namespace ncsphere;

namespace {

const ParamPoint kSym = ParamPoint::symbolic();

std::vector<BasisLabel> labels_up_to(int n2max) {
    std::vector<BasisLabel> out;
    for (int n2 = 0; n2 <= n2max; ++n2)
        for (int r2 = -n2; r2 <= n2; r2 += 2)
            for (int m2 = -n2; m2 <= n2; m2 += 2) out.emplace_back(n2, r2, m2);
    return out;
}

// The projection pipeline's reduced form of the basis word: sector split,
// normal-order reduction, then K0 -> Rh.
ReducedSector pipeline_sector(const BasisLabel& l) {
    const auto parts = sector_decompose(xi(l));
    REQUIRE(parts.size() == 1);
    return to_reduced_sector(reduced_form(parts[0]));
}

Rational rat_pow(const Rational& b, int e) {
    Rational out(1);
    for (int t = 0; t < e; ++t) out *= b;
    return out;
}

std::complex<double> classical_closed_via_wigner(int n2, int r2, int m2, double R,
                                                 const EulerAngles& ang, bool shifted_index) {
    // i^{m-r} (-1)^{n-r} (2R)^n C(2n, X)^{-1/2} D^n_{mr}, with X = n+r for the
    // shifted index and X = r for the unshifted one (integer labels only).
    const int mr = (m2 - r2) / 2;
    const int nr = (n2 - r2) / 2;
    const int X = shifted_index ? (n2 + r2) / 2 : r2 / 2;
    const std::complex<double> I(0, 1);
    std::complex<double> phase = std::pow(I, ((mr % 4) + 4) % 4);
    if (nr % 2 != 0) phase = -phase;
    const double bin = to_double(Rational(binomial(n2, X)));
    return phase * std::pow(2 * R, n2 / 2.0) / std::sqrt(bin) *
           wigner_D(n2, m2, r2, ang);
}

const std::vector<EulerAngles> kAngles = {
    {0.0, 0.4, 0.0}, {0.7, 1.3, 1.9}, {2.3, 2.8, 5.1}, {4.0, 0.9, 0.3}, {1.1, 2.0, 2.6}};

}  // namespace

TEST_CASE("terminating 2F1: polynomial cases and Chu-Vandermonde") {
    // F(-1, b; c; z) = 1 - b z / c
    CHECK(hyp2f1_terminating(Rational(-1), Rational(2), Rational(3)) ==
          Scalar(Rational(1, 3)));
    CHECK(hyp2f1_terminating(Rational(-1), Rational(1, 2), Rational(5, 3), Rational(2)) ==
          Scalar(Rational(1) - Rational(1, 2) * 2 / Rational(5, 3)));
    // F(0, b; c; z) = 1 even when b, c are awkward
    CHECK(hyp2f1_terminating(Rational(0), Rational(7), Rational(-3)) == Scalar(1));

    // Chu-Vandermonde: F(-n, b; c; 1) = (c - b)_n / (c)_n
    for (long n = 0; n <= 5; ++n) {
        for (const Rational& b : {Rational(3, 2), Rational(-5, 3), Rational(2)}) {
            const Rational c(7, 3);
            const Rational expect = pochhammer(c - b, n) / pochhammer(c, n);
            CHECK(hyp2f1_terminating(Rational(-n), b, c) == Scalar(expect));
        }
    }

    // Termination requires a nonpositive-integer numerator parameter.
    CHECK_THROWS_AS(hyp2f1_terminating(Rational(1, 2), Rational(3), Rational(2)),
                    NonTerminating);
    // A denominator pole hit while the numerator is still live is an error...
    CHECK_THROWS_AS(hyp2f1_terminating(Rational(-3), Rational(5), Rational(-1)),
                    NonTerminating);
    // ...but a denominator parameter whose zero lies beyond the truncation is
    // harmless (the kappa -> 0 reading of c = -2k).
    CHECK(hyp2f1_terminating(Rational(-1), Rational(5), Rational(-2)) ==
          Scalar(Rational(1) + Rational(5, 2)));
}

TEST_CASE("terminating 3F2: Saalschutz sum") {
    // Saalschutzian F(-n, a, b; c, 1+a+b-c-n; 1) = (c-a)_n (c-b)_n / ((c)_n (c-a-b)_n)
    for (long n = 0; n <= 4; ++n) {
        const Rational a(1, 2), b(2, 3), c(5, 4);
        const Rational d = Rational(1) + a + b - c - n;
        const Rational expect = pochhammer(c - a, n) * pochhammer(c - b, n) /
                                (pochhammer(c, n) * pochhammer(c - a - b, n));
        CHECK(hyp3f2_terminating(Rational(-n), a, b, c, d) == Scalar(expect));
    }
    CHECK_THROWS_AS(
        hyp3f2_terminating(Rational(1, 3), Rational(1), Rational(2), Rational(4), Rational(5)),
        NonTerminating);
}

TEST_CASE("norm chain: closed norm equals the hypergeometric sum at levels") {
    // ||Xi(n,r)||^2 at Rh = eps (k + 1/2) equals
    //   eps^{2n} (r+n)! (2k)! / ((2k+1) (2k-n+r)!) F(r+n+1, n-r-2k; -2k; 1)
    // whenever 2k >= n - r.
    for (const Rational& eps : {Rational(1), Rational(2, 3)}) {
        for (int n2 = 0; n2 <= 4; ++n2) {
            for (int r2 = -n2; r2 <= n2; r2 += 2) {
                const int nr = (n2 - r2) / 2;  // n - r
                const int np = (n2 + r2) / 2;  // n + r
                for (int k2 = nr; k2 <= nr + 3; ++k2) {
                    const Scalar f = hyp2f1_terminating(
                        Rational(np + 1), Rational(nr - k2), Rational(-k2));
                    const Rational outer = rat_pow(eps, n2) * Rational(factorial(np)) *
                                           Rational(factorial(k2)) /
                                           (Rational(k2 + 1) * Rational(factorial(k2 - nr)));
                    const Scalar expect = Scalar(outer) * f;
                    CHECK(norm_sq(n2, r2, ParamPoint::level_at(k2, eps)) == expect);
                }
            }
        }
    }
}

TEST_CASE("hahn: degree zero, the (0,0) line, and the leading coefficient") {
    const Scalar N = Scalar(2) * Scalar::rhat();  // stand-in symbol
    CHECK(hahn_coeffs(0, 3, 1, N) == std::vector<Scalar>{Scalar(1)});
    CHECK(hahn(HahnSpec{0, 2, 2, Scalar(Rational(7, 5)), N}) == Scalar(1));

    // h^{(0,0)}_1(x, N) = 1 - N + 2x
    const auto lin = hahn_coeffs(1, 0, 0, N);
    REQUIRE(lin.size() == 2);
    CHECK(lin[0] == Scalar(1) - N);
    CHECK(lin[1] == Scalar(2));

    // x^n coefficient is (alpha+beta+n+1)_n / n!, independent of N.
    for (int n = 0; n <= 4; ++n)
        for (int alpha = 0; alpha <= 2; ++alpha)
            for (int beta = 0; beta <= 2; ++beta) {
                const auto cs = hahn_coeffs(n, alpha, beta, N);
                REQUIRE(cs.size() == static_cast<std::size_t>(n + 1));
                const Rational lead = pochhammer(Rational(alpha + beta + n + 1), n) /
                                      Rational(factorial(n));
                CHECK(cs[n] == Scalar(lead));
            }

    CHECK_THROWS_AS(hahn_coeffs(-1, 0, 0, N), InvalidLabel);
    CHECK_THROWS_AS(hahn_coeffs(2, -1, 0, N), InvalidLabel);
}

TEST_CASE("hahn: polynomial form equals prefactor times the 3F2 series") {
    // At generic rational x and N the division-free coefficients reproduce
    // (beta+1)_n (1-N)_n / n! * F(-n, alpha+beta+n+1, -x; beta+1, 1-N; 1).
    const Rational x(7, 3), N(19, 2);
    for (int n = 0; n <= 3; ++n)
        for (int alpha = 0; alpha <= 2; ++alpha)
            for (int beta = 0; beta <= 2; ++beta) {
                const Scalar direct =
                    hahn(HahnSpec{n, alpha, beta, Scalar(x), Scalar(N)});
                const Scalar series =
                    hahn_nik_prefactor(n, beta, Scalar(N)) *
                    hyp3f2_terminating(Rational(-n), Rational(alpha + beta + n + 1), -x,
                                       Rational(beta + 1), Rational(1) - N);
                CHECK(direct == series);
            }
}

TEST_CASE("hahn: discrete orthogonality on x = 0..N-1") {
    // weight w(x) = (x+beta)! (N-1-x+alpha)! / (x! (N-1-x)!)
    for (int alpha = 0; alpha <= 2; ++alpha)
        for (int beta = 0; beta <= 2; ++beta)
            for (int N = 4; N <= 8; N += 2) {
                std::vector<Rational> w(N);
                for (int x = 0; x < N; ++x)
                    w[x] = Rational(factorial(x + beta) * factorial(N - 1 - x + alpha)) /
                           Rational(factorial(x) * factorial(N - 1 - x));
                for (int n = 0; n <= 3; ++n)
                    for (int np = 0; np <= n; ++np) {
                        Scalar s = Scalar::zero();
                        for (int x = 0; x < N; ++x) {
                            const Scalar hx =
                                hahn(HahnSpec{n, alpha, beta, Scalar(Rational(x)),
                                              Scalar(Rational(N))});
                            const Scalar hpx =
                                hahn(HahnSpec{np, alpha, beta, Scalar(Rational(x)),
                                              Scalar(Rational(N))});
                            s += Scalar(w[x]) * hx * hpx;
                        }
                        if (np < n)
                            CHECK(s.is_zero());
                        else
                            CHECK_FALSE(s.is_zero());
                    }
            }
}

TEST_CASE("xi_closed_form matches the projection pipeline on all labels") {
    for (const auto& l : labels_up_to(4)) {
        CAPTURE(l.n2);
        CAPTURE(l.r2);
        CAPTURE(l.m2);
        const ReducedSector got = xi_closed_form(l.n2, l.r2, l.m2, kSym);
        const ReducedSector want = pipeline_sector(l);
        CHECK(got.r2 == want.r2);
        CHECK(got.m2 == want.m2);
        REQUIRE(got.q.size() == want.q.size());
        for (std::size_t i = 0; i < got.q.size(); ++i) CHECK(got.q[i] == want.q[i]);
    }
}

TEST_CASE("xi_closed_form at level and numeric points") {
    const std::vector<ParamPoint> points = {
        ParamPoint::level(3), ParamPoint::level_at(4, Rational(2, 3)),
        ParamPoint::numeric(Rational(1, 2), Scalar(Rational(5, 2)))};
    for (const auto& p : points) {
        for (const auto& l : labels_up_to(3)) {
            const ReducedSector got = xi_closed_form(l.n2, l.r2, l.m2, p);
            ReducedSector want = pipeline_sector(l);
            for (auto& c : want.q) c = p.apply(c);
            while (!want.q.empty() && want.q.back().is_zero()) want.q.pop_back();
            REQUIRE(got.q.size() == want.q.size());
            for (std::size_t i = 0; i < got.q.size(); ++i) CHECK(got.q[i] == want.q[i]);
        }
    }
}

TEST_CASE("xi_closed_form: pinned low cases") {
    // Xi(1,0,0) = -sqrt(2) J0:  q = [0, -sqrt(2)] in the (0,0) sector.
    const ReducedSector s100 = xi_closed_form(2, 0, 0, kSym);
    REQUIRE(s100.q.size() == 2);
    CHECK(s100.q[0].is_zero());
    CHECK(s100.q[1] == Scalar(-1) * Scalar::sqrt_int(2));
    // Xi(1,1,1) = a+^2: prefix carries everything, q = [1].
    const ReducedSector s111 = xi_closed_form(2, 2, 2, kSym);
    REQUIRE(s111.q.size() == 1);
    CHECK(s111.q[0] == Scalar(1));
    CHECK_THROWS_AS(xi_closed_form(2, 1, 0, kSym), InvalidLabel);
}

TEST_CASE("jacobi: low degrees, endpoint values, exact matches double") {
    const Scalar z = Scalar::rhat();  // stand-in symbol
    CHECK(jacobi(0, 1, 2, z) == Scalar(1));
    CHECK(jacobi(1, 0, 0, z) == z);
    // P_2^{(0,0)}(z) = (3 z^2 - 1) / 2
    CHECK(jacobi(2, 0, 0, z) ==
          (Scalar(3) * z * z - Scalar(1)) * Scalar(Rational(1, 2)));
    // P_n^{(a,b)}(1) = C(n+a, n)
    for (int n = 0; n <= 4; ++n)
        for (int a = 0; a <= 2; ++a)
            for (int b = 0; b <= 2; ++b)
                CHECK(jacobi(n, a, b, Scalar(1)) == Scalar(Rational(binomial(n + a, n))));
    // exact vs double evaluation
    for (int n = 0; n <= 4; ++n) {
        const Rational zr(-3, 7);
        const Scalar exact = jacobi(n, 1, 2, Scalar(zr));
        const double dv = jacobi(n, 1, 2, to_double(zr));
        CHECK(std::abs(exact.to_complex(1, 1).real() - dv) < 1e-12);
    }
    CHECK_THROWS_AS(jacobi(-1, 0, 0, z), InvalidLabel);
}

TEST_CASE("wigner_d: spin-1/2 pins, unitarity, label checks") {
    const double beta = 0.83;
    CHECK(wigner_d(0, 0, 0, beta) == doctest::Approx(1.0));
    CHECK(wigner_d(1, 1, 1, beta) == doctest::Approx(std::cos(beta / 2)));
    CHECK(wigner_d(1, -1, 1, beta) == doctest::Approx(std::sin(beta / 2)));
    CHECK(wigner_d(1, 1, -1, beta) == doctest::Approx(-std::sin(beta / 2)));
    CHECK(wigner_d(1, -1, -1, beta) == doctest::Approx(std::cos(beta / 2)));
    // spin 1: d^1_{1,0} = -sin(beta)/sqrt(2), d^1_{0,0} = cos(beta)
    CHECK(wigner_d(2, 2, 0, beta) == doctest::Approx(-std::sin(beta) / std::sqrt(2.0)));
    CHECK(wigner_d(2, 0, 0, beta) == doctest::Approx(std::cos(beta)));

    // rows of D^n are orthonormal: sum_m D^n_{m r} conj(D^n_{m r'}) = delta_{r r'}
    for (int n2 : {1, 2, 3, 4})
        for (const auto& ang : kAngles)
            for (int ra = -n2; ra <= n2; ra += 2)
                for (int rb = -n2; rb <= n2; rb += 2) {
                    std::complex<double> s = 0;
                    for (int m2 = -n2; m2 <= n2; m2 += 2)
                        s += wigner_D(n2, m2, ra, ang) * std::conj(wigner_D(n2, m2, rb, ang));
                    CHECK(std::abs(s - (ra == rb ? 1.0 : 0.0)) < 1e-12);
                }

    CHECK_THROWS_AS(wigner_d(2, 1, 0, beta), InvalidLabel);
    CHECK_THROWS_AS(wigner_d(2, 4, 0, beta), InvalidLabel);
    CHECK_THROWS_AS(wigner_d(-1, 0, 0, beta), InvalidLabel);
}

TEST_CASE("clebsch_gordan: pinned values, orthonormality, coupling checks") {
    const Scalar inv_sqrt2 = Scalar::sqrt_rational(Rational(1, 2));
    // <1/2 1/2 1/2 -1/2 | 1 0> = 1/sqrt(2), | 0 0> = 1/sqrt(2)
    CHECK(clebsch_gordan(1, 1, 2, 1, -1, 0) == inv_sqrt2);
    CHECK(clebsch_gordan(1, 1, 0, 1, -1, 0) == inv_sqrt2);
    CHECK(clebsch_gordan(1, 1, 0, -1, 1, 0) == Scalar(-1) * inv_sqrt2);
    // stretched states couple with coefficient 1
    for (int j1 = 0; j1 <= 4; ++j1)
        for (int j2 = 0; j2 <= 4; ++j2)
            CHECK(clebsch_gordan(j1, j2, j1 + j2, j1, j2, j1 + j2) == Scalar(1));
    // <1 0 1 0 | 2 0> = sqrt(2/3), <1 0 1 0 | 1 0> = 0
    CHECK(clebsch_gordan(2, 2, 4, 0, 0, 0) == Scalar::sqrt_rational(Rational(2, 3)));
    CHECK(clebsch_gordan(2, 2, 2, 0, 0, 0) == Scalar::zero());

    // orthonormality in (j, m) for fixed (j1, j2)
    for (int j1_2 : {1, 2, 3})
        for (int j2_2 : {1, 2}) {
            for (int ja = std::abs(j1_2 - j2_2); ja <= j1_2 + j2_2; ja += 2)
                for (int jb = std::abs(j1_2 - j2_2); jb <= j1_2 + j2_2; jb += 2)
                    for (int ma = -ja; ma <= ja; ma += 2) {
                        if (std::abs(ma) > jb) continue;
                        Scalar s = Scalar::zero();
                        for (int m1 = -j1_2; m1 <= j1_2; m1 += 2) {
                            const int m2 = ma - m1;
                            if (std::abs(m2) > j2_2) continue;
                            s += clebsch_gordan(j1_2, j2_2, ja, m1, m2, ma) *
                                 clebsch_gordan(j1_2, j2_2, jb, m1, m2, ma);
                        }
                        if (ja == jb)
                            CHECK(s == Scalar(1));
                        else
                            CHECK(s.is_zero());
                    }
        }

    CHECK_THROWS_AS(clebsch_gordan(1, 1, 4, 1, -1, 0), InvalidCoupling);  // triangle
    CHECK_THROWS_AS(clebsch_gordan(1, 1, 2, 1, -1, 2), InvalidCoupling);  // m != m1+m2
    CHECK_THROWS_AS(clebsch_gordan(1, 1, 2, 3, -1, 2), InvalidCoupling);  // |m1| > j1
    CHECK_THROWS_AS(clebsch_gordan(1, 1, 1, 1, -1, 0), InvalidCoupling);  // parity
    CHECK_THROWS_AS(clebsch_gordan(1, 1, 2, 0, 0, 0), InvalidCoupling);   // m parity
}

TEST_CASE("classical limit: direct substitution of pinned words") {
    const std::complex<double> I(0, 1);
    for (const auto& ang : kAngles) {
        for (double R : {1.0, 0.7}) {
            // Xi(0,0,0) = 1
            CHECK(std::abs(xi_classical(0, 0, 0, R, ang) - 1.0) < 1e-12);
            // Xi(1,0,1) -> i R sin(beta) e^{-i alpha}
            const std::complex<double> want101 =
                I * R * std::sin(ang.beta) * std::exp(-I * ang.alpha);
            CHECK(std::abs(xi_classical(2, 0, 2, R, ang) - want101) < 1e-12);
            // Xi(1,0,0) = -sqrt(2) J0 -> -sqrt(2) R cos(beta)
            CHECK(std::abs(xi_classical(2, 0, 0, R, ang) -
                           std::complex<double>(-std::sqrt(2.0) * R * std::cos(ang.beta))) <
                  1e-12);
            // Xi(1,1,1) = a+^2 -> 2R cos^2(beta/2) e^{-i(alpha+gamma)}
            const std::complex<double> want111 =
                2 * R * std::pow(std::cos(ang.beta / 2), 2) *
                std::exp(-I * (ang.alpha + ang.gamma));
            CHECK(std::abs(xi_classical(2, 2, 2, R, ang) - want111) < 1e-12);
        }
    }
}

TEST_CASE("classical limit: Jacobi closed form matches direct substitution") {
    for (const auto& l : labels_up_to(4)) {
        CAPTURE(l.n2);
        CAPTURE(l.r2);
        CAPTURE(l.m2);
        for (const auto& ang : kAngles) {
            for (double R : {1.0, 0.7}) {
                const auto direct = xi_classical(l.n2, l.r2, l.m2, R, ang);
                const auto closed = xi_classical_closed(l.n2, l.r2, l.m2, R, ang);
                CHECK(std::abs(direct - closed) < 1e-10);
            }
        }
    }
}

TEST_CASE("classical limit: Wigner-D form holds with the shifted binomial index") {
    // Candidate forms i^{m-r} (-1)^{n-r} (2R)^n C(2n, X)^{-1/2} D^n_{mr}:
    // X = n + r matches everywhere; X = r does not.
    double worst_shifted = 0, worst_plain = 0;
    for (const auto& l : labels_up_to(4)) {
        for (const auto& ang : kAngles) {
            const double R = 1.0;
            const auto direct = xi_classical(l.n2, l.r2, l.m2, R, ang);
            const auto shifted =
                classical_closed_via_wigner(l.n2, l.r2, l.m2, R, ang, true);
            worst_shifted = std::max(worst_shifted, std::abs(direct - shifted));
            if (l.n2 % 2 == 0 && l.r2 >= 0) {
                const auto plain =
                    classical_closed_via_wigner(l.n2, l.r2, l.m2, R, ang, false);
                worst_plain = std::max(worst_plain, std::abs(direct - plain));
            }
        }
    }
    CHECK(worst_shifted < 1e-10);
    CHECK(worst_plain > 0.1);
}
