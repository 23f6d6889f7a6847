#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ncsphere/errors.hpp"
#include "ncsphere/hilbert.hpp"
#include "ncsphere/psi.hpp"
#include "ncsphere/weil.hpp"
#include "support/testutil.hpp"

#include <vector>

using namespace ncsphere;

namespace {

const WElement kAp = WElement::letter(Letter::APlus);
const WElement kAm = WElement::letter(Letter::AMinus);
const WElement kBp = WElement::letter(Letter::BPlus);
const WElement kBm = WElement::letter(Letter::BMinus);

// Random coefficient free of Rh (the ket action rejects Rh); optionally a
// Gaussian-rational multiple of an eps power.
Scalar rand_coeff(testutil::Rng& rng, bool with_eps) {
    Scalar c = Scalar::gaussian(rng.rational(), rng.rational());
    if (with_eps && rng.intval(0, 1) == 1)
        c = c * Scalar::eps_pow(static_cast<int>(rng.intval(0, 3)));
    return c;
}

WElement random_word(testutil::Rng& rng, int max_deg, bool with_eps = true) {
    WElement w;
    const int nterms = static_cast<int>(rng.intval(1, 3));
    for (int t = 0; t < nterms; ++t) {
        NormalMonomial m;
        m.ap = static_cast<int>(rng.intval(0, max_deg));
        m.am = static_cast<int>(rng.intval(0, max_deg - m.ap));
        m.bp = static_cast<int>(rng.intval(0, max_deg - m.ap - m.am));
        m.bm = static_cast<int>(rng.intval(0, max_deg - m.ap - m.am - m.bp));
        w += WElement::monomial(m, rand_coeff(rng, with_eps));
    }
    return w;
}

// All valid kets with k2 <= k2max.
std::vector<std::pair<int, int>> kets_up_to(int k2max) {
    std::vector<std::pair<int, int>> out;
    for (int k2 = 0; k2 <= k2max; ++k2)
        for (int j2 = -k2; j2 <= k2; j2 += 2) out.emplace_back(k2, j2);
    return out;
}

// Conjugate-linear in the first slot: <u|v> over the orthonormal kets.
Scalar ket_inner(const KetVector& u, const KetVector& v) {
    Scalar s;
    for (const auto& [key, c] : u.terms()) s += c.conjugate() * v.bra(key.first, key.second);
    return s;
}

// All basis labels with this exact n2.
std::vector<BasisLabel> labels_at(int n2) {
    std::vector<BasisLabel> out;
    for (int r2 = -n2; r2 <= n2; r2 += 2)
        for (int m2 = -n2; m2 <= n2; m2 += 2) out.push_back(BasisLabel(n2, r2, m2));
    return out;
}

PsiElement random_sector_element(testutil::Rng& rng, int r2, int n2max) {
    PsiElement x;
    for (int n2 = std::abs(r2); n2 <= n2max; n2 += 2)
        for (int m2 = -n2; m2 <= n2; m2 += 2)
            if (rng.intval(0, 2) == 0) x.add(BasisLabel(n2, r2, m2), rand_coeff(rng, true));
    if (x.is_zero()) x.add(BasisLabel(std::abs(r2), r2, -std::abs(r2)), Scalar(1));
    return x;
}

}  // namespace

TEST_CASE("basis kets validate labels and render") {
    CHECK_THROWS_AS(KetVector::basis(-1, 1), InvalidLabel);
    CHECK_THROWS_AS(KetVector::basis(2, 4), InvalidLabel);
    CHECK_THROWS_AS(KetVector::basis(2, -4), InvalidLabel);
    CHECK_THROWS_AS(KetVector::basis(2, 1), InvalidLabel);  // k + j not integral
    CHECK_THROWS_AS(KetVector::basis(3, 0), InvalidLabel);

    const KetVector v = KetVector::basis(3, 1);
    CHECK(v.bra(3, 1) == Scalar(1));
    CHECK(v.bra(3, -1).is_zero());
    CHECK(v.to_string() == "|3/2,1/2>");
    CHECK(KetVector::basis(2, -2).to_string() == "|1,-1>");

    KetVector sum = v + KetVector::basis(2, 0).scaled(Scalar::eps());
    CHECK(sum.to_string() == "eps*|1,0> + |3/2,1/2>");
    sum = sum - v;
    CHECK(sum.bra(3, 1).is_zero());
    CHECK(sum.terms().size() == 1);
    CHECK(KetVector::zero().to_string() == "0");
    CHECK((v - v).is_zero());
}

TEST_CASE("letter actions match the defining square-root rules") {
    const Rational eps(4, 9);  // sqrt(eps) = 2/3, so every factor is exact
    // a+|0,0> = eps^(1/2)|1/2,1/2>, then a+ again: sqrt(2)*eps|1,1>.
    KetVector v = apply(kAp, KetVector::basis(0, 0), eps);
    CHECK(v == KetVector::basis(1, 1).scaled(Scalar(Rational(2, 3))));
    v = apply(kAp, v, eps);
    CHECK(v == KetVector::basis(2, 2).scaled(Scalar::sqrt_int(2) * Rational(4, 9)));

    // b+|1/2,1/2> = eps^(1/2)|1,0>.
    CHECK(apply(kBp, KetVector::basis(1, 1), eps) ==
          KetVector::basis(2, 0).scaled(Scalar(Rational(2, 3))));

    // a-|1,1> = sqrt(eps*(k+j))|1/2,1/2> = 2*sqrt(2)|1/2,1/2> at eps = 4.
    CHECK(apply(kAm, KetVector::basis(2, 2), Rational(4)) ==
          KetVector::basis(1, 1).scaled(Scalar::sqrt_int(2) * Scalar(2)));

    // Boundary annihilation: the square-root factor vanishes.
    CHECK(apply(kAm, KetVector::basis(0, 0), eps).is_zero());
    for (int k2 = 0; k2 <= 4; ++k2) {
        CHECK(apply(kAm, KetVector::basis(k2, -k2), eps).is_zero());
        CHECK(apply(kBm, KetVector::basis(k2, k2), eps).is_zero());
    }

    // Linearity over a two-ket vector.
    const KetVector u = KetVector::basis(2, 0) + KetVector::basis(1, -1).scaled(Scalar(3));
    CHECK(apply(kAp, u, eps) ==
          apply(kAp, KetVector::basis(2, 0), eps) + apply(kAp, KetVector::basis(1, -1), eps).scaled(Scalar(3)));
}

TEST_CASE("the six generator formulas hold on every ket") {
    for (const Rational eps : {Rational(1), Rational(2, 3)}) {
    const Scalar e = Scalar(eps);
    for (const auto& [k2, j2] : kets_up_to(5)) {
        const KetVector v = KetVector::basis(k2, j2);
        // J0 |k,j> = eps j |k,j>;  K0 |k,j> = eps (k + 1/2) |k,j>.
        CHECK(apply(WElement::generator(Generator::J0), v, eps) ==
              v.scaled(Rational(j2, 2) * e));
        CHECK(apply(WElement::generator(Generator::K0), v, eps) ==
              v.scaled(Rational(k2 + 1, 2) * e));
        // Ladder formulas with integer products under one square root.
        const Int kmj((k2 - j2) / 2), kpj((k2 + j2) / 2);
        CHECK(apply(WElement::generator(Generator::Jp), v, eps) ==
              (j2 == k2 ? KetVector::zero()
                        : KetVector::basis(k2, j2 + 2).scaled(Scalar::sqrt_int(kmj * (kpj + 1)) * e)));
        CHECK(apply(WElement::generator(Generator::Jm), v, eps) ==
              (j2 == -k2 ? KetVector::zero()
                         : KetVector::basis(k2, j2 - 2).scaled(Scalar::sqrt_int(kpj * (kmj + 1)) * e)));
        CHECK(apply(WElement::generator(Generator::Kp), v, eps) ==
              KetVector::basis(k2 + 2, j2).scaled(Scalar::sqrt_int((kmj + 1) * (kpj + 1)) * e));
        CHECK(apply(WElement::generator(Generator::Km), v, eps) ==
              (k2 == 0 || j2 == k2 || j2 == -k2
                   ? KetVector::zero()
                   : KetVector::basis(k2 - 2, j2).scaled(Scalar::sqrt_int(kmj * kpj) * e)));
    }
    }
    // Pinned instance: J+ |1/2,-1/2> = eps |1/2,+1/2> at eps = 1.
    CHECK(apply(WElement::generator(Generator::Jp), KetVector::basis(1, -1), Rational(1)) ==
          KetVector::basis(1, 1));
}

TEST_CASE("the action is a representation of the algebra") {
    testutil::Rng rng(901);
    for (const Rational eps : {Rational(1), Rational(2, 3)}) {
        for (int trial = 0; trial < 25; ++trial) {
            const WElement w1 = random_word(rng, 3);
            const WElement w2 = random_word(rng, 3);
            const auto [k2, j2] = kets_up_to(4)[static_cast<size_t>(
                rng.intval(0, static_cast<long>(kets_up_to(4).size()) - 1))];
            const KetVector v = KetVector::basis(k2, j2);
            CHECK(apply(w1 * w2, v, eps) == apply(w1, apply(w2, v, eps), eps));
        }
        // Canonical commutators on every small ket.
        for (const auto& [k2, j2] : kets_up_to(4)) {
            const KetVector v = KetVector::basis(k2, j2);
            const Scalar ev = Scalar(eps);
            CHECK(apply(kAm * kAp - kAp * kAm, v, eps) == v.scaled(ev));
            CHECK(apply(kBm * kBp - kBp * kBm, v, eps) == v.scaled(ev));
            CHECK(apply(kAm * kBp - kBp * kAm, v, eps).is_zero());
            // Casimir: J0^2 + (1/2)(J+J- + J-J+) acts as eps^2 k(k+1).
            const WElement j0 = WElement::generator(Generator::J0);
            const WElement cas =
                j0 * j0 + Rational(1, 2) * (WElement::generator(Generator::Jp) * WElement::generator(Generator::Jm) +
                                            WElement::generator(Generator::Jm) * WElement::generator(Generator::Jp));
            CHECK(apply(cas, v, eps) == v.scaled(Scalar(eps * eps * Rational(k2, 2) * Rational(k2 + 2, 2))));
        }
    }
}

TEST_CASE("dagger is the adjoint of the action") {
    testutil::Rng rng(902);
    const Rational eps(1);
    const auto kets = kets_up_to(4);
    for (int trial = 0; trial < 30; ++trial) {
        const WElement w = random_word(rng, 3);
        const auto [ku, ju] = kets[static_cast<size_t>(rng.intval(0, static_cast<long>(kets.size()) - 1))];
        const auto [kv, jv] = kets[static_cast<size_t>(rng.intval(0, static_cast<long>(kets.size()) - 1))];
        const KetVector u = KetVector::basis(ku, ju);
        const KetVector v = KetVector::basis(kv, jv);
        CHECK(ket_inner(u, apply(w, v, eps)) == ket_inner(apply(w.dagger(), u, eps), v));
    }
}

TEST_CASE("sector words target a single shifted ket") {
    testutil::Rng rng(903);
    for (int trial = 0; trial < 10; ++trial) {
        const WElement w = random_word(rng, 3);
        for (const auto& part : sector_decompose(w)) {
            const WElement wp = part.part;
            for (const auto& [k2, j2] : kets_up_to(3)) {
                const KetVector out = apply(wp, KetVector::basis(k2, j2), Rational(1));
                for (const auto& [key, c] : out.terms()) {
                    (void)c;
                    CHECK(key.first == k2 + part.r2);
                    CHECK(key.second == j2 + part.m2);
                }
            }
        }
    }
}

TEST_CASE("apply rejects Rh-dependent coefficients") {
    const WElement w = WElement::one().scaled(Scalar::rhat());
    CHECK_THROWS_AS(apply(w, KetVector::basis(0, 0), Rational(1)), SymbolicPointUnsupported);
}

TEST_CASE("pi0_trace basic values") {
    for (const Rational eps : {Rational(1), Rational(1, 3)}) {
        for (int k2 = 0; k2 <= 5; ++k2) {
            const FuzzyLevel k(k2);
            CHECK(pi0_trace(WElement::one(), k, eps) == Scalar(1));
            CHECK(pi0_trace(WElement::generator(Generator::J0), k, eps).is_zero());
            // a- a+ averages to eps (k + 1): the level value of Rh + eps/2.
            CHECK(pi0_trace(kAm * kAp, k, eps) == Scalar(eps * Rational(k2 + 2, 2)));
            // Rh itself pins to eps (k + 1/2).
            CHECK(pi0_trace(WElement::one().scaled(Scalar::rhat()), k, eps) ==
                  Scalar(eps * Rational(k2 + 1, 2)));
        }
    }
}

TEST_CASE("pi0_trace equals the algebraic projection") {
    testutil::Rng rng(904);
    for (const Rational eps : {Rational(1), Rational(3, 5)}) {
        for (int trial = 0; trial < 12; ++trial) {
            const WElement w = random_word(rng, 3);
            for (int k2 = 0; k2 <= 4; ++k2) {
                const ParamPoint pt = ParamPoint::level_at(k2, eps);
                CHECK(pi0_trace(w, FuzzyLevel(k2), eps) == pi0(rho(w, pt)));
            }
        }
    }
}

TEST_CASE("closed-form norms match the ket-sum route") {
    for (const Rational eps : {Rational(1), Rational(5, 7)}) {
        for (int n2 = 0; n2 <= 4; ++n2) {
            for (int r2 = -n2; r2 <= n2; r2 += 2) {
                const int np = (n2 + r2) / 2;  // n + r
                const int nm = (n2 - r2) / 2;  // n - r
                WElement w = WElement::one();
                for (int i = 0; i < np; ++i) w = w * kAm;
                for (int i = 0; i < np; ++i) w = w * kAp;
                for (int i = 0; i < nm; ++i) w = w * kBp;
                for (int i = 0; i < nm; ++i) w = w * kBm;
                for (int k2 = 0; k2 <= 4; ++k2) {
                    const ParamPoint pt = ParamPoint::level_at(k2, eps);
                    CHECK(pi0_trace(w, FuzzyLevel(k2), eps) == norm_sq(n2, r2, pt));
                }
            }
        }
    }
}

TEST_CASE("rho agrees with the direct action on level kets") {
    testutil::Rng rng(905);
    // Pinned kernel relation: K0 realizes its level value.
    for (int k2 = 0; k2 <= 4; ++k2)
        CHECK(rho_consistency(WElement::generator(Generator::K0), FuzzyLevel(k2), Rational(1)));
    // The worked example word at every half-integer level up to 5/2.
    for (int k2 = 0; k2 <= 5; ++k2)
        CHECK(rho_consistency(kAp * kAm * kAm, FuzzyLevel(k2), Rational(1)));
    // Random words and levels.
    for (const Rational eps : {Rational(1), Rational(3, 2)}) {
        for (int trial = 0; trial < 10; ++trial) {
            const WElement w = random_word(rng, 3);
            for (int k2 = 0; k2 <= 3; ++k2) CHECK(rho_consistency(w, FuzzyLevel(k2), eps));
        }
    }
}

TEST_CASE("the level ideal annihilates and rho kills it") {
    testutil::Rng rng(906);
    const WElement k0mr = WElement::generator(Generator::K0) - WElement::one().scaled(Scalar::rhat());
    for (int trial = 0; trial < 8; ++trial) {
        // w (K0 - Rh) lies in the kernel of rho at every level: rho vanishes
        // and so does the direct action once Rh is pinned to the level.
        const WElement w = random_word(rng, 2) * k0mr;
        for (int k2 = 0; k2 <= 3; ++k2) {
            CHECK(rho(w, ParamPoint::level(k2)).is_zero());
            CHECK(rho_consistency(w, FuzzyLevel(k2), Rational(1)));
        }
    }
    // Opposite order does NOT lie in the kernel: (K0 - Rh) a- reduces to
    // -(eps/2) a-.
    const WElement wrong_order = k0mr * kAm;
    CHECK_FALSE(rho(wrong_order, ParamPoint::level(2)).is_zero());
    CHECK(rho(wrong_order, ParamPoint::level(2)) ==
          rho(kAm, ParamPoint::level(2)).scaled(Rational(-1, 2) * Scalar::eps()));
}

TEST_CASE("phi of the identity is the identity matrix") {
    for (int k2 = 0; k2 <= 4; ++k2) {
        const RectMatrix m =
            phi_matrix(PsiElement::basis(BasisLabel(0, 0, 0)), 0, FuzzyLevel(k2), Rational(1));
        CHECK(m == RectMatrix::identity(k2 + 1));
    }
}

TEST_CASE("matrix multiplication realizes the right product") {
    testutil::Rng rng(907);
    const Rational eps(1);
    for (int r2 = -2; r2 <= 2; ++r2) {
        for (int k2 = std::max(0, -r2); k2 <= std::max(0, -r2) + 2; ++k2) {
            const ParamPoint pt = ParamPoint::level_at(k2, eps);
            const FuzzyLevel k(k2);
            for (int trial = 0; trial < 3; ++trial) {
                const PsiElement xi_el = random_sector_element(rng, r2, 4);
                const PsiElement f = random_sector_element(rng, 0, 4);
                const RectMatrix lhs = phi_matrix(product_rho(xi_el, f, pt), r2, k, eps);
                const RectMatrix rhs = phi_matrix(xi_el, r2, k, eps) * phi_matrix(f, 0, k, eps);
                CHECK(lhs == rhs);
            }
        }
    }
}

TEST_CASE("conjugate transpose realizes the inner pairing") {
    testutil::Rng rng(908);
    const Rational eps(1);
    for (int r2 = -2; r2 <= 2; ++r2) {
        for (int k2 = std::max(0, -r2); k2 <= std::max(0, -r2) + 2; ++k2) {
            const ParamPoint pt = ParamPoint::level_at(k2, eps);
            const FuzzyLevel k(k2);
            for (int trial = 0; trial < 3; ++trial) {
                const PsiElement x = random_sector_element(rng, r2, 4);
                const PsiElement z = random_sector_element(rng, r2, 4);
                const RectMatrix lhs = phi_matrix(x, r2, k, eps).dagger() * phi_matrix(z, r2, k, eps);
                const PsiElement prod = product_rho(dagger_label(x), z, pt);
                CHECK(lhs == phi_matrix(prod, 0, k, eps));
                // The normalized trace of the pairing matrix is the inner
                // product at the level point.
                CHECK(Rational(1, k2 + 1) * lhs.trace() == inner(x, z, pt));
            }
        }
    }
}

TEST_CASE("matrices vanish exactly at the norm threshold") {
    const Rational eps(1);
    for (int n2 = 0; n2 <= 6; ++n2) {
        for (const BasisLabel& l : labels_at(n2)) {
            for (int k2 = 0; k2 <= 3; ++k2) {
                if (k2 + l.r2 < 0) continue;
                const RectMatrix m = phi_matrix(PsiElement::basis(l), l.r2, FuzzyLevel(k2), eps);
                const bool expect_zero = n2 >= 2 * k2 + l.r2 + 2;  // n >= 2k + r + 1
                CHECK(m.is_zero() == expect_zero);
            }
        }
    }
    // The pinned instance n = 3, r = 1 at level k = 1/2: 3 >= 2k + r + 1.
    CHECK(phi_matrix(PsiElement::basis(BasisLabel(6, 2, 0)), 2, FuzzyLevel(1), eps).is_zero());
}

TEST_CASE("Frobenius sums reproduce the closed-form norms") {
    for (const Rational eps : {Rational(1), Rational(2, 5)}) {
        for (int n2 = 0; n2 <= 4; ++n2) {
            for (const BasisLabel& l : labels_at(n2)) {
                for (int k2 = 0; k2 <= 3; ++k2) {
                    if (k2 + l.r2 < 0) continue;
                    const RectMatrix m = phi_matrix(PsiElement::basis(l), l.r2, FuzzyLevel(k2), eps);
                    CHECK(Rational(1, k2 + 1) * m.abs_sq_sum() ==
                          norm_sq(n2, l.r2, ParamPoint::level_at(k2, eps)));
                }
            }
        }
    }
}

TEST_CASE("matrix trace pairs with pi0") {
    testutil::Rng rng(909);
    const Rational eps(1);
    for (int k2 = 0; k2 <= 3; ++k2) {
        const ParamPoint pt = ParamPoint::level_at(k2, eps);
        for (int trial = 0; trial < 5; ++trial) {
            const PsiElement x = random_sector_element(rng, 0, 4);
            CHECK(Rational(1, k2 + 1) * phi_matrix(x, 0, FuzzyLevel(k2), eps).trace() ==
                  pt.apply(pi0(x)));
        }
    }
}

TEST_CASE("phi validates sector and level inputs") {
    PsiElement mixed;
    mixed.add(BasisLabel(2, 0, 0), Scalar(1));
    mixed.add(BasisLabel(2, 2, 0), Scalar(1));
    CHECK_THROWS_AS(phi_matrix(mixed, 0, FuzzyLevel(2), Rational(1)), SectorMismatch);
    CHECK_THROWS_AS(phi_matrix(PsiElement::basis(BasisLabel(2, -2, 0)), -2, FuzzyLevel(1), Rational(1)),
                    InvalidLabel);
    CHECK_THROWS_AS(FuzzyLevel(-1), InvalidLabel);
}

TEST_CASE("rect matrix algebra and serialization") {
    const RectMatrix id2 = RectMatrix::identity(2);
    CHECK(id2.trace() == Scalar(2));
    CHECK(id2 * id2 == id2);
    CHECK((id2 - id2).is_zero());
    CHECK_FALSE(id2.is_zero());
    CHECK(id2.dagger() == id2);
    CHECK(id2.abs_sq_sum() == Scalar(2));

    RectMatrix a(1, 2);
    a.at(0, 0) = Scalar::i();
    a.at(0, 1) = Scalar(3);
    const RectMatrix ad = a.dagger();
    CHECK(ad.rows() == 2);
    CHECK(ad.at(0, 0) == -Scalar::i());
    CHECK((a * ad).at(0, 0) == Scalar(10));  // |i|^2 + |3|^2
    CHECK_THROWS_AS(a * a, SectorMismatch);
    CHECK_THROWS_AS(a.trace(), SectorMismatch);
    CHECK_THROWS_AS(a + ad, SectorMismatch);

    CHECK(id2.to_csv() == "mu,nu,value\n1,1,\"1\"\n2,2,\"1\"\n");
    CHECK(id2.to_json() ==
          R"({"cols":2,"entries":[{"mu":1,"nu":1,"value":"1"},{"mu":2,"nu":2,"value":"1"}],"rows":2})");
    CHECK(a.to_csv(true) == "mu,nu,value,re,im\n1,1,\"i\",0,1\n1,2,\"3\",3,0\n");
}

TEST_CASE("nullity scan distinguishes zero from nonzero") {
    testutil::Rng rng(910);
    CHECK(annihilates_levels(WElement::zero(), 8, Rational(1)));
    // A word that kills the low strip but not everything: a- a+ shifted by
    // -eps annihilates only kets with k + j = 0.
    const WElement shifted = kAp * kAm;
    CHECK_FALSE(annihilates_levels(shifted, 8, Rational(1)));
    for (int trial = 0; trial < 10; ++trial) {
        WElement w = random_word(rng, 3);
        if (w.is_zero()) continue;
        CHECK_FALSE(annihilates_levels(w, 2 * (w.max_degree() + 2), Rational(1)));
    }
}
