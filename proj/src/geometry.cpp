#include "ncsphere/geometry.hpp"

#include <utility>

#include "ncsphere/errors.hpp"
#include "ncsphere/linsolve.hpp"

namespace ncsphere {

namespace {

// 2Rhat + eps evaluated at p; the coordinate/one-form/vector-field
// normalizations need its inverse square root inside the scalar ring, which
// exists exactly when the value is a positive rational.
Rational normalizer(const ParamPoint& p) {
    const Scalar s = p.apply(Rational(2) * Scalar::rhat() + Scalar::eps());
    const auto q = s.as_rational();
    if (!q || *q <= 0) {
        throw SymbolicPointUnsupported(
            "coordinate normalization needs 2Rhat+eps to be a positive "
            "rational at the evaluation point, got " + s.to_string());
    }
    return *q;
}

PsiElement frame_element(const ParamPoint& p, int r2, int m2, bool flip_m) {
    const Rational q = normalizer(p);
    const Scalar c = Scalar::sqrt_rational(Rational(1) / q);
    const int m = flip_m ? -m2 : m2;
    Scalar coeff = c;
    if (flip_m && m2 == 0) coeff = -coeff;  // sign (-1)^{m+1} at m = 0
    return PsiElement::basis(BasisLabel(2, r2, m), coeff);
}

}  // namespace

bool on_sector(const PsiElement& x, int r2) {
    for (const auto& [l, c] : x.coeffs()) {
        (void)c;
        if (l.r2 != r2) return false;
    }
    return true;
}

FieldSector::FieldSector(int r2_, PsiElement element_)
    : r2(r2_), element(std::move(element_)) {
    if (!on_sector(element, r2)) {
        throw SectorMismatch("element has support outside the sector r = " +
                             std::to_string(r2) + "/2");
    }
}

PsiElement omega(int r1_2, int r2_2, int n2, const PsiElement& x,
                 const ParamPoint& p, TripleProduct mode) {
    if (n2 < 0 || !BasisLabel::valid(n2, r1_2, n2) ||
        !BasisLabel::valid(n2, r2_2, n2)) {
        throw InvalidLabel("omega sector labels need |r1|,|r2| <= n with "
                           "n+r1, n+r2 integral");
    }
    const WElement wx = lift(x);
    PsiElement out;
    for (int m2 = -n2; m2 <= n2; m2 += 2) {
        const WElement left = xi(BasisLabel(n2, r2_2, m2)).dagger();
        const WElement right = xi(BasisLabel(n2, r1_2, m2));
        switch (mode) {
            case TripleProduct::SingleRho:
                out += rho(left * wx * right, p);
                break;
            case TripleProduct::RightNested:
                out += rho(left * lift(rho(wx * right, p)), p);
                break;
            case TripleProduct::LeftNested:
                out += rho(lift(rho(left * wx, p)) * right, p);
                break;
        }
    }
    return out;
}

std::vector<PsiElement> coordinates(const ParamPoint& p) {
    std::vector<PsiElement> out;
    for (int m2 = -2; m2 <= 2; m2 += 2) out.push_back(frame_element(p, 0, m2, false));
    return out;
}

std::vector<PsiElement> one_forms(const ParamPoint& p) {
    std::vector<PsiElement> out;
    for (int m2 = -2; m2 <= 2; m2 += 2) out.push_back(frame_element(p, -2, m2, false));
    return out;
}

std::vector<PsiElement> vector_fields(const ParamPoint& p) {
    std::vector<PsiElement> out;
    for (int m2 = -2; m2 <= 2; m2 += 2) out.push_back(frame_element(p, 2, m2, true));
    return out;
}

PsiElement exterior_d(const PsiElement& f, const ParamPoint& p) {
    if (!on_sector(f, 0)) {
        throw SectorMismatch("exterior_d expects a scalar-sector argument");
    }
    return exterior_d_any(f, p);
}

PsiElement exterior_d_any(const PsiElement& x, const ParamPoint& p) {
    const Rational q = normalizer(p);
    if (!p.eps_known() || p.eps() <= 0) {
        throw SymbolicPointUnsupported(
            "exterior derivative needs a known positive eps");
    }
    return omega(0, 2, 2, x, p).scaled(Scalar(Rational(1) / (p.eps() * q)));
}

PsiElement vector_action(const PsiElement& X, const PsiElement& f,
                         const ParamPoint& p) {
    return product_rho(exterior_d(f, p), X, p);
}

PsiElement metric(const PsiElement& X, const PsiElement& Y,
                  const ParamPoint& p) {
    if (!on_sector(X, 2) || !on_sector(Y, 2)) {
        throw SectorMismatch("metric expects two vector-field (r = +1) arguments");
    }
    return product_rho(dagger_label(X), Y, p);
}

PsiElement bracket_eps_limit(const PsiElement& x, const PsiElement& y) {
    const WElement wx = lift(x), wy = lift(y);
    const PsiElement comm = rho_symbolic(wx * wy - wy * wx);
    const Scalar minus_i_over_eps =
        Scalar::gaussian(0, -1) * Scalar::eps_pow(-2);
    PsiElement out;
    for (const auto& [l, c] : comm.coeffs()) {
        if (c.eps_order() < 2) {
            throw NotEpsDivisible("rho([x,y]) coefficient " + c.to_string() +
                                  " at " + l.to_string() + " is not O(eps)");
        }
        const Scalar limit = (c * minus_i_over_eps).substitute_eps(Rational(0));
        if (!limit.is_zero()) out.add(l, limit);
    }
    return out;
}

PsiElement delta_N(const PsiElement& x) {
    PsiElement out;
    for (const auto& [l, c] : x.coeffs()) {
        if (l.n2 == 0) continue;
        out.add(l, Rational(l.n2, 2) * c);
    }
    return out;
}

SpinorColumn spinor_membership(const PsiElement& f1, const PsiElement& f2,
                               const ParamPoint& p) {
    if (!on_sector(f1, 0) || !on_sector(f2, 0)) {
        throw SectorMismatch("spinor components need scalar-sector inputs");
    }
    const WElement w1 = lift(f1), w2 = lift(f2);
    SpinorColumn col;
    col.top = rho(WElement::letter(Letter::APlus) * w1, p) +
              rho(WElement::letter(Letter::AMinus) * w2, p);
    col.bottom = rho(WElement::letter(Letter::BPlus) * w1, p) +
                 rho(WElement::letter(Letter::BMinus) * w2, p);
    return col;
}

namespace {

// Consistency of (letterA; letterB) * f = (rhs_a; rhs_b) for some f in the
// scalar sector supported on n2 <= n2_cap.
bool chirality_consistent(Letter letterA, Letter letterB,
                          const PsiElement& rhs_a, const PsiElement& rhs_b,
                          const ParamPoint& p, int n2_cap) {
    std::vector<BasisLabel> unknowns;
    for (int n2 = 0; n2 <= n2_cap; n2 += 2) {
        for (int m2 = -n2; m2 <= n2; m2 += 2) unknowns.emplace_back(n2, 0, m2);
    }
    std::vector<PsiElement> img_a, img_b;
    img_a.reserve(unknowns.size());
    img_b.reserve(unknowns.size());
    for (const BasisLabel& u : unknowns) {
        const WElement w = xi(u);
        img_a.push_back(rho(WElement::letter(letterA) * w, p));
        img_b.push_back(rho(WElement::letter(letterB) * w, p));
    }

    auto block_rows = [&](const std::vector<PsiElement>& img,
                          const PsiElement& rhs, ScalarRows& aug) {
        const std::size_t base = aug.size();
        std::map<BasisLabel, std::size_t> row_of;
        auto row_index = [&](const BasisLabel& l) {
            auto it = row_of.find(l);
            if (it != row_of.end()) return base + it->second;
            const std::size_t local = row_of.size();
            row_of.emplace(l, local);
            aug.emplace_back(unknowns.size() + 1, Scalar::zero());
            return base + local;
        };
        for (std::size_t j = 0; j < img.size(); ++j) {
            for (const auto& [l, c] : img[j].coeffs()) aug[row_index(l)][j] = c;
        }
        for (const auto& [l, c] : rhs.coeffs()) aug[row_index(l)].back() = c;
    };

    ScalarRows aug;
    block_rows(img_a, rhs_a, aug);
    block_rows(img_b, rhs_b, aug);
    return system_consistent(aug, static_cast<int>(unknowns.size()));
}

}  // namespace

bool in_spinor_set(const SpinorColumn& col, const ParamPoint& p, int n2_cap) {
    PsiElement top_p, top_m, bot_p, bot_m;
    for (const auto& [l, c] : col.top.coeffs()) {
        if (l.r2 == 1) top_p.add(l, c);
        else if (l.r2 == -1) top_m.add(l, c);
        else return false;
    }
    for (const auto& [l, c] : col.bottom.coeffs()) {
        if (l.r2 == 1) bot_p.add(l, c);
        else if (l.r2 == -1) bot_m.add(l, c);
        else return false;
    }
    return chirality_consistent(Letter::APlus, Letter::BPlus, top_p, bot_p, p,
                                n2_cap) &&
           chirality_consistent(Letter::AMinus, Letter::BMinus, top_m, bot_m,
                                p, n2_cap);
}

int two_pi_rotation_sign(const PsiElement& x) {
    bool seen_even = false, seen_odd = false;
    for (const auto& [l, c] : x.coeffs()) {
        (void)c;
        ((l.n2 % 2 == 0) ? seen_even : seen_odd) = true;
    }
    if (seen_even && seen_odd) {
        throw MixedParity("2 pi rotation sign undefined on mixed "
                          "integer/half-integer support");
    }
    return seen_odd ? -1 : 1;
}

}  // namespace ncsphere
