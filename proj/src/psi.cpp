#include "ncsphere/psi.hpp"

#include "ncsphere/errors.hpp"
#include "ncsphere/numeric.hpp"

#include <json.hpp>

#include <cstdlib>
#include <mutex>
#include <sstream>

namespace ncsphere {

// ---------------------------------------------------------------------------
// labels and elements

bool BasisLabel::valid(int n2, int r2, int m2) {
    return n2 >= 0 && std::abs(r2) <= n2 && std::abs(m2) <= n2 &&
           (n2 + r2) % 2 == 0 && (n2 + m2) % 2 == 0;
}

BasisLabel::BasisLabel(int n2_, int r2_, int m2_) : n2(n2_), r2(r2_), m2(m2_) {
    if (!valid(n2, r2, m2)) {
        std::ostringstream os;
        os << "invalid basis label (n2,r2,m2) = (" << n2 << "," << r2 << "," << m2 << ")";
        throw InvalidLabel(os.str());
    }
}

std::string BasisLabel::to_string() const {
    return "Xi(" + half_to_string(n2) + "," + half_to_string(r2) + "," +
           half_to_string(m2) + ")";
}

PsiElement PsiElement::basis(const BasisLabel& l, const Scalar& c) {
    PsiElement x;
    x.add(l, c);
    return x;
}

void PsiElement::add(const BasisLabel& l, const Scalar& c) {
    if (c.is_zero()) return;
    auto it = coeffs_.find(l);
    if (it == coeffs_.end()) {
        coeffs_.emplace(l, c);
    } else {
        it->second += c;
        if (it->second.is_zero()) coeffs_.erase(it);
    }
}

PsiElement PsiElement::operator+(const PsiElement& o) const {
    PsiElement r = *this;
    for (const auto& [l, c] : o.coeffs_) r.add(l, c);
    return r;
}

PsiElement PsiElement::operator-(const PsiElement& o) const {
    PsiElement r = *this;
    for (const auto& [l, c] : o.coeffs_) r.add(l, -c);
    return r;
}

PsiElement PsiElement::scaled(const Scalar& c) const {
    PsiElement r;
    if (c.is_zero()) return r;
    for (const auto& [l, k] : coeffs_) r.add(l, k * c);
    return r;
}

std::string PsiElement::to_string() const {
    if (coeffs_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [l, c] : coeffs_) {
        std::string cs = c.to_string();
        if (c.terms().size() > 1) cs = "(" + cs + ")";
        std::string term;
        if (cs == "1") term = l.to_string();
        else if (cs == "-1") term = "-" + l.to_string();
        else term = cs + "*" + l.to_string();
        if (first) {
            os << term;
            first = false;
        } else if (term[0] == '-') {
            os << " - " << term.substr(1);
        } else {
            os << " + " << term;
        }
    }
    return os.str();
}

std::string PsiElement::to_json() const {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& [l, c] : coeffs_) {
        arr.push_back({{"n2", l.n2}, {"r2", l.r2}, {"m2", l.m2}, {"coeff", c.to_string()}});
    }
    return arr.dump();
}

// ---------------------------------------------------------------------------
// parameter points

ParamPoint ParamPoint::symbolic() { return ParamPoint(); }

ParamPoint ParamPoint::level(int k2) {
    if (k2 < 0) throw std::invalid_argument("level: k must be >= 0");
    ParamPoint p;
    p.kind_ = Kind::Level;
    p.k2_ = k2;
    return p;
}

ParamPoint ParamPoint::level_at(int k2, const Rational& eps) {
    if (eps <= 0) throw std::invalid_argument("level_at: eps must be > 0");
    ParamPoint p = level(k2);
    p.eps_set_ = true;
    p.eps_ = eps;
    return p;
}

ParamPoint ParamPoint::numeric(const Rational& eps, const Scalar& rhat) {
    if (eps < 0) throw std::invalid_argument("numeric: eps must be >= 0");
    if (!rhat.is_single_term())
        throw std::invalid_argument("numeric: rhat must be a single term");
    const auto& [key, g] = *rhat.terms().begin();
    if (key.p != 0 || key.h != 0 || !(g.im == 0) || g.re <= 0)
        throw std::invalid_argument("numeric: rhat must be a positive real number");
    // R^2 = rhat^2 - eps^2/4 >= 0; rhat = q*sqrt(d) so rhat^2 = q^2 d.
    const Rational rhat_sq = g.re * g.re * Rational(key.d);
    if (rhat_sq * 4 < eps * eps)
        throw std::invalid_argument("numeric: rhat^2 must be >= eps^2/4");
    ParamPoint p;
    p.kind_ = Kind::Numeric;
    p.eps_set_ = true;
    p.eps_ = eps;
    p.rhat_ = rhat;
    return p;
}

Scalar ParamPoint::rhat() const {
    switch (kind_) {
        case Kind::Symbolic: return Scalar::rhat();
        case Kind::Level: {
            Scalar r = Scalar(Rational(k2_ + 1, 2)) * Scalar::eps();
            return eps_set_ ? r.substitute_eps(eps_) : r;
        }
        case Kind::Numeric: return rhat_;
    }
    throw std::logic_error("unreachable");
}

Scalar ParamPoint::apply(const Scalar& s) const {
    switch (kind_) {
        case Kind::Symbolic:
            return s;
        case Kind::Level: {
            Scalar r = s.substitute_rhat(Scalar(Rational(k2_ + 1, 2)) * Scalar::eps());
            return eps_set_ ? r.substitute_eps(eps_) : r;
        }
        case Kind::Numeric:
            return s.substitute_rhat(rhat_).substitute_eps(eps_);
    }
    throw std::logic_error("unreachable");
}

PsiElement ParamPoint::apply(const PsiElement& x) const {
    if (kind_ == Kind::Symbolic) return x;
    PsiElement out;
    for (const auto& [l, c] : x.coeffs()) out.add(l, apply(c));
    return out;
}

// ---------------------------------------------------------------------------
// the Xi cache

namespace {

struct CacheEntry {
    WElement xi;
    std::vector<Scalar> reduced;  // J0-poly of the single sector, K0 -> Rhat
    Scalar lead_inv;              // inverse of reduced.back()
};

WElement build_xi(const BasisLabel& l) {
    const int np = (l.n2 + l.r2) / 2;  // a+ exponent at the top rung
    const int nm = (l.n2 - l.r2) / 2;  // b- exponent at the top rung
    const int k = (l.n2 - l.m2) / 2;   // Ad J- applications
    WElement w = WElement::monomial({np, 0, 0, nm});
    for (int i = 0; i < k; ++i) w = ad_eps0(Generator::Jm, w);
    // eps^{m-n} (n+m)!/((2n)!(n-m)!) under the square root; the eps powers
    // cancelled against ad_eps0 above.
    const Rational inside = Rational(factorial((l.n2 + l.m2) / 2)) /
                            Rational(factorial(l.n2) * factorial(k));
    return w.scaled(Scalar::sqrt_rational(inside));
}

CacheEntry build_entry(const BasisLabel& l) {
    CacheEntry e;
    e.xi = build_xi(l);
    for (const auto& [m, c] : e.xi.coeffs()) {
        if (c.eps_order() != 0)
            throw std::logic_error("xi: eps powers failed to cancel");
    }
    auto parts = sector_decompose(e.xi);
    if (parts.size() != 1 || parts[0].r2 != l.r2 || parts[0].m2 != l.m2)
        throw std::logic_error("xi: unexpected sector structure");
    SectorPoly sp = reduced_form(parts[0]);
    const int d = (l.n2 - std::max(std::abs(l.r2), std::abs(l.m2))) / 2;
    e.reduced.assign(d + 1, Scalar());
    for (const auto& [key, c] : sp.q) {
        if (key.first > d) throw std::logic_error("xi: reduced degree too high");
        e.reduced[key.first] += c * Scalar::rhat_pow(key.second);
    }
    const Scalar& lead = e.reduced.back();
    if (!lead.is_single_term())
        throw std::logic_error("xi: leading coefficient is not a single term");
    const auto& key = lead.terms().begin()->first;
    if (key.p != 0 || key.h != 0)
        throw std::logic_error("xi: leading coefficient depends on eps or Rhat");
    e.lead_inv = lead.inverse_single();
    return e;
}

const CacheEntry& cache_entry(const BasisLabel& l) {
    static std::map<BasisLabel, CacheEntry> cache;
    static std::mutex mtx;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(l);
    if (it != cache.end()) return it->second;
    return cache.emplace(l, build_entry(l)).first->second;
}

}  // namespace

WElement xi(const BasisLabel& l) { return cache_entry(l).xi; }

WElement lift(const PsiElement& x) {
    WElement w;
    for (const auto& [l, c] : x.coeffs()) w += xi(l).scaled(c);
    return w;
}

// ---------------------------------------------------------------------------
// projections

ReducedSector to_reduced_sector(const SectorPoly& sp) {
    ReducedSector s;
    s.r2 = sp.r2;
    s.m2 = sp.m2;
    for (const auto& [key, c] : sp.q) {
        if (key.first >= static_cast<int>(s.q.size())) s.q.resize(key.first + 1);
        s.q[key.first] += c * Scalar::rhat_pow(key.second);
    }
    while (!s.q.empty() && s.q.back().is_zero()) s.q.pop_back();
    return s;
}

namespace {

PsiElement solve_sector(const ReducedSector& s) {
    PsiElement out;
    std::vector<Scalar> q = s.q;
    while (!q.empty() && q.back().is_zero()) q.pop_back();
    const int base = std::max(std::abs(s.r2), std::abs(s.m2));
    while (!q.empty()) {
        const int d = static_cast<int>(q.size()) - 1;
        BasisLabel l(2 * d + base, s.r2, s.m2);
        const CacheEntry& e = cache_entry(l);
        Scalar c = q[d] * e.lead_inv;
        out.add(l, c);
        for (int i = 0; i <= d; ++i) q[i] -= c * e.reduced[i];
        if (!q[d].is_zero())
            throw std::logic_error("sector solve: leading term failed to cancel");
        q.pop_back();
        while (!q.empty() && q.back().is_zero()) q.pop_back();
    }
    return out;
}

}  // namespace

PsiElement decompose_reduced(const ReducedSector& s, const ParamPoint& p) {
    return p.apply(solve_sector(s));
}

PsiElement rho_symbolic(const WElement& w) {
    PsiElement out;
    for (const SectorPart& part : sector_decompose(w))
        out += solve_sector(to_reduced_sector(reduced_form(part)));
    return out;
}

PsiElement rho(const WElement& w, const ParamPoint& p) {
    return p.apply(rho_symbolic(w));
}

PsiElement rho_star_symbolic(const WElement& w) {
    // The left ideal is the dagger image of the right ideal: (K0 - Rhat)w =
    // (w^dag (K0 - Rhat))^dag since K0 and Rhat are self-adjoint.
    return dagger_label(rho_symbolic(w.dagger()));
}

PsiElement rho_star(const WElement& w, const ParamPoint& p) {
    return p.apply(rho_star_symbolic(w));
}

PsiElement product_rho(const PsiElement& x, const PsiElement& y, const ParamPoint& p) {
    return rho(lift(x) * lift(y), p);
}

PsiElement product_rho_star(const PsiElement& x, const PsiElement& y, const ParamPoint& p) {
    return rho_star(lift(x) * lift(y), p);
}

Scalar pi0(const PsiElement& x) {
    auto it = x.coeffs().find(BasisLabel(0, 0, 0));
    return it == x.coeffs().end() ? Scalar() : it->second;
}

PsiElement pi_n(const PsiElement& x, int n2) {
    PsiElement out;
    for (const auto& [l, c] : x.coeffs())
        if (l.n2 == n2) out.add(l, c);
    return out;
}

Scalar inner(const PsiElement& x, const PsiElement& y, const ParamPoint& p) {
    // pi0 only sees the (0,0) sector of the product, so solve just there.
    WElement w = lift(x).dagger() * lift(y);
    for (const SectorPart& part : sector_decompose(w)) {
        if (part.r2 != 0 || part.m2 != 0) continue;
        PsiElement d = decompose_reduced(to_reduced_sector(reduced_form(part)), p);
        return pi0(d);
    }
    return Scalar();
}

// ---------------------------------------------------------------------------
// norms

Scalar norm_sq(int n2, int r2, const ParamPoint& p) {
    if (!BasisLabel::valid(n2, r2, n2 % 2 == 0 ? 0 : 1))
        throw InvalidLabel("norm_sq: invalid (n, r)");
    const int nmr = (n2 - r2) / 2;
    const int npr = (n2 + r2) / 2;
    Scalar out(Rational(factorial(npr) * factorial(nmr)) / Rational(factorial(n2 + 1)));
    const Scalar two_rh = Scalar(2) * Scalar::rhat();
    for (int s = 1; s <= nmr; ++s) out *= two_rh - Scalar(Rational(s)) * Scalar::eps();
    for (int s = 1; s <= npr; ++s) out *= two_rh + Scalar(Rational(s)) * Scalar::eps();
    return p.apply(out);
}

int norm_sign(int n2, int r2, const ParamPoint& p) {
    const int nmr = (n2 - r2) / 2;
    if (nmr == 0) return 1;  // only the positive factors (2Rh + eps s) remain
    // x = 2*Rhat/eps decides everything; each degenerate level x in [1, n-r]
    // zeroes one factor of the norm product.
    bool x_is_int = false;
    Int x_floor = 0;
    bool x_above = false;  // x > n-r
    switch (p.kind()) {
        case ParamPoint::Kind::Symbolic:
            throw SymbolicPointUnsupported("norm_sign needs a level or numeric point");
        case ParamPoint::Kind::Level:
            x_is_int = true;
            x_floor = p.k2() + 1;
            x_above = Int(p.k2() + 1) > nmr;
            break;
        case ParamPoint::Kind::Numeric: {
            if (p.eps() == 0) return 1;  // all factors reduce to 2*rhat > 0
            const Scalar rh = p.rhat();
            const auto& [key, g] = *rh.terms().begin();
            const Rational q2 = Rational(2) * g.re / p.eps();  // x = q2 * sqrt(d)
            const Int d = key.d;
            if (d == 1) {
                x_is_int = boost::multiprecision::denominator(q2) == 1;
                x_floor = boost::multiprecision::numerator(q2) /
                          boost::multiprecision::denominator(q2);
                x_above = q2 > nmr;
            } else {
                const Int a = boost::multiprecision::numerator(q2);
                const Int b = boost::multiprecision::denominator(q2);
                // floor((a/b) sqrt(d)) = floor(floor(sqrt(a^2 d)) / b).
                x_floor = isqrt(a * a * d) / b;
                x_is_int = false;                // sqrt(d) irrational for d > 1
                x_above = a * a * d > Int(nmr) * Int(nmr) * b * b;
            }
            break;
        }
    }
    if (x_above) return 1;
    if (x_is_int && x_floor >= 1) return 0;
    const Int par = Int(nmr) - x_floor;
    return (par % 2 == 0) ? 1 : -1;
}

// ---------------------------------------------------------------------------
// label-level adjoints

namespace {

PsiElement ad_diagonal(const PsiElement& x, bool use_r) {
    PsiElement out;
    for (const auto& [l, c] : x.coeffs()) {
        const int w2 = use_r ? l.r2 : l.m2;
        out.add(l, c * Scalar(Rational(w2, 2)) * Scalar::eps());
    }
    return out;
}

}  // namespace

PsiElement ad_J0(const PsiElement& x) { return ad_diagonal(x, false); }
PsiElement ad_K0(const PsiElement& x) { return ad_diagonal(x, true); }

PsiElement ad_Jp(const PsiElement& x) {
    PsiElement out;
    for (const auto& [l, c] : x.coeffs()) {
        if (l.m2 == l.n2) continue;
        const Int f = Int((l.n2 - l.m2) / 2) * Int((l.n2 + l.m2) / 2 + 1);
        out.add(BasisLabel(l.n2, l.r2, l.m2 + 2), c * Scalar::sqrt_int(f) * Scalar::eps());
    }
    return out;
}

PsiElement ad_Jm(const PsiElement& x) {
    PsiElement out;
    for (const auto& [l, c] : x.coeffs()) {
        if (l.m2 == -l.n2) continue;
        const Int f = Int((l.n2 + l.m2) / 2) * Int((l.n2 - l.m2) / 2 + 1);
        out.add(BasisLabel(l.n2, l.r2, l.m2 - 2), c * Scalar::sqrt_int(f) * Scalar::eps());
    }
    return out;
}

PsiElement laplacian(const PsiElement& x) {
    const Scalar half(Rational(1, 2));
    return ad_J0(ad_J0(x)) + ad_Jp(ad_Jm(x)).scaled(half) + ad_Jm(ad_Jp(x)).scaled(half);
}

PsiElement dagger_label(const PsiElement& x) {
    PsiElement out;
    for (const auto& [l, c] : x.coeffs()) {
        Scalar cc = c.conjugate();
        if (((l.r2 + l.m2) / 2) % 2 != 0) cc = -cc;
        out.add(BasisLabel(l.n2, -l.r2, -l.m2), cc);
    }
    return out;
}

}  // namespace ncsphere
