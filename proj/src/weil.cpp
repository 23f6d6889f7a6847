#include "ncsphere/weil.hpp"

#include "ncsphere/errors.hpp"
#include "ncsphere/numeric.hpp"

#include <functional>
#include <mutex>
#include <sstream>
#include <tuple>
#include <utility>

namespace ncsphere {

void WElement::add(const NormalMonomial& m, const Scalar& c) {
    if (c.is_zero()) return;
    auto it = coeffs_.find(m);
    if (it == coeffs_.end()) {
        coeffs_.emplace(m, c);
    } else {
        it->second += c;
        if (it->second.is_zero()) coeffs_.erase(it);
    }
}

WElement WElement::monomial(const NormalMonomial& m, const Scalar& c) {
    WElement w;
    w.add(m, c);
    return w;
}

WElement WElement::letter(Letter l) {
    switch (l) {
        case Letter::APlus:  return monomial({1, 0, 0, 0});
        case Letter::AMinus: return monomial({0, 1, 0, 0});
        case Letter::BPlus:  return monomial({0, 0, 1, 0});
        case Letter::BMinus: return monomial({0, 0, 0, 1});
    }
    throw InvalidLabel("unknown letter");
}

WElement WElement::generator(Generator g) {
    const Scalar half(Rational(1, 2));
    WElement w;
    switch (g) {
        case Generator::J0:
            w.add({1, 1, 0, 0}, half);
            w.add({0, 0, 1, 1}, -half);
            return w;
        case Generator::Jp:
            w.add({1, 0, 0, 1}, Scalar(1));
            return w;
        case Generator::Jm:
            w.add({0, 1, 1, 0}, Scalar(1));
            return w;
        case Generator::K0:
            w.add({1, 1, 0, 0}, half);
            w.add({0, 0, 1, 1}, half);
            w.add({0, 0, 0, 0}, half * Scalar::eps());
            return w;
        case Generator::Kp:
            w.add({1, 0, 1, 0}, Scalar(1));
            return w;
        case Generator::Km:
            w.add({0, 1, 0, 1}, Scalar(1));
            return w;
    }
    throw InvalidLabel("unknown generator");
}

WElement WElement::operator-() const {
    WElement r;
    for (const auto& [m, c] : coeffs_) r.coeffs_.emplace(m, -c);
    return r;
}

WElement WElement::operator+(const WElement& o) const {
    WElement r = *this;
    for (const auto& [m, c] : o.coeffs_) r.add(m, c);
    return r;
}

WElement WElement::operator-(const WElement& o) const {
    WElement r = *this;
    for (const auto& [m, c] : o.coeffs_) r.add(m, -c);
    return r;
}

WElement WElement::scaled(const Scalar& c) const {
    WElement r;
    if (c.is_zero()) return r;
    for (const auto& [m, k] : coeffs_) r.add(m, k * c);
    return r;
}

WElement operator*(const Scalar& c, const WElement& w) { return w.scaled(c); }

WElement WElement::operator*(const WElement& o) const {
    WElement r;
    for (const auto& [m1, c1] : coeffs_) {
        for (const auto& [m2, c2] : o.coeffs_) {
            const Scalar c12 = c1 * c2;
            const int imax = std::min(m1.am, m2.ap);
            const int jmax = std::min(m1.bm, m2.bp);
            for (int i = 0; i <= imax; ++i) {
                const Rational wa(binomial(m1.am, i) * binomial(m2.ap, i) * factorial(i));
                for (int j = 0; j <= jmax; ++j) {
                    const Rational wb(binomial(m1.bm, j) * binomial(m2.bp, j) * factorial(j));
                    NormalMonomial m{m1.ap + m2.ap - i, m1.am + m2.am - i,
                                     m1.bp + m2.bp - j, m1.bm + m2.bm - j};
                    r.add(m, (wa * wb) * (c12 * Scalar::eps_pow(2 * (i + j))));
                }
            }
        }
    }
    return r;
}

WElement WElement::dagger() const {
    // (a+^s a-^t b+^u b-^v)^dag = a+^t a-^s b+^v b-^u: already normal-ordered.
    WElement r;
    for (const auto& [m, c] : coeffs_) r.coeffs_.emplace(m.dagger(), c.conjugate());
    return r;
}

int WElement::max_degree() const {
    int d = -1;
    for (const auto& [m, c] : coeffs_) d = std::max(d, m.degree());
    return d;
}

std::string WElement::to_string() const {
    if (coeffs_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [m, c] : coeffs_) {
        std::string cs = c.to_string();
        if (c.terms().size() > 1) cs = "(" + cs + ")";
        std::string ms;
        auto put = [&ms](const char* name, int e) {
            if (e == 0) return;
            if (!ms.empty()) ms += "*";
            ms += name;
            if (e > 1) ms += "^" + std::to_string(e);
        };
        put("a+", m.ap);
        put("a-", m.am);
        put("b+", m.bp);
        put("b-", m.bm);
        std::string term;
        if (ms.empty()) term = cs;
        else if (cs == "1") term = ms;
        else if (cs == "-1") term = "-" + ms;
        else term = cs + "*" + ms;
        if (first) {
            os << term;
            first = false;
        } else if (!term.empty() && term[0] == '-') {
            os << " - " << term.substr(1);
        } else {
            os << " + " << term;
        }
    }
    return os.str();
}

WElement ad(const WElement& t, const WElement& w) { return t * w - w * t; }

namespace {

// Bilinear coefficients T[mu][nu] (mu, nu in {a, b}) of the raising*lowering
// generators T = sum chi+^mu T^{mu nu} chi-^nu, constants dropped.
bool bilinear_matrix(Generator g, Rational T[2][2]) {
    T[0][0] = T[0][1] = T[1][0] = T[1][1] = Rational(0);
    switch (g) {
        case Generator::J0:
            T[0][0] = Rational(1, 2);
            T[1][1] = Rational(-1, 2);
            return true;
        case Generator::Jp:
            T[0][1] = Rational(1);
            return true;
        case Generator::Jm:
            T[1][0] = Rational(1);
            return true;
        case Generator::K0:
            T[0][0] = Rational(1, 2);
            T[1][1] = Rational(1, 2);
            return true;
        default:
            return false;
    }
}

}  // namespace

WElement ad_eps0(Generator g, const WElement& w) {
    Rational T[2][2];
    if (!bilinear_matrix(g, T))
        throw UnsupportedGenerator("ad_eps0 requires a raising*lowering bilinear (J0, J+, J-, K0)");
    WElement r;
    for (const auto& [m, c] : w.coeffs_) {
        const int raise[2] = {m.ap, m.bp};
        const int lower[2] = {m.am, m.bm};
        for (int mu = 0; mu < 2; ++mu) {
            for (int nu = 0; nu < 2; ++nu) {
                if (T[mu][nu] == 0) continue;
                // chi+^mu d/d chi+^nu: left multiplication by a raising letter
                // keeps normal order.
                if (raise[nu] > 0) {
                    NormalMonomial n = m;
                    (nu == 0 ? n.ap : n.bp) -= 1;
                    (mu == 0 ? n.ap : n.bp) += 1;
                    r.add(n, (T[mu][nu] * Rational(raise[nu])) * c);
                }
                // (d/d chi-^mu) chi-^nu: right multiplication by a lowering
                // letter keeps normal order.
                if (lower[mu] > 0) {
                    NormalMonomial n = m;
                    (mu == 0 ? n.am : n.bm) -= 1;
                    (nu == 0 ? n.am : n.bm) += 1;
                    r.add(n, (T[mu][nu] * Rational(-lower[mu])) * c);
                }
            }
        }
    }
    return r;
}

WElement ad_generator(Generator g, const WElement& w) {
    if (g == Generator::Kp || g == Generator::Km)
        return ad(WElement::generator(g), w);
    return Scalar::eps() * ad_eps0(g, w);
}

// ---------------------------------------------------------------------------
// symmetric basis

SymElement SymElement::basis(const SymLabel& l, const Scalar& c) {
    SymElement x;
    x.add(l, c);
    return x;
}

void SymElement::add(const SymLabel& l, const Scalar& c) {
    if (c.is_zero()) return;
    auto it = coeffs_.find(l);
    if (it == coeffs_.end()) {
        coeffs_.emplace(l, c);
    } else {
        it->second += c;
        if (it->second.is_zero()) coeffs_.erase(it);
    }
}

SymElement SymElement::operator+(const SymElement& o) const {
    SymElement r = *this;
    for (const auto& [l, c] : o.coeffs_) r.add(l, c);
    return r;
}

SymElement SymElement::operator-(const SymElement& o) const {
    SymElement r = *this;
    for (const auto& [l, c] : o.coeffs_) r.add(l, -c);
    return r;
}

SymElement SymElement::scaled(const Scalar& c) const {
    SymElement r;
    if (c.is_zero()) return r;
    for (const auto& [l, k] : coeffs_) r.add(l, k * c);
    return r;
}

std::string SymElement::to_string() const {
    if (coeffs_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [l, c] : coeffs_) {
        std::string cs = c.to_string();
        if (c.terms().size() > 1) cs = "(" + cs + ")";
        std::ostringstream ls;
        ls << "S(" << l.s << "," << l.t << "," << l.u << "," << l.v << ")";
        std::string term;
        if (cs == "1") term = ls.str();
        else if (cs == "-1") term = "-" + ls.str();
        else term = cs + "*" + ls.str();
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

namespace {

// One-oscillator symmetric sums via the first-letter recurrence
//   S_osc(s, t) = lo * S_osc(s-1, t) + hi * S_osc(s, t-1)
// with s lowering letters and t raising letters.  Caller holds the cache lock.
const WElement& sym_osc(int s, int t, bool a_osc,
                        std::map<std::tuple<int, int, bool>, WElement>& cache) {
    auto key = std::make_tuple(s, t, a_osc);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;

    WElement r;
    if (s == 0 && t == 0) {
        r = WElement::one();
    } else {
        const WElement lo = WElement::letter(a_osc ? Letter::AMinus : Letter::BMinus);
        const WElement hi = WElement::letter(a_osc ? Letter::APlus : Letter::BPlus);
        if (s > 0) r += lo * sym_osc(s - 1, t, a_osc, cache);
        if (t > 0) r += hi * sym_osc(s, t - 1, a_osc, cache);
    }
    return cache.emplace(key, std::move(r)).first->second;
}

}  // namespace

WElement sym_basis(const SymLabel& l) {
    if (l.s < 0 || l.t < 0 || l.u < 0 || l.v < 0)
        throw InvalidLabel("sym_basis: negative exponent");
    static std::map<SymLabel, WElement> cache;
    static std::map<std::tuple<int, int, bool>, WElement> osc_cache;
    static std::mutex mtx;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(l);
    if (it != cache.end()) return it->second;
    // The a- and b-oscillator letters commute, so the full symmetric sum
    // factors as a shuffle: C(s+t+u+v, s+t) * S_A(s,t) * S_B(u,v).
    const Rational shuffle(binomial(l.degree(), l.s + l.t));
    WElement r = (sym_osc(l.s, l.t, true, osc_cache) * sym_osc(l.u, l.v, false, osc_cache))
                     .scaled(Scalar(shuffle));
    return cache.emplace(l, std::move(r)).first->second;
}

SymElement to_sym_basis(const WElement& w) {
    SymElement out;
    WElement rest = w;
    while (!rest.is_zero()) {
        const int deg = rest.max_degree();
        // Leading coefficient of S(s,t,u,v) on a+^t a-^s b+^v b-^u is the
        // number of arrangements deg! / (s! t! u! v!).
        std::vector<std::pair<SymLabel, Scalar>> top;
        for (const auto& [m, c] : rest.coeffs()) {
            if (m.degree() != deg) continue;
            SymLabel l{m.am, m.ap, m.bm, m.bp};
            Rational mult(factorial(deg) / (factorial(l.s) * factorial(l.t) *
                                            factorial(l.u) * factorial(l.v)));
            top.emplace_back(l, c * Scalar(Rational(1) / mult));
        }
        for (const auto& [l, c] : top) {
            out.add(l, c);
            rest -= sym_basis(l).scaled(c);
        }
    }
    return out;
}

WElement from_sym_basis(const SymElement& x) {
    WElement r;
    for (const auto& [l, c] : x.coeffs()) r += sym_basis(l).scaled(c);
    return r;
}

SymElement formal_trace(const SymElement& x) {
    SymElement out;
    for (const auto& [l, c] : x.coeffs()) {
        const Scalar c2 = Scalar(2) * c;
        if (l.s >= 1 && l.t >= 1) out.add({l.s - 1, l.t - 1, l.u, l.v}, c2);
        if (l.u >= 1 && l.v >= 1) out.add({l.s, l.t, l.u - 1, l.v - 1}, c2);
    }
    return out;
}

bool is_traceless(const WElement& w) {
    return formal_trace(to_sym_basis(w)).is_zero();
}

SymElement sym_dagger(const SymElement& x) {
    SymElement out;
    for (const auto& [l, c] : x.coeffs()) out.add({l.t, l.s, l.v, l.u}, c.conjugate());
    return out;
}

// ---------------------------------------------------------------------------
// sector decomposition

std::vector<SectorPart> sector_decompose(const WElement& w) {
    std::map<std::pair<int, int>, WElement> parts;
    for (const auto& [m, c] : w.coeffs()) {
        const int da = m.ap - m.am;
        const int db = m.bp - m.bm;
        parts[{da + db, da - db}] += WElement::monomial(m, c);
    }
    std::vector<SectorPart> out;
    out.reserve(parts.size());
    for (auto& [key, part] : parts)
        out.push_back(SectorPart{key.first, key.second, std::move(part)});
    return out;
}

namespace {

using Poly2 = std::map<std::pair<int, int>, Scalar>;

void poly_add(Poly2& p, std::pair<int, int> key, const Scalar& c) {
    if (c.is_zero()) return;
    auto it = p.find(key);
    if (it == p.end()) {
        p.emplace(key, c);
    } else {
        it->second += c;
        if (it->second.is_zero()) p.erase(it);
    }
}

// p *= (cj*J0 + ck*K0 + c0)
Poly2 poly_mul_linear(const Poly2& p, const Scalar& cj, const Scalar& ck, const Scalar& c0) {
    Poly2 r;
    for (const auto& [key, c] : p) {
        poly_add(r, {key.first + 1, key.second}, c * cj);
        poly_add(r, {key.first, key.second + 1}, c * ck);
        poly_add(r, key, c * c0);
    }
    return r;
}

}  // namespace

SectorPoly reduced_form(const SectorPart& p) {
    SectorPoly sp;
    sp.r2 = p.r2;
    sp.m2 = p.m2;
    const int da = (p.r2 + p.m2) / 2;
    const int db = (p.r2 - p.m2) / 2;
    for (const auto& [m, c] : p.part.coeffs()) {
        if (m.ap - m.am != da || m.bp - m.bm != db)
            throw SectorMismatch("reduced_form: monomial outside the sector");
        // a+^ap a-^am = a_sgn^|da| * prod_{i<min} (N - (i + max(-da,0)) eps),
        // N = a+a- = J0 + K0 - eps/2; likewise for b with M = K0 - J0 - eps/2.
        Poly2 q;
        q.emplace(std::make_pair(0, 0), c);
        const int na = std::min(m.ap, m.am);
        const int offa = std::max(-da, 0);
        for (int i = 0; i < na; ++i) {
            Scalar c0 = -Scalar(Rational(2 * (i + offa) + 1, 2)) * Scalar::eps();
            q = poly_mul_linear(q, Scalar(1), Scalar(1), c0);
        }
        const int nb = std::min(m.bp, m.bm);
        const int offb = std::max(-db, 0);
        for (int j = 0; j < nb; ++j) {
            Scalar c0 = -Scalar(Rational(2 * (j + offb) + 1, 2)) * Scalar::eps();
            q = poly_mul_linear(q, Scalar(-1), Scalar(1), c0);
        }
        for (const auto& [key, qc] : q) poly_add(sp.q, key, qc);
    }
    return sp;
}

WElement j0k0_monomial(int j0pow, int k0pow) {
    static std::map<std::pair<int, int>, WElement> cache;
    static std::mutex mtx;
    std::lock_guard<std::mutex> lock(mtx);
    std::function<const WElement&(int, int)> get = [&](int j, int k) -> const WElement& {
        auto it = cache.find({j, k});
        if (it != cache.end()) return it->second;
        WElement r;
        if (j == 0 && k == 0) r = WElement::one();
        else if (j > 0) r = WElement::generator(Generator::J0) * get(j - 1, k);
        else r = WElement::generator(Generator::K0) * get(j, k - 1);
        return cache.emplace(std::make_pair(j, k), std::move(r)).first->second;
    };
    return get(j0pow, k0pow);
}

WElement from_reduced(const SectorPoly& sp) {
    if ((sp.r2 + sp.m2) % 2 != 0)
        throw SectorMismatch("from_reduced: r2 and m2 must have equal parity");
    const int da = (sp.r2 + sp.m2) / 2;
    const int db = (sp.r2 - sp.m2) / 2;
    NormalMonomial prefix;
    (da >= 0 ? prefix.ap : prefix.am) = std::abs(da);
    (db >= 0 ? prefix.bp : prefix.bm) = std::abs(db);
    WElement q;
    for (const auto& [key, c] : sp.q) q += j0k0_monomial(key.first, key.second).scaled(c);
    return WElement::monomial(prefix) * q;
}

}  // namespace ncsphere
