#include "ncsphere/scalar.hpp"

#include "ncsphere/errors.hpp"

#include <cctype>
#include <cmath>
#include <sstream>

namespace ncsphere {

Gaussian Gaussian::inverse() const {
    if (is_zero()) throw NotDivisible("division by zero");
    Rational n = re * re + im * im;
    return {re / n, -im / n};
}

void Scalar::add_term(const SurdKey& k, const Gaussian& c) {
    if (c.is_zero()) return;
    auto it = terms_.find(k);
    if (it == terms_.end()) {
        terms_.emplace(k, c);
    } else {
        it->second = it->second + c;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

void Scalar::add_surd(const Int& n, int p, int h, const Gaussian& c) {
    if (c.is_zero()) return;
    if (n == 1) {
        add_term(SurdKey{1, p, h}, c);
        return;
    }
    auto [root, sf] = extract_square(n);
    Rational r(root);
    add_term(SurdKey{sf, p, h}, Gaussian(c.re * r, c.im * r));
}

Scalar Scalar::sqrt_int(const Int& n) {
    if (n < 0) throw std::invalid_argument("sqrt of negative integer");
    Scalar s;
    if (n == 0) return s;
    s.add_surd(n, 0, 0, Gaussian(1, 0));
    return s;
}

Scalar Scalar::sqrt_rational(const Rational& q) {
    if (q < 0) throw std::invalid_argument("sqrt of negative rational");
    if (q == 0) return Scalar();
    // sqrt(a/b) = sqrt(a*b) / b
    Int a = numerator(q), b = denominator(q);
    Scalar s = sqrt_int(a * b);
    return Rational(1, b) * s;
}

Scalar Scalar::eps_pow(int p2) {
    Scalar s;
    s.add_term(SurdKey{1, p2, 0}, Gaussian(1, 0));
    return s;
}

Scalar Scalar::rhat_pow(int h) {
    Scalar s;
    s.add_term(SurdKey{1, 0, h}, Gaussian(1, 0));
    return s;
}

Scalar Scalar::operator-() const {
    Scalar r;
    for (const auto& [k, c] : terms_) r.terms_.emplace(k, -c);
    return r;
}

Scalar Scalar::operator+(const Scalar& o) const {
    Scalar r = *this;
    for (const auto& [k, c] : o.terms_) r.add_term(k, c);
    return r;
}

Scalar Scalar::operator-(const Scalar& o) const {
    Scalar r = *this;
    for (const auto& [k, c] : o.terms_) r.add_term(k, -c);
    return r;
}

Scalar Scalar::operator*(const Scalar& o) const {
    Scalar r;
    for (const auto& [k1, c1] : terms_) {
        for (const auto& [k2, c2] : o.terms_) {
            // sqrt(d1)*sqrt(d2) = g*sqrt((d1/g)(d2/g)) with g = gcd: the
            // cross product of coprime squarefree parts stays squarefree.
            Int g = gcd(k1.d, k2.d);
            SurdKey k{(k1.d / g) * (k2.d / g), k1.p + k2.p, k1.h + k2.h};
            Gaussian c = c1 * c2;
            Rational gr(g);
            r.add_term(k, Gaussian(c.re * gr, c.im * gr));
        }
    }
    return r;
}

Scalar operator*(const Rational& a, const Scalar& b) { return Scalar(a) * b; }

Scalar Scalar::conjugate() const {
    Scalar r;
    for (const auto& [k, c] : terms_) r.terms_.emplace(k, c.conj());
    return r;
}

int Scalar::eps_order() const {
    int m = kEpsOrderInf;
    for (const auto& [k, c] : terms_)
        if (k.p < m) m = k.p;
    return m;
}

bool Scalar::is_real() const {
    for (const auto& [k, c] : terms_)
        if (c.im != 0) return false;
    return true;
}

std::optional<Rational> Scalar::as_rational() const {
    if (terms_.empty()) return Rational(0);
    if (terms_.size() != 1) return std::nullopt;
    const auto& [k, c] = *terms_.begin();
    if (k.d != 1 || k.p != 0 || k.h != 0 || c.im != 0) return std::nullopt;
    return c.re;
}

Scalar Scalar::single_term_pow(const SurdKey& k, const Gaussian& c, int e) {
    if (e == 0) return Scalar(1);
    SurdKey kk = k;
    Gaussian cc = c;
    if (e < 0) {
        // (c*sqrt(d)*eps^(p/2)*Rh^h)^-1 = (c*d)^-1 * sqrt(d) * eps^(-p/2) * Rh^-h
        Gaussian denom(cc.re * Rational(kk.d), cc.im * Rational(kk.d));
        cc = denom.inverse();
        kk.p = -kk.p;
        kk.h = -kk.h;
        e = -e;
    }
    Scalar base;
    base.add_term(kk, cc);
    Scalar r(1);
    for (int i = 0; i < e; ++i) r *= base;
    return r;
}

Scalar Scalar::inverse_single() const {
    if (terms_.size() != 1)
        throw NotDivisible("inverse of a non-single-term element is outside the ring");
    const auto& [k, c] = *terms_.begin();
    return single_term_pow(k, c, -1);
}

Scalar Scalar::field_inverse() const {
    if (terms_.empty()) throw NotDivisible("division by zero");
    // Strictly surd-field elements: no eps or Rh exponents allowed here.
    for (const auto& [k, c] : terms_)
        if (k.p != 0 || k.h != 0)
            throw NotDivisible("field_inverse applied to non-constant element");
    if (terms_.size() == 1) return inverse_single();
    // Pick a prime q dividing some surd index and split x = A + B*sqrt(q).
    Int q = 0;
    for (const auto& [k, c] : terms_) {
        if (k.d == 1) continue;
        Int d = k.d;
        for (Int p = 2; p * p <= d; ++p)
            if (d % p == 0) {
                q = p;
                break;
            }
        if (q == 0) q = d;  // d itself prime
        break;
    }
    if (q == 0) throw NotDivisible("field_inverse: inconsistent state");
    Scalar a, b;
    for (const auto& [k, c] : terms_) {
        if (k.d % q == 0)
            b.add_term(SurdKey{k.d / q, 0, 0}, c);
        else
            a.add_term(k, c);
    }
    // 1/(A + B sqrt(q)) = (A - B sqrt(q)) / (A^2 - q B^2); the denominator is
    // nonzero because sqrt(q) is not in the subfield generated without it.
    Scalar denom = a * a - Rational(q) * (b * b);
    Scalar conj = a - sqrt_int(q) * b;
    return conj * denom.field_inverse();
}

Scalar Scalar::div_exact(const Scalar& y) const {
    if (y.is_zero()) throw NotDivisible("division by zero");
    if (is_zero()) return Scalar();
    if (y.terms_.size() == 1) {
        const auto& [k, c] = *y.terms_.begin();
        return *this * single_term_pow(k, c, -1);
    }
    // Normalise both operands so (p, h) exponents are nonnegative, then run
    // leading-term reduction over the surd field.  Exact quotients always
    // reduce to zero; anything else is NotDivisible.
    auto min_ph = [](const Scalar& s) {
        int p = INT_MAX, h = INT_MAX;
        for (const auto& [k, c] : s.terms_) {
            p = std::min(p, k.p);
            h = std::min(h, k.h);
        }
        return std::pair<int, int>{p, h};
    };
    auto [xp, xh] = min_ph(*this);
    auto [yp, yh] = min_ph(y);
    Scalar rem = *this * (eps_pow(-xp) * rhat_pow(-xh));
    Scalar div = y * (eps_pow(-yp) * rhat_pow(-yh));

    auto lead_key = [](const Scalar& s) {
        std::pair<int, int> best{INT_MIN, INT_MIN};
        for (const auto& [k, c] : s.terms_)
            best = std::max(best, std::make_pair(k.p, k.h));
        return best;
    };
    auto coeff_at = [](const Scalar& s, std::pair<int, int> ph) {
        Scalar c;
        for (const auto& [k, g] : s.terms_)
            if (k.p == ph.first && k.h == ph.second) c.add_term(SurdKey{k.d, 0, 0}, g);
        return c;
    };
    auto dlead = lead_key(div);
    Scalar dinv = coeff_at(div, dlead).field_inverse();
    Scalar quot;
    while (!rem.is_zero()) {
        auto rlead = lead_key(rem);
        if (rlead.first < dlead.first || rlead.second < dlead.second)
            throw NotDivisible("not an exact factor");
        Scalar t = coeff_at(rem, rlead) * dinv *
                   (eps_pow(rlead.first - dlead.first) * rhat_pow(rlead.second - dlead.second));
        quot += t;
        rem -= t * div;
    }
    return quot * (eps_pow(xp - yp) * rhat_pow(xh - yh));
}

Scalar Scalar::substitute_rhat(const Scalar& value) const {
    if (value.terms_.size() != 1)
        throw std::invalid_argument("Rh substitution value must be a single term");
    {
        const auto& [k, c] = *value.terms_.begin();
        if (k.h != 0 || c.im != 0 || c.re <= 0)
            throw std::invalid_argument("Rh substitution value must be positive, real, Rh-free");
    }
    Scalar r;
    const auto& [vk, vc] = *value.terms_.begin();
    for (const auto& [k, c] : terms_) {
        Scalar term;
        term.add_term(SurdKey{k.d, k.p, 0}, c);
        r += term * single_term_pow(vk, vc, k.h);
    }
    return r;
}

Scalar Scalar::substitute_eps(const Rational& e) const {
    if (e < 0) throw std::invalid_argument("eps must be >= 0");
    Scalar r;
    for (const auto& [k, c] : terms_) {
        if (e == 0) {
            if (k.p > 0) continue;
            if (k.p < 0)
                throw std::domain_error("negative eps power at eps = 0");
            r.add_term(k, c);
            continue;
        }
        // eps^(p/2) = e^floor(p/2) * (sqrt(e) if p odd)
        int ip = k.p >= 0 ? k.p / 2 : -((-k.p + 1) / 2);  // floor(p/2)
        Rational pw = 1;
        if (ip >= 0)
            for (int i = 0; i < ip; ++i) pw *= e;
        else
            for (int i = 0; i < -ip; ++i) pw /= e;
        Scalar term;
        term.add_term(SurdKey{k.d, 0, k.h}, Gaussian(c.re * pw, c.im * pw));
        if (k.p % 2 != 0) term *= sqrt_rational(e);
        r += term;
    }
    return r;
}

std::complex<double> Scalar::to_complex(double eps, double rhat) const {
    std::complex<double> z = 0;
    for (const auto& [k, c] : terms_) {
        double v = std::sqrt(k.d.convert_to<double>());
        v *= std::pow(eps, k.p / 2.0);
        v *= std::pow(rhat, static_cast<double>(k.h));
        z += std::complex<double>(to_double(c.re) * v, to_double(c.im) * v);
    }
    return z;
}

Scalar evaluate(const Scalar& x, const Rational& eps, const Scalar& rhat) {
    return x.substitute_rhat(rhat).substitute_eps(eps);
}

Scalar div_at(const Scalar& x, const Scalar& y, const Rational& eps, const Scalar& rhat) {
    Scalar ye = evaluate(y, eps, rhat);
    if (!ye.is_single_term())
        throw NotDivisible("divisor does not evaluate to a single term");
    return evaluate(x, eps, rhat) * ye.inverse_single();
}

// ---------------------------------------------------------------------------
// rendering

namespace {

std::string rational_str(const Rational& q) {
    std::ostringstream os;
    os << numerator(q);
    if (denominator(q) != 1) os << "/" << denominator(q);
    return os.str();
}

// Renders |coef| as a factor ("" means 1).  Mixed re/im coefficients are
// parenthesised sums the parser reads back as sub-expressions.
std::string coeff_str(const Gaussian& c) {
    if (c.im == 0) {
        if (c.re == 1) return "";
        if (denominator(c.re) == 1 && c.re > 0) return rational_str(c.re);
        return "(" + rational_str(c.re) + ")";
    }
    if (c.re == 0) {
        if (c.im == 1) return "i";
        if (denominator(c.im) == 1 && c.im > 0) return rational_str(c.im) + "*i";
        return "(" + rational_str(c.im) + ")*i";
    }
    std::string s = "(" + rational_str(c.re);
    if (c.im > 0) s += "+";
    if (c.im == 1)
        s += "i";
    else if (c.im == -1)
        s += "-i";
    else
        s += rational_str(c.im) + "*i";
    return s + ")";
}

std::string pow_str(const std::string& sym, int doubled, bool half_units) {
    // half_units: exponent stored doubled (eps); else plain (Rh).
    if (!half_units) {
        if (doubled == 1) return sym;
        return sym + "^" + std::to_string(doubled);
    }
    if (doubled % 2 == 0) {
        int e = doubled / 2;
        if (e == 1) return sym;
        return sym + "^" + std::to_string(e);
    }
    return sym + "^(" + std::to_string(doubled) + "/2)";
}

}  // namespace

std::string Scalar::to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [k, c] : terms_) {
        // Sign comes from the real part when present, else the imaginary part.
        bool neg = c.re != 0 ? c.re < 0 : c.im < 0;
        Gaussian mag = neg ? -c : c;
        if (first) {
            if (neg) os << "-";
        } else {
            os << (neg ? " - " : " + ");
        }
        first = false;
        std::string pieces;
        auto append = [&pieces](const std::string& f) {
            if (f.empty()) return;
            if (!pieces.empty()) pieces += "*";
            pieces += f;
        };
        append(coeff_str(mag));
        if (k.d != 1) {
            std::ostringstream d;
            d << "sqrt(" << k.d << ")";
            append(d.str());
        }
        if (k.p != 0) append(pow_str("eps", k.p, true));
        if (k.h != 0) append(pow_str("Rh", k.h, false));
        if (pieces.empty()) pieces = "1";
        os << pieces;
    }
    return os.str();
}

std::ostream& operator<<(std::ostream& os, const Scalar& s) { return os << s.to_string(); }

// ---------------------------------------------------------------------------
// parsing

namespace {

struct Parser {
    const std::string& s;
    size_t pos = 0;

    explicit Parser(const std::string& text) : s(text) {}

    void skip_ws() {
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    }
    bool eat(char c) {
        skip_ws();
        if (pos < s.size() && s[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }
    bool peek_alpha() {
        skip_ws();
        return pos < s.size() && std::isalpha(static_cast<unsigned char>(s[pos]));
    }
    [[noreturn]] void fail(const std::string& why) {
        throw std::invalid_argument("scalar parse error at " + std::to_string(pos) + ": " + why);
    }

    Int integer() {
        skip_ws();
        size_t start = pos;
        if (pos < s.size() && (s[pos] == '-' || s[pos] == '+')) ++pos;
        size_t digits = pos;
        while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
        if (pos == digits) fail("expected integer");
        return Int(s.substr(start, pos - start));
    }

    Rational rational() {
        Int num = integer();
        if (eat('/')) {
            Int den = integer();
            if (den == 0) fail("zero denominator");
            return Rational(num) / den;
        }
        return Rational(num);
    }

    std::string word() {
        skip_ws();
        size_t start = pos;
        while (pos < s.size() && std::isalpha(static_cast<unsigned char>(s[pos]))) ++pos;
        return s.substr(start, pos - start);
    }

    // exponent after '^': integer, or (rational with denominator 1 or 2)
    Rational exponent() {
        skip_ws();
        if (eat('(')) {
            Rational e = rational();
            if (!eat(')')) fail("expected ')' in exponent");
            return e;
        }
        return Rational(integer());
    }

    Scalar primary() {
        skip_ws();
        if (pos >= s.size()) fail("unexpected end");
        char c = s[pos];
        if (c == '(') {
            ++pos;
            Scalar e = expr();
            if (!eat(')')) fail("expected ')'");
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) return Scalar(rational());
        if (peek_alpha()) {
            std::string w = word();
            if (w == "i") return Scalar::i();
            if (w == "eps") return Scalar::eps();
            if (w == "Rh") return Scalar::rhat();
            if (w == "sqrt") {
                if (!eat('(')) fail("expected '(' after sqrt");
                Int n = integer();
                if (!eat(')')) fail("expected ')' after sqrt arg");
                if (n < 0) fail("sqrt of negative");
                return Scalar::sqrt_int(n);
            }
            fail("unknown symbol '" + w + "'");
        }
        fail("unexpected character");
    }

    Scalar power(Scalar base) {
        if (!eat('^')) return base;
        Rational e = exponent();
        Rational doubled = e * 2;
        if (denominator(doubled) != 1) fail("exponent must be integer or half-integer");
        long e2 = numerator(doubled).convert_to<long>();
        // Half powers only make sense for the bare eps symbol.
        if (e2 % 2 != 0) {
            Scalar eps1 = Scalar::eps();
            if (!(base == eps1)) fail("half powers are only defined for eps");
            return Scalar::eps_pow(static_cast<int>(e2));
        }
        long n = e2 / 2;
        if (n >= 0) {
            Scalar r(1);
            for (long k = 0; k < n; ++k) r *= base;
            return r;
        }
        Scalar r(1);
        Scalar inv = base.inverse_single();
        for (long k = 0; k < -n; ++k) r *= inv;
        return r;
    }

    Scalar term() {
        Scalar r = power(primary());
        while (true) {
            skip_ws();
            if (eat('*')) {
                r *= power(primary());
                continue;
            }
            // implicit multiplication for forms like "2i" or "2 sqrt(2)"
            if (pos < s.size() &&
                (std::isalpha(static_cast<unsigned char>(s[pos])) || s[pos] == '(')) {
                r *= power(primary());
                continue;
            }
            return r;
        }
    }

    Scalar expr() {
        skip_ws();
        bool neg = false;
        if (eat('-'))
            neg = true;
        else
            eat('+');
        Scalar r = term();
        if (neg) r = -r;
        while (true) {
            skip_ws();
            if (eat('+')) {
                r += term();
            } else if (eat('-')) {
                r -= term();
            } else {
                return r;
            }
        }
    }
};

}  // namespace

Scalar Scalar::parse(const std::string& text) {
    Parser p(text);
    Scalar r = p.expr();
    p.skip_ws();
    if (p.pos != text.size())
        throw std::invalid_argument("scalar parse error: trailing input at " +
                                    std::to_string(p.pos));
    return r;
}

}  // namespace ncsphere
