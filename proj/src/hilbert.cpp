#include "ncsphere/hilbert.hpp"

#include "ncsphere/errors.hpp"

#include <json.hpp>

#include <iomanip>
#include <sstream>
#include <string>
#include <utility>

namespace ncsphere {
namespace {

bool valid_ket(int k2, int j2) {
    return k2 >= 0 && std::abs(j2) <= k2 && (k2 + j2) % 2 == 0;
}

void require_rhat_free(const Scalar& c) {
    for (const auto& [key, g] : c.terms()) {
        (void)g;
        if (key.h != 0)
            throw SymbolicPointUnsupported(
                "ket action needs Rh-free coefficients; pin a level first: " + c.to_string());
    }
}

// w with Rh replaced by its level value eps*(k+1/2), eps still symbolic.
WElement pin_level(const WElement& w, FuzzyLevel k) {
    const Scalar rh = Rational(k.k2 + 1, 2) * Scalar::eps();
    WElement out;
    for (const auto& [mono, c] : w.coeffs()) out += WElement::monomial(mono, c.substitute_rhat(rh));
    return out;
}

std::string format_double(double v, int precision) {
    std::ostringstream os;
    os << std::setprecision(precision) << v;
    return os.str();
}

}  // namespace

FuzzyLevel::FuzzyLevel(int k2_value) : k2(k2_value) {
    if (k2 < 0) throw InvalidLabel("level k must be >= 0, got k2 = " + std::to_string(k2));
}

Scalar FuzzyLevel::rhat(const Rational& eps) const { return Scalar(Rational(k2 + 1, 2) * eps); }

KetVector KetVector::basis(int k2, int j2) {
    if (!valid_ket(k2, j2))
        throw InvalidLabel("bad ket |" + std::to_string(k2) + "/2, " + std::to_string(j2) +
                           "/2>: needs k >= 0, |j| <= k, k + j integer");
    KetVector v;
    v.terms_.emplace(Key{k2, j2}, Scalar(1));
    return v;
}

void KetVector::add_term(int k2, int j2, const Scalar& c) {
    if (c.is_zero()) return;
    const Key key{k2, j2};
    auto it = terms_.find(key);
    if (it == terms_.end()) {
        terms_.emplace(key, c);
        return;
    }
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
}

KetVector KetVector::operator+(const KetVector& o) const {
    KetVector out = *this;
    for (const auto& [key, c] : o.terms_) out.add_term(key.first, key.second, c);
    return out;
}

KetVector KetVector::operator-(const KetVector& o) const {
    KetVector out = *this;
    for (const auto& [key, c] : o.terms_) out.add_term(key.first, key.second, -c);
    return out;
}

KetVector KetVector::scaled(const Scalar& c) const {
    KetVector out;
    if (c.is_zero()) return out;
    for (const auto& [key, v] : terms_) out.add_term(key.first, key.second, v * c);
    return out;
}

Scalar KetVector::bra(int k2, int j2) const {
    auto it = terms_.find(Key{k2, j2});
    return it == terms_.end() ? Scalar() : it->second;
}

std::string KetVector::to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [key, c] : terms_) {
        if (!first) os << " + ";
        first = false;
        const std::string cs = c.to_string();
        const bool wrap = !c.is_single_term() || cs.find(' ') != std::string::npos;
        if (cs == "1") {
        } else if (wrap) {
            os << "(" << cs << ")*";
        } else {
            os << cs << "*";
        }
        os << "|" << (key.first % 2 == 0 ? std::to_string(key.first / 2)
                                         : std::to_string(key.first) + "/2")
           << "," << (key.second % 2 == 0 ? std::to_string(key.second / 2)
                                          : std::to_string(key.second) + "/2")
           << ">";
    }
    return os.str();
}

KetVector apply(const WElement& w, const KetVector& v, const Rational& eps) {
    KetVector out;
    for (const auto& [mono, coeff] : w.coeffs()) {
        require_rhat_free(coeff);
        const Scalar c = coeff.substitute_eps(eps);
        if (c.is_zero()) continue;
        for (const auto& [key, vc] : v.terms()) {
            int k2 = key.first, j2 = key.second;
            // The word acts right to left: b- first, then b+, a-, a+.  Each
            // letter contributes sqrt(eps * m) with m the integer under the
            // square root, so the whole path is one surd.
            Rational rad = 1;
            bool dead = false;
            for (int i = 0; i < mono.bm && !dead; ++i) {
                const int m = (k2 - j2) / 2;
                if (m == 0) dead = true;
                rad *= eps * m;
                --k2, ++j2;
            }
            for (int i = 0; i < mono.bp && !dead; ++i) {
                rad *= eps * ((k2 - j2 + 2) / 2);
                ++k2, --j2;
            }
            for (int i = 0; i < mono.am && !dead; ++i) {
                const int m = (k2 + j2) / 2;
                if (m == 0) dead = true;
                rad *= eps * m;
                --k2, --j2;
            }
            for (int i = 0; i < mono.ap && !dead; ++i) {
                rad *= eps * ((k2 + j2 + 2) / 2);
                ++k2, ++j2;
            }
            if (dead) continue;
            out.add_term(k2, j2, vc * c * Scalar::sqrt_rational(rad));
        }
    }
    return out;
}

Scalar pi0_trace(const WElement& w, FuzzyLevel k, const Rational& eps) {
    const WElement wl = pin_level(w, k);
    Scalar total;
    for (int j2 = -k.k2; j2 <= k.k2; j2 += 2)
        total += apply(wl, KetVector::basis(k.k2, j2), eps).bra(k.k2, j2);
    return Rational(1, k.k2 + 1) * total;
}

RectMatrix::RectMatrix(int rows, int cols) : rows_(rows), cols_(cols) {
    if (rows < 0 || cols < 0)
        throw InvalidLabel("matrix dimensions must be >= 0, got " + std::to_string(rows) + "x" +
                           std::to_string(cols));
    entries_.resize(static_cast<size_t>(rows) * static_cast<size_t>(cols));
}

RectMatrix RectMatrix::identity(int n) {
    RectMatrix m(n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = Scalar(1);
    return m;
}

const Scalar& RectMatrix::at(int i, int j) const {
    return entries_[static_cast<size_t>(i) * cols_ + j];
}

Scalar& RectMatrix::at(int i, int j) { return entries_[static_cast<size_t>(i) * cols_ + j]; }

bool RectMatrix::is_zero() const {
    for (const auto& e : entries_)
        if (!e.is_zero()) return false;
    return true;
}

bool RectMatrix::operator==(const RectMatrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && entries_ == o.entries_;
}

RectMatrix RectMatrix::operator+(const RectMatrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_)
        throw SectorMismatch("matrix sum needs equal shapes");
    RectMatrix out(rows_, cols_);
    for (size_t i = 0; i < entries_.size(); ++i) out.entries_[i] = entries_[i] + o.entries_[i];
    return out;
}

RectMatrix RectMatrix::operator-(const RectMatrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_)
        throw SectorMismatch("matrix difference needs equal shapes");
    RectMatrix out(rows_, cols_);
    for (size_t i = 0; i < entries_.size(); ++i) out.entries_[i] = entries_[i] - o.entries_[i];
    return out;
}

RectMatrix RectMatrix::operator*(const RectMatrix& o) const {
    if (cols_ != o.rows_)
        throw SectorMismatch("matrix product shape clash: " + std::to_string(cols_) +
                             " columns vs " + std::to_string(o.rows_) + " rows");
    RectMatrix out(rows_, o.cols_);
    for (int i = 0; i < rows_; ++i)
        for (int l = 0; l < cols_; ++l) {
            const Scalar& a = at(i, l);
            if (a.is_zero()) continue;
            for (int j = 0; j < o.cols_; ++j) out.at(i, j) += a * o.at(l, j);
        }
    return out;
}

RectMatrix RectMatrix::dagger() const {
    RectMatrix out(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) out.at(j, i) = at(i, j).conjugate();
    return out;
}

Scalar RectMatrix::trace() const {
    if (rows_ != cols_) throw SectorMismatch("trace needs a square matrix");
    Scalar t;
    for (int i = 0; i < rows_; ++i) t += at(i, i);
    return t;
}

Scalar RectMatrix::abs_sq_sum() const {
    Scalar t;
    for (const auto& e : entries_) t += e * e.conjugate();
    return t;
}

std::string RectMatrix::to_csv(bool floats, int precision) const {
    std::ostringstream os;
    os << "mu,nu,value";
    if (floats) os << ",re,im";
    os << "\n";
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) {
            const Scalar& e = at(i, j);
            if (e.is_zero()) continue;
            os << (i + 1) << "," << (j + 1) << ",\"" << e.to_string() << "\"";
            if (floats) {
                const auto z = e.to_complex(0.0, 0.0);
                os << "," << format_double(z.real(), precision) << ","
                   << format_double(z.imag(), precision);
            }
            os << "\n";
        }
    return os.str();
}

std::string RectMatrix::to_json(bool floats, int precision) const {
    nlohmann::json j;
    j["rows"] = rows_;
    j["cols"] = cols_;
    j["entries"] = nlohmann::json::array();
    for (int i = 0; i < rows_; ++i)
        for (int c = 0; c < cols_; ++c) {
            const Scalar& e = at(i, c);
            if (e.is_zero()) continue;
            nlohmann::json entry;
            entry["mu"] = i + 1;
            entry["nu"] = c + 1;
            entry["value"] = e.to_string();
            if (floats) {
                const auto z = e.to_complex(0.0, 0.0);
                entry["re"] = format_double(z.real(), precision);
                entry["im"] = format_double(z.imag(), precision);
            }
            j["entries"].push_back(entry);
        }
    return j.dump();
}

RectMatrix phi_matrix(const PsiElement& x, int r2, FuzzyLevel k, const Rational& eps) {
    if (k.k2 + r2 < 0)
        throw InvalidLabel("target level k + r must be >= 0, got k2 + r2 = " +
                           std::to_string(k.k2 + r2));
    for (const auto& [label, c] : x.coeffs()) {
        (void)c;
        if (label.r2 != r2)
            throw SectorMismatch("label " + label.to_string() + " lies outside sector r2 = " +
                                 std::to_string(r2));
    }
    const WElement w = lift(ParamPoint::level_at(k.k2, eps).apply(x));
    RectMatrix m(k.k2 + r2 + 1, k.k2 + 1);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
    for (int nu0 = 0; nu0 < k.k2 + 1; ++nu0) {
        const KetVector col = apply(w, KetVector::basis(k.k2, 2 * nu0 - k.k2), eps);
        for (int mu0 = 0; mu0 < k.k2 + r2 + 1; ++mu0)
            m.at(mu0, nu0) = col.bra(k.k2 + r2, 2 * mu0 - k.k2 - r2);
    }
    return m;
}

bool rho_consistency(const WElement& w, FuzzyLevel k, const Rational& eps) {
    const WElement lifted = lift(rho(w, ParamPoint::level_at(k.k2, eps)));
    const WElement direct = pin_level(w, k);
    for (int j2 = -k.k2; j2 <= k.k2; j2 += 2) {
        const KetVector v = KetVector::basis(k.k2, j2);
        if (apply(lifted, v, eps) != apply(direct, v, eps)) return false;
    }
    return true;
}

bool annihilates_levels(const WElement& w, int k2_max, const Rational& eps) {
    for (int k2 = 0; k2 <= k2_max; ++k2)
        for (int j2 = -k2; j2 <= k2; j2 += 2)
            if (!apply(w, KetVector::basis(k2, j2), eps).is_zero()) return false;
    return true;
}

}  // namespace ncsphere
