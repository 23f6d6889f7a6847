#include "ncsphere/numeric.hpp"

#include <stdexcept>

namespace ncsphere {

Int factorial(long n) {
    if (n < 0) throw std::invalid_argument("factorial of negative integer");
    Int r = 1;
    for (long i = 2; i <= n; ++i) r *= i;
    return r;
}

Int binomial(long n, long k) {
    if (k < 0 || k > n) return 0;
    if (k > n - k) k = n - k;
    Int r = 1;
    for (long i = 0; i < k; ++i) {
        r *= n - i;
        r /= i + 1;  // exact: product of j consecutive integers is divisible by j!
    }
    return r;
}

Int isqrt(const Int& n) {
    if (n < 0) throw std::invalid_argument("isqrt of negative integer");
    if (n == 0) return 0;
    Int x = n, y = (x + 1) / 2;
    while (y < x) {
        x = y;
        y = (x + n / x) / 2;
    }
    return x;
}

std::pair<Int, Int> extract_square(Int n) {
    if (n <= 0) throw std::invalid_argument("extract_square needs n > 0");
    Int root = 1, sf = 1;
    for (Int p = 2; p * p <= n; ++p) {
        if (n % p != 0) continue;
        int e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        for (int i = 0; i < e / 2; ++i) root *= p;
        if (e % 2) sf *= p;
    }
    sf *= n;  // the remaining cofactor is prime or 1
    return {root, sf};
}

Rational pochhammer(const Rational& a, long s) {
    Rational r = 1;
    for (long i = 0; i < s; ++i) r *= a + i;
    return r;
}

double to_double(const Rational& q) { return q.convert_to<double>(); }

Rational parse_rational(const std::string& s) {
    auto bad = [&] { throw std::invalid_argument("bad rational: '" + s + "'"); };
    if (s.empty()) bad();
    auto slash = s.find('/');
    try {
        if (slash == std::string::npos) return Rational(Int(s));
        Int num(s.substr(0, slash)), den(s.substr(slash + 1));
        if (den == 0) bad();
        return Rational(num) / den;
    } catch (const std::runtime_error&) {
        bad();
    }
    return 0;  // unreachable
}

int parse_half_doubled(const std::string& s) {
    Rational q = parse_rational(s);
    Rational doubled = q * 2;
    if (denominator(doubled) != 1) throw std::invalid_argument("not a half-integer: '" + s + "'");
    return numerator(doubled).convert_to<int>();
}

std::string half_to_string(long doubled) {
    if (doubled % 2 == 0) return std::to_string(doubled / 2);
    return std::to_string(doubled) + "/2";
}

}  // namespace ncsphere
