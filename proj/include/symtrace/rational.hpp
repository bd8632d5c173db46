#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace symtrace {

/// Exact rational scalar, always kept in lowest terms with a positive denominator.
class Rational {
public:
    Rational() = default;
    Rational(long v) : v_(v) {}  // NOLINT(google-explicit-constructor)
    Rational(int v) : v_(static_cast<long>(v)) {}  // NOLINT(google-explicit-constructor)
    Rational(long num, long den) {
        if (den == 0) throw std::domain_error("Rational: zero denominator");
        v_ = mpq_class(num, den);
        v_.canonicalize();
    }
    explicit Rational(mpq_class v) : v_(std::move(v)) { v_.canonicalize(); }
    explicit Rational(const mpz_class& z) : v_(z) {}

    /// Parses "p" or "p/q" (optional sign on p).
    static Rational parse(std::string_view text) {
        std::string s(text);
        if (s.empty()) throw std::invalid_argument("Rational: empty string");
        mpq_class q;
        if (q.set_str(s, 10) != 0) throw std::invalid_argument("Rational: malformed '" + s + "'");
        if (q.get_den() == 0) throw std::domain_error("Rational: zero denominator in '" + s + "'");
        q.canonicalize();
        return Rational(std::move(q));
    }

    [[nodiscard]] std::string str() const { return v_.get_str(10); }
    [[nodiscard]] double to_double() const { return v_.get_d(); }
    [[nodiscard]] const mpq_class& raw() const { return v_; }
    [[nodiscard]] mpz_class num() const { return v_.get_num(); }
    [[nodiscard]] mpz_class den() const { return v_.get_den(); }

    [[nodiscard]] bool is_zero() const { return sgn(v_) == 0; }
    [[nodiscard]] bool is_one() const { return v_ == 1; }
    [[nodiscard]] bool is_integer() const { return v_.get_den() == 1; }
    [[nodiscard]] int sign() const { return sgn(v_); }

    Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
    Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
    Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
    Rational& operator/=(const Rational& o) {
        if (o.is_zero()) throw std::domain_error("Rational: division by zero");
        v_ /= o.v_;
        return *this;
    }

    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
    friend Rational operator-(const Rational& a) { return Rational(mpq_class(-a.v_)); }

    friend bool operator==(const Rational& a, const Rational& b) { return a.v_ == b.v_; }
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
        const int c = cmp(a.v_, b.v_);
        return c < 0 ? std::strong_ordering::less
                     : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
    }

    friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

private:
    mpq_class v_{0};
};

inline Rational pow(const Rational& base, unsigned e) {
    Rational r(1);
    for (unsigned i = 0; i < e; ++i) r *= base;
    return r;
}

inline Rational factorial(unsigned n) {
    mpz_class f;
    mpz_fac_ui(f.get_mpz_t(), n);
    return Rational(f);
}

inline Rational binomial(unsigned n, unsigned k) {
    if (k > n) return Rational(0);
    mpz_class b;
    mpz_bin_uiui(b.get_mpz_t(), n, k);
    return Rational(b);
}

inline Rational sign_power(long e) { return (e % 2 == 0) ? Rational(1) : Rational(-1); }

}  // namespace symtrace
