#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <vector>

#include "varspace.hpp"

namespace symtrace {

/// Exponent multi-index over at most kMaxVars variables, stored inline.
class Monomial {
public:
    using value_type = std::uint16_t;

    Monomial() = default;
    explicit Monomial(int nvars) : n_(static_cast<std::uint8_t>(check_n(nvars))) {}
    Monomial(std::initializer_list<int> e) : Monomial(std::vector<int>(e)) {}
    explicit Monomial(std::span<const int> e) : n_(static_cast<std::uint8_t>(check_n(static_cast<int>(e.size())))) {
        for (int i = 0; i < n_; ++i) set(i, e[static_cast<std::size_t>(i)]);
    }
    explicit Monomial(const std::vector<int>& e) : Monomial(std::span<const int>(e)) {}

    static Monomial unit(int nvars, int pos, int power = 1) {
        Monomial m(nvars);
        m.set(pos, power);
        return m;
    }

    [[nodiscard]] int size() const { return n_; }
    [[nodiscard]] int degree() const { return deg_; }
    [[nodiscard]] int operator[](int i) const { return e_[static_cast<std::size_t>(i)]; }

    void set(int i, int v) {
        if (v < 0 || v > 0xFFFF) throw std::out_of_range("Monomial: exponent out of range");
        if (i < 0 || i >= n_) throw std::out_of_range("Monomial: index out of range");
        deg_ += v - e_[static_cast<std::size_t>(i)];
        e_[static_cast<std::size_t>(i)] = static_cast<value_type>(v);
    }

    [[nodiscard]] std::vector<int> to_vector() const { return {e_.begin(), e_.begin() + n_}; }

    [[nodiscard]] bool divides(const Monomial& o) const {
        for (int i = 0; i < n_; ++i)
            if (e_[static_cast<std::size_t>(i)] > o.e_[static_cast<std::size_t>(i)]) return false;
        return true;
    }

    /// Partial degree over positions [from, to).
    [[nodiscard]] int degree_in(int from, int to) const {
        int d = 0;
        for (int i = from; i < to; ++i) d += e_[static_cast<std::size_t>(i)];
        return d;
    }

    friend Monomial operator*(Monomial a, const Monomial& b) {
        same_size(a, b);
        for (int i = 0; i < a.n_; ++i) a.set(i, a[i] + b[i]);
        return a;
    }

    /// Componentwise difference; requires b to divide a.
    friend Monomial operator/(Monomial a, const Monomial& b) {
        same_size(a, b);
        for (int i = 0; i < a.n_; ++i) {
            if (a[i] < b[i]) throw std::invalid_argument("Monomial: non-divisible quotient");
            a.set(i, a[i] - b[i]);
        }
        return a;
    }

    friend bool operator==(const Monomial& a, const Monomial& b) {
        return a.n_ == b.n_ && a.deg_ == b.deg_ && a.e_ == b.e_;
    }

    /// Graded-lex: total degree, then exponents compared from the last variable down.
    friend std::strong_ordering operator<=>(const Monomial& a, const Monomial& b) {
        if (a.n_ != b.n_) return a.n_ <=> b.n_;
        if (a.deg_ != b.deg_) return a.deg_ <=> b.deg_;
        for (int i = a.n_ - 1; i >= 0; --i)
            if (a[i] != b[i]) return a[i] <=> b[i];
        return std::strong_ordering::equal;
    }

private:
    static int check_n(int n) {
        if (n < 0 || n > kMaxVars) throw std::invalid_argument("Monomial: too many variables");
        return n;
    }
    static void same_size(const Monomial& a, const Monomial& b) {
        if (a.n_ != b.n_) throw std::invalid_argument("Monomial: size mismatch");
    }

    std::array<value_type, kMaxVars> e_{};
    std::uint8_t n_ = 0;
    int deg_ = 0;
};

}  // namespace symtrace
