#pragma once

#include <algorithm>
#include <complex>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "monomial.hpp"
#include "rational.hpp"
#include "varspace.hpp"

namespace symtrace {

/// Raised when two values from different variable spaces are combined.
class SpaceMismatch : public std::invalid_argument {
public:
    SpaceMismatch(const VarSpace& a, const VarSpace& b)
        : std::invalid_argument("variable space mismatch: " + a.name() + " vs " + b.name()) {}
};

/// Quasi-homogeneous weight. Zero values are compatible with every weight.
struct Weight {
    enum class Kind { Zero, Pure, NonPure };
    Kind kind = Kind::Zero;
    int value = 0;

    static Weight zero() { return {Kind::Zero, 0}; }
    static Weight pure(int w) { return {Kind::Pure, w}; }
    static Weight non_pure() { return {Kind::NonPure, 0}; }

    [[nodiscard]] bool is_pure() const { return kind == Kind::Pure; }
    [[nodiscard]] std::string str() const {
        switch (kind) {
            case Kind::Zero: return "zero";
            case Kind::Pure: return std::to_string(value);
            case Kind::NonPure: return "non-pure";
        }
        return "?";
    }
    friend bool operator==(const Weight&, const Weight&) = default;

    /// Combines the weights of two summands.
    [[nodiscard]] Weight join(const Weight& o) const {
        if (kind == Kind::Zero) return o;
        if (o.kind == Kind::Zero) return *this;
        if (kind == Kind::NonPure || o.kind == Kind::NonPure || value != o.value) return non_pure();
        return *this;
    }
};

/// Multivariate polynomial over Q in a declared variable space. Terms are kept in graded-lex
/// order with no zero coefficients.
class Poly {
public:
    using Terms = std::map<Monomial, Rational>;

    Poly() = default;
    explicit Poly(VarSpace space) : space_(space) {}
    Poly(VarSpace space, const Rational& c) : space_(space) {
        if (!c.is_zero()) terms_.emplace(Monomial(space.nvars()), c);
    }
    Poly(VarSpace space, Terms terms) : space_(space), terms_(std::move(terms)) {
        for (auto it = terms_.begin(); it != terms_.end();) {
            if (it->first.size() != space_.nvars()) throw std::invalid_argument("Poly: exponent length mismatch");
            it = it->second.is_zero() ? terms_.erase(it) : std::next(it);
        }
    }

    static Poly constant(VarSpace space, const Rational& c) { return Poly(space, c); }
    static Poly monomial(VarSpace space, const Monomial& m, const Rational& c = Rational(1)) {
        Poly p(space);
        if (m.size() != space.nvars()) throw std::invalid_argument("Poly: exponent length mismatch");
        if (!c.is_zero()) p.terms_.emplace(m, c);
        return p;
    }
    static Poly var(VarSpace space, Family f, int index = 1, int power = 1) {
        return monomial(space, Monomial::unit(space.nvars(), space.require(f, index), power));
    }

    [[nodiscard]] const VarSpace& space() const { return space_; }
    [[nodiscard]] const Terms& terms() const { return terms_; }
    [[nodiscard]] bool is_zero() const { return terms_.empty(); }
    [[nodiscard]] std::size_t size() const { return terms_.size(); }
    [[nodiscard]] bool is_constant() const {
        return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.degree() == 0);
    }
    [[nodiscard]] Rational constant_term() const {
        auto it = terms_.find(Monomial(space_.nvars()));
        return it == terms_.end() ? Rational(0) : it->second;
    }
    [[nodiscard]] Rational coeff(const Monomial& m) const {
        auto it = terms_.find(m);
        return it == terms_.end() ? Rational(0) : it->second;
    }
    [[nodiscard]] int degree() const { return terms_.empty() ? -1 : terms_.rbegin()->first.degree(); }
    [[nodiscard]] const std::pair<const Monomial, Rational>& leading_term() const {
        if (terms_.empty()) throw std::logic_error("Poly: leading term of zero");
        return *terms_.rbegin();
    }

    /// Largest exponent of the variable at `pos` over all terms.
    [[nodiscard]] int degree_in(int pos) const {
        int d = 0;
        for (const auto& [m, c] : terms_) d = std::max(d, m[pos]);
        return d;
    }

    void add_term(const Monomial& m, const Rational& c) {
        if (c.is_zero()) return;
        auto [it, inserted] = terms_.try_emplace(m, c);
        if (!inserted) {
            it->second += c;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }

    Poly& operator+=(const Poly& o) {
        check(o);
        for (const auto& [m, c] : o.terms_) add_term(m, c);
        return *this;
    }
    Poly& operator-=(const Poly& o) {
        check(o);
        for (const auto& [m, c] : o.terms_) add_term(m, -c);
        return *this;
    }
    Poly& operator*=(const Rational& s) {
        if (s.is_zero()) {
            terms_.clear();
            return *this;
        }
        for (auto& [m, c] : terms_) c *= s;
        return *this;
    }
    friend Poly operator+(Poly a, const Poly& b) { return a += b; }
    friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
    friend Poly operator-(Poly a) { return a *= Rational(-1); }
    friend Poly operator*(Poly a, const Rational& s) { return a *= s; }
    friend Poly operator*(const Rational& s, Poly a) { return a *= s; }

    friend Poly operator*(const Poly& a, const Poly& b) {
        a.check(b);
        Poly r(a.space_);
        for (const auto& [ma, ca] : a.terms_)
            for (const auto& [mb, cb] : b.terms_) r.add_term(ma * mb, ca * cb);
        return r;
    }
    Poly& operator*=(const Poly& o) { return *this = *this * o; }

    /// Multiplies by a single monomial term.
    [[nodiscard]] Poly times_term(const Monomial& m, const Rational& c) const {
        Poly r(space_);
        if (c.is_zero()) return r;
        for (const auto& [mm, cc] : terms_) r.terms_.emplace_hint(r.terms_.end(), mm * m, cc * c);
        return r;
    }

    friend bool operator==(const Poly& a, const Poly& b) { return a.space_ == b.space_ && a.terms_ == b.terms_; }

    [[nodiscard]] Poly pow(unsigned e) const {
        Poly result(space_, Rational(1));
        Poly base = *this;
        while (e > 0) {
            if (e & 1U) result *= base;
            e >>= 1U;
            if (e > 0) base = base * base;
        }
        return result;
    }

    /// Partial derivative with respect to the variable at position `pos`.
    [[nodiscard]] Poly partial(int pos, int times = 1) const {
        if (pos < 0 || pos >= space_.nvars()) throw std::invalid_argument("Poly: unknown variable for partial");
        Poly r(space_);
        for (const auto& [m, c] : terms_) {
            const int e = m[pos];
            if (e < times) continue;
            Rational f = c;
            for (int i = 0; i < times; ++i) f *= Rational(e - i);
            Monomial mm = m;
            mm.set(pos, e - times);
            r.add_term(mm, f);
        }
        return r;
    }
    [[nodiscard]] Poly partial(Family f, int index) const { return partial(space_.require(f, index)); }

    /// Applies the multi-derivative d^beta where beta is indexed over `positions`.
    [[nodiscard]] Poly partial_multi(const std::vector<int>& positions, const Monomial& beta) const {
        Poly r = *this;
        for (int i = 0; i < beta.size(); ++i)
            if (beta[i] > 0) r = r.partial(positions[static_cast<std::size_t>(i)], beta[i]);
        return r;
    }

    /// Substitutes variable i by images[i] (all images share one target space).
    [[nodiscard]] Poly compose(const VarSpace& target, const std::vector<Poly>& images) const {
        if (static_cast<int>(images.size()) != space_.nvars())
            throw std::invalid_argument("Poly::compose: wrong number of images");
        for (const auto& im : images)
            if (!(im.space() == target)) throw SpaceMismatch(im.space(), target);
        std::vector<std::vector<Poly>> powers(images.size());
        auto power_of = [&](std::size_t i, int e) -> const Poly& {
            auto& cache = powers[i];
            if (cache.empty()) cache.emplace_back(target, Rational(1));
            while (static_cast<int>(cache.size()) <= e) cache.push_back(cache.back() * images[i]);
            return cache[static_cast<std::size_t>(e)];
        };
        Poly r(target);
        for (const auto& [m, c] : terms_) {
            Poly t(target, c);
            for (int i = 0; i < m.size(); ++i)
                if (m[i] > 0) t *= power_of(static_cast<std::size_t>(i), m[i]);
            r += t;
        }
        return r;
    }

    /// Re-expresses this polynomial in a space containing all of its variable families.
    [[nodiscard]] Poly embed(const VarSpace& target) const {
        if (target == space_) return *this;
        std::vector<int> map(static_cast<std::size_t>(space_.nvars()));
        for (int pos = 0; pos < space_.nvars(); ++pos) {
            auto [f, i] = space_.variable(pos);
            const int tp = target.position(f, i);
            if (tp < 0) throw SpaceMismatch(space_, target);
            map[static_cast<std::size_t>(pos)] = tp;
        }
        Poly r(target);
        for (const auto& [m, c] : terms_) {
            Monomial mm(target.nvars());
            for (int pos = 0; pos < m.size(); ++pos) mm.set(map[static_cast<std::size_t>(pos)], m[pos]);
            r.terms_.emplace(mm, c);
        }
        return r;
    }

    /// Projects onto a smaller space; fails if a dropped variable occurs.
    [[nodiscard]] Poly restrict_to(const VarSpace& target) const {
        Poly r(target);
        for (const auto& [m, c] : terms_) {
            Monomial mm(target.nvars());
            for (int pos = 0; pos < m.size(); ++pos) {
                if (m[pos] == 0) continue;
                auto [f, i] = space_.variable(pos);
                const int tp = target.position(f, i);
                if (tp < 0) throw std::invalid_argument("Poly::restrict_to: variable " + space_.var_name(pos) +
                                                        " occurs");
                mm.set(tp, m[pos]);
            }
            r.add_term(mm, c);
        }
        return r;
    }

    /// Evaluates at a point; `point[i]` is the value of variable position i.
    template <class T>
    [[nodiscard]] T evaluate_as(const std::vector<T>& point, auto&& convert) const {
        if (static_cast<int>(point.size()) != space_.nvars())
            throw std::invalid_argument("Poly::evaluate: wrong point dimension");
        T sum = convert(Rational(0));
        for (const auto& [m, c] : terms_) {
            T t = convert(c);
            for (int i = 0; i < m.size(); ++i)
                for (int e = 0; e < m[i]; ++e) t = t * point[static_cast<std::size_t>(i)];
            sum = sum + t;
        }
        return sum;
    }
    [[nodiscard]] Rational evaluate(const std::vector<Rational>& point) const {
        return evaluate_as<Rational>(point, [](const Rational& r) { return r; });
    }
    [[nodiscard]] double evaluate(const std::vector<double>& point) const {
        return evaluate_as<double>(point, [](const Rational& r) { return r.to_double(); });
    }
    [[nodiscard]] std::complex<double> evaluate(const std::vector<std::complex<double>>& point) const {
        return evaluate_as<std::complex<double>>(
            point, [](const Rational& r) { return std::complex<double>(r.to_double(), 0.0); });
    }

    [[nodiscard]] Weight weight() const {
        Weight w = Weight::zero();
        for (const auto& [m, c] : terms_) {
            int v = 0;
            for (int i = 0; i < m.size(); ++i) v += m[i] * space_.var_weight(i);
            w = w.join(Weight::pure(v));
            if (w.kind == Weight::Kind::NonPure) break;
        }
        return w;
    }

    /// Degree-homogeneous parts with respect to variables at positions [from, to).
    [[nodiscard]] std::map<int, Poly> split_by_degree(int from, int to) const {
        std::map<int, Poly> parts;
        for (const auto& [m, c] : terms_) {
            auto [it, _] = parts.try_emplace(m.degree_in(from, to), space_);
            it->second.terms_.emplace(m, c);
        }
        return parts;
    }

    /// Human-readable form, leading term first.
    [[nodiscard]] std::string str() const {
        if (terms_.empty()) return "0";
        std::ostringstream os;
        bool first = true;
        for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
            const auto& [m, c] = *it;
            Rational a = c;
            if (first) {
                if (a.sign() < 0) os << "-";
            } else {
                os << (a.sign() < 0 ? " - " : " + ");
            }
            if (a.sign() < 0) a = -a;
            const std::string mono = monomial_str(m);
            if (mono.empty()) {
                os << a;
            } else {
                if (!a.is_one()) os << a << "*";
                os << mono;
            }
            first = false;
        }
        return os.str();
    }

    [[nodiscard]] std::string monomial_str(const Monomial& m) const {
        std::string s;
        for (int i = 0; i < m.size(); ++i) {
            if (m[i] == 0) continue;
            if (!s.empty()) s += "*";
            s += space_.var_name(i);
            if (m[i] > 1) s += "^" + std::to_string(m[i]);
        }
        return s;
    }

private:
    void check(const Poly& o) const {
        if (!(space_ == o.space_)) throw SpaceMismatch(space_, o.space_);
    }

    VarSpace space_{};
    Terms terms_;
};

inline std::ostream& operator<<(std::ostream& os, const Poly& p) { return os << p.str(); }

/// Determinant of a square matrix with polynomial entries by Laplace expansion along rows,
/// memoised over column subsets. Division free; intended for n <= ~12.
inline Poly determinant(const std::vector<std::vector<Poly>>& a, const VarSpace& space) {
    const std::size_t n = a.size();
    for (const auto& row : a)
        if (row.size() != n) throw std::invalid_argument("determinant: matrix not square");
    if (n == 0) return Poly(space, Rational(1));
    if (n > 20) throw std::invalid_argument("determinant: matrix too large");
    // minors[mask] = det of rows [n - popcount(mask), n) x columns in mask
    std::map<unsigned, Poly> minors;
    minors.emplace(0U, Poly(space, Rational(1)));
    for (std::size_t size = 1; size <= n; ++size) {
        const std::size_t row = n - size;
        std::map<unsigned, Poly> next;
        for (const auto& [mask, sub] : minors) {
            if (sub.is_zero()) continue;
            for (std::size_t col = 0; col < n; ++col) {
                if (mask & (1U << col)) continue;
                const Poly& entry = a[row][col];
                if (entry.is_zero()) continue;
                // sign: number of chosen columns left of col
                int before = 0;
                for (std::size_t c = 0; c < col; ++c)
                    if (mask & (1U << c)) ++before;
                Poly t = entry * sub;
                if (before % 2 == 1) t = -t;
                auto [it, inserted] = next.try_emplace(mask | (1U << col), space);
                it->second += t;
            }
        }
        minors = std::move(next);
    }
    auto it = minors.find((n == 32 ? 0U : (1U << n)) - 1U);
    return it == minors.end() ? Poly(space) : it->second;
}

}  // namespace symtrace
