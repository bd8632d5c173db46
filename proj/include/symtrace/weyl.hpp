#pragma once

#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "poly.hpp"

namespace symtrace {

/// Differential operator with polynomial coefficients in normal form: sum of a_beta * d^beta with
/// every coefficient to the left of every derivative. The coordinate space is X(k) or Sigma(k);
/// derivatives act on its k coordinates.
class WeylOp {
public:
    using Terms = std::map<Monomial, Poly>;

    WeylOp() = default;
    explicit WeylOp(VarSpace space) : space_(check_space(space)) {}
    WeylOp(VarSpace space, Terms terms) : space_(check_space(space)) {
        for (auto& [b, c] : terms) add_term(b, c);
    }

    static WeylOp from_poly(const Poly& p) {
        WeylOp r(p.space());
        r.add_term(Monomial(r.k()), p);
        return r;
    }
    static WeylOp constant(VarSpace space, const Rational& c) { return from_poly(Poly(space, c)); }
    static WeylOp identity(VarSpace space) { return constant(space, Rational(1)); }

    /// The derivative monomial d^beta with coefficient c.
    static WeylOp derivative(VarSpace space, const Monomial& beta, const Rational& c = Rational(1)) {
        WeylOp r(space);
        r.add_term(beta, Poly(space, c));
        return r;
    }
    /// d_i (1-based coordinate index).
    static WeylOp d(VarSpace space, int i) {
        check_space(space);
        if (i < 1 || i > space.k) throw std::invalid_argument("WeylOp::d: index out of range");
        return derivative(space, Monomial::unit(space.k, i - 1));
    }
    /// d_i d_j.
    static WeylOp dd(VarSpace space, int i, int j) {
        check_space(space);
        if (i < 1 || i > space.k || j < 1 || j > space.k) throw std::invalid_argument("WeylOp::dd: index out of range");
        Monomial b(space.k);
        b.set(i - 1, b[i - 1] + 1);
        b.set(j - 1, b[j - 1] + 1);
        return derivative(space, b);
    }

    [[nodiscard]] const VarSpace& space() const { return space_; }
    [[nodiscard]] int k() const { return space_.k; }
    [[nodiscard]] const Terms& terms() const { return terms_; }
    [[nodiscard]] bool is_zero() const { return terms_.empty(); }
    [[nodiscard]] int order() const { return terms_.empty() ? -1 : terms_.rbegin()->first.degree(); }
    [[nodiscard]] Poly coeff(const Monomial& beta) const {
        auto it = terms_.find(beta);
        return it == terms_.end() ? Poly(space_) : it->second;
    }

    void add_term(const Monomial& beta, const Poly& c) {
        if (beta.size() != k()) throw std::invalid_argument("WeylOp: derivative index length mismatch");
        if (!(c.space() == space_)) throw SpaceMismatch(c.space(), space_);
        if (c.is_zero()) return;
        auto [it, inserted] = terms_.try_emplace(beta, c);
        if (!inserted) {
            it->second += c;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }

    WeylOp& operator+=(const WeylOp& o) {
        check(o);
        for (const auto& [b, c] : o.terms_) add_term(b, c);
        return *this;
    }
    WeylOp& operator-=(const WeylOp& o) {
        check(o);
        for (const auto& [b, c] : o.terms_) add_term(b, -c);
        return *this;
    }
    WeylOp& operator*=(const Rational& s) {
        if (s.is_zero()) terms_.clear();
        for (auto& [b, c] : terms_) c *= s;
        return *this;
    }
    friend WeylOp operator+(WeylOp a, const WeylOp& b) { return a += b; }
    friend WeylOp operator-(WeylOp a, const WeylOp& b) { return a -= b; }
    friend WeylOp operator-(WeylOp a) { return a *= Rational(-1); }
    friend WeylOp operator*(WeylOp a, const Rational& s) { return a *= s; }
    friend WeylOp operator*(const Rational& s, WeylOp a) { return a *= s; }

    /// Left multiplication by a function: p * this.
    [[nodiscard]] WeylOp left_mul(const Poly& p) const {
        WeylOp r(space_);
        for (const auto& [b, c] : terms_) r.add_term(b, p * c);
        return r;
    }

    /// Normal-ordered composition a o b via the Leibniz rule
    /// d^beta o f = sum_{delta <= beta} binom(beta, delta) d^delta(f) d^(beta - delta).
    friend WeylOp operator*(const WeylOp& a, const WeylOp& b) {
        a.check(b);
        WeylOp r(a.space_);
        const auto pos = a.coordinate_positions();
        for (const auto& [beta, abeta] : a.terms_) {
            std::vector<Monomial> deltas;
            enumerate_below(beta, deltas);
            for (const auto& [gamma, bgamma] : b.terms_) {
                for (const auto& delta : deltas) {
                    Rational mult(1);
                    for (int i = 0; i < beta.size(); ++i)
                        mult *= binomial(static_cast<unsigned>(beta[i]), static_cast<unsigned>(delta[i]));
                    Poly db = bgamma.partial_multi(pos, delta);
                    if (db.is_zero()) continue;
                    r.add_term((beta / delta) * gamma, (abeta * db) * mult);
                }
            }
        }
        return r;
    }
    WeylOp& operator*=(const WeylOp& o) { return *this = *this * o; }

    friend bool operator==(const WeylOp& a, const WeylOp& b) { return a.space_ == b.space_ && a.terms_ == b.terms_; }

    /// Action on a polynomial function of the same space.
    [[nodiscard]] Poly apply(const Poly& f) const {
        if (!(f.space() == space_)) throw SpaceMismatch(f.space(), space_);
        const auto pos = coordinate_positions();
        Poly r(space_);
        for (const auto& [beta, c] : terms_) {
            Poly df = f.partial_multi(pos, beta);
            if (!df.is_zero()) r += c * df;
        }
        return r;
    }

    /// Top-order part as a polynomial on the cotangent space (d_h -> eta_h, or d_{x_i} -> xi_i).
    [[nodiscard]] Poly symbol() const {
        if (is_zero()) throw std::invalid_argument("symbol: zero operator has no symbol");
        const int d = order();
        const VarSpace cot = cotangent_space();
        const Family fib = space_.kind == SpaceKind::Sigma ? Family::Eta : Family::Xi;
        Poly r(cot);
        for (const auto& [beta, c] : terms_) {
            if (beta.degree() != d) continue;
            Monomial fibre(cot.nvars());
            for (int i = 0; i < k(); ++i) fibre.set(cot.require(fib, i + 1), beta[i]);
            Poly lifted = c.embed(cot);
            for (const auto& [m, cc] : lifted.terms()) r.add_term(m * fibre, cc);
        }
        return r;
    }

    /// Terms of order exactly `ord`.
    [[nodiscard]] WeylOp part_of_order(int ord) const {
        WeylOp r(space_);
        for (const auto& [b, c] : terms_)
            if (b.degree() == ord) r.add_term(b, c);
        return r;
    }

    [[nodiscard]] VarSpace cotangent_space() const {
        return space_.kind == SpaceKind::Sigma ? VarSpace::eta(k()) : VarSpace::xi(k());
    }

    /// Weight under s_h -> h, x -> 1, d_{s_h} -> -h, d_x -> -1.
    [[nodiscard]] Weight weight() const {
        Weight w = Weight::zero();
        for (const auto& [beta, c] : terms_) {
            int dw = 0;
            for (int i = 0; i < k(); ++i) dw += beta[i] * space_.var_weight(i);
            Weight cw = c.weight();
            if (cw.kind == Weight::Kind::NonPure) return Weight::non_pure();
            w = w.join(Weight::pure(cw.value - dw));
            if (w.kind == Weight::Kind::NonPure) return w;
        }
        return w;
    }

    [[nodiscard]] std::string str() const {
        if (terms_.empty()) return "0";
        std::ostringstream os;
        bool first = true;
        const std::string dname = space_.kind == SpaceKind::Sigma ? "d" : "dx";
        for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
            const auto& [beta, c] = *it;
            std::string ds;
            for (int i = 0; i < beta.size(); ++i) {
                if (beta[i] == 0) continue;
                if (!ds.empty()) ds += "*";
                ds += dname + std::to_string(i + 1);
                if (beta[i] > 1) ds += "^" + std::to_string(beta[i]);
            }
            if (!first) os << " + ";
            if (ds.empty()) {
                os << "(" << c.str() << ")";
            } else if (c == Poly(space_, Rational(1))) {
                os << ds;
            } else {
                os << "(" << c.str() << ")*" << ds;
            }
            first = false;
        }
        return os.str();
    }

    /// Positions of the k coordinates inside the coefficient space.
    [[nodiscard]] std::vector<int> coordinate_positions() const {
        std::vector<int> pos(static_cast<std::size_t>(k()));
        const Family f = space_.kind == SpaceKind::Sigma ? Family::Sigma : Family::X;
        for (int i = 0; i < k(); ++i) pos[static_cast<std::size_t>(i)] = space_.require(f, i + 1);
        return pos;
    }

    /// All multi-indices componentwise below `beta` (inclusive).
    static void enumerate_below(const Monomial& beta, std::vector<Monomial>& out) {
        Monomial cur(beta.size());
        std::function<void(int)> rec = [&](int i) {
            if (i == beta.size()) {
                out.push_back(cur);
                return;
            }
            for (int e = 0; e <= beta[i]; ++e) {
                cur.set(i, e);
                rec(i + 1);
            }
            cur.set(i, 0);
        };
        rec(0);
    }

private:
    static VarSpace check_space(VarSpace s) {
        if (s.kind != SpaceKind::Sigma && s.kind != SpaceKind::X)
            throw std::invalid_argument("WeylOp: coordinate space must be x(k) or sigma(k), got " + s.name());
        return s;
    }
    void check(const WeylOp& o) const {
        if (!(space_ == o.space_)) throw SpaceMismatch(space_, o.space_);
    }

    VarSpace space_{VarSpace::sigma(1)};
    Terms terms_;
};

inline std::ostream& operator<<(std::ostream& os, const WeylOp& a) { return os << a.str(); }

inline WeylOp commutator(const WeylOp& a, const WeylOp& b) { return a * b - b * a; }

}  // namespace symtrace
