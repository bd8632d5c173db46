#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "symfun.hpp"
#include "weyl.hpp"

namespace symtrace {

/// Theta_h(z, s) = sum_{p=0}^{h-1} (-z)^{h-p-1} s_p in mixed(k), with z the t variable and s_0 = 1.
inline Poly theta(int k, int h) {
    if (h < 1 || h > k) throw std::invalid_argument("theta: h outside [1, k]");
    const VarSpace sp = VarSpace::mixed(k);
    const Poly mz = -Poly::var(sp, Family::T);
    Poly r(sp);
    for (int p = 0; p < h; ++p) {
        const Poly sp_ = p == 0 ? Poly(sp, Rational(1)) : Poly::var(sp, Family::Sigma, p);
        r += mz.pow(static_cast<unsigned>(h - p - 1)) * sp_;
    }
    return r;
}

/// d s_h / d x_j = sum_{q=0}^{h-1} s_{h-q-1}(x) (-x_j)^q.
inline Poly jacobian_entry(int k, int h, int j) {
    if (h < 1 || h > k || j < 1 || j > k) throw std::invalid_argument("jacobian_entry: index outside [1, k]");
    const Poly mx = -Poly::var(VarSpace::x(k), Family::X, j);
    Poly r(VarSpace::x(k));
    for (int q = 0; q < h; ++q) r += elementary_symmetric(k, h - q - 1) * mx.pow(static_cast<unsigned>(q));
    return r;
}

/// The action of a permutation of coordinates on an x-space operator: x_i -> x_{perm[i]}, d_i -> d_{perm[i]}.
inline WeylOp permute_op(const WeylOp& a, const std::vector<int>& perm) {
    WeylOp r(a.space());
    for (const auto& [beta, c] : a.terms()) {
        Monomial b(beta.size());
        for (int i = 0; i < beta.size(); ++i) b.set(perm[static_cast<std::size_t>(i)], beta[i]);
        r.add_term(b, permute_x(c, perm));
    }
    return r;
}

/// Averages an x-space operator over the symmetric group.
inline WeylOp symmetrize_op(const WeylOp& a) {
    if (a.space().kind != SpaceKind::X) throw std::invalid_argument("symmetrize_op: expected an x-space operator");
    const int k = a.k();
    std::vector<int> perm(static_cast<std::size_t>(k));
    std::iota(perm.begin(), perm.end(), 0);
    WeylOp sum(a.space());
    long count = 0;
    do {
        sum += permute_op(a, perm);
        ++count;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return sum * Rational(1, count);
}

/// An x-space operator invariant under every permutation of the coordinates.
class SymmetricOperator {
public:
    explicit SymmetricOperator(WeylOp op) : op_(std::move(op)) {
        if (op_.space().kind != SpaceKind::X)
            throw std::invalid_argument("SymmetricOperator: expected an x-space operator");
        const int k = op_.k();
        for (int i = 0; i + 1 < k; ++i) {
            std::vector<int> perm(static_cast<std::size_t>(k));
            std::iota(perm.begin(), perm.end(), 0);
            std::swap(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(i + 1)]);
            if (!(permute_op(op_, perm) == op_))
                throw std::invalid_argument("SymmetricOperator: not invariant under (x" + std::to_string(i + 1) +
                                            " x" + std::to_string(i + 2) + ")");
        }
    }
    [[nodiscard]] const WeylOp& op() const { return op_; }
    [[nodiscard]] int k() const { return op_.k(); }

private:
    WeylOp op_;
};

/// S_h = sum over i_1 < ... < i_h of d_{x_{i_1}} ... d_{x_{i_h}}.
inline SymmetricOperator elementary_symmetric_op(int k, int h) {
    if (h < 1 || h > k) throw std::invalid_argument("elementary_symmetric_op: h outside [1, k]");
    const VarSpace sp = VarSpace::x(k);
    WeylOp r(sp);
    for (unsigned mask = 0; mask < (1U << k); ++mask) {
        if (std::popcount(mask) != h) continue;
        Monomial b(k);
        for (int i = 0; i < k; ++i)
            if (mask & (1U << i)) b.set(i, 1);
        r.add_term(b, Poly(sp, Rational(1)));
    }
    return SymmetricOperator(std::move(r));
}

namespace detail {

// All multi-indices of length k and total degree exactly d.
inline std::vector<Monomial> multi_indices(int k, int d) {
    std::vector<Monomial> out;
    Monomial cur(k);
    std::function<void(int, int)> rec = [&](int i, int left) {
        if (i == k - 1) {
            cur.set(i, left);
            out.push_back(cur);
            return;
        }
        for (int e = left; e >= 0; --e) {
            cur.set(i, e);
            rec(i + 1, left - e);
        }
        cur.set(i, 0);
    };
    rec(0, d);
    return out;
}

// gamma! / (gamma - beta)!
inline Rational falling(const Monomial& gamma, const Monomial& beta) {
    Rational r(1);
    for (int i = 0; i < gamma.size(); ++i)
        r *= factorial(static_cast<unsigned>(gamma[i])) / factorial(static_cast<unsigned>(gamma[i] - beta[i]));
    return r;
}

}  // namespace detail

/// Xi: the sigma-coordinate operator Q with Q[F](s(x)) = P[F o s](x) for every polynomial F.
/// Solved triangularly from the actions on sigma-monomials of degree <= order; degree order+1 is
/// checked for consistency.
inline WeylOp xi_transport(const SymmetricOperator& p) {
    const int k = p.k();
    const VarSpace ss = VarSpace::sigma(k);
    const WeylOp& op = p.op();
    if (op.is_zero()) return WeylOp(ss);
    const int d = op.order();
    SymmetricReducer red(k);
    std::map<Monomial, Poly> a;  // beta -> a_beta
    auto residual = [&](const Monomial& gamma) {
        Poly r = red.reduce_unchecked(op.apply(red.expand(gamma)));
        std::vector<Monomial> below;
        WeylOp::enumerate_below(gamma, below);
        for (const auto& beta : below) {
            if (beta == gamma) continue;
            auto it = a.find(beta);
            if (it == a.end()) continue;
            r -= it->second * Poly::monomial(ss, gamma / beta, detail::falling(gamma, beta));
        }
        return r;
    };
    for (int deg = 0; deg <= d; ++deg)
        for (const auto& gamma : detail::multi_indices(k, deg)) {
            Poly r = residual(gamma);
            if (!r.is_zero()) a.emplace(gamma, r * (Rational(1) / detail::falling(gamma, gamma)));
        }
    for (const auto& gamma : detail::multi_indices(k, d + 1))
        if (!residual(gamma).is_zero())
            throw std::logic_error("xi_transport: inconsistent triangular system at degree " + std::to_string(d + 1));
    WeylOp q(ss);
    for (const auto& [beta, c] : a) q.add_term(beta, c);
    return q;
}

/// U_p = sum_j x_j^p d_{x_j}.
inline WeylOp op_U_x(int k, int p) {
    const VarSpace sp = VarSpace::x(k);
    WeylOp r(sp);
    for (int j = 1; j <= k; ++j) r.add_term(Monomial::unit(k, j - 1), Poly::var(sp, Family::X, j, p));
    return r;
}

/// Coefficients b_0..b_{k-1} in sigma with d = sum_p b_p(s(x)) U_p; zero coefficients are omitted.
inline std::vector<std::pair<int, Poly>> decompose_derivation(const SymmetricOperator& der) {
    const WeylOp& d = der.op();
    const int k = d.k();
    const VarSpace xs = VarSpace::x(k), mx = VarSpace::mixed(k), ss = VarSpace::sigma(k);
    for (const auto& [beta, c] : d.terms())
        if (beta.degree() != 1)
            throw std::invalid_argument("decompose_derivation: not a derivation (term of order " +
                                        std::to_string(beta.degree()) + ")");
    const Poly c1 = d.coeff(Monomial::unit(k, 0));

    // c1 as a polynomial in x_1 whose coefficients are symmetric in x_2..x_k.
    std::map<int, Poly> by_power;
    const VarSpace rest = VarSpace::x(std::max(1, k - 1));
    for (const auto& [m, c] : c1.terms()) {
        Monomial mm(rest.nvars());
        for (int i = 1; i < k; ++i) mm.set(i - 1, m[i]);
        by_power.try_emplace(m[0], Poly(rest)).first->second.add_term(mm, c);
    }
    const Poly t = Poly::var(mx, Family::T);
    auto sig = [&](int h) { return h == 0 ? Poly(mx, Rational(1)) : Poly::var(mx, Family::Sigma, h); };
    // e_h(x_2..x_k) = sum_i (-x_1)^i s_{h-i}
    std::vector<Poly> images;
    for (int h = 1; h <= k - 1; ++h) {
        Poly v(mx);
        for (int i = 0; i <= h; ++i) v += (-t).pow(static_cast<unsigned>(i)) * sig(h - i);
        images.push_back(v);
    }
    Poly f(mx);
    for (const auto& [e, coeff] : by_power) {
        Poly lifted(mx);
        if (k == 1) {
            lifted = Poly(mx, coeff.constant_term());
        } else {
            const Poly inner = reduce_to_sigma(coeff);
            lifted = inner.compose(mx, images);
        }
        f += lifted * t.pow(static_cast<unsigned>(e));
    }
    // t^k = sum_h (-1)^{h-1} s_h t^{k-h}
    const int tpos = mx.require(Family::T);
    for (;;) {
        Poly next(mx);
        bool changed = false;
        for (const auto& [m, c] : f.terms()) {
            if (m[tpos] < k) {
                next.add_term(m, c);
                continue;
            }
            changed = true;
            Monomial base = m;
            base.set(tpos, m[tpos] - k);
            const Poly mon = Poly::monomial(mx, base, c);
            for (int h = 1; h <= k; ++h) next += mon * sig(h) * t.pow(static_cast<unsigned>(k - h)) * sign_power(h - 1);
        }
        f = std::move(next);
        if (!changed) break;
    }
    std::vector<std::pair<int, Poly>> out;
    WeylOp rebuilt(xs);
    for (int p = 0; p < k; ++p) {
        Poly bp(ss);
        for (const auto& [m, c] : f.terms()) {
            if (m[tpos] != p) continue;
            Monomial sm(k);
            for (int h = 1; h <= k; ++h) sm.set(h - 1, m[mx.require(Family::Sigma, h)]);
            bp.add_term(sm, c);
        }
        if (bp.is_zero()) continue;
        rebuilt += op_U_x(k, p).left_mul(sigma_to_x(bp));
        out.emplace_back(p, std::move(bp));
    }
    if (!(rebuilt == d)) throw std::invalid_argument("decompose_derivation: input is not a symmetric derivation");
    return out;
}

/// The sigma-coordinate form of nabla_p = sum_j x_j^p / P'(x_j) d_{x_j}: (-1)^{k-p-1} d_{k-p}.
inline WeylOp nabla_p_as_partial(int k, int p) {
    if (p < 0 || p > k - 1) throw std::invalid_argument("nabla_p_as_partial: p outside [0, k-1]");
    return WeylOp::d(VarSpace::sigma(k), k - p) * sign_power(k - p - 1);
}

/// symbol(P) pushed to the sigma cotangent space: xi_i -> sum_h Theta_h(x_i, s) eta_h, then the
/// symmetric coefficients are rewritten in sigma.
inline Poly symbol_pullback(const SymmetricOperator& p) {
    const int k = p.k();
    const VarSpace xs = VarSpace::x(k), es = VarSpace::eta(k);
    using EtaCombo = std::map<Monomial, Poly>;  // eta-monomial -> coefficient in x
    auto mul = [&](const EtaCombo& a, const EtaCombo& b) {
        EtaCombo r;
        for (const auto& [ma, ca] : a)
            for (const auto& [mb, cb] : b) {
                auto [it, fresh] = r.try_emplace(ma * mb, xs);
                it->second += ca * cb;
            }
        return r;
    };
    std::vector<EtaCombo> lin(static_cast<std::size_t>(k));
    for (int i = 1; i <= k; ++i)
        for (int h = 1; h <= k; ++h) lin[static_cast<std::size_t>(i - 1)].emplace(Monomial::unit(k, h - 1), jacobian_entry(k, h, i));
    const WeylOp& op = p.op();
    const int d = op.order();
    EtaCombo total;
    for (const auto& [beta, c] : op.terms()) {
        if (beta.degree() != d) continue;
        EtaCombo acc{{Monomial(k), c}};
        for (int i = 0; i < k; ++i)
            for (int e = 0; e < beta[i]; ++e) acc = mul(acc, lin[static_cast<std::size_t>(i)]);
        for (auto& [m, cx] : acc) {
            auto [it, fresh] = total.try_emplace(m, xs);
            it->second += cx;
        }
    }
    SymmetricReducer red(k);
    Poly out(es);
    for (const auto& [m, cx] : total) {
        if (cx.is_zero()) continue;
        const Poly cs = red.reduce(cx).embed(es);
        Monomial em(es.nvars());
        for (int h = 1; h <= k; ++h) em.set(es.require(Family::Eta, h), m[h - 1]);
        out += cs.times_term(em, Rational(1));
    }
    return out;
}

}  // namespace symtrace
