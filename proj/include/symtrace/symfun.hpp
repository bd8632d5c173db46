#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "poly.hpp"

namespace symtrace {

// ---------------------------------------------------------------------------------------------
// Elementary symmetric functions and the passage between x- and sigma-coordinates.
// ---------------------------------------------------------------------------------------------

/// e_h(x_1, ..., x_k) in X(k); e_0 = 1.
inline Poly elementary_symmetric(int k, int h) {
    const VarSpace sp = VarSpace::x(k);
    if (h < 0 || h > k)
        throw std::invalid_argument("elementary_symmetric: h=" + std::to_string(h) + " outside [0, " +
                                    std::to_string(k) + "]");
    Poly r(sp);
    // subsets of size h as bitmasks
    for (unsigned mask = 0; mask < (1U << k); ++mask) {
        if (std::popcount(mask) != h) continue;
        Monomial m(k);
        for (int i = 0; i < k; ++i)
            if (mask & (1U << i)) m.set(i, 1);
        r.add_term(m, Rational(1));
    }
    return r;
}

/// sigma_h -> e_h(x): expresses a Sigma(k) polynomial as a function of the roots.
inline Poly sigma_to_x(const Poly& p) {
    if (p.space().kind != SpaceKind::Sigma) throw std::invalid_argument("sigma_to_x: expected a sigma-space polynomial");
    const int k = p.space().k;
    std::vector<Poly> images;
    for (int h = 1; h <= k; ++h) images.push_back(elementary_symmetric(k, h));
    return p.compose(VarSpace::x(k), images);
}

/// Permutes the x-variables: variable i is sent to position perm[i].
inline Poly permute_x(const Poly& p, const std::vector<int>& perm) {
    Poly r(p.space());
    for (const auto& [m, c] : p.terms()) {
        Monomial mm(m.size());
        for (int i = 0; i < m.size(); ++i) mm.set(perm[static_cast<std::size_t>(i)], m[i]);
        r.add_term(mm, c);
    }
    return r;
}

/// Returns the first adjacent transposition (i, i+1), 1-based, that changes p; 0 if p is symmetric.
inline int first_asymmetry(const Poly& p) {
    const int k = p.space().k;
    for (int i = 0; i + 1 < k; ++i) {
        std::vector<int> perm(static_cast<std::size_t>(k));
        std::iota(perm.begin(), perm.end(), 0);
        std::swap(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(i + 1)]);
        if (!(permute_x(p, perm) == p)) return i + 1;
    }
    return 0;
}

/// Rewrites symmetric polynomials in x_1..x_k through the elementary symmetric functions by
/// graded leading-term descent. Holds a cache of expanded sigma-monomials.
class SymmetricReducer {
public:
    explicit SymmetricReducer(int k) : k_(k), xs_(VarSpace::x(k)), ss_(VarSpace::sigma(k)) {
        for (int h = 1; h <= k; ++h) e_.push_back(elementary_symmetric(k, h));
        cache_.emplace(Monomial(k), Poly(xs_, Rational(1)));
    }

    [[nodiscard]] int k() const { return k_; }

    Poly reduce(const Poly& p) {
        if (!(p.space() == xs_)) throw SpaceMismatch(p.space(), xs_);
        if (const int i = first_asymmetry(p); i != 0)
            throw std::invalid_argument("reduce_to_sigma: input is not symmetric under the transposition (x" +
                                        std::to_string(i) + " x" + std::to_string(i + 1) + ")");
        return reduce_unchecked(p);
    }

    /// Same as reduce() without the symmetry check; the input must be symmetric.
    Poly reduce_unchecked(Poly r) {
        Poly out(ss_);
        while (!r.is_zero()) {
            const auto [lead, c] = r.leading_term();
            std::vector<int> lambda = lead.to_vector();
            std::sort(lambda.begin(), lambda.end(), std::greater<>());
            Monomial mu(k_);
            for (int h = 0; h < k_; ++h)
                mu.set(h, lambda[static_cast<std::size_t>(h)] -
                              (h + 1 < k_ ? lambda[static_cast<std::size_t>(h + 1)] : 0));
            const Poly& ex = expand(mu);
            r -= ex * c;
            if (!r.is_zero() && !(r.leading_term().first < lead))
                throw std::logic_error("reduce_to_sigma: leading term did not decrease (input not symmetric?)");
            out.add_term(mu, c);
        }
        return out;
    }

    /// sigma^mu expanded in x.
    const Poly& expand(const Monomial& mu) {
        if (auto it = cache_.find(mu); it != cache_.end()) return it->second;
        int h = 0;
        while (mu[h] == 0) ++h;
        Monomial lower = mu;
        lower.set(h, mu[h] - 1);
        Poly v = expand(lower) * e_[static_cast<std::size_t>(h)];
        return cache_.emplace(mu, std::move(v)).first->second;
    }

private:
    int k_;
    VarSpace xs_, ss_;
    std::vector<Poly> e_;
    std::map<Monomial, Poly> cache_;
};

/// Expresses a symmetric polynomial of X(k) in sigma-coordinates; rejects non-symmetric input.
inline Poly reduce_to_sigma(const Poly& p) {
    if (p.space().kind != SpaceKind::X) throw std::invalid_argument("reduce_to_sigma: expected an x-space polynomial");
    SymmetricReducer red(p.space().k);
    return red.reduce(p);
}

// ---------------------------------------------------------------------------------------------
// Newton, derived Newton and primitive Newton polynomials.
// ---------------------------------------------------------------------------------------------

inline Poly sigma_var(int k, int h) {
    const VarSpace sp = VarSpace::sigma(k);
    if (h == 0) return Poly(sp, Rational(1));
    return Poly::var(sp, Family::Sigma, h);
}

/// Caches N_m, DN_m and PN_m for one k. Safe for concurrent use.
class NewtonFamily {
public:
    explicit NewtonFamily(int k) : k_(k), sp_(VarSpace::sigma(k)) {}

    [[nodiscard]] int k() const { return k_; }

    /// N_m by the Newton identities.
    Poly newton(int m) const {
        if (m < 0) throw std::invalid_argument("newton: m must be >= 0");
        std::lock_guard lock(mu_);
        return newton_locked(m);
    }

    /// DN_m for m >= -k+1 by the recurrence sum_{h=0}^{k} (-1)^h s_h DN_{m-h} = 0.
    Poly derived(int m) const {
        if (m < -k_ + 1)
            throw std::invalid_argument("derived_newton: m=" + std::to_string(m) + " below -k+1=" +
                                        std::to_string(-k_ + 1));
        std::lock_guard lock(mu_);
        if (dn_.empty()) {
            for (int j = -k_ + 1; j <= -1; ++j) dn_.emplace_back(sp_);
            dn_.emplace_back(sp_, Rational(1));
        }
        const auto idx = [&](int j) { return static_cast<std::size_t>(j + k_ - 1); };
        while (dn_.size() <= idx(m)) {
            const int j = static_cast<int>(dn_.size()) - k_ + 1;
            Poly v(sp_);
            for (int h = 1; h <= k_; ++h) v += sigma_var(k_, h) * dn_[idx(j - h)] * sign_power(h - 1);
            dn_.push_back(std::move(v));
        }
        return dn_[idx(m)];
    }

    /// PN_m = sum_h (-1)^{h-1} N_{m-h}/(m-h) s_h with h in [0, k] for m > k and h in [0, m-1] otherwise.
    Poly primitive(int m) const {
        if (m < 1) throw std::invalid_argument("primitive_newton: m must be >= 1");
        std::lock_guard lock(mu_);
        const int top = m >= k_ + 1 ? k_ : m - 1;
        Poly v(sp_);
        for (int h = 0; h <= top; ++h)
            v += newton_locked(m - h) * sigma_var(k_, h) * (sign_power(h - 1) / Rational(m - h));
        return v;
    }

private:
    Poly newton_locked(int m) const {
        if (n_.empty()) n_.emplace_back(sp_, Rational(k_));
        while (static_cast<int>(n_.size()) <= m) {
            const int j = static_cast<int>(n_.size());
            Poly v(sp_);
            for (int h = 1; h <= std::min(j - 1, k_); ++h)
                v += sigma_var(k_, h) * n_[static_cast<std::size_t>(j - h)] * sign_power(h - 1);
            if (j <= k_) v += sigma_var(k_, j) * (sign_power(j - 1) * Rational(j));
            n_.push_back(std::move(v));
        }
        return n_[static_cast<std::size_t>(m)];
    }

    int k_;
    VarSpace sp_;
    mutable std::mutex mu_;
    mutable std::vector<Poly> n_;
    mutable std::vector<Poly> dn_;
};

inline Poly newton(int k, int m) { return NewtonFamily(k).newton(m); }
inline Poly derived_newton(int k, int m) { return NewtonFamily(k).derived(m); }
inline Poly primitive_newton(int k, int m) { return NewtonFamily(k).primitive(m); }

/// N_m by the closed sum over alpha with sum_j j*alpha_j = m of
/// (-1)^{m+|alpha|} m (|alpha|-1)!/alpha! sigma^alpha.
inline Poly newton_varouchas(int k, int m) {
    if (m < 1) throw std::invalid_argument("newton_varouchas: m must be >= 1");
    const VarSpace sp = VarSpace::sigma(k);
    Poly r(sp);
    Monomial alpha(k);
    std::function<void(int, int)> rec = [&](int j, int remaining) {
        if (j == 0) {
            if (remaining != 0) return;
            const int len = alpha.degree();
            Rational c = sign_power(m + len) * Rational(m) * factorial(static_cast<unsigned>(len - 1));
            for (int i = 0; i < k; ++i) c /= factorial(static_cast<unsigned>(alpha[i]));
            r.add_term(alpha, c);
            return;
        }
        for (int a = 0; a * j <= remaining; ++a) {
            alpha.set(j - 1, a);
            rec(j - 1, remaining - a * j);
        }
        alpha.set(j - 1, 0);
    };
    rec(k, m);
    return r;
}

// ---------------------------------------------------------------------------------------------
// Symmetrisation, discriminant and closedness of the primitive-Newton forms.
// ---------------------------------------------------------------------------------------------

/// ((k-h)!/k!) * sum over injections i of {1..h} into {1..k} of p(x_{i_1}, ..., x_{i_h}).
inline Poly symmetrize(const Poly& p, int h, int k) {
    if (p.space().kind != SpaceKind::X) throw std::invalid_argument("symmetrize: expected an x-space polynomial");
    if (h < 1 || h > k) throw std::invalid_argument("symmetrize: need 1 <= h <= k");
    const Poly q = p.space().k == h ? p : [&] {
        for (const auto& [m, c] : p.terms())
            for (int i = h; i < m.size(); ++i)
                if (m[i] != 0) throw std::invalid_argument("symmetrize: polynomial uses x_j with j > h");
        VarSpace small = VarSpace::x(h);
        Poly r(small);
        for (const auto& [m, c] : p.terms()) {
            Monomial mm(h);
            for (int i = 0; i < std::min(h, m.size()); ++i) mm.set(i, m[i]);
            r.add_term(mm, c);
        }
        return r;
    }();
    const VarSpace xs = VarSpace::x(k);
    Poly sum(xs);
    std::vector<int> chosen;
    std::vector<bool> used(static_cast<std::size_t>(k), false);
    std::function<void()> rec = [&]() {
        if (static_cast<int>(chosen.size()) == h) {
            std::vector<Poly> images;
            for (int j : chosen) images.push_back(Poly::var(xs, Family::X, j + 1));
            sum += q.compose(xs, images);
            return;
        }
        for (int j = 0; j < k; ++j) {
            if (used[static_cast<std::size_t>(j)]) continue;
            used[static_cast<std::size_t>(j)] = true;
            chosen.push_back(j);
            rec();
            chosen.pop_back();
            used[static_cast<std::size_t>(j)] = false;
        }
    };
    rec();
    return sum * (factorial(static_cast<unsigned>(k - h)) / factorial(static_cast<unsigned>(k)));
}

/// Coefficients of P_sigma(z) = sum_{h=0}^{k} (-1)^h s_h z^{k-h}, highest degree first.
inline std::vector<Poly> characteristic_coefficients(int k) {
    std::vector<Poly> c;
    for (int h = 0; h <= k; ++h) c.push_back(sigma_var(k, h) * sign_power(h));
    return c;
}

/// Resultant of two univariate polynomials with Sigma(k) coefficients (highest degree first)
/// as the Sylvester determinant.
inline Poly resultant(const std::vector<Poly>& f, const std::vector<Poly>& g, const VarSpace& sp) {
    const int m = static_cast<int>(f.size()) - 1;
    const int n = static_cast<int>(g.size()) - 1;
    if (m < 0 || n < 0) throw std::invalid_argument("resultant: empty polynomial");
    const int size = m + n;
    std::vector<std::vector<Poly>> s(static_cast<std::size_t>(size),
                                     std::vector<Poly>(static_cast<std::size_t>(size), Poly(sp)));
    for (int r = 0; r < n; ++r)
        for (int i = 0; i <= m; ++i) s[static_cast<std::size_t>(r)][static_cast<std::size_t>(r + i)] = f[static_cast<std::size_t>(i)];
    for (int r = 0; r < m; ++r)
        for (int i = 0; i <= n; ++i)
            s[static_cast<std::size_t>(n + r)][static_cast<std::size_t>(r + i)] = g[static_cast<std::size_t>(i)];
    return determinant(s, sp);
}

/// Delta with Delta(sigma(x)) = prod_{i<j} (x_i - x_j)^2, from Res(P, P') normalised by the
/// leading coefficient (1) and the sign (-1)^{k(k-1)/2}.
inline Poly discriminant(int k) {
    if (k < 2) throw std::invalid_argument("discriminant: k must be >= 2");
    const VarSpace sp = VarSpace::sigma(k);
    const auto p = characteristic_coefficients(k);
    std::vector<Poly> dp;
    for (int i = 0; i < k; ++i) dp.push_back(p[static_cast<std::size_t>(i)] * Rational(k - i));
    return resultant(p, dp, sp) * sign_power(k * (k - 1) / 2);
}

/// Exact check that the one-form sum_h (-1)^{h-1} N_{m-h}/(m-h) ds_h is closed.
inline bool omega_closedness(int k, int m) {
    if (m < k + 1) throw std::invalid_argument("omega_closedness: requires m >= k+1");
    NewtonFamily fam(k);
    auto component = [&](int h) { return fam.newton(m - h) * (sign_power(h - 1) / Rational(m - h)); };
    for (int p = 1; p <= k; ++p)
        for (int q = p + 1; q <= k; ++q)
            if (!(component(q).partial(Family::Sigma, p) == component(p).partial(Family::Sigma, q))) return false;
    return true;
}

}  // namespace symtrace
