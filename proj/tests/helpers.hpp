#pragma once

#include <random>
#include <vector>

#include <symtrace/symfun.hpp>
#include <symtrace/weyl.hpp>

namespace th {

using namespace symtrace;

inline Poly s(int k, int h) { return Poly::var(VarSpace::sigma(k), Family::Sigma, h); }
inline Poly x(int k, int i) { return Poly::var(VarSpace::x(k), Family::X, i); }
inline Poly c(const VarSpace& sp, long v) { return Poly(sp, Rational(v)); }
inline Poly eta(int k, int h) { return Poly::var(VarSpace::eta(k), Family::Eta, h); }
inline Poly es(int k, int h) { return Poly::var(VarSpace::eta(k), Family::Sigma, h); }
inline WeylOp d(int k, int i) { return WeylOp::d(VarSpace::sigma(k), i); }
inline WeylOp dd(int k, int i, int j) { return WeylOp::dd(VarSpace::sigma(k), i, j); }
inline WeylOp dx(int k, int i) { return WeylOp::d(VarSpace::x(k), i); }
inline WeylOp mul(const Poly& p) { return WeylOp::from_poly(p); }

/// Random polynomial with small integer coefficients, `terms` terms of degree <= deg.
inline Poly random_poly(std::mt19937_64& rng, const VarSpace& sp, int terms, int deg) {
    std::uniform_int_distribution<int> coef(-5, 5), var(0, sp.nvars() - 1), dg(0, deg);
    Poly p(sp);
    for (int t = 0; t < terms; ++t) {
        Monomial m(sp.nvars());
        const int d = dg(rng);
        for (int i = 0; i < d; ++i) {
            const int v = var(rng);
            m.set(v, m[v] + 1);
        }
        p.add_term(m, Rational(coef(rng)));
    }
    return p;
}

/// Random differential operator of order <= ord with random coefficients.
inline WeylOp random_op(std::mt19937_64& rng, const VarSpace& sp, int terms, int ord, int coeff_deg) {
    std::uniform_int_distribution<int> var(0, sp.k - 1), od(0, ord);
    WeylOp a(sp);
    for (int t = 0; t < terms; ++t) {
        Monomial b(sp.k);
        const int o = od(rng);
        for (int i = 0; i < o; ++i) {
            const int v = var(rng);
            b.set(v, b[v] + 1);
        }
        a.add_term(b, random_poly(rng, sp, 3, coeff_deg));
    }
    return a;
}

inline std::vector<Rational> random_point(std::mt19937_64& rng, int n, int lo = -9, int hi = 9) {
    std::uniform_int_distribution<int> num(lo, hi), den(1, 4);
    std::vector<Rational> v;
    for (int i = 0; i < n; ++i) v.emplace_back(num(rng), den(rng));
    return v;
}

/// sigma(x) computed directly from the roots: coefficients of prod (z - x_j) with signs removed.
inline std::vector<Rational> sigma_of_roots(const std::vector<Rational>& xs) {
    std::vector<Rational> e(xs.size() + 1, Rational(0));
    e[0] = Rational(1);
    for (std::size_t j = 0; j < xs.size(); ++j)
        for (std::size_t h = j + 1; h >= 1; --h) e[h] += e[h - 1] * xs[j];
    return {e.begin() + 1, e.end()};
}

}  // namespace th
