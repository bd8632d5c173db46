#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "symfun.hpp"
#include "weyl.hpp"

namespace symtrace {

using cplx = std::complex<double>;
using lcplx = std::complex<long double>;
using ComplexVec = std::vector<cplx>;

class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline void require_finite(const ComplexVec& v, const char* what) {
    for (const auto& z : v)
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
            throw std::invalid_argument(std::string(what) + ": non-finite entry");
}

/// P_s(z) = z^k + sum_h (-1)^h s_h z^{k-h} by Horner; also returns P'(z).
template <class C>
std::pair<C, C> eval_char_poly(const ComplexVec& sigma, C z) {
    C p = 1.0, dp = 0.0;
    for (std::size_t h = 1; h <= sigma.size(); ++h) {
        dp = dp * z + p;
        const C sh(sigma[h - 1]);
        p = p * z + (h % 2 ? -sh : sh);
    }
    return {p, dp};
}

/// max(1, sum_h |s_h|^{1/h}); every root of P_s lies inside this radius.
inline double root_radius(const ComplexVec& sigma) {
    double s = 0;
    for (std::size_t h = 1; h <= sigma.size(); ++h) s += std::pow(std::abs(sigma[h - 1]), 1.0 / static_cast<double>(h));
    return std::max(1.0, s);
}

/// Roots of P_s with multiplicity (Aberth-Ehrlich iteration).
inline ComplexVec poly_roots(const ComplexVec& sigma, int max_iter = 2000) {
    require_finite(sigma, "poly_roots");
    const std::size_t k = sigma.size();
    if (k == 0) throw std::invalid_argument("poly_roots: k must be >= 1");
    const double r0 = root_radius(sigma);
    ComplexVec z(k);
    for (std::size_t j = 0; j < k; ++j)
        z[j] = std::polar(0.5 * r0, 2 * std::numbers::pi * (static_cast<double>(j) + 0.25) / static_cast<double>(k));
    auto residual = [&](const ComplexVec& zs) {
        double worst = 0;
        for (const auto& x : zs) {
            const double scale = std::pow(std::max(1.0, std::abs(x)), static_cast<double>(k));
            worst = std::max(worst, std::abs(eval_char_poly(sigma, x).first) / scale);
        }
        return worst;
    };
    for (int it = 0; it < max_iter; ++it) {
        double step = 0;
        for (std::size_t j = 0; j < k; ++j) {
            const auto [p, dp] = eval_char_poly(sigma, z[j]);
            if (p == 0.0) continue;
            const cplx ratio = p / dp;
            cplx sum = 0;
            for (std::size_t i = 0; i < k; ++i)
                if (i != j) sum += 1.0 / (z[j] - z[i]);
            const cplx w = ratio / (1.0 - ratio * sum);
            if (!std::isfinite(w.real()) || !std::isfinite(w.imag())) continue;
            z[j] -= w;
            step = std::max(step, std::abs(w) / std::max(1.0, std::abs(z[j])));
        }
        if (step < 1e-15) break;
    }
    const double res = residual(z);
    if (!(res <= 1e-10)) throw NumericError("poly_roots: no convergence, best residual " + std::to_string(res));
    return z;
}

/// Trapezoidal rule with n nodes on |z| = R.
struct QuadratureSpec {
    double R = 0;
    int n = 0;
};

inline QuadratureSpec default_quadrature(const ComplexVec& sigma) {
    QuadratureSpec q;
    q.R = 2.25 * root_radius(sigma);
    int n = 128;
    while (n < 8 * q.R) n *= 2;
    q.n = n;
    return q;
}

inline void validate_quadrature(const QuadratureSpec& q, const ComplexVec& sigma) {
    require_finite(sigma, "quadrature");
    const double need = 2 * root_radius(sigma);
    if (!(q.R > need))
        throw std::invalid_argument("quadrature: radius " + std::to_string(q.R) + " must exceed " + std::to_string(need));
    if (q.n < 1 || (q.n & (q.n - 1)) != 0) throw std::invalid_argument("quadrature: node count must be a power of two");
}

/// An entire function with its derivative, evaluated in extended precision.
struct AnalyticFn {
    std::string name;
    std::function<lcplx(lcplx)> f;
    std::function<lcplx(lcplx)> df;

    static AnalyticFn exp() {
        return {"exp", [](lcplx z) { return std::exp(z); }, [](lcplx z) { return std::exp(z); }};
    }
    static AnalyticFn sin() {
        return {"sin", [](lcplx z) { return std::sin(z); }, [](lcplx z) { return std::cos(z); }};
    }
    static AnalyticFn power(int m) {
        if (m < 0) throw std::invalid_argument("pow:m needs m >= 0");
        return {"pow:" + std::to_string(m), [m](lcplx z) { return ipow(z, m); },
                [m](lcplx z) { return m == 0 ? lcplx(0) : static_cast<long double>(m) * ipow(z, m - 1); }};
    }
    static lcplx ipow(lcplx z, int m) {
        lcplx r = 1;
        for (int i = 0; i < m; ++i) r *= z;
        return r;
    }
    static AnalyticFn parse(const std::string& s) {
        if (s == "exp") return exp();
        if (s == "sin") return sin();
        if (s.rfind("pow:", 0) == 0) return power(std::stoi(s.substr(4)));
        throw std::invalid_argument("unknown function '" + s + "' (expected exp|sin|pow:m)");
    }
};

/// j-th trapezoid node R * exp(2 pi i j / n).
inline lcplx node(const QuadratureSpec& q, int j) {
    return std::polar(static_cast<long double>(q.R), 2 * std::numbers::pi_v<long double> * j / q.n);
}

struct TraceResult {
    cplx value;        // integrated-by-parts form with the principal Log
    cplx value_pp;     // residue form with P'/P
    double difference = 0;
    QuadratureSpec spec;
};

/// sum_j f(x_j) over the roots of P_s by contour quadrature, in both forms.
inline TraceResult trace_contour(const AnalyticFn& fn, const ComplexVec& sigma, const QuadratureSpec& spec) {
    validate_quadrature(spec, sigma);
    const int k = static_cast<int>(sigma.size());
    lcplx a = 0, b = 0;
    for (int j = 0; j < spec.n; ++j) {
        const lcplx zeta = node(spec, j);
        const auto [p, dp] = eval_char_poly(sigma, zeta);
        a += fn.f(zeta) * dp / p * zeta;
        b += fn.df(zeta) * std::log(p / AnalyticFn::ipow(zeta, k)) * zeta;
    }
    const auto n = static_cast<long double>(spec.n);
    TraceResult r;
    r.spec = spec;
    r.value_pp = cplx(a / n);
    r.value = cplx(-b / n + static_cast<long double>(k) * fn.f(0.0L));
    r.difference = std::abs(r.value - r.value_pp);
    return r;
}

inline TraceResult trace_contour(const AnalyticFn& fn, const ComplexVec& sigma) {
    return trace_contour(fn, sigma, default_quadrature(sigma));
}

/// (1/2 pi i) contour integral of zeta^{m+k-1} / P_s(zeta).
inline cplx dn_contour(int m, const ComplexVec& sigma, const QuadratureSpec& spec) {
    validate_quadrature(spec, sigma);
    const int k = static_cast<int>(sigma.size());
    if (m < -k + 1) throw std::invalid_argument("dn_contour: m below -k+1");
    lcplx a = 0;
    for (int j = 0; j < spec.n; ++j) {
        const lcplx zeta = node(spec, j);
        a += AnalyticFn::ipow(zeta, m + k) / eval_char_poly(sigma, zeta).first;
    }
    return cplx(a / static_cast<long double>(spec.n));
}

inline cplx dn_contour(int m, const ComplexVec& sigma) { return dn_contour(m, sigma, default_quadrature(sigma)); }

inline std::vector<double> to_doubles(const std::vector<Rational>& v) {
    std::vector<double> r;
    for (const auto& x : v) r.push_back(x.to_double());
    return r;
}

inline ComplexVec to_complex(const std::vector<double>& v) { return {v.begin(), v.end()}; }

struct FdResult {
    double residual = 0;  // |op[F](s0)| after Richardson extrapolation
    double scale = 1;     // max(1, |F(s0)|)
    double order = 0;     // observed convergence order of the raw residual
    bool pass = false;    // residual <= 1e-6 * scale
};

/// op[F](s0) by central differences (order <= 2) with one Richardson halving.
inline FdResult fd_annihilation_check(const WeylOp& op, const std::function<double(const std::vector<double>&)>& F,
                                      const std::vector<double>& s0, double h) {
    if (op.space().kind != SpaceKind::Sigma) throw std::invalid_argument("fd_annihilation_check: sigma-space operator required");
    if (op.order() > 2) throw std::invalid_argument("fd_annihilation_check: operator order must be <= 2");
    const int k = op.k();
    if (static_cast<int>(s0.size()) != k) throw std::invalid_argument("fd_annihilation_check: point dimension mismatch");
    if (!(h > 0)) throw std::invalid_argument("fd_annihilation_check: step must be positive");
    if (k >= 2) {
        const double delta = discriminant(k).evaluate(s0);
        if (std::abs(delta) < 1e-8)
            throw std::invalid_argument("fd_annihilation_check: point too close to the discriminant locus");
    }
    auto shifted = [&](int i, double di, int j, double dj) {
        std::vector<double> p = s0;
        if (i >= 0) p[static_cast<std::size_t>(i)] += di;
        if (j >= 0) p[static_cast<std::size_t>(j)] += dj;
        return F(p);
    };
    const double f0 = F(s0);
    auto deriv = [&](const Monomial& beta, double hh) {
        std::vector<int> idx;
        for (int i = 0; i < k; ++i)
            for (int e = 0; e < beta[i]; ++e) idx.push_back(i);
        if (idx.empty()) return f0;
        if (idx.size() == 1) return (shifted(idx[0], hh, -1, 0) - shifted(idx[0], -hh, -1, 0)) / (2 * hh);
        if (idx[0] == idx[1]) return (shifted(idx[0], hh, -1, 0) - 2 * f0 + shifted(idx[0], -hh, -1, 0)) / (hh * hh);
        return (shifted(idx[0], hh, idx[1], hh) - shifted(idx[0], hh, idx[1], -hh) - shifted(idx[0], -hh, idx[1], hh) +
                shifted(idx[0], -hh, idx[1], -hh)) /
               (4 * hh * hh);
    };
    auto apply = [&](double hh, bool extrapolate) {
        double acc = 0;
        for (const auto& [beta, c] : op.terms()) {
            const double cv = c.evaluate(s0);
            const double d = extrapolate ? (4 * deriv(beta, hh / 2) - deriv(beta, hh)) / 3 : deriv(beta, hh);
            acc += cv * d;
        }
        return acc;
    };
    FdResult r;
    r.scale = std::max(1.0, std::abs(f0));
    r.residual = std::abs(apply(h, true));
    const double r1 = std::abs(apply(h, false)), r2 = std::abs(apply(h / 2, false));
    r.order = (r1 > 0 && r2 > 0) ? std::log2(r1 / r2) : 0;
    r.pass = r.residual <= 1e-6 * r.scale;
    return r;
}

/// T(f) as a real function of real sigma on a fixed contour (shared by all stencil points).
inline std::function<double(const std::vector<double>&)> trace_function(const AnalyticFn& fn, const QuadratureSpec& spec) {
    return [fn, spec](const std::vector<double>& s) { return trace_contour(fn, to_complex(s), spec).value.real(); };
}

/// The contour for finite differences around s0 with room for the stencil.
inline QuadratureSpec fd_quadrature(const std::vector<double>& s0, double h) {
    std::vector<double> wide = s0;
    for (auto& v : wide) v = std::abs(v) + 2 * h;
    QuadratureSpec q = default_quadrature(to_complex(wide));
    q.n *= 2;
    return q;
}

/// nabla_p[s_h] at s from the roots: sum_j x_j^p / P'(x_j) * ds_h/dx_j.
inline ComplexVec nabla_p_on_sigmas(int p, const ComplexVec& sigma) {
    const auto xs = poly_roots(sigma);
    const std::size_t k = sigma.size();
    ComplexVec out(k, 0.0);
    for (std::size_t j = 0; j < k; ++j) {
        const cplx w = std::pow(xs[j], p) / eval_char_poly(sigma, xs[j]).second;
        // ds_h/dx_j = sum_{q<h} s_{h-q-1} (-x_j)^q
        for (std::size_t h = 1; h <= k; ++h) {
            cplx d = 0;
            for (std::size_t q = 0; q < h; ++q) {
                const std::size_t idx = h - q - 1;
                const cplx sv = idx == 0 ? cplx(1) : sigma[idx - 1];
                d += sv * std::pow(-xs[j], static_cast<int>(q));
            }
            out[h - 1] += w * d;
        }
    }
    return out;
}

}  // namespace symtrace
