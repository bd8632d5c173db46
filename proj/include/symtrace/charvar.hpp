#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "symfun.hpp"

namespace symtrace {

struct MinorId {
    int i = 0, j = 0;
    friend auto operator<=>(const MinorId&, const MinorId&) = default;
    [[nodiscard]] std::string str() const { return "m(" + std::to_string(i) + "," + std::to_string(j) + ")"; }
};

using MinorCombo = std::map<MinorId, Poly>;

namespace cv {
inline Poly eta(int k, int h) { return Poly::var(VarSpace::eta(k), Family::Eta, h); }
inline Poly sig(int k, int h) {
    return h == 0 ? Poly(VarSpace::eta(k), Rational(1)) : Poly::var(VarSpace::eta(k), Family::Sigma, h);
}
}  // namespace cv

/// l_s(eta) = sum_h s_h eta_h.
inline Poly l_sigma(int k) {
    Poly l(VarSpace::eta(k));
    for (int h = 1; h <= k; ++h) l += cv::sig(k, h) * cv::eta(k, h);
    return l;
}

/// Rows (eta_i, eta_{i-1}) of the k x 2 matrix with eta_0 := -l_s(eta).
inline Poly eta_row_entry(int k, int h) { return h == 0 ? -l_sigma(k) : cv::eta(k, h); }

inline Poly minor(int k, int i, int j) {
    if (!(1 <= i && i < j && j <= k)) throw std::invalid_argument("minor: need 1 <= i < j <= k");
    return eta_row_entry(k, i) * eta_row_entry(k, j - 1) - eta_row_entry(k, i - 1) * eta_row_entry(k, j);
}

struct MinorSet {
    int k = 0;
    std::vector<std::pair<MinorId, Poly>> entries;

    [[nodiscard]] const Poly& at(MinorId id) const {
        for (const auto& [m, p] : entries)
            if (m == id) return p;
        throw std::out_of_range("MinorSet: no minor " + id.str());
    }
};

/// All 2x2 minors, ordered by (i, j).
inline MinorSet minors(int k) {
    if (k < 2) throw std::invalid_argument("minors: k must be >= 2");
    MinorSet s;
    s.k = k;
    for (int i = 1; i <= k; ++i)
        for (int j = i + 1; j <= k; ++j) s.entries.emplace_back(MinorId{i, j}, minor(k, i, j));
    return s;
}

/// Generator whose symbol is +-minor: m(1,j) = symbol T(j); m(i,j) = -symbol A(i-1,j,1) for i >= 2.
inline std::pair<std::string, int> minor_generator(MinorId id) {
    if (id.i == 1) return {"T(" + std::to_string(id.j) + ")", 1};
    return {"A(" + std::to_string(id.i - 1) + "," + std::to_string(id.j) + ",1)", -1};
}

inline Poly recombine(const MinorCombo& c, int k) {
    Poly r(VarSpace::eta(k));
    for (const auto& [id, coef] : c) r += coef * minor(k, id.i, id.j);
    return r;
}

inline void accumulate(MinorCombo& into, const MinorCombo& from, const Poly& factor) {
    for (const auto& [id, c] : from) {
        auto [it, fresh] = into.try_emplace(id, c.space());
        it->second += c * factor;
        if (it->second.is_zero()) into.erase(it);
    }
}

/// eta_i eta_j = sum_a u_a m_a + eta_k v with u free of eta and v linear in eta.
struct EtaRewrite {
    MinorCombo coeffs;
    Poly v;
};

/// Memoised rewriting for one k. Each step raises the larger index, so the recursion ends at k.
class EtaRewriter {
public:
    explicit EtaRewriter(int k) : k_(k) {
        if (k < 1) throw std::invalid_argument("rewrite_eta_product: k must be >= 1");
    }

    const EtaRewrite& get(int i, int j) {
        if (i < 1 || i > k_ || j < 1 || j > k_) throw std::invalid_argument("rewrite_eta_product: index outside [1, k]");
        const int lo = std::min(i, j), hi = std::max(i, j);
        if (auto it = memo_.find({lo, hi}); it != memo_.end()) return it->second;
        EtaRewrite r{{}, Poly(VarSpace::eta(k_))};
        if (hi == k_) {
            r.v = cv::eta(k_, lo);
        } else if (lo == 1) {
            // eta_1 eta_h = m(1,h+1) - sum_p s_p eta_p eta_{h+1}
            r.coeffs.emplace(MinorId{1, hi + 1}, Poly(VarSpace::eta(k_), Rational(1)));
            for (int p = 1; p <= k_; ++p) {
                const EtaRewrite& sub = get(p, hi + 1);
                const Poly f = -cv::sig(k_, p);
                accumulate(r.coeffs, sub.coeffs, f);
                r.v += sub.v * f;
            }
        } else {
            // eta_j eta_h = m(j,h+1) + eta_{j-1} eta_{h+1}
            r.coeffs.emplace(MinorId{lo, hi + 1}, Poly(VarSpace::eta(k_), Rational(1)));
            const EtaRewrite& sub = get(lo - 1, hi + 1);
            accumulate(r.coeffs, sub.coeffs, Poly(VarSpace::eta(k_), Rational(1)));
            r.v += sub.v;
        }
        return memo_.emplace(std::make_pair(lo, hi), std::move(r)).first->second;
    }

private:
    int k_;
    std::map<std::pair<int, int>, EtaRewrite> memo_;
};

inline EtaRewrite rewrite_eta_product(int k, int i, int j) {
    EtaRewriter rw(k);
    return rw.get(i, j);
}

/// Pulls f back along the chart eta_h = t^{k-h}, s_k = -(t^k + sum_{h<k} s_h t^{k-h}).
inline Poly z_chart_pullback(const Poly& f) {
    if (f.space().kind != SpaceKind::Eta) throw std::invalid_argument("vanishes_on_Z: expected a (sigma, eta) polynomial");
    const int k = f.space().k;
    const VarSpace mx = VarSpace::mixed(k);
    const Poly t = Poly::var(mx, Family::T);
    std::vector<Poly> images;
    Poly sk = -t.pow(static_cast<unsigned>(k));
    for (int h = 1; h < k; ++h) sk -= Poly::var(mx, Family::Sigma, h) * t.pow(static_cast<unsigned>(k - h));
    for (int h = 1; h <= k; ++h) images.push_back(h < k ? Poly::var(mx, Family::Sigma, h) : sk);
    for (int h = 1; h <= k; ++h) images.push_back(t.pow(static_cast<unsigned>(k - h)));
    return f.compose(mx, images);
}

/// eta-homogeneous parts of f, keyed by eta-degree.
inline std::map<int, Poly> eta_parts(const Poly& f) {
    const int k = f.space().k;
    const int from = f.space().require(Family::Eta, 1);
    return f.split_by_degree(from, from + k);
}

/// Decides whether f vanishes identically on the characteristic variety Z.
inline bool vanishes_on_Z(const Poly& f) {
    for (const auto& [d, part] : eta_parts(f))
        if (!z_chart_pullback(part).is_zero()) return false;
    return true;
}

/// f = sum c_a m_a for an f vanishing on Z, following the descent eta_k-part / rewrite / divide.
inline MinorCombo decompose_in_minors(const Poly& f) {
    if (f.space().kind != SpaceKind::Eta) throw std::invalid_argument("decompose_in_minors: expected a (sigma, eta) polynomial");
    const int k = f.space().k;
    if (!vanishes_on_Z(f)) throw std::invalid_argument("decompose_in_minors: polynomial does not vanish on Z");
    const VarSpace es = f.space();
    const int e0 = es.require(Family::Eta, 1);
    const int ek = es.require(Family::Eta, k);
    EtaRewriter rw(k);

    // Homogeneous descent on one part.
    std::function<MinorCombo(const Poly&, int)> descend = [&](const Poly& g, int d) -> MinorCombo {
        if (g.is_zero()) return {};
        if (d <= 1)
            throw std::logic_error("decompose_in_minors: nonzero remainder of eta-degree " + std::to_string(d) +
                                   " vanishing on Z");
        MinorCombo out;
        Poly quotient(es);  // g - sum h_a m_a = eta_k * quotient
        for (const auto& [m, c] : g.terms()) {
            if (m[ek] > 0) {
                Monomial rest = m;
                rest.set(ek, m[ek] - 1);
                quotient.add_term(rest, c);
                continue;
            }
            // split off the two smallest eta indices
            int i = -1, j = -1;
            Monomial rest = m;
            for (int p = e0; p < e0 + k && j < 0; ++p)
                while (rest[p] > 0 && j < 0) {
                    rest.set(p, rest[p] - 1);
                    (i < 0 ? i : j) = p - e0 + 1;
                }
            const EtaRewrite& r = rw.get(i, j);
            const Poly cofactor = Poly::monomial(es, rest, c);
            accumulate(out, r.coeffs, cofactor);
            quotient += r.v * cofactor;
        }
        accumulate(out, descend(quotient, d - 1), cv::eta(k, k));
        return out;
    };

    MinorCombo total;
    for (const auto& [d, part] : eta_parts(f)) {
        if (d <= 1 && !part.is_zero())
            throw std::invalid_argument("decompose_in_minors: nonzero part of eta-degree " + std::to_string(d));
        accumulate(total, descend(part, d), Poly(es, Rational(1)));
    }
    if (!(recombine(total, k) == f)) throw std::logic_error("decompose_in_minors: recombination mismatch");
    return total;
}

/// A point of Z from the chart zeta_0 = 1, zeta_1 = t: eta_h = t^{k-h}, s_h = (-1)^h sigma_h.
struct ZPoint {
    std::vector<Rational> sigma;
    std::vector<Rational> eta;
    std::vector<Rational> s;
    Rational zeta0{1};
    Rational zeta1;
};

inline ZPoint z_point(int k, const Rational& t, const std::vector<Rational>& s_head) {
    if (t.is_zero()) throw std::invalid_argument("z_point: t must be nonzero");
    if (static_cast<int>(s_head.size()) != k - 1) throw std::invalid_argument("z_point: need k-1 free parameters");
    ZPoint z;
    z.zeta1 = t;
    Rational sk = -pow(t, static_cast<unsigned>(k));
    for (int h = 1; h < k; ++h) {
        z.s.push_back(s_head[static_cast<std::size_t>(h - 1)]);
        z.sigma.push_back(sign_power(h) * s_head[static_cast<std::size_t>(h - 1)]);
        sk -= z.sigma.back() * pow(t, static_cast<unsigned>(k - h));
    }
    z.sigma.push_back(sk);
    z.s.push_back(sign_power(k) * sk);
    for (int h = 1; h <= k; ++h) z.eta.push_back(pow(t, static_cast<unsigned>(k - h)));
    return z;
}

/// n points with integer parameters in [-10, 10] (t != 0) drawn from mt19937_64(seed). The draw uses
/// a plain modulus so the sequence is identical across standard libraries.
inline std::vector<ZPoint> sample_z_points(int k, std::uint64_t seed, int n) {
    if (n < 1) throw std::invalid_argument("sample_z_points: n must be >= 1");
    if (k < 2) throw std::invalid_argument("sample_z_points: k must be >= 2");
    std::mt19937_64 rng(seed);
    auto draw = [&] { return static_cast<long>(rng() % 21) - 10; };
    std::vector<ZPoint> out;
    while (static_cast<int>(out.size()) < n) {
        const long t = draw();
        std::vector<Rational> head;
        for (int h = 1; h < k; ++h) head.emplace_back(draw());
        if (t == 0) continue;
        out.push_back(z_point(k, Rational(t), head));
    }
    return out;
}

/// (sigma, eta) coordinates of a point, in the variable order of eta(k).
inline std::vector<Rational> coordinates(const ZPoint& z) {
    std::vector<Rational> v = z.sigma;
    v.insert(v.end(), z.eta.begin(), z.eta.end());
    return v;
}

inline Rational eval_P(const std::vector<Rational>& sigma, const Rational& z) {
    const int k = static_cast<int>(sigma.size());
    Rational r = pow(z, static_cast<unsigned>(k));
    for (int h = 1; h <= k; ++h) r += sign_power(h) * sigma[static_cast<std::size_t>(h - 1)] * pow(z, static_cast<unsigned>(k - h));
    return r;
}

inline Rational eval_dP(const std::vector<Rational>& sigma, const Rational& z) {
    const int k = static_cast<int>(sigma.size());
    Rational r = Rational(k) * pow(z, static_cast<unsigned>(k - 1));
    for (int h = 1; h < k; ++h)
        r += sign_power(h) * sigma[static_cast<std::size_t>(h - 1)] * Rational(k - h) * pow(z, static_cast<unsigned>(k - h - 1));
    return r;
}

/// sum_h Theta_h(z, s) eta_h with eta_h = a^{h-1}, against its closed forms.
struct ContractionCheck {
    Rational lhs;
    Rational rhs;        // closed form confirmed by expansion
    Rational displayed_rhs;  // reference closed form
    bool holds = false;
    bool displayed_holds = false;
};

inline ContractionCheck theta_contraction(const std::vector<Rational>& sigma, const Rational& a, const Rational& z) {
    if (a.is_zero()) throw std::invalid_argument("theta_contraction_check: a must be nonzero");
    const int k = static_cast<int>(sigma.size());
    if (k < 1) throw std::invalid_argument("theta_contraction_check: empty sigma");
    auto s = [&](int p) { return p == 0 ? Rational(1) : sigma[static_cast<std::size_t>(p - 1)]; };
    ContractionCheck c;
    for (int h = 1; h <= k; ++h) {
        Rational th(0);
        for (int p = 0; p < h; ++p) th += pow(-z, static_cast<unsigned>(h - p - 1)) * s(p);
        c.lhs += th * pow(a, static_cast<unsigned>(h - 1));
    }
    const Rational one_az = Rational(1) + a * z;
    if (!one_az.is_zero()) {
        const Rational f = pow(-a, static_cast<unsigned>(k)) / one_az * (eval_P(sigma, z) - eval_P(sigma, Rational(-1) / a));
        c.rhs = -f;
        c.displayed_rhs = f;
    } else {
        c.rhs = eval_dP(sigma, z) / pow(z, static_cast<unsigned>(k - 1));
        c.displayed_rhs = eval_dP(sigma, z) / pow(z, static_cast<unsigned>(k));
    }
    c.holds = c.lhs == c.rhs;
    c.displayed_holds = c.lhs == c.displayed_rhs;
    return c;
}

inline bool theta_contraction_check(const std::vector<Rational>& sigma, const Rational& a, const Rational& z) {
    return theta_contraction(sigma, a, z).holds;
}

}  // namespace symtrace
