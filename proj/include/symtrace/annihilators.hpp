#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "symfun.hpp"
#include "weyl.hpp"

namespace symtrace {

namespace detail {
inline void require_index(const char* what, int v, int lo, int hi) {
    if (v < lo || v > hi)
        throw std::invalid_argument(std::string(what) + ": index " + std::to_string(v) + " outside [" +
                                    std::to_string(lo) + ", " + std::to_string(hi) + "]");
}
inline Poly sig(int k, int h) { return sigma_var(k, h); }
}  // namespace detail

/// A(p,q,i) = d_p d_q - d_{p+i} d_{q-i}.
inline WeylOp op_A(int k, int p, int q, int i) {
    for (int v : {p, q, p + i, q - i}) detail::require_index("op_A", v, 1, k);
    const VarSpace sp = VarSpace::sigma(k);
    return WeylOp::dd(sp, p, q) - WeylOp::dd(sp, p + i, q - i);
}

/// True when p, q, p+1, q-1 all lie in [1, k].
inline bool a_indices_legal(int k, int p, int q) { return p >= 1 && q - 1 >= 1 && p + 1 <= k && q <= k; }

/// T^m = d_1 d_{m-1} + (sum_h s_h d_h) d_m + d_m.
inline WeylOp op_T(int k, int m) {
    detail::require_index("op_T", m, 2, k);
    const VarSpace sp = VarSpace::sigma(k);
    WeylOp r = WeylOp::dd(sp, 1, m - 1) + WeylOp::d(sp, m);
    for (int h = 1; h <= k; ++h) r += WeylOp::dd(sp, h, m).left_mul(detail::sig(k, h));
    return r;
}

/// T_0^mu = sum_{h=0}^{k-1} s_h d_{k-mu-1} d_{h+1} + s_k d_{k-mu} d_k + d_{k-mu}.
inline WeylOp op_T0(int k, int mu) {
    detail::require_index("op_T0", mu, 0, k - 2);
    const VarSpace sp = VarSpace::sigma(k);
    WeylOp r = WeylOp::dd(sp, k - mu, k).left_mul(detail::sig(k, k)) + WeylOp::d(sp, k - mu);
    for (int h = 0; h < k; ++h) r += WeylOp::dd(sp, k - mu - 1, h + 1).left_mul(detail::sig(k, h));
    return r;
}

/// U_0 = sum_h h s_h d_h.
inline WeylOp op_U0(int k) {
    const VarSpace sp = VarSpace::sigma(k);
    WeylOp r(sp);
    for (int h = 1; h <= k; ++h) r += WeylOp::d(sp, h).left_mul(detail::sig(k, h) * Rational(h));
    return r;
}

/// nabla = sum_{h=0}^{k-1} (k-h) s_h d_{h+1}.
inline WeylOp op_nabla(int k) {
    const VarSpace sp = VarSpace::sigma(k);
    WeylOp r(sp);
    for (int h = 0; h < k; ++h) r += WeylOp::d(sp, h + 1).left_mul(detail::sig(k, h) * Rational(k - h));
    return r;
}

enum class Variant { Forms, Primitive };

/// T^m + d_m (forms) or T^m - d_m (primitive).
inline WeylOp op_variants(int k, int m, Variant which) {
    const WeylOp dm = WeylOp::d(VarSpace::sigma(k), (detail::require_index("op_variants", m, 2, k), m));
    return which == Variant::Forms ? op_T(k, m) + dm : op_T(k, m) - dm;
}

struct Generator {
    std::string id;
    WeylOp op;
};

/// A named family of operators. system(k) is the second-order system; forms(k) and primitive(k)
/// replace T^m by its variants.
struct GeneratorSet {
    int k = 0;
    std::vector<Generator> gens;

    static GeneratorSet with_T(int k, const std::function<WeylOp(int)>& t, const std::string& tname) {
        if (k < 1) throw std::invalid_argument("GeneratorSet: k must be >= 1");
        GeneratorSet g;
        g.k = k;
        for (int p = 1; p <= k; ++p)
            for (int q = 1; q <= k; ++q) {
                if (!a_indices_legal(k, p, q)) continue;
                WeylOp a = op_A(k, p, q, 1);
                if (a.is_zero()) continue;
                g.gens.push_back({a_id(p, q), std::move(a)});
            }
        for (int m = 2; m <= k; ++m) g.gens.push_back({tname + "(" + std::to_string(m) + ")", t(m)});
        return g;
    }
    static GeneratorSet system(int k) {
        return with_T(k, [k](int m) { return op_T(k, m); }, "T");
    }
    static GeneratorSet forms(int k) {
        return with_T(k, [k](int m) { return op_variants(k, m, Variant::Forms); }, "Tforms");
    }
    static GeneratorSet primitive(int k) {
        return with_T(k, [k](int m) { return op_variants(k, m, Variant::Primitive); }, "Tprim");
    }

    static std::string a_id(int p, int q) { return "A(" + std::to_string(p) + "," + std::to_string(q) + ",1)"; }

    [[nodiscard]] const WeylOp* find(const std::string& id) const {
        for (const auto& g : gens)
            if (g.id == id) return &g.op;
        return nullptr;
    }
};

enum class FamilyKind { Newton, DNewton, PNewton, Custom };

inline FamilyKind parse_family(const std::string& s) {
    if (s == "newton") return FamilyKind::Newton;
    if (s == "dnewton") return FamilyKind::DNewton;
    if (s == "pnewton") return FamilyKind::PNewton;
    if (s == "custom") return FamilyKind::Custom;
    throw std::invalid_argument("unknown family '" + s + "' (expected newton|dnewton|pnewton|custom)");
}

struct AnnihilationEntry {
    std::string generator;
    int m = 0;
    Poly image;
    bool zero = false;
};

struct AnnihilationReport {
    std::vector<AnnihilationEntry> entries;
    bool pass = true;
    /// First failing entry, if any.
    [[nodiscard]] std::optional<AnnihilationEntry> first_failure() const {
        for (const auto& e : entries)
            if (!e.zero) return e;
        return std::nullopt;
    }
};

/// Applies every generator to every family member with index <= max_m (N_0.., DN_0.., PN_1..; a
/// custom family is indexed by position).
inline AnnihilationReport annihilation_report(const GeneratorSet& ops, FamilyKind family, int max_m,
                                              const std::vector<Poly>& custom = {}) {
    AnnihilationReport rep;
    NewtonFamily fam(ops.k);
    std::vector<std::pair<int, Poly>> members;
    switch (family) {
        case FamilyKind::Newton:
            for (int m = 0; m <= max_m; ++m) members.emplace_back(m, fam.newton(m));
            break;
        case FamilyKind::DNewton:
            for (int m = 0; m <= max_m; ++m) members.emplace_back(m, fam.derived(m));
            break;
        case FamilyKind::PNewton:
            for (int m = 1; m <= max_m; ++m) members.emplace_back(m, fam.primitive(m));
            break;
        case FamilyKind::Custom:
            for (std::size_t i = 0; i < custom.size(); ++i) members.emplace_back(static_cast<int>(i), custom[i]);
            break;
    }
    for (const auto& g : ops.gens)
        for (const auto& [m, f] : members) {
            Poly img = g.op.apply(f);
            const bool z = img.is_zero();
            rep.pass = rep.pass && z;
            rep.entries.push_back({g.id, m, std::move(img), z});
        }
    return rep;
}

}  // namespace symtrace
