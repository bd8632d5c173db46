#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace symtrace {

/// Families of indexed variables. Variable order inside a space is by (family, index).
enum class Family : std::uint8_t { X, Sigma, Eta, Xi, T };

/// The variable spaces polynomials and operators live in.
///   X(k)      x1..xk
///   Sigma(k)  s1..sk
///   Eta(k)    s1..sk, eta1..etak      (cotangent coordinates over sigma-space)
///   Xi(k)     x1..xk, xi1..xik        (cotangent coordinates over x-space)
///   Mixed(k)  s1..sk, eta1..etak, t   (chart / auxiliary variable t, also used as z)
///   Aux       t
enum class SpaceKind : std::uint8_t { X, Sigma, Eta, Xi, Mixed, Aux };

inline constexpr int kMaxVars = 24;
inline constexpr int kMaxK = 10;

struct VarSpace {
    SpaceKind kind = SpaceKind::Sigma;
    int k = 0;

    static VarSpace x(int k) { return make(SpaceKind::X, k); }
    static VarSpace sigma(int k) { return make(SpaceKind::Sigma, k); }
    static VarSpace eta(int k) { return make(SpaceKind::Eta, k); }
    static VarSpace xi(int k) { return make(SpaceKind::Xi, k); }
    static VarSpace mixed(int k) { return make(SpaceKind::Mixed, k); }
    static VarSpace aux() { return VarSpace{SpaceKind::Aux, 1}; }

    static VarSpace make(SpaceKind kind, int k) {
        if (kind != SpaceKind::Aux && (k < 1 || k > kMaxK))
            throw std::invalid_argument("VarSpace: k must lie in [1, " + std::to_string(kMaxK) + "], got " +
                                        std::to_string(k));
        return VarSpace{kind, kind == SpaceKind::Aux ? 1 : k};
    }

    [[nodiscard]] std::vector<Family> families() const {
        switch (kind) {
            case SpaceKind::X: return {Family::X};
            case SpaceKind::Sigma: return {Family::Sigma};
            case SpaceKind::Eta: return {Family::Sigma, Family::Eta};
            case SpaceKind::Xi: return {Family::X, Family::Xi};
            case SpaceKind::Mixed: return {Family::Sigma, Family::Eta, Family::T};
            case SpaceKind::Aux: return {Family::T};
        }
        return {};
    }

    [[nodiscard]] int family_size(Family f) const { return f == Family::T ? 1 : k; }

    [[nodiscard]] int nvars() const {
        int n = 0;
        for (auto f : families()) n += family_size(f);
        return n;
    }

    [[nodiscard]] bool has(Family f) const {
        for (auto g : families())
            if (g == f) return true;
        return false;
    }

    /// Position of variable `index` (1-based; ignored for T) of family `f`, or -1.
    [[nodiscard]] int position(Family f, int index = 1) const {
        int off = 0;
        for (auto g : families()) {
            const int n = family_size(g);
            if (g == f) {
                if (index < 1 || index > n) return -1;
                return off + index - 1;
            }
            off += n;
        }
        return -1;
    }

    [[nodiscard]] int require(Family f, int index = 1) const {
        const int p = position(f, index);
        if (p < 0)
            throw std::invalid_argument("VarSpace " + name() + ": no variable " + family_prefix(f) +
                                        std::to_string(index));
        return p;
    }

    /// (family, 1-based index) of the variable at position `pos`.
    [[nodiscard]] std::pair<Family, int> variable(int pos) const {
        int off = 0;
        for (auto g : families()) {
            const int n = family_size(g);
            if (pos < off + n) return {g, pos - off + 1};
            off += n;
        }
        throw std::out_of_range("VarSpace: variable position out of range");
    }

    static std::string family_prefix(Family f) {
        switch (f) {
            case Family::X: return "x";
            case Family::Sigma: return "s";
            case Family::Eta: return "eta";
            case Family::Xi: return "xi";
            case Family::T: return "t";
        }
        return "?";
    }

    [[nodiscard]] std::string var_name(int pos) const {
        auto [f, i] = variable(pos);
        return f == Family::T ? "t" : family_prefix(f) + std::to_string(i);
    }

    /// Quasi-homogeneous weight of a variable: x -> 1, s_h -> h, eta_h -> -h, xi -> -1, t -> 1.
    [[nodiscard]] int var_weight(int pos) const {
        auto [f, i] = variable(pos);
        switch (f) {
            case Family::X: return 1;
            case Family::Sigma: return i;
            case Family::Eta: return -i;
            case Family::Xi: return -1;
            case Family::T: return 1;
        }
        return 0;
    }

    [[nodiscard]] std::string name() const {
        switch (kind) {
            case SpaceKind::X: return "x(" + std::to_string(k) + ")";
            case SpaceKind::Sigma: return "sigma(" + std::to_string(k) + ")";
            case SpaceKind::Eta: return "eta(" + std::to_string(k) + ")";
            case SpaceKind::Xi: return "xi(" + std::to_string(k) + ")";
            case SpaceKind::Mixed: return "mixed(" + std::to_string(k) + ")";
            case SpaceKind::Aux: return "aux";
        }
        return "?";
    }

    static VarSpace parse(const std::string& s) {
        if (s == "aux") return aux();
        const auto lp = s.find('(');
        const auto rp = s.find(')');
        if (lp == std::string::npos || rp == std::string::npos || rp < lp + 2 || rp + 1 != s.size())
            throw std::invalid_argument("VarSpace: cannot parse '" + s + "'");
        const std::string head = s.substr(0, lp);
        int k = 0;
        try {
            k = std::stoi(s.substr(lp + 1, rp - lp - 1));
        } catch (const std::exception&) {
            throw std::invalid_argument("VarSpace: bad k in '" + s + "'");
        }
        if (head == "x") return x(k);
        if (head == "sigma") return sigma(k);
        if (head == "eta") return eta(k);
        if (head == "xi") return xi(k);
        if (head == "mixed") return mixed(k);
        throw std::invalid_argument("VarSpace: unknown kind '" + head + "'");
    }

    friend bool operator==(const VarSpace&, const VarSpace&) = default;
};

}  // namespace symtrace
