#pragma once

#include <optional>
#include <regex>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "annihilators.hpp"
#include "charvar.hpp"
#include "json_io.hpp"

namespace symtrace {

/// input = sum cofactor * generator + remainder.
struct MembershipCertificate {
    int k = 0;
    bool member = false;
    int newton_bound = 0;
    std::optional<int> failing_index;  // first N_m not annihilated
    std::vector<std::pair<std::string, WeylOp>> entries;
    WeylOp remainder;
};

/// Raised when an operator kills every tested N_m but its symbol is off Z (or a low-order
/// remainder survives); the message carries the witness.
class DescentContradiction : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Builds the generator named "A(p,q,1)" or "T(m)".
inline WeylOp generator_by_id(int k, const std::string& id) {
    static const std::regex a_re(R"(A\((\d+),(\d+),1\))"), t_re(R"(T\((\d+)\))");
    std::smatch m;
    if (std::regex_match(id, m, a_re)) {
        const int p = std::stoi(m[1]), q = std::stoi(m[2]);
        if (!a_indices_legal(k, p, q)) throw std::invalid_argument("generator " + id + " not defined for k=" + std::to_string(k));
        return op_A(k, p, q, 1);
    }
    if (std::regex_match(id, m, t_re)) return op_T(k, std::stoi(m[1]));
    throw std::invalid_argument("unknown generator id '" + id + "'");
}

/// sum_b c_b(s) eta^b -> sum_b c_b(s) d^b.
inline WeylOp lift_eta_coefficient(const Poly& c, int k) {
    const VarSpace es = VarSpace::eta(k), ss = VarSpace::sigma(k);
    const int e0 = es.require(Family::Eta, 1);
    WeylOp r(ss);
    for (const auto& [m, coef] : c.terms()) {
        Monomial beta(k), sm(k);
        for (int h = 0; h < k; ++h) {
            beta.set(h, m[e0 + h]);
            sm.set(h, m[es.require(Family::Sigma, h + 1)]);
        }
        r.add_term(beta, Poly::monomial(ss, sm, coef));
    }
    return r;
}

inline int default_newton_bound(const WeylOp& p, int k) { return std::max(p.order(), 0) + 2 * k + 4; }

/// Symbol descent modulo the second-order system.
inline MembershipCertificate reduce_modulo_system(const WeylOp& p, int k, std::optional<int> newton_bound = std::nullopt) {
    if (p.space() != VarSpace::sigma(k)) throw std::invalid_argument("reduce_modulo_system: operator must live in sigma(" + std::to_string(k) + ")");
    if (p.is_zero()) throw std::invalid_argument("reduce_modulo_system: zero operator");
    if (k < 2) throw std::invalid_argument("reduce_modulo_system: k must be >= 2");
    MembershipCertificate cert;
    cert.k = k;
    cert.newton_bound = newton_bound.value_or(default_newton_bound(p, k));
    cert.remainder = p;
    NewtonFamily fam(k);
    for (int m = 0; m <= cert.newton_bound; ++m)
        if (!p.apply(fam.newton(m)).is_zero()) {
            cert.failing_index = m;
            return cert;
        }

    std::map<std::string, WeylOp> cof;
    WeylOp cur = p;
    while (!cur.is_zero()) {
        const int d = cur.order();
        if (d <= 1)
            throw DescentContradiction("order-" + std::to_string(d) + " remainder kills N_0..N_" +
                                       std::to_string(cert.newton_bound) + " but is nonzero: " + cur.str());
        const Poly sym = cur.symbol();
        if (!vanishes_on_Z(sym))
            throw DescentContradiction("symbol " + sym.str() +
                                       " does not vanish on Z (Newton bound too low?)");
        for (const auto& [id, c] : decompose_in_minors(sym)) {
            const auto [gen, sign] = minor_generator(id);
            const WeylOp q = lift_eta_coefficient(c, k) * Rational(sign);
            cur -= q * generator_by_id(k, gen);
            auto [it, fresh] = cof.try_emplace(gen, VarSpace::sigma(k));
            it->second += q;
        }
        if (!cur.is_zero() && cur.order() >= d)
            throw std::logic_error("reduce_modulo_system: order did not drop at order " + std::to_string(d));
    }
    for (auto& [gen, q] : cof)
        if (!q.is_zero()) cert.entries.emplace_back(gen, std::move(q));
    cert.remainder = cur;
    cert.member = true;
    return cert;
}

inline bool verify_certificate(const WeylOp& p, const MembershipCertificate& cert, int k) {
    try {
        WeylOp sum = cert.remainder;
        for (const auto& [gen, q] : cert.entries) sum += q * generator_by_id(k, gen);
        return sum == p;
    } catch (const std::exception&) {
        return false;
    }
}

/// Membership in the left ideal of W_1 generated by d_{x_i} d_{x_j}, i != j.
inline bool trace_characterization_x(int k, const WeylOp& p) {
    if (p.space() != VarSpace::x(k)) throw std::invalid_argument("trace_characterization_x: operator must live in x(" + std::to_string(k) + ")");
    for (const auto& [beta, c] : p.terms()) {
        int active = 0;
        for (int i = 0; i < k; ++i) active += beta[i] > 0;
        if (active < 2) return false;
    }
    return true;
}

inline json to_json(const MembershipCertificate& c) {
    json j;
    j["schema"] = kSchema;
    j["k"] = c.k;
    j["member"] = c.member;
    j["newton_bound"] = c.newton_bound;
    if (c.failing_index) j["failing_index"] = *c.failing_index;
    j["entries"] = json::array();
    for (const auto& [gen, q] : c.entries) j["entries"].push_back({{"generator", gen}, {"cofactor", to_json(q)}});
    j["remainder"] = to_json(c.remainder);
    return j;
}

inline MembershipCertificate certificate_from_json(const json& j) {
    MembershipCertificate c;
    try {
        c.k = j.at("k").get<int>();
        c.member = j.at("member").get<bool>();
        c.newton_bound = j.at("newton_bound").get<int>();
        if (j.contains("failing_index")) c.failing_index = j.at("failing_index").get<int>();
        for (const auto& e : j.at("entries")) c.entries.emplace_back(e.at("generator").get<std::string>(), weylop_from_json(e.at("cofactor")));
        c.remainder = weylop_from_json(j.at("remainder"));
    } catch (const json::exception& e) {
        throw FormatError(std::string("certificate: ") + e.what());
    }
    return c;
}

}  // namespace symtrace
