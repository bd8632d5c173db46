#pragma once

#include <filesystem>
#include <optional>
#include <random>
#include <set>
#include <string>

#include "annihilators.hpp"
#include "charvar.hpp"
#include "membership.hpp"
#include "report.hpp"
#include "transport.hpp"

namespace symtrace {

namespace suites {

inline int default_max_m(int k) { return 2 * k + 6; }

inline Poly s(int k, int h) { return sigma_var(k, h); }

/// The displayed PN_3 and PN_4 (valid for k >= m).
inline Poly displayed_pn(int k, int m) {
    switch (m) {
        case 1: return -s(k, 1);
        case 2: return s(k, 1).pow(2) * Rational(1, 2) + s(k, 2);
        case 3: return s(k, 1).pow(3) * Rational(1, 6) - s(k, 1) * s(k, 2) + s(k, 3);
        case 4:
            return -s(k, 4) - s(k, 1) * s(k, 3) - s(k, 2).pow(2) * Rational(1, 2) + s(k, 1).pow(2) * s(k, 2) * Rational(1, 2) -
                   s(k, 1).pow(4) * Rational(1, 12);
        default: throw std::invalid_argument("displayed_pn: m must lie in [1, 4]");
    }
}

inline void annihilation_checks(RunReport& rep, const std::string& prefix, const GeneratorSet& gens, FamilyKind family,
                                int max_m, const std::vector<Poly>& custom = {}) {
    for (const auto& g : gens.gens) {
        GeneratorSet one{gens.k, {g}};
        const auto r = annihilation_report(one, family, max_m, custom);
        std::string detail;
        int bad = 0;
        for (const auto& e : r.entries)
            if (!e.zero) {
                if (bad++ < 4) detail += (detail.empty() ? "" : "; ") + ("m=" + std::to_string(e.m) + " -> " + e.image.str());
            }
        if (bad > 4) detail += "; +" + std::to_string(bad - 4) + " more";
        rep.add(prefix + "/" + g.id, r.pass, detail);
    }
}

inline WeylOp sigma_times(int k, int h, const WeylOp& a) { return a.left_mul(s(k, h)); }

inline void system_suite(RunReport& rep, int k, int max_m) {
    annihilation_checks(rep, "annihilate/newton", GeneratorSet::system(k), FamilyKind::Newton, max_m);
    if (k <= 4) {
        NewtonFamily fam(k);
        for (int h = 2; h <= k; ++h) {
            const WeylOp xi = xi_transport(elementary_symmetric_op(k, h));
            std::string detail;
            bool ok = true;
            for (int m = 0; m <= max_m && ok; ++m) {
                const Poly img = xi.apply(fam.newton(m));
                if (!img.is_zero()) {
                    ok = false;
                    detail = "m=" + std::to_string(m) + " -> " + img.str();
                }
            }
            rep.add("annihilate/newton/Xi(S" + std::to_string(h) + ")", ok, detail);
        }
    }
}

inline void relations_suite(RunReport& rep, int k) {
    const VarSpace sp = VarSpace::sigma(k);
    auto dd = [&](int i, int j) { return WeylOp::dd(sp, i, j); };
    auto d = [&](int i) { return WeylOp::d(sp, i); };

    bool ok = true;
    std::string detail;
    for (int m = 2; m <= k; ++m)
        for (int h = 1; h <= k; ++h)
            if (!(commutator(d(h), op_T(k, m)) == dd(m, h)) && ok) {
                ok = false;
                detail = "h=" + std::to_string(h) + " m=" + std::to_string(m);
            }
    rep.add("relation/partial-T", ok, detail);

    ok = true;
    detail.clear();
    for (int p = 1; p <= k; ++p)
        for (int q = 1; q <= k; ++q)
            for (int i = 0; p + i + 1 <= k && q - i - 1 >= 1; ++i)
                if (!(op_A(k, p, q, i + 1) == op_A(k, p, q, i) + op_A(k, p + i, q - i, 1)) && ok) {
                    ok = false;
                    detail = "p=" + std::to_string(p) + " q=" + std::to_string(q) + " i=" + std::to_string(i);
                }
    rep.add("relation/A-shift", ok, detail);

    // T^m against T0^{k-m} and sigma_h A(h,m,1), both signs.
    bool plus_ok = true, minus_ok = true;
    std::string minus_detail;
    for (int m = 2; m <= k; ++m) {
        WeylOp corr(sp);
        for (int h = 1; h <= k - 1; ++h) corr += sigma_times(k, h, op_A(k, h, m, 1));
        plus_ok = plus_ok && op_T(k, m) == op_T0(k, k - m) + corr;
        if (!(op_T(k, m) == op_T0(k, k - m) - corr) && minus_ok) {
            minus_ok = false;
            minus_detail = "displayed T^m = T0^{k-m} - sum s_h A(h,m,1) fails at m=" + std::to_string(m) +
                           "; normal form forces + sum s_h A(h,m,1)";
        }
    }
    rep.add("relation/T-from-T0", plus_ok);
    rep.display("relation/T-from-T0/display-sign", minus_ok, minus_detail);

    const WeylOp nab = op_nabla(k);
    ok = true;
    detail.clear();
    for (int h = 1; h <= k - 1; ++h)
        if (!(commutator(nab, d(h)) == d(h + 1) * Rational(-(k - h))) && ok) {
            ok = false;
            detail = "h=" + std::to_string(h);
        }
    rep.add("relation/nabla-partial", ok, detail);

    bool corrected = true, bare = true;
    std::string bare_detail;
    for (int h = 2; h <= k; ++h) {
        WeylOp main(sp);
        if (h < k) main = op_T(k, h + 1) * Rational(-(k - h));
        const WeylOp lhs = commutator(nab, op_T(k, h));
        corrected = corrected && lhs == main + op_A(k, 1, h, 1) * Rational(k - 1);
        if (h < k && !(lhs == main) && bare) {
            bare = false;
            bare_detail = "displayed [nabla,T^h] = -(k-h) T^{h+1} misses (k-1) A(1,h,1), first at h=" + std::to_string(h);
        }
    }
    rep.add("relation/nabla-T", corrected);
    rep.display("relation/nabla-T/display", bare, bare_detail);

    ok = true;
    detail.clear();
    for (int p = 1; p <= k; ++p)
        for (int q = 1; q <= k; ++q) {
            if (!a_indices_legal(k, p, q)) continue;
            WeylOp rhs(sp);
            if (k - p - 1 != 0 && a_indices_legal(k, p + 1, q)) rhs += op_A(k, p + 1, q, 1) * Rational(-(k - p - 1));
            if (k - q != 0 && a_indices_legal(k, p, q + 1)) rhs += op_A(k, p, q + 1, 1) * Rational(-(k - q));
            if (!(commutator(nab, op_A(k, p, q, 1)) == rhs) && ok) {
                ok = false;
                detail = "p=" + std::to_string(p) + " q=" + std::to_string(q);
            }
        }
    rep.add("relation/nabla-A", ok, detail);
}

inline void u0_display_check(RunReport& rep, int k) {
    const WeylOp u0 = op_U0(k);
    bool agrees = true;
    std::string detail;
    for (const auto& g : GeneratorSet::system(k).gens) {
        if (g.id[0] != 'A') continue;
        const int w = -g.op.weight().value;
        const WeylOp shifted = u0 - WeylOp::constant(u0.space(), Rational(w));
        if (!(g.op * u0 == shifted * g.op) && agrees) {
            agrees = false;
            detail = "displayed A.U0 = (U0 - (p+q)).A fails for " + g.id + "; normal form gives (U0 + (p+q)).A";
        }
    }
    rep.display("weight/A-U0/display", agrees, detail);
}

inline void weights_suite(RunReport& rep, int k, int max_m) {
    const WeylOp u0 = op_U0(k);
    for (const auto& g : GeneratorSet::system(k).gens) {
        const auto w = g.op.weight();
        if (!w.is_pure()) {
            rep.add("weight/pure/" + g.id, false, "not pure");
            continue;
        }
        int expected = 0;
        if (g.id[0] == 'T') expected = -std::stoi(g.id.substr(2));
        else {
            const auto comma = g.id.find(',');
            expected = -(std::stoi(g.id.substr(2, comma - 2)) + std::stoi(g.id.substr(comma + 1)));
        }
        rep.add("weight/pure/" + g.id, w.value == expected, "weight " + std::to_string(w.value));
        rep.add("weight/U0-commutator/" + g.id, commutator(g.op, u0) == g.op * Rational(-w.value));
        const WeylOp stab = g.op * u0 - (u0 + WeylOp::constant(u0.space(), Rational(-w.value))) * g.op;
        rep.add("weight/U0-stability/" + g.id, stab.is_zero());
    }
    rep.add("weight/nabla-U0", commutator(op_nabla(k), u0) == op_nabla(k));
    NewtonFamily fam(k);
    bool ok = true;
    for (int m = 0; m <= max_m; ++m) ok = ok && u0.apply(fam.newton(m)) == fam.newton(m) * Rational(m);
    rep.add("weight/U0-newton", ok);
    u0_display_check(rep, k);
}

inline void forms_suite(RunReport& rep, int k, int max_m) {
    annihilation_checks(rep, "annihilate/dnewton", GeneratorSet::forms(k), FamilyKind::DNewton, max_m);
    NewtonFamily fam(k);
    const VarSpace sp = VarSpace::sigma(k);
    bool seeds = fam.derived(0) == Poly(sp, Rational(1));
    for (int m = -k + 1; m <= -1; ++m) seeds = seeds && fam.derived(m).is_zero();
    rep.add("dnewton/seeds", seeds);
    bool rec = true;
    for (int m = 1; m <= max_m; ++m) {
        Poly acc = fam.derived(m);
        for (int h = 1; h <= k; ++h)
            if (m - h >= -k + 1) acc += s(k, h) * fam.derived(m - h) * sign_power(h);
        rec = rec && acc.is_zero();
    }
    rep.add("dnewton/recurrence", rec);
    bool grad = true;
    std::string detail;
    for (int m = 1; m <= max_m; ++m)
        for (int h = 1; h <= k; ++h) {
            const Poly expect = m - h >= -k + 1 ? fam.derived(m - h) * (sign_power(h - 1) * Rational(m)) : Poly(sp);
            if (!(fam.newton(m).partial(Family::Sigma, h) == expect) && grad) {
                grad = false;
                detail = "m=" + std::to_string(m) + " h=" + std::to_string(h);
            }
        }
    rep.add("newton/gradient", grad, detail);
}

inline void primitive_suite(RunReport& rep, int k, int max_m) {
    std::vector<Poly> sigmas;
    for (int p = 1; p <= k; ++p) sigmas.push_back(s(k, p));
    annihilation_checks(rep, "annihilate/sigma", GeneratorSet::primitive(k), FamilyKind::Custom, 0, sigmas);
    annihilation_checks(rep, "annihilate/pnewton", GeneratorSet::primitive(k), FamilyKind::PNewton, max_m);

    NewtonFamily fam(k);
    const VarSpace sp = VarSpace::sigma(k);
    bool computed = true, displayed = true;
    std::string detail;
    for (int m = 1; m <= max_m; ++m)
        for (int p = 1; p <= k; ++p) {
            const Poly grad = fam.primitive(m).partial(Family::Sigma, p);
            Poly want(sp), shown(sp);
            if (m > p) {
                want = fam.newton(m - p) * (sign_power(p - 1) / Rational(m - p));
                shown = fam.newton(m - p) * (sign_power(m - p) / Rational(m - p));
            } else if (m == p) {
                want = Poly(sp, sign_power(p));
                shown = Poly(sp, Rational(1));
            }
            computed = computed && grad == want;
            if (!(grad == shown) && displayed) {
                displayed = false;
                detail = "displayed d_p PN_m = (-1)^{m-p} N_{m-p}/(m-p) fails at m=" + std::to_string(m) +
                         " p=" + std::to_string(p) + "; computed sign is (-1)^{p-1} (m > p), (-1)^p (m = p)";
            }
        }
    rep.add("pnewton/gradient", computed);
    rep.display("pnewton/gradient/display-sign", displayed, detail);
    for (int m = 1; m <= std::min(k, 4); ++m) {
        const Poly c = fam.primitive(m), shown = displayed_pn(k, m);
        rep.display("pnewton/example/PN" + std::to_string(m), c == shown,
                    "displayed " + shown.str() + ", computed " + c.str());
    }
}

inline void charvar_suite(RunReport& rep, int k, std::uint64_t seed, int samples) {
    if (k < 2) throw std::invalid_argument("charvar suite needs k >= 2");
    const auto ms = minors(k);
    bool sym = true;
    for (const auto& [id, m] : ms.entries) {
        const auto [gid, sign] = minor_generator(id);
        sym = sym && generator_by_id(k, gid).symbol() * Rational(sign) == m;
    }
    rep.add("charvar/minor-symbols", sym);

    EtaRewriter rw(k);
    bool round = true;
    for (int i = 1; i <= k; ++i)
        for (int j = 1; j <= k; ++j) {
            const auto& r = rw.get(i, j);
            round = round && recombine(r.coeffs, k) + cv::eta(k, k) * r.v == cv::eta(k, i) * cv::eta(k, j);
        }
    rep.add("charvar/eta-rewrite", round);

    const auto pts = sample_z_points(k, seed, samples);
    const Poly disc = discriminant(k);
    bool on_z = true, old_new = true;
    int generic = 0;
    for (const auto& p : pts) {
        const auto xy = coordinates(p);
        for (const auto& [id, m] : ms.entries) on_z = on_z && m.evaluate(xy).is_zero();
        Rational l(0);
        for (int h = 0; h < k; ++h) l += p.sigma[static_cast<std::size_t>(h)] * p.eta[static_cast<std::size_t>(h)];
        bool ok = !l.is_zero() && !p.eta[0].is_zero();
        if (ok) {
            for (int h = 1; h <= k; ++h)
                ok = ok && p.eta[static_cast<std::size_t>(h - 1)] == p.eta[0] * pow(-p.eta[0] / l, static_cast<unsigned>(h - 1));
            ok = ok && eval_P(p.sigma, l / p.eta[0]).is_zero();
        }
        old_new = old_new && ok;
        if (!(disc.evaluate(p.sigma) * p.eta[0]).is_zero()) ++generic;
    }
    rep.add("charvar/z-points-on-minors", on_z, std::to_string(samples) + " points, seed " + std::to_string(seed));
    rep.add("charvar/z-points-root-relations", old_new);
    rep.add("charvar/z-points-generic", 10 * generic >= 9 * samples,
            std::to_string(generic) + "/" + std::to_string(samples) + " with Delta*eta_1 != 0");

    std::mt19937_64 rng(seed);
    auto draw = [&] { return Rational(static_cast<long>(rng() % 21) - 10, static_cast<long>(rng() % 4) + 1); };
    bool holds = true, shown = true;
    std::string detail;
    for (int t = 0; t < 100; ++t) {
        std::vector<Rational> sig;
        for (int h = 0; h < k; ++h) sig.push_back(draw());
        Rational a = draw();
        if (a.is_zero()) a = Rational(1);
        for (const Rational& z : {draw(), Rational(-1) / a}) {
            const auto c = theta_contraction(sig, a, z);
            holds = holds && c.holds;
            if (!c.displayed_holds && shown) {
                shown = false;
                detail = "displayed closed forms +(-a)^k/(1+az)(P(z)-P(-1/a)) and z^{-k}P'(z) fail; computed forms carry "
                         "a minus sign and z^{-k+1}";
            }
        }
    }
    rep.add("charvar/theta-contraction", holds);
    rep.display("charvar/theta-contraction/display", shown, detail);
}

}  // namespace suites

inline const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names{"system", "relations", "weights", "forms", "primitive", "charvar"};
    return names;
}

/// Runs one named suite at a given k.
inline RunReport run_suite(const std::string& suite, int k, std::optional<int> max_m = std::nullopt, std::uint64_t seed = 1) {
    if (k < 2 || k > 6) throw std::invalid_argument("verify: k must lie in [2, 6]");
    const int mm = max_m.value_or(suites::default_max_m(k));
    if (mm < 0) throw std::invalid_argument("verify: max-m must be >= 0");
    RunReport rep;
    rep.k = k;
    rep.suite = suite;
    if (suite == "system") suites::system_suite(rep, k, mm);
    else if (suite == "relations") suites::relations_suite(rep, k);
    else if (suite == "weights") suites::weights_suite(rep, k, mm);
    else if (suite == "forms") suites::forms_suite(rep, k, mm);
    else if (suite == "primitive") suites::primitive_suite(rep, k, mm);
    else if (suite == "charvar") suites::charvar_suite(rep, k, seed, 200);
    else throw std::invalid_argument("unknown suite '" + suite + "'");
    return rep;
}

namespace golden {

inline const std::vector<std::string>& file_names() {
    static const std::vector<std::string> names{"sigma2_k2.json", "sigma2_k3.json", "sigma3_k3.json", "newton6_k3.json",
                                                "pnewton_k4.json", "minors_k2.json", "minors_k3.json"};
    return names;
}

inline const json& value(const json& doc, const std::string& kind) {
    if (!doc.is_object()) throw FormatError("not a JSON object");
    if (!doc.contains("schema") || doc["schema"] != kSchema) throw FormatError("missing or wrong schema");
    if (!doc.contains("kind") || doc["kind"] != kind) throw FormatError("kind must be '" + kind + "'");
    if (!doc.contains("value")) throw FormatError("missing value");
    return doc["value"];
}

inline void check_operator(RunReport& rep, const std::string& id, const json& doc, int k, int h, bool exact_required) {
    const WeylOp stored = weylop_from_json(value(doc, "weylop"));
    const WeylOp computed = xi_transport(elementary_symmetric_op(k, h));
    if (exact_required || stored == computed) {
        rep.add(id, stored == computed, stored == computed ? "" : "difference " + (computed - stored).str());
        return;
    }
    rep.checks.push_back({id, CheckStatus::Deviation, "computed - stored = " + (computed - stored).str()});
    NewtonFamily fam(k);
    bool kills = true;
    for (int m = 0; m <= 2 * k + 6; ++m) kills = kills && computed.apply(fam.newton(m)).is_zero();
    rep.add(id + "/computed-annihilates-newton", kills);
    rep.add(id + "/computed-symbol", computed.symbol() == symbol_pullback(elementary_symmetric_op(k, h)));
}

inline void check_file(RunReport& rep, const std::filesystem::path& dir, const std::string& name) {
    const std::string id = "golden/" + name;
    const auto path = dir / name;
    if (!std::filesystem::exists(path)) {
        rep.add(id, false, "missing file " + path.string());
        return;
    }
    try {
        const json doc = read_json_file(path.string());
        if (name == "sigma2_k2.json") check_operator(rep, id, doc, 2, 2, true);
        else if (name == "sigma2_k3.json") check_operator(rep, id, doc, 3, 2, false);
        else if (name == "sigma3_k3.json") check_operator(rep, id, doc, 3, 3, false);
        else if (name == "newton6_k3.json") {
            const Poly stored = poly_from_json(value(doc, "poly"));
            rep.add(id, stored == newton(3, 6), stored == newton(3, 6) ? "" : "stored " + stored.str());
        } else if (name == "pnewton_k4.json") {
            const json& v = value(doc, "poly_list");
            if (!v.is_array() || v.size() != 4) throw FormatError("expected 4 polynomials");
            NewtonFamily fam(4);
            for (int m = 1; m <= 4; ++m) {
                const Poly stored = poly_from_json(v[static_cast<std::size_t>(m - 1)]);
                const Poly c = fam.primitive(m);
                const std::string sub = id + "[PN" + std::to_string(m) + "]";
                if (stored == c) rep.add(sub, true);
                else if (stored == suites::displayed_pn(4, m))
                    rep.checks.push_back({sub, CheckStatus::Deviation, "stored display " + stored.str() + ", computed " + c.str()});
                else rep.add(sub, false, "stored " + stored.str() + " matches neither computation nor display");
            }
        } else {
            const int k = name == "minors_k2.json" ? 2 : 3;
            const json& v = value(doc, "minor_list");
            if (!v.is_array()) throw FormatError("expected a list");
            const auto ms = minors(k);
            std::set<MinorId> seen;
            bool ok = v.size() == ms.entries.size();
            std::string detail = ok ? "" : "wrong number of minors";
            for (const auto& e : v) {
                const MinorId mid{e.at("i").get<int>(), e.at("j").get<int>()};
                seen.insert(mid);
                if (mid.i < 1 || mid.i >= mid.j || mid.j > k) throw FormatError("bad minor index " + mid.str());
                if (!(poly_from_json(e.at("poly")) == ms.at(mid))) {
                    ok = false;
                    detail = mid.str() + " differs";
                }
            }
            rep.add(id, ok && seen.size() == ms.entries.size(), detail);
        }
    } catch (const std::exception& e) {
        rep.add(id, false, "unreadable " + name + ": " + e.what());
    }
}

}  // namespace golden

/// Re-derives every stored formula under `dir` and compares structurally.
inline RunReport golden_check(const std::filesystem::path& dir) {
    RunReport rep;
    rep.suite = "golden";
    for (const auto& name : golden::file_names()) golden::check_file(rep, dir, name);
    return rep;
}

}  // namespace symtrace
