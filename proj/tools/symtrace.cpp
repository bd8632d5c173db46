#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>

#include <symtrace/symtrace.hpp>

using namespace symtrace;

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class Format { Json, Text };

Format parse_format(const std::string& s) {
    if (s == "json") return Format::Json;
    if (s == "text") return Format::Text;
    throw UsageError("--format must be json or text");
}

std::uint64_t resolve_seed(std::uint64_t flag) {
    const char* env = std::getenv("SYMTRACE_SEED");
    if (env == nullptr || *env == '\0') return flag;
    try {
        std::size_t used = 0;
        const auto v = std::stoull(env, &used);
        if (used != std::string(env).size()) throw std::invalid_argument(env);
        return v;
    } catch (const std::exception&) {
        throw UsageError(std::string("SYMTRACE_SEED is not an unsigned integer: '") + env + "'");
    }
}

void emit(const json& j) { std::cout << j.dump(2) << "\n"; }

json rationals(const std::vector<Rational>& v) {
    json a = json::array();
    for (const auto& r : v) a.push_back(r.str());
    return a;
}

json complex_json(cplx z) { return {{"re", z.real()}, {"im", z.imag()}}; }

int cmd_gen(const std::string& family, int k, std::optional<int> max_m, const std::string& format) {
    const Format fmt = parse_format(format);
    const FamilyKind fam_kind = parse_family(family);
    if (fam_kind == FamilyKind::Custom) throw UsageError("--family must be newton, dnewton or pnewton");
    const int mm = max_m.value_or(2 * k + 6);
    if (mm < 0) throw UsageError("--max-m must be >= 0");
    NewtonFamily fam(k);
    const char* prefix = fam_kind == FamilyKind::Newton ? "N" : fam_kind == FamilyKind::DNewton ? "DN" : "PN";
    json entries = json::array();
    std::ostringstream text;
    for (int m = fam_kind == FamilyKind::PNewton ? 1 : 0; m <= mm; ++m) {
        const Poly p = fam_kind == FamilyKind::Newton ? fam.newton(m) : fam_kind == FamilyKind::DNewton ? fam.derived(m) : fam.primitive(m);
        entries.push_back({{"m", m}, {"poly", to_json(p)}});
        text << prefix << "_" << m << " = " << p.str() << "\n";
    }
    if (fmt == Format::Json) emit({{"schema", kSchema}, {"family", family}, {"k", k}, {"entries", entries}});
    else std::cout << text.str();
    return 0;
}

int cmd_xi(int k, const std::string& op, const std::string& format) {
    const Format fmt = parse_format(format);
    WeylOp src;
    if (op.size() >= 2 && op[0] == 'S' && op.find_first_not_of("0123456789", 1) == std::string::npos) {
        const int h = std::stoi(op.substr(1));
        if (h < 1 || h > k) throw UsageError("--op S<h> needs h in [1, k]");
        src = elementary_symmetric_op(k, h).op();
    } else {
        src = weylop_from_json(unwrap_value(read_json_file(op)));
        if (src.space() != VarSpace::x(k)) throw UsageError("operator in '" + op + "' must live in x(" + std::to_string(k) + ")");
    }
    const WeylOp out = xi_transport(SymmetricOperator(src));
    if (fmt == Format::Json) emit(weylop_document(out));
    else std::cout << out.str() << "\n";
    return 0;
}

int report_out(const RunReport& rep, const std::string& format, bool strict) {
    if (parse_format(format) == Format::Json) emit(rep.to_json(strict));
    else std::cout << rep.text(strict);
    return rep.exit_status(strict);
}

json z_point_json(const ZPoint& z) {
    return {{"sigma", rationals(z.sigma)}, {"eta", rationals(z.eta)}, {"s", rationals(z.s)}, {"zeta0", z.zeta0.str()},
            {"zeta1", z.zeta1.str()}};
}

int cmd_charvar(int k, std::optional<int> sample, std::uint64_t seed, bool check_symbols, const std::string& decompose,
                const std::string& format, bool strict) {
    const int modes = (sample ? 1 : 0) + (check_symbols ? 1 : 0) + (decompose.empty() ? 0 : 1);
    if (modes != 1) throw UsageError("charvar needs exactly one of --sample, --check-symbols, --decompose");
    if (k < 2) throw UsageError("charvar needs k >= 2");
    if (check_symbols) {
        RunReport rep;
        rep.k = k;
        rep.suite = "charvar";
        suites::charvar_suite(rep, k, seed, 200);
        return report_out(rep, format, strict);
    }
    if (sample) {
        if (*sample < 1) throw UsageError("--sample must be >= 1");
        const auto ms = minors(k);
        json pts = json::array();
        bool all = true;
        for (const auto& z : sample_z_points(k, seed, *sample)) {
            bool on = true;
            for (const auto& [id, m] : ms.entries) on = on && m.evaluate(coordinates(z)).is_zero();
            all = all && on;
            json e = z_point_json(z);
            e["minors_vanish"] = on;
            pts.push_back(e);
        }
        if (parse_format(format) == Format::Json) emit({{"schema", kSchema}, {"k", k}, {"seed", seed}, {"points", pts}});
        else
            for (const auto& p : pts) std::cout << p["sigma"].dump() << "  " << p["eta"].dump() << "\n";
        return all ? 0 : 2;
    }
    const Poly f = poly_from_json(unwrap_value(read_json_file(decompose)));
    if (f.space() != VarSpace::eta(k)) throw UsageError("polynomial must live in eta(" + std::to_string(k) + ")");
    if (!vanishes_on_Z(f)) {
        emit({{"schema", kSchema}, {"k", k}, {"on_Z", false}});
        return 2;
    }
    MinorCombo combo;
    try {
        combo = decompose_in_minors(f);
    } catch (const std::invalid_argument& e) {
        emit({{"schema", kSchema}, {"k", k}, {"on_Z", true}, {"decomposable", false}, {"reason", e.what()}});
        return 2;
    }
    json ms = json::array();
    for (const auto& [id, c] : combo) ms.push_back({{"minor", id.str()}, {"i", id.i}, {"j", id.j}, {"coeff", to_json(c)}});
    emit({{"schema", kSchema}, {"k", k}, {"on_Z", true}, {"decomposable", true}, {"minors", ms},
          {"recombines", recombine(combo, k) == f}});
    return recombine(combo, k) == f ? 0 : 1;
}

int cmd_member(int k, const std::string& path, std::optional<int> bound, const std::string& format) {
    const WeylOp p = weylop_from_json(unwrap_value(read_json_file(path)));
    if (p.space() != VarSpace::sigma(k)) throw UsageError("operator must live in sigma(" + std::to_string(k) + ")");
    if (bound && *bound < 0) throw UsageError("--newton-bound must be >= 0");
    json out;
    int code = 0;
    try {
        const auto cert = reduce_modulo_system(p, k, bound);
        out = to_json(cert);
        out["verified"] = cert.member && verify_certificate(p, cert, k);
        code = cert.member ? (out["verified"].get<bool>() ? 0 : 1) : 2;
    } catch (const DescentContradiction& e) {
        out = {{"schema", kSchema}, {"k", k}, {"member", false}, {"contradiction", e.what()}};
        code = 2;
    }
    if (parse_format(format) == Format::Json) emit(out);
    else {
        std::cout << (out["member"].get<bool>() ? "member" : "non-member");
        if (out.contains("failing_index")) std::cout << " (N_" << out["failing_index"].get<int>() << " not annihilated)";
        std::cout << "\n";
        if (out.contains("entries"))
            for (const auto& e : out["entries"]) std::cout << "  " << e["generator"].get<std::string>() << " <- " << weylop_from_json(e["cofactor"]).str() << "\n";
    }
    return code;
}

std::vector<double> parse_sigma(const std::string& s, int k) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            out.push_back(Rational::parse(item).to_double());
        } catch (const std::exception&) {
            throw UsageError("--sigma entry '" + item + "' is not a number");
        }
    }
    if (static_cast<int>(out.size()) != k) throw UsageError("--sigma needs exactly k=" + std::to_string(k) + " entries");
    return out;
}

int cmd_numcheck(int k, const std::string& sigma_s, const std::string& f_s, std::optional<double> radius, std::optional<int> nodes) {
    const auto sigma = parse_sigma(sigma_s, k);
    const auto sc = to_complex(sigma);
    const AnalyticFn fn = AnalyticFn::parse(f_s);
    QuadratureSpec q = default_quadrature(sc);
    if (radius) q.R = *radius;
    if (nodes) q.n = *nodes;
    const auto tr = trace_contour(fn, sc, q);
    const auto roots = poly_roots(sc);
    cplx rs = 0;
    double resid = 0;
    json rj = json::array();
    for (const auto& x : roots) {
        rs += cplx(fn.f(lcplx(x)));
        resid = std::max(resid, std::abs(eval_char_poly(sc, x).first));
        rj.push_back(complex_json(x));
    }
    const double err = std::abs(tr.value - rs) / std::max(1.0, std::abs(rs));
    bool pass = err <= 1e-8;
    json residuals = json::array();
    json fd_note;
    if (k >= 2) {
        const double h = 1e-2;
        try {
            const auto fq = fd_quadrature(sigma, h);
            const auto F = trace_function(fn, fq);
            for (const auto& g : GeneratorSet::system(k).gens) {
                const auto r = fd_annihilation_check(g.op, F, sigma, h);
                residuals.push_back({{"generator", g.id}, {"residual", r.residual}, {"scale", r.scale}, {"order", r.order}, {"pass", r.pass}});
                pass = pass && r.pass;
            }
            const auto ctrl = fd_annihilation_check(WeylOp::d(VarSpace::sigma(k), 1), F, sigma, h);
            fd_note = {{"generator", "d1"}, {"residual", ctrl.residual}, {"scale", ctrl.scale}, {"exceeds_tolerance", !ctrl.pass}};
        } catch (const std::invalid_argument& e) {
            fd_note = {{"skipped", e.what()}};
        }
    }
    emit({{"schema", kSchema},
          {"k", k},
          {"sigma", sigma},
          {"f", fn.name},
          {"value", complex_json(tr.value)},
          {"diagnostics",
           {{"radius", q.R},
            {"nodes", q.n},
            {"form_difference", tr.difference},
            {"residue_form_value", complex_json(tr.value_pp)},
            {"root_sum", complex_json(rs)},
            {"root_sum_relative_error", err},
            {"roots", rj},
            {"root_residual", resid}}},
          {"residuals", residuals},
          {"control", fd_note},
          {"pass", pass}});
    return pass ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact and numeric checks for differential systems satisfied by symmetric traces"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(kVersion));

    int k = 0;
    std::optional<int> max_m, bound, sample, nodes;
    std::optional<double> radius;
    std::string family, format = "json", op, suite, decompose, path, sigma, fn = "exp", dir = "golden";
    std::uint64_t seed = 1;
    bool strict = false, check_symbols = false;

    auto* gen = app.add_subcommand("gen", "Newton, derived Newton or primitive Newton polynomials");
    gen->add_option("--family", family, "newton|dnewton|pnewton")->required();
    gen->add_option("--k", k)->required()->check(CLI::Range(1, kMaxK));
    gen->add_option("--max-m", max_m);
    gen->add_option("--format", format);

    auto* xi = app.add_subcommand("xi", "Transport a symmetric x-space operator to sigma coordinates");
    xi->add_option("--k", k)->required()->check(CLI::Range(1, kMaxK));
    xi->add_option("--op", op, "S<h> or a JSON operator file")->required();
    xi->add_option("--format", format);

    auto* verify = app.add_subcommand("verify", "Run a verification suite");
    verify->add_option("--k", k)->required()->check(CLI::Range(2, 6));
    verify->add_option("--suite", suite, "system|relations|weights|forms|primitive|charvar")->required();
    verify->add_option("--max-m", max_m);
    verify->add_option("--seed", seed);
    verify->add_option("--format", format);
    verify->add_flag("--strict-paper", strict, "treat deviations from reference displays as failures");

    auto* charvar = app.add_subcommand("charvar", "Characteristic variety: sample points, symbol checks, minor decomposition");
    charvar->add_option("--k", k)->required()->check(CLI::Range(2, kMaxK));
    charvar->add_option("--sample", sample);
    charvar->add_option("--seed", seed);
    charvar->add_flag("--check-symbols", check_symbols);
    charvar->add_option("--decompose", decompose, "JSON polynomial in eta(k)");
    charvar->add_option("--format", format);
    charvar->add_flag("--strict-paper", strict);

    auto* member = app.add_subcommand("member", "Decide membership in the left ideal of the second-order system");
    member->add_option("--k", k)->required()->check(CLI::Range(2, kMaxK));
    member->add_option("--op", path, "JSON operator file")->required();
    member->add_option("--newton-bound", bound);
    member->add_option("--format", format);

    auto* numcheck = app.add_subcommand("numcheck", "Contour-integral traces and finite-difference residuals");
    numcheck->add_option("--k", k)->required()->check(CLI::Range(1, kMaxK));
    numcheck->add_option("--sigma", sigma, "comma-separated s_1..s_k")->required();
    numcheck->add_option("--f", fn, "exp|sin|pow:m");
    numcheck->add_option("--radius", radius);
    numcheck->add_option("--nodes", nodes);

    auto* goldencmd = app.add_subcommand("golden", "Re-derive the stored formulas and compare");
    goldencmd->add_option("--dir", dir);
    goldencmd->add_option("--format", format);
    goldencmd->add_flag("--strict-paper", strict);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        seed = resolve_seed(seed);
        if (*gen) return cmd_gen(family, k, max_m, format);
        if (*xi) return cmd_xi(k, op, format);
        if (*verify) return report_out(run_suite(suite, k, max_m, seed), format, strict);
        if (*charvar) return cmd_charvar(k, sample, seed, check_symbols, decompose, format, strict);
        if (*member) return cmd_member(k, path, bound, format);
        if (*numcheck) return cmd_numcheck(k, sigma, fn, radius, nodes);
        if (*goldencmd) {
            parse_format(format);
            return report_out(golden_check(dir), format, strict);
        }
    } catch (const std::exception& e) {
        std::cerr << "symtrace: error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
