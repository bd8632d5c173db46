#pragma once

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "poly.hpp"
#include "weyl.hpp"

namespace symtrace {

using json = nlohmann::json;

inline constexpr const char* kSchema = "symtrace/1";

/// Raised for malformed JSON documents.
class FormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline json to_json(const Poly& p) {
    json terms = json::array();
    for (const auto& [m, c] : p.terms()) terms.push_back({{"coeff", c.str()}, {"exp", m.to_vector()}});
    return {{"space", p.space().name()}, {"terms", std::move(terms)}};
}

inline json to_json(const WeylOp& a) {
    json terms = json::array();
    for (const auto& [b, c] : a.terms()) terms.push_back({{"dexp", b.to_vector()}, {"coeff", to_json(c)}});
    return {{"space", a.space().name()}, {"terms", std::move(terms)}};
}

namespace detail {
inline const json& field(const json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) throw FormatError(std::string("missing field '") + key + "'");
    return j.at(key);
}
inline Monomial exponent(const json& j, int n) {
    if (!j.is_array() || static_cast<int>(j.size()) != n)
        throw FormatError("exponent must be an array of length " + std::to_string(n));
    std::vector<int> e;
    for (const auto& v : j) {
        if (!v.is_number_integer() || v.get<long>() < 0) throw FormatError("exponents must be non-negative integers");
        e.push_back(v.get<int>());
    }
    return Monomial(e);
}
inline VarSpace space(const json& j) {
    const auto& s = field(j, "space");
    if (!s.is_string()) throw FormatError("space must be a string");
    try {
        return VarSpace::parse(s.get<std::string>());
    } catch (const std::invalid_argument& e) {
        throw FormatError(e.what());
    }
}
inline Rational coefficient(const json& j) {
    if (j.is_number_integer()) return Rational(j.get<long>());
    if (!j.is_string()) throw FormatError("coefficient must be a \"p/q\" string");
    try {
        return Rational::parse(j.get<std::string>());
    } catch (const std::exception& e) {
        throw FormatError(e.what());
    }
}
}  // namespace detail

inline Poly poly_from_json(const json& j) {
    const VarSpace sp = detail::space(j);
    Poly p(sp);
    const auto& terms = detail::field(j, "terms");
    if (!terms.is_array()) throw FormatError("terms must be an array");
    for (const auto& t : terms)
        p.add_term(detail::exponent(detail::field(t, "exp"), sp.nvars()), detail::coefficient(detail::field(t, "coeff")));
    return p;
}

inline WeylOp weylop_from_json(const json& j) {
    const VarSpace sp = detail::space(j);
    WeylOp a;
    try {
        a = WeylOp(sp);
    } catch (const std::invalid_argument& e) {
        throw FormatError(e.what());
    }
    const auto& terms = detail::field(j, "terms");
    if (!terms.is_array()) throw FormatError("terms must be an array");
    for (const auto& t : terms) {
        Poly c = poly_from_json(detail::field(t, "coeff"));
        if (!(c.space() == sp)) throw FormatError("coefficient space " + c.space().name() + " differs from " + sp.name());
        a.add_term(detail::exponent(detail::field(t, "dexp"), sp.k), c);
    }
    return a;
}

inline json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw FormatError("'" + path + "': " + e.what());
    }
}

/// The payload of a document: its "value" field when present (golden-file wrapper), else the document.
inline const json& unwrap_value(const json& doc) {
    if (doc.is_object() && doc.contains("value")) return doc.at("value");
    return doc;
}

/// A WeylOp document: the operator object, optionally with a top-level "schema" field.
inline json weylop_document(const WeylOp& a) {
    json j = to_json(a);
    j["schema"] = kSchema;
    return j;
}

}  // namespace symtrace
