#pragma once

#include <cctype>
#include <string>
#include <vector>

#include <json.hpp>

#include "hybridwc/jfun.hpp"
#include "hybridwc/model.hpp"
#include "hybridwc/state.hpp"
#include "hybridwc/trees.hpp"

namespace hybridwc {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Canonical-string parsing (inverse of MPoly::str / RatFunc::canonical_string)
// ---------------------------------------------------------------------------

namespace detail {

struct PolyParser {
    const std::string& s;
    size_t pos = 0;
    int arity;

    explicit PolyParser(const std::string& str, int ar) : s(str), arity(ar) {}

    void skip_ws() {
        while (pos < s.size() && s[pos] == ' ') ++pos;
    }

    BigRational parse_int() {
        size_t start = pos;
        if (pos < s.size() && s[pos] == '-') ++pos;
        while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
        if (start == pos) throw Error("poly parse: expected integer at " + std::to_string(pos));
        return BigRational::from_string(s.substr(start, pos - start));
    }

    int parse_var() {
        if (pos < s.size() && s[pos] == 'z') {
            ++pos;
            return 0;
        }
        if (pos < s.size() && s[pos] == 'a') {
            ++pos;
            size_t start = pos;
            while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
            int v = std::stoi(s.substr(start, pos - start));
            if (v < 1 || v >= arity) throw Error("poly parse: variable out of range");
            return v;
        }
        throw Error("poly parse: expected variable at position " + std::to_string(pos));
    }

    MPoly parse_term(bool negative) {
        BigRational coeff(1);
        ExpVec ev(arity, 0);
        bool saw_coeff = false;
        skip_ws();
        if (pos < s.size() && (std::isdigit(static_cast<unsigned char>(s[pos])))) {
            coeff = parse_int();
            saw_coeff = true;
        }
        bool expect_var = !saw_coeff;
        while (pos < s.size()) {
            if (saw_coeff || !expect_var) {
                if (pos < s.size() && s[pos] == '*') {
                    ++pos;
                } else {
                    break;
                }
            }
            int v = parse_var();
            int e = 1;
            if (pos < s.size() && s[pos] == '^') {
                ++pos;
                size_t start = pos;
                while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
                e = std::stoi(s.substr(start, pos - start));
            }
            ev[v] += e;
            saw_coeff = true;  // subsequent variables need '*'
        }
        if (negative) coeff = -coeff;
        return MPoly::monomial(arity, ev, coeff);
    }

    MPoly parse_poly() {
        skip_ws();
        MPoly out(arity);
        bool neg = false;
        if (pos < s.size() && s[pos] == '-') {
            neg = true;
            ++pos;
        }
        out += parse_term(neg);
        while (true) {
            skip_ws();
            if (pos + 1 < s.size() && s[pos] == '+' && s[pos + 1] == ' ') {
                pos += 1;
                out += parse_term(false);
            } else if (pos + 1 < s.size() && s[pos] == '-' && s[pos + 1] == ' ') {
                pos += 1;
                out += parse_term(true);
            } else {
                break;
            }
        }
        return out;
    }
};

}  // namespace detail

inline MPoly parse_poly(const std::string& s, int arity) {
    detail::PolyParser p(s, arity);
    MPoly out = p.parse_poly();
    p.skip_ws();
    if (p.pos != s.size()) throw Error("poly parse: trailing input in '" + s + "'");
    return out;
}

// Parses the canonical "(num)/(den)" form.
inline RatFunc parse_ratfunc(const std::string& s, int arity) {
    auto div = s.find(")/(");
    if (s.empty() || s.front() != '(' || s.back() != ')' || div == std::string::npos)
        throw Error("ratfunc parse: expected '(num)/(den)' in '" + s + "'");
    MPoly num = parse_poly(s.substr(1, div - 1), arity);
    MPoly den = parse_poly(s.substr(div + 3, s.size() - div - 4), arity);
    return RatFunc::frac(num, den);
}

// ---------------------------------------------------------------------------
// Model and class serialization
// ---------------------------------------------------------------------------

inline json model_to_json(const ModelParams& p) {
    return json{{"weights", p.weights},
                {"d", p.degree},
                {"num_polys", p.num_polys},
                {"epsilon", p.epsilon.str()},
                {"max_q_degree", p.max_q_degree}};
}

inline ModelParams model_from_json(const json& j) {
    ModelParams p;
    p.weights = j.at("weights").get<std::vector<long>>();
    p.degree = j.at("d").get<long>();
    p.num_polys = j.at("num_polys").get<long>();
    if (j.contains("epsilon")) p.epsilon = Epsilon::parse(j.at("epsilon").get<std::string>());
    if (j.contains("max_q_degree")) p.max_q_degree = j.at("max_q_degree").get<long>();
    p.validate();
    return p;
}

inline json state_class_to_json(const StateClass& c) {
    json out = json::array();
    for (const auto& [k, v] : c.entries())
        out.push_back(json{{"sector", k.first},
                           {"power", k.second},
                           {"coeff", v.canonical_string()}});
    return out;
}

inline StateClass state_class_from_json(const json& j, const ModelParams& p) {
    StateClass c(p);
    for (const auto& e : j)
        c.add(p.mult(e.at("sector").get<long>()), e.at("power").get<long>(),
              parse_ratfunc(e.at("coeff").get<std::string>(), p.arity()));
    return c;
}

inline json eq_state_class_to_json(const EqStateClass& c) {
    json out = json::array();
    for (const auto& [k, v] : c.entries())
        out.push_back(json{{"sector", k.second},
                           {"fixed_point", k.first},
                           {"coeff", v.canonical_string()}});
    return out;
}

inline EqStateClass eq_state_class_from_json(const json& j, const ModelParams& p) {
    EqStateClass c(p);
    for (const auto& e : j)
        c.add(e.at("fixed_point").get<long>(), p.mult(e.at("sector").get<long>()),
              parse_ratfunc(e.at("coeff").get<std::string>(), p.arity()));
    return c;
}

// jfun coefficient entries: flat per (power, z-exponent) with rational
// coefficients in the sector basis; equivariant entries carry the full
// rational function instead.
inline json jfun_coeff_to_json(long beta, const StateClass& c, const ModelParams& p) {
    json entries = json::array();
    for (const auto& [k, v] : c.entries()) {
        for (const auto& [zk, coeff] : v.z_laurent_map()) {
            auto [n, d] = coeff.canonical_pair();
            entries.push_back(json{{"power", k.second},
                                   {"z_exponent", zk},
                                   {"coeff", n.constant_value().str() + "/" +
                                                 d.constant_value().str()}});
        }
    }
    return json{{"beta", beta}, {"sector", p.j_sector(beta).numerator()}, {"entries", entries}};
}

inline json jfun_coeff_eq_to_json(long beta, const EqStateClass& c, const ModelParams& p) {
    json entries = json::array();
    for (const auto& [k, v] : c.entries())
        entries.push_back(json{{"fixed_point", k.first}, {"coeff", v.canonical_string()}});
    return json{{"beta", beta}, {"sector", p.j_sector(beta).numerator()}, {"entries", entries}};
}

// ---------------------------------------------------------------------------
// Trees
// ---------------------------------------------------------------------------

inline const char* vertex_kind_name(VertexKind k) {
    switch (k) {
        case VertexKind::Stable: return "stable";
        case VertexKind::UnstableVal1: return "unstable-valence-1";
        case VertexKind::UnstableVal2Node: return "unstable-valence-2-node";
        case VertexKind::UnstableVal2Mark: return "unstable-valence-2-mark";
    }
    return "?";
}

inline json tree_to_json(const DecoratedTree& t, const ModelParams& p) {
    json vertices = json::array();
    bool any_stable = false;
    for (size_t v = 0; v < t.vertices.size(); ++v) {
        VertexKind k = classify_vertex(t, static_cast<int>(v), p);
        if (k == VertexKind::Stable) any_stable = true;
        vertices.push_back(json{{"j", t.vertices[v].j},
                                {"beta", t.vertices[v].beta},
                                {"kind", vertex_kind_name(k)}});
    }
    json edges = json::array();
    for (const auto& e : t.edges)
        edges.push_back(json{{"v1", e.a},
                             {"v2", e.b},
                             {"beta", e.beta},
                             {"m1", e.ma.numerator()},
                             {"m2", e.mb.numerator()}});
    json marks = json::array();
    for (size_t k = 0; k < t.marks.size(); ++k)
        marks.push_back(json{{"mark", k + 1},
                             {"vertex", t.marks[k]},
                             {"sector", t.mark_sectors[k].numerator()}});
    std::string contribution = "symbolic-stable";
    if (!any_stable) {
        std::vector<Insertion> ins;
        for (size_t k = 0; k < t.marks.size(); ++k) {
            EqStateClass cls(p);
            for (long j = 1; j <= p.N(); ++j)
                cls.add(j, t.mark_sectors[k], RatFunc::one(p.arity()));
            ins.push_back(Insertion{cls, 0});
        }
        contribution = evaluate_fully_unstable_tree(t, ins, p).canonical_string();
    }
    return json{{"vertices", vertices},
                {"edges", edges},
                {"marks", marks},
                {"aut_order", t.aut_order},
                {"contribution", contribution}};
}

inline std::string tree_to_dot(const DecoratedTree& t, const ModelParams& p, int index) {
    std::string out = "graph tree" + std::to_string(index) + " {\n";
    for (size_t v = 0; v < t.vertices.size(); ++v) {
        out += "  v" + std::to_string(v) + " [label=\"j=" + std::to_string(t.vertices[v].j) +
               " b=" + std::to_string(t.vertices[v].beta);
        for (int k : t.marks_at(static_cast<int>(v)))
            out += " x" + std::to_string(k + 1);
        out += "\"];\n";
    }
    for (const auto& e : t.edges) {
        out += "  v" + std::to_string(e.a) + " -- v" + std::to_string(e.b) + " [label=\"b=" +
               std::to_string(e.beta) + " m=" + std::to_string(e.ma.numerator()) + "/" +
               std::to_string(p.d()) + "," + std::to_string(e.mb.numerator()) + "/" +
               std::to_string(p.d()) + "\"];\n";
    }
    out += "}\n";
    return out;
}

}  // namespace hybridwc
