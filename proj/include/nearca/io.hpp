#pragma once

// JSON and text forms: group descriptors, scalars, patterns, rules and
// labeled-graph edge lists.

#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "nearca/ca.hpp"
#include "nearca/error.hpp"
#include "nearca/fields.hpp"
#include "nearca/groups.hpp"
#include "nearca/parse.hpp"
#include "nearca/sofic.hpp"

namespace nearca {

using json = nlohmann::ordered_json;

inline std::string read_text_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw error("cannot open '" + path + "'");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

/// {"table": [[...], ...], "generators": [...]} with 0-based indices.
inline GroupPtr finite_group_from_json(const json& j)
{
    if (!j.contains("table")) {
        throw error("finite group file needs a \"table\"");
    }
    auto table = j.at("table").get<std::vector<std::vector<std::uint32_t>>>();
    std::vector<std::uint32_t> gens;
    if (j.contains("generators")) {
        gens = j.at("generators").get<std::vector<std::uint32_t>>();
    }
    return Group::finite(std::move(table), std::move(gens));
}

/// `zd:<d>`, `free:<k>`, `cyclic:<n>`, `finite:<table file>`.
inline GroupPtr parse_group_descriptor(std::string_view text, const std::string& base_dir = "")
{
    std::string s = detail::trim(text);
    auto colon = s.find(':');
    if (colon == std::string::npos) {
        throw parse_error("group descriptor needs the form kind:parameter", s.size());
    }
    std::string kind = s.substr(0, colon);
    std::string arg = s.substr(colon + 1);
    if (kind == "zd") {
        return Group::free_abelian(detail::parse_uint(arg, colon + 1));
    }
    if (kind == "free") {
        return Group::free(detail::parse_uint(arg, colon + 1));
    }
    if (kind == "cyclic") {
        auto n = detail::parse_uint(arg, colon + 1);
        if (n == 0) {
            throw error("cyclic group order must be >= 1");
        }
        return Group::cyclic(static_cast<std::uint32_t>(n));
    }
    if (kind == "finite") {
        std::string path = arg;
        if (!base_dir.empty() && !path.empty() && path[0] != '/') {
            path = base_dir + "/" + path;
        }
        return finite_group_from_json(json::parse(read_text_file(path)));
    }
    throw parse_error("unknown group kind '" + kind + "'", 0);
}

template <ExactField F>
typename F::element scalar_from_json(const F& field, const json& j)
{
    if (j.is_number_integer()) {
        return field.from_int(j.get<std::int64_t>());
    }
    if (j.is_string()) {
        return parse_field_element(j.get<std::string>(), field);
    }
    throw error("scalar must be an integer or a string");
}

template <ExactField F>
json scalar_to_json(const F& field, const typename F::element& a)
{
    return field.format(a);
}

template <ExactField F>
CellValue<F> value_from_json(const F& field, const json& j)
{
    CellValue<F> v;
    if (j.is_array()) {
        for (const auto& x : j) {
            v.push_back(scalar_from_json(field, x));
        }
    } else {
        v.push_back(scalar_from_json(field, j));
    }
    return v;
}

template <ExactField F>
json value_to_json(const F& field, const CellValue<F>& v)
{
    if (v.size() == 1) {
        return scalar_to_json(field, v[0]);
    }
    json a = json::array();
    for (const auto& x : v) {
        a.push_back(scalar_to_json(field, x));
    }
    return a;
}

inline FiniteSubset subset_from_json(const Group& grp, const json& j)
{
    std::vector<GroupElement> out;
    for (const auto& x : j) {
        out.push_back(grp.parse(x.is_string() ? x.get<std::string>() : x.dump()));
    }
    return FiniteSubset(std::move(out));
}

inline json subset_to_json(const Group& grp, const FiniteSubset& s)
{
    json a = json::array();
    for (const auto& g : s) {
        a.push_back(grp.format(g));
    }
    return a;
}

/// {"domain": [elements], "values": [values]}
template <ExactField F>
Pattern<F> pattern_from_json(const Group& grp, const F& field, const json& j)
{
    const auto& dom = j.at("domain");
    const auto& vals = j.at("values");
    if (dom.size() != vals.size()) {
        throw error("pattern domain and values differ in length");
    }
    std::vector<std::pair<GroupElement, CellValue<F>>> pairs;
    for (std::size_t i = 0; i < dom.size(); ++i) {
        pairs.emplace_back(grp.parse(dom[i].is_string() ? dom[i].get<std::string>() : dom[i].dump()),
                           value_from_json(field, vals[i]));
    }
    return Pattern<F>::from_pairs(std::move(pairs));
}

template <ExactField F>
json pattern_to_json(const Group& grp, const F& field, const Pattern<F>& p)
{
    json vals = json::array();
    for (const auto& v : p.values) {
        vals.push_back(value_to_json(field, v));
    }
    return json{{"domain", subset_to_json(grp, p.domain)}, {"values", vals}};
}

template <ExactField F>
Matrix<F> matrix_from_json(const F& field, const json& j)
{
    const std::size_t r = j.size();
    const std::size_t c = r ? j[0].size() : 0;
    Matrix<F> m(field, r, c);
    for (std::size_t i = 0; i < r; ++i) {
        if (j[i].size() != c) {
            throw error("ragged matrix");
        }
        for (std::size_t k = 0; k < c; ++k) {
            m(i, k) = scalar_from_json(field, j[i][k]);
        }
    }
    return m;
}

template <ExactField F>
json matrix_to_json(const Matrix<F>& m)
{
    json a = json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (std::size_t k = 0; k < m.cols(); ++k) {
            row.push_back(m.field().format(m(i, k)));
        }
        a.push_back(row);
    }
    return a;
}

/// {"variant": "linear"|"polynomial"|"table", "payload": {...}}; optional
/// "group"/"field" entries must agree with the ones supplied.
template <ExactField F>
CellularAutomaton<F> rule_from_json(const GroupPtr& grp, const F& field, const json& j)
{
    if (j.contains("group") && parse_group_descriptor(j.at("group").get<std::string>())->descriptor() != grp->descriptor()) {
        throw mismatch_error("rule file is for group " + j.at("group").get<std::string>() + ", not " + grp->descriptor());
    }
    if (j.contains("field") && field_name(parse_field(j.at("field").get<std::string>())) != field.name()) {
        throw mismatch_error("rule file is over " + j.at("field").get<std::string>() + ", not " + field.name());
    }
    const std::string variant = j.at("variant").get<std::string>();
    const json& p = j.at("payload");
    if (variant == "polynomial") {
        return phi(parse_near_ring(p.at("alpha").get<std::string>(), grp, field));
    }
    if (variant == "linear") {
        const std::size_t n = p.at("n").get<std::size_t>();
        MatrixRing<F> mr{field, n};
        MatrixGroupRing<F> sym(grp, mr);
        for (const auto& t : p.at("symbol")) {
            sym.add_term(grp->parse(t.at("at").get<std::string>()), matrix_from_json(field, t.at("matrix")));
        }
        return psi(sym);
    }
    if (variant == "table") {
        TableRule<F> t;
        for (const auto& a : p.at("alphabet")) {
            t.alphabet.push_back(value_from_json(field, a));
        }
        t.memory = subset_from_json(*grp, p.at("memory"));
        t.table = p.at("table").get<std::vector<std::size_t>>();
        return CellularAutomaton<F>(grp, field, std::move(t));
    }
    throw error("unknown rule variant '" + variant + "'");
}

template <ExactField F>
json rule_to_json(const CellularAutomaton<F>& tau)
{
    const auto& grp = tau.group();
    json out{{"group", grp.descriptor()}, {"field", tau.field().name()}};
    if (tau.is_polynomial()) {
        out["variant"] = "polynomial";
        out["payload"] = json{{"alpha", tau.polynomial().alpha.str()}};
    } else if (tau.is_linear()) {
        out["variant"] = "linear";
        json sym = json::array();
        for (const auto& [g, m] : tau.linear().symbol.terms()) {
            sym.push_back(json{{"at", grp.format(g)}, {"matrix", matrix_to_json(m)}});
        }
        out["payload"] = json{{"n", tau.dimension()}, {"symbol", sym}};
    } else {
        const auto& t = tau.table();
        json alpha = json::array();
        for (const auto& a : t.alphabet) {
            alpha.push_back(value_to_json(tau.field(), a));
        }
        out["variant"] = "table";
        out["payload"] = json{{"alphabet", alpha}, {"memory", subset_to_json(grp, t.memory)}, {"table", t.table}};
    }
    return out;
}

/// Edge-list text:
///   labels <s_0> <s_1> ...     (generator names, as printed by the group)
///   vertices <N>
///   <v> <s> <w>                (one edge per line; '#' starts a comment)
inline LabeledGraph read_graph(std::string_view text, const Group& grp)
{
    std::istringstream in{std::string(text)};
    std::string line;
    std::vector<std::string> names;
    for (const auto& g : grp.generators()) {
        names.push_back(grp.format(g));
    }
    std::optional<LabeledGraph> g;
    bool labels_seen = false;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto h = line.find('#'); h != std::string::npos) {
            line.erase(h);
        }
        std::istringstream ls(line);
        std::string first;
        if (!(ls >> first)) {
            continue;
        }
        auto where = " on line " + std::to_string(lineno);
        if (first == "labels") {
            std::vector<std::string> given;
            for (std::string s; ls >> s;) {
                given.push_back(s);
            }
            if (given != names) {
                throw mismatch_error("graph labels do not match the generating set of " + grp.descriptor() + where);
            }
            labels_seen = true;
        } else if (first == "vertices") {
            std::size_t n = 0;
            if (!(ls >> n)) {
                throw parse_error("bad vertex count" + where, 0);
            }
            g.emplace(n, names.size());
        } else {
            if (!labels_seen || !g) {
                throw parse_error("edge before the labels/vertices header" + where, 0);
            }
            std::string s;
            std::uint64_t w = 0;
            if (!(ls >> s >> w)) {
                throw parse_error("expected 'v s w'" + where, 0);
            }
            auto v = detail::parse_uint(first);
            auto it = std::find(names.begin(), names.end(), s);
            if (it == names.end()) {
                throw mismatch_error("unknown label '" + s + "'" + where);
            }
            g->add_edge(static_cast<LabeledGraph::vertex>(v), static_cast<std::size_t>(it - names.begin()),
                        static_cast<LabeledGraph::vertex>(w));
        }
    }
    if (!g) {
        throw parse_error("graph file has no vertices header", 0);
    }
    return std::move(*g);
}

inline std::string write_graph(const LabeledGraph& g, const Group& grp)
{
    std::string out = "labels";
    for (const auto& s : grp.generators()) {
        out += " " + grp.format(s);
    }
    out += "\nvertices " + std::to_string(g.vertex_count()) + "\n";
    for (LabeledGraph::vertex v = 0; v < g.vertex_count(); ++v) {
        for (std::size_t s = 0; s < g.label_count(); ++s) {
            for (auto w : g.targets(v, s)) {
                out += std::to_string(v) + " " + grp.format(grp.generators()[s]) + " " + std::to_string(w) + "\n";
            }
        }
    }
    return out;
}

} // namespace nearca
