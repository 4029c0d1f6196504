#pragma once

// Job dispatch behind the command-line tool. A job names a subcommand, a
// group, a field and subcommand inputs; it produces one JSON report (and
// JSON-lines findings for searches). Identical jobs give identical bytes.
//
// Exit codes: 0 success, 1 theorem-violation alarm, 2 input error.

#include <cstdint>
#include <fstream>
#include <optional>
#include <random>
#include <string>
#include <variant>
#include <vector>

#include "nearca/ca.hpp"
#include "nearca/error.hpp"
#include "nearca/fields.hpp"
#include "nearca/group_ring.hpp"
#include "nearca/io.hpp"
#include "nearca/kaplansky.hpp"
#include "nearca/linear_ca.hpp"
#include "nearca/near_ring.hpp"
#include "nearca/parse.hpp"
#include "nearca/sofic.hpp"

namespace nearca {

struct JobSpec {
    std::string subcommand;
    std::string group = "zd:1";
    std::string field = "QQ";
    json inputs = json::object(); // subcommand inputs (expressions, rules, patterns, graphs)
    std::optional<std::uint64_t> degree;
    std::optional<std::uint64_t> radius;
    std::optional<std::uint64_t> window;
    std::uint64_t seed = 0;
    unsigned workers = 1;
    std::string out;
    std::string base_dir; // relative paths inside inputs resolve against this
};

struct JobResult {
    int exit_code = 0;
    std::string report;   // one JSON document
    std::string findings; // JSON lines, possibly empty
    std::string message;  // error text when exit_code == 2
};

inline const std::vector<std::string>& job_subcommands()
{
    static const std::vector<std::string> names{"star",       "units",      "idem",  "zerodiv", "embed",
                                                "ca-step",    "ca-compose", "ca-invert", "mdim", "goe",
                                                "sofic-check", "graph-audit"};
    return names;
}

/// Reads a job file: {"subcommand", "group", "field", "degree", "radius",
/// "window", "seed", "workers", "out", "inputs": {...}}.
inline JobSpec job_from_json(const json& j, const std::string& base_dir = "")
{
    JobSpec s;
    s.base_dir = base_dir;
    for (const auto& [k, v] : j.items()) {
        if (k == "subcommand") {
            s.subcommand = v.get<std::string>();
        } else if (k == "group") {
            s.group = v.get<std::string>();
        } else if (k == "field") {
            s.field = v.get<std::string>();
        } else if (k == "degree") {
            s.degree = v.get<std::uint64_t>();
        } else if (k == "radius") {
            s.radius = v.get<std::uint64_t>();
        } else if (k == "window") {
            s.window = v.get<std::uint64_t>();
        } else if (k == "seed") {
            s.seed = v.get<std::uint64_t>();
        } else if (k == "workers") {
            s.workers = v.get<unsigned>();
        } else if (k == "out") {
            s.out = v.get<std::string>();
        } else if (k == "inputs") {
            s.inputs = v;
        } else {
            throw error("unknown job key '" + k + "'");
        }
    }
    return s;
}

namespace detail {

class Job {
public:
    explicit Job(const JobSpec& spec) : spec_(spec), group_(parse_group_descriptor(spec.group, spec.base_dir)) {}

    JobResult run()
    {
        return std::visit([&](const auto& f) { return dispatch(f); }, parse_field(spec_.field));
    }

private:
    struct Alarm {
        bool raised = false;
    };

    json header() const
    {
        return json{{"subcommand", spec_.subcommand}, {"group", group_->descriptor()}, {"field", field_name(parse_field(spec_.field))},
                    {"seed", spec_.seed}};
    }

    const json& input(const std::string& key) const
    {
        if (!spec_.inputs.contains(key)) {
            throw error("job input '" + key + "' is required for " + spec_.subcommand);
        }
        return spec_.inputs.at(key);
    }

    std::string path_of(const std::string& p) const
    {
        if (spec_.base_dir.empty() || p.empty() || p[0] == '/') {
            return p;
        }
        return spec_.base_dir + "/" + p;
    }

    /// Inline JSON object, or a string naming a JSON file.
    json document(const std::string& key) const
    {
        const json& v = input(key);
        if (v.is_string()) {
            return json::parse(read_text_file(path_of(v.get<std::string>())));
        }
        return v;
    }

    template <ExactField F>
    CellularAutomaton<F> rule(const F& field, const std::string& key = "rule") const
    {
        return rule_from_json(group_, field, document(key));
    }

    LabeledGraph graph() const
    {
        const json& g = input("graph");
        if (g.is_string()) {
            return read_graph(read_text_file(path_of(g.get<std::string>())), *group_);
        }
        std::string kind = g.at("quotient").get<std::string>();
        std::size_t n = g.value("n", std::size_t{1});
        if (kind == "cycle") {
            return cayley_quotient(*group_, QuotientParams::cycle(n));
        }
        if (kind == "torus") {
            return cayley_quotient(*group_, QuotientParams::torus(n));
        }
        if (kind == "schreier") {
            return cayley_quotient(*group_, QuotientParams::schreier(n, g.value("seed", spec_.seed)));
        }
        if (kind == "finite") {
            return cayley_quotient(*group_, QuotientParams::finite());
        }
        throw error("unknown quotient kind '" + kind + "'");
    }

    template <ExactField F>
    JobResult dispatch(const F& field)
    {
        const auto& c = spec_.subcommand;
        json rep = header();
        std::string lines;
        Alarm alarm;
        if (c == "star") {
            star_job(field, rep);
        } else if (c == "units" || c == "idem" || c == "zerodiv") {
            if constexpr (FiniteExactField<F>) {
                search_job(field, rep, lines, alarm);
            } else {
                throw error("exhaustive searches need a finite field");
            }
        } else if (c == "embed") {
            embed_job(field, rep, alarm);
        } else if (c == "ca-step") {
            ca_step_job(field, rep);
        } else if (c == "ca-compose") {
            ca_compose_job(field, rep, alarm);
        } else if (c == "ca-invert") {
            ca_invert_job(field, rep);
        } else if (c == "mdim") {
            mdim_job(field, rep);
        } else if (c == "goe") {
            goe_job(field, rep, alarm);
        } else if (c == "sofic-check") {
            sofic_job(rep, alarm);
        } else if (c == "graph-audit") {
            graph_audit_job(field, rep, alarm);
        } else {
            throw error("unknown subcommand '" + c + "'");
        }
        rep["alarm"] = alarm.raised;
        return JobResult{alarm.raised ? 1 : 0, rep.dump(2) + "\n", lines, {}};
    }

    template <ExactField F>
    void star_job(const F& field, json& rep)
    {
        auto a = parse_near_ring(input("alpha").get<std::string>(), group_, field);
        auto b = parse_near_ring(input("beta").get<std::string>(), group_, field);
        auto p = star(a, b);
        rep["alpha"] = a.str();
        rep["beta"] = b.str();
        rep["product"] = p.str();
        rep["terms"] = p.size();
    }

    template <FiniteExactField F>
    void search_job(const F& field, json& rep, std::string& lines, Alarm& alarm)
    {
        const auto& c = spec_.subcommand;
        SearchKind kind = c == "units" ? SearchKind::unit : (c == "idem" ? SearchKind::idempotent : SearchKind::zero_divisor);
        FiniteSubset support = spec_.inputs.contains("support") ? subset_from_json(*group_, spec_.inputs.at("support"))
                                                               : ball(*group_, spec_.radius.value_or(1));
        std::uint64_t degree = spec_.degree.value_or(2);
        SearchOptions opt;
        opt.workers = spec_.workers;
        if (spec_.inputs.contains("max_space")) {
            opt.max_space = spec_.inputs.at("max_space").get<std::uint64_t>();
        }
        auto res = exhaustive_search(kind, group_, field, support, degree, opt);
        rep["kind"] = to_string(kind);
        rep["support"] = subset_to_json(*group_, support);
        rep["max_total_degree"] = degree;
        rep["monomials"] = res.monomials.size();
        rep["space_size"] = res.space_size;
        std::size_t unexpected = 0;
        json findings = json::array();
        for (const auto& f : res.findings) {
            json rec{{"kind", to_string(f.kind)}, {"alpha", f.alpha.str()}, {"beta", f.beta.str()},
                     {"product", f.product.str()}, {"classification", f.classification}};
            if (f.reverse_product) {
                rec["reverse_product"] = f.reverse_product->str();
            }
            bool expected = (kind == SearchKind::unit && f.classification == "TrivialUnit") ||
                            (kind == SearchKind::idempotent && f.classification != "other");
            if (!expected) {
                ++unexpected;
            }
            lines += rec.dump() + "\n";
            findings.push_back(std::move(rec));
        }
        rep["findings"] = findings;
        rep["unexpected_findings"] = unexpected;
        alarm.raised = unexpected > 0;
    }

    template <ExactField F>
    void embed_job(const F& field, json& rep, Alarm& alarm)
    {
        if (spec_.inputs.contains("element")) {
            auto x = parse_group_ring(input("element").get<std::string>(), group_, field);
            rep["map"] = "iota";
            rep["element"] = x.str();
            rep["image"] = embed_group_ring(x).str();
            if (spec_.inputs.contains("times")) {
                auto y = parse_group_ring(input("times").get<std::string>(), group_, field);
                auto lhs = embed_group_ring(x * y);
                auto rhs = star(embed_group_ring(x), embed_group_ring(y));
                rep["times"] = y.str();
                rep["image_of_product"] = lhs.str();
                rep["product_of_images"] = rhs.str();
                rep["multiplicative"] = lhs == rhs;
                alarm.raised = !(lhs == rhs);
            }
            return;
        }
        if (field.characteristic() == 0) {
            throw error("the twisted embedding needs positive characteristic");
        }
        auto twisted = [&](const json& j) {
            TwistedGroupRingElement<F> t(group_, TwistedRing<F>{field});
            for (const auto& term : j) {
                std::vector<typename F::element> coeffs;
                for (const auto& c : term.at("coeffs")) {
                    coeffs.push_back(scalar_from_json(field, c));
                }
                t.add_term(group_->parse(term.at("at").get<std::string>()), TwistedPoly<F>(field, coeffs));
            }
            return t;
        };
        auto x = twisted(input("twisted"));
        rep["map"] = "j";
        rep["element"] = x.str();
        rep["image"] = embed_twisted(x).str();
        if (spec_.inputs.contains("times")) {
            auto y = twisted(input("times"));
            auto lhs = embed_twisted(x * y);
            auto rhs = star(embed_twisted(x), embed_twisted(y));
            rep["times"] = y.str();
            rep["image_of_product"] = lhs.str();
            rep["product_of_images"] = rhs.str();
            rep["multiplicative"] = lhs == rhs;
            alarm.raised = !(lhs == rhs);
        }
    }

    template <ExactField F>
    void ca_step_job(const F& field, json& rep)
    {
        auto tau = rule(field);
        auto p = pattern_from_json(*group_, field, document("pattern"));
        std::string mode = spec_.inputs.value("mode", std::string("plus"));
        FiniteSubset omega = spec_.inputs.contains("window_set") ? subset_from_json(*group_, input("window_set")) : p.domain;
        auto out = apply_window(tau, p, mode == "minus" ? WindowMode::minus : WindowMode::plus, omega);
        rep["mode"] = mode;
        rep["window_set"] = subset_to_json(*group_, omega);
        rep["output"] = pattern_to_json(*group_, field, out);
    }

    template <ExactField F>
    std::vector<FiniteSubset> test_windows(std::size_t count) const
    {
        std::vector<FiniteSubset> ws;
        if (group_->kind() == GroupKind::free_abelian && group_->rank() == 1) {
            for (std::size_t k = 1; k <= count; ++k) {
                ws.push_back(box(*group_, 0, static_cast<std::int64_t>(k)));
            }
        } else {
            for (std::size_t r = 0; r < std::min<std::size_t>(count, 3); ++r) {
                ws.push_back(ball(*group_, r));
            }
        }
        return ws;
    }

    template <ExactField F>
    void ca_compose_job(const F& field, json& rep, Alarm& alarm)
    {
        auto tau = rule(field, "rule");
        auto sigma = rule(field, "rule2");
        auto comp = compose(tau, sigma);
        std::mt19937_64 rng(spec_.seed);
        std::size_t checked = 0;
        bool agree = true;
        for (const auto& w : test_windows<F>(spec_.window.value_or(16))) {
            auto mt = tau.window_memory();
            auto dom = product(*group_, product(*group_, w, mt), sigma.window_memory());
            auto x = random_pattern(sigma, dom, rng);
            auto chained = apply_window(tau, apply_window(sigma, x, WindowMode::plus, product(*group_, w, mt)),
                                        WindowMode::plus, w);
            auto direct = apply_window(comp, x, WindowMode::plus, w);
            agree = agree && chained == direct;
            ++checked;
        }
        rep["composite"] = rule_to_json(comp);
        rep["windows_checked"] = checked;
        rep["agrees_with_chained_application"] = agree;
        bool identity = comp.is_linear() ? comp.linear().symbol == MatrixGroupRing<F>::one(group_, MatrixRing<F>{field, comp.dimension()})
                        : comp.is_polynomial() ? comp.polynomial().alpha == NearRingElement<F>::identity(group_, field)
                                                : false;
        rep["composite_is_identity"] = identity;
        alarm.raised = !agree;
    }

    template <ExactField F>
    void ca_invert_job(const F& field, json& rep)
    {
        auto tau = rule(field);
        std::size_t r_max = spec_.radius.value_or(8);
        auto res = find_left_inverse(tau, r_max);
        if (res.inverse) {
            rep["result"] = "Found";
            rep["radius"] = res.radius;
            rep["memory_set"] = subset_to_json(*group_, res.inverse->memory_set());
            rep["inverse"] = rule_to_json(*res.inverse);
        } else {
            rep["result"] = "NotFoundUpTo";
            rep["radius"] = r_max;
        }
    }

    static json rationals(const std::vector<Rational>& q)
    {
        json a = json::array();
        for (const auto& x : q) {
            a.push_back(x.str());
        }
        return a;
    }

    template <ExactField F>
    void mdim_job(const F& field, json& rep)
    {
        auto tau = rule(field);
        auto est = mdim_estimate(tau, spec_.window.value_or(16));
        rep["n"] = tau.dimension();
        rep["q_sequence"] = rationals(est.q);
        rep["estimate"] = est.estimate.str();
        rep["estimate_decimal"] = est.estimate.decimal(6);
    }

    template <ExactField F>
    void goe_job(const F& field, json& rep, Alarm& alarm)
    {
        auto tau = rule(field);
        auto g = goe_report(tau, spec_.window.value_or(32), spec_.radius.value_or(8));
        rep["rule"] = rule_to_json(tau);
        rep["n"] = tau.dimension();
        json surj{{"verdict", g.surjectivity.full_rank ? "FullRankUpTo" : "NotSurjective"},
                  {"window", subset_to_json(*group_, g.surjectivity.window)},
                  {"rank", g.surjectivity.rank},
                  {"full", g.surjectivity.expected}};
        json pre{{"verdict", g.preinjectivity.kernel_free ? "KernelFreeUpTo" : "NotPreInjective"},
                 {"window", subset_to_json(*group_, g.preinjectivity.window)}};
        if (g.preinjectivity.witness) {
            pre["witness"] = pattern_to_json(*group_, field, *g.preinjectivity.witness);
        }
        rep["verdicts"] = json{{"surjectivity", surj}, {"preinjectivity", pre}};
        rep["q_sequence"] = rationals(g.mdim.q);
        rep["mdim_estimate"] = g.mdim.estimate.str();
        rep["mdim_estimate_decimal"] = g.mdim.estimate.decimal(6);
        rep["consistency"] = to_string(g.verdict);
        alarm.raised = g.verdict == GoeVerdict::theorem_violation_alarm;
    }

    void sofic_job(json& rep, Alarm& alarm)
    {
        auto g = graph();
        std::size_t r = spec_.radius.value_or(1);
        Rational eps = parse_field_element(input("epsilon").is_string() ? input("epsilon").get<std::string>()
                                                                         : input("epsilon").dump(),
                                           RationalField{});
        auto c = certificate(g, *group_, r, eps);
        auto verts = [](const std::vector<LabeledGraph::vertex>& v) { return json(v); };
        rep["r"] = r;
        rep["epsilon"] = eps.str();
        rep["vertices"] = c.vertices;
        rep["edges"] = g.edge_count();
        rep["involution_consistent"] = g.involution_consistent(inverse_labels(*group_));
        rep["V_r"] = c.v_r.size();
        rep["V_2r"] = c.v_2r.size();
        rep["V_3r"] = c.v_3r.size();
        rep["packing"] = verts(c.packing);
        rep["ball_2r"] = c.ball_2r;
        rep["pass"] = c.pass;
        rep["invariants"] = json{{"nesting", c.nesting_ok}, {"ball_inclusion", c.ball_inclusion_ok}, {"packing", c.packing_ok},
                                 {"covering", c.covering_ok}};
        rep["transcript"] = c.transcript;
        alarm.raised = !c.invariants_ok();
    }

    template <ExactField F>
    void graph_audit_job(const F& field, json& rep, Alarm& alarm)
    {
        auto g = graph();
        auto tau = rule(field);
        std::size_t r = spec_.radius.value_or(1);
        std::optional<CellularAutomaton<F>> inv;
        if (spec_.inputs.contains("inverse")) {
            const json& v = input("inverse");
            if (v.is_string() && v.get<std::string>() == "auto") {
                auto found = find_left_inverse(tau, r);
                if (!found.inverse) {
                    throw error("no left inverse with memory set in B_S(" + std::to_string(r) + ")");
                }
                inv = found.inverse;
            } else {
                inv = rule(field, "inverse");
            }
        }
        auto a = graph_ca_rank_audit(g, tau, r, inv);
        rep["r"] = r;
        rep["n"] = a.n;
        rep["V_r"] = a.v_r;
        rep["V_2r"] = a.v_2r;
        rep["V_3r"] = a.v_3r;
        rep["rank_mu1"] = a.rank_mu1;
        rep["n_V_3r"] = a.n * a.v_3r;
        rep["rank_inequality"] = a.inequality_ok;
        if (a.projection_ok) {
            rep["eta2_mu1_is_projection"] = *a.projection_ok;
            alarm.raised = !*a.projection_ok || !a.inequality_ok;
        }
    }

    const JobSpec& spec_;
    GroupPtr group_;
};

} // namespace detail

/// Runs a job; never throws for input problems (they map to exit code 2).
inline JobResult run_job(const JobSpec& spec)
{
    JobResult r;
    try {
        r = detail::Job(spec).run();
    } catch (const nearca::error& e) {
        r = JobResult{2, {}, {}, e.what()};
    } catch (const nlohmann::json::exception& e) {
        r = JobResult{2, {}, {}, std::string("malformed JSON input: ") + e.what()};
    }
    if (r.exit_code != 2 && !spec.out.empty()) {
        std::ofstream(spec.out, std::ios::binary) << r.report;
        if (!r.findings.empty()) {
            std::ofstream(spec.out + ".jsonl", std::ios::binary) << r.findings;
        }
    }
    return r;
}

} // namespace nearca
