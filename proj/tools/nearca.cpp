// nearca: command-line front end for the nearca library.
//
//   nearca star --group zd:1 --field QQ --alpha 'X[(1)]^3*X[(0)] + 1' --beta '...'
//   nearca goe --field QQ --rule rule.json
//   nearca --job job.json
//
// Worker threads for searches come from NEARCA_WORKERS (default 1).

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "nearca/jobs.hpp"

namespace {

nearca::json json_or_path(const std::string& s)
{
    auto t = nearca::detail::trim(s);
    if (!t.empty() && (t[0] == '{' || t[0] == '[')) {
        return nearca::json::parse(t);
    }
    return t;
}

// "cycle:10", "torus:16", "schreier:200:7", "finite", or a graph file path.
nearca::json graph_input(const std::string& s)
{
    auto parts = std::vector<std::string>{};
    std::size_t st = 0;
    for (std::size_t i = 0; i <= s.size(); ++i) {
        if (i == s.size() || s[i] == ':') {
            parts.push_back(s.substr(st, i - st));
            st = i + 1;
        }
    }
    const auto& k = parts[0];
    if (k == "cycle" || k == "torus" || k == "schreier") {
        if (parts.size() < 2) {
            throw nearca::error("graph '" + s + "' needs a size, e.g. " + k + ":10");
        }
        nearca::json j{{"quotient", k}, {"n", nearca::detail::parse_uint(parts[1], k.size() + 1)}};
        if (parts.size() > 2) {
            j["seed"] = nearca::detail::parse_uint(parts[2]);
        }
        return j;
    }
    if (k == "finite") {
        return nearca::json{{"quotient", "finite"}};
    }
    return s;
}

std::optional<unsigned> env_workers()
{
    const char* w = std::getenv("NEARCA_WORKERS");
    if (w == nullptr || *w == '\0') {
        return std::nullopt;
    }
    auto n = nearca::detail::parse_uint(w);
    if (n == 0 || n > 1024) {
        throw nearca::error("NEARCA_WORKERS must be in 1..1024");
    }
    return static_cast<unsigned>(n);
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Exact computations with near-rings, group rings and cellular automata over groups"};
    app.set_version_flag("--version", "nearca 1.0.0");

    std::string subcommand, job_file;
    nearca::JobSpec spec;
    std::uint64_t degree = 0, radius = 0, window = 0;
    std::string alpha, beta, element, times, twisted, rule, rule2, pattern, mode, window_set, graph, epsilon, inverse,
        support;
    std::uint64_t max_space = 0;

    app.add_option("subcommand", subcommand, "star | units | idem | zerodiv | embed | ca-step | ca-compose | ca-invert | "
                                             "mdim | goe | sofic-check | graph-audit")
        ->check(CLI::IsMember(nearca::job_subcommands()));
    app.add_option("--job", job_file, "JSON job file; command-line flags override its entries");
    auto* o_group = app.add_option("--group", spec.group, "zd:<d> | free:<k> | cyclic:<n> | finite:<table.json>");
    auto* o_field = app.add_option("--field", spec.field, "QQ | F<p> | GF(<p>^<k>)");
    auto* o_degree = app.add_option("--degree", degree, "maximum total degree for searches")->check(CLI::PositiveNumber);
    auto* o_radius = app.add_option("--radius", radius, "radius r (sofic, inverse search, check windows)")
                         ->check(CLI::PositiveNumber);
    auto* o_window = app.add_option("--window", window, "largest window index (mdim, goe, ca-compose)")
                         ->check(CLI::PositiveNumber);
    auto* o_seed = app.add_option("--seed", spec.seed, "random seed (recorded in every report)");
    auto* o_out = app.add_option("--out", spec.out, "report path; findings go to <out>.jsonl");
    app.add_option("--alpha", alpha, "near-ring element, e.g. 'X[(1)]^3*X[(0)] + 1'");
    app.add_option("--beta", beta, "near-ring element");
    app.add_option("--element", element, "group-ring element for embed, e.g. '1 + 2*[(1)]'");
    app.add_option("--times", times, "second group-ring element for embed");
    app.add_option("--twisted", twisted, "twisted group-ring element for embed, as JSON");
    app.add_option("--rule", rule, "rule file or inline JSON");
    app.add_option("--rule2", rule2, "second rule for ca-compose (applied first)");
    app.add_option("--pattern", pattern, "pattern file or inline JSON");
    app.add_option("--mode", mode, "ca-step window mode: plus | minus");
    app.add_option("--window-set", window_set, "ca-step output window as a JSON array of elements");
    app.add_option("--graph", graph, "graph file, cycle:<N>, torus:<N>, schreier:<N>[:seed] or finite");
    app.add_option("--epsilon", epsilon, "sofic tolerance, e.g. 1/10");
    app.add_option("--inverse", inverse, "left-inverse rule for graph-audit, or 'auto'");
    app.add_option("--support", support, "search support as a JSON array of elements");
    app.add_option("--max-space", max_space, "cap on the search space size");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (!job_file.empty()) {
            auto dir = std::filesystem::path(job_file).parent_path().string();
            auto js = nearca::job_from_json(nearca::json::parse(nearca::read_text_file(job_file)), dir);
            auto keep = spec;
            spec = js;
            if (*o_group) spec.group = keep.group;
            if (*o_field) spec.field = keep.field;
            if (*o_seed) spec.seed = keep.seed;
            if (*o_out) spec.out = keep.out;
        }
        if (!subcommand.empty()) {
            spec.subcommand = subcommand;
        }
        if (spec.subcommand.empty()) {
            std::cerr << "error: a subcommand or --job is required\n" << app.help();
            return 2;
        }
        if (*o_degree) spec.degree = degree;
        if (*o_radius) spec.radius = radius;
        if (*o_window) spec.window = window;
        auto& in = spec.inputs;
        auto put = [&](const char* key, const std::string& v) {
            if (!v.empty()) in[key] = v;
        };
        put("alpha", alpha);
        put("beta", beta);
        put("element", element);
        put("times", times);
        put("mode", mode);
        put("epsilon", epsilon);
        if (!twisted.empty()) in["twisted"] = nearca::json::parse(twisted);
        if (!rule.empty()) in["rule"] = json_or_path(rule);
        if (!rule2.empty()) in["rule2"] = json_or_path(rule2);
        if (!pattern.empty()) in["pattern"] = json_or_path(pattern);
        if (!window_set.empty()) in["window_set"] = nearca::json::parse(window_set);
        if (!graph.empty()) in["graph"] = graph_input(graph);
        if (!inverse.empty()) in["inverse"] = inverse == "auto" ? nearca::json("auto") : json_or_path(inverse);
        if (!support.empty()) in["support"] = nearca::json::parse(support);
        if (max_space) in["max_space"] = max_space;
        if (auto w = env_workers()) {
            spec.workers = *w;
        }
    } catch (const nearca::error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const nearca::json::exception& e) {
        std::cerr << "error: malformed JSON: " << e.what() << "\n";
        return 2;
    }

    auto res = nearca::run_job(spec);
    if (res.exit_code == 2) {
        std::cerr << "error: " << res.message << "\n";
        return 2;
    }
    if (spec.out.empty()) {
        std::cout << res.report;
        std::cout << res.findings;
    }
    if (res.exit_code == 1) {
        std::cerr << "alarm: see the report\n";
    }
    return res.exit_code;
}
