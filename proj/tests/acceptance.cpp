// Acceptance run: one PASS/FAIL line per criterion, exit status 0 iff all pass.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include "support.hpp"

using namespace nearca;
using nearca::testing::random_element;
using nearca::testing::random_exponent;
using nearca::testing::random_group_ring;
using nearca::testing::random_matrix_group_ring;
using nearca::testing::random_near_ring;
using nearca::testing::random_nonconstant;
using nearca::testing::random_twisted;

namespace fs = std::filesystem;

namespace {

using Q = RationalField;

const fs::path fixtures{NEARCA_FIXTURES};

// Wall-clock budgets in seconds, one per criterion.
const std::map<int, double> time_limit{{1, 1},   {2, 60},  {3, 120}, {4, 600}, {5, 60}, {6, 120},
                                       {7, 10},  {8, 300}, {9, 120}, {10, 60}, {11, 600}};

struct Check {
    bool ok = true;
    std::vector<std::string> notes;

    void expect(bool cond, const std::string& what)
    {
        if (!cond) {
            ok = false;
            if (notes.size() < 5) {
                notes.push_back(what);
            }
        }
    }
};

int failures = 0;

void criterion(int n, const std::string& title, const std::function<void(Check&)>& body)
{
    Check c;
    auto t0 = std::chrono::steady_clock::now();
    try {
        body(c);
    } catch (const std::exception& e) {
        c.ok = false;
        c.notes.push_back(std::string("exception: ") + e.what());
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    double limit = time_limit.at(n);
    if (secs > limit) {
        c.ok = false;
        c.notes.push_back("over the time budget");
    }
    char timing[64];
    std::snprintf(timing, sizeof timing, "%.2fs of %.0fs", secs, limit);
    std::cout << "criterion " << n << ": " << (c.ok ? "PASS" : "FAIL") << "  " << title << " (" << timing << ")";
    for (const auto& s : c.notes) {
        std::cout << "\n    " << s;
    }
    std::cout << std::endl;
    failures += c.ok ? 0 : 1;
}

template <ExactField F>
CellValue<F> chain(const CellularAutomaton<F>& tau, const CellularAutomaton<F>& sigma, const Pattern<F>& x,
                   const GroupElement& g)
{
    auto mid = apply_window(sigma, x, WindowMode::plus, translate(tau.group(), g, tau.window_memory()));
    return tau.evaluate(mid, g);
}

// Composite evaluated directly against sigma then tau, on every cell of B(1).
template <ExactField F>
bool composite_matches(const CellularAutomaton<F>& tau, const CellularAutomaton<F>& sigma,
                       const CellularAutomaton<F>& comp, std::mt19937_64& rng)
{
    const auto& grp = tau.group();
    auto omega = ball(grp, 1);
    auto dom = set_union(product(grp, product(grp, omega, tau.window_memory()), sigma.window_memory()),
                         product(grp, omega, comp.window_memory()));
    auto x = random_pattern(sigma, dom, rng);
    for (const auto& g : omega) {
        if (!(comp.evaluate(x, g) == chain(tau, sigma, x, g))) {
            return false;
        }
    }
    return true;
}

JobSpec load_job(const fs::path& p)
{
    return job_from_json(json::parse(read_text_file(p.string())), p.parent_path().string());
}

std::vector<fs::path> sorted_dir(const fs::path& d)
{
    std::vector<fs::path> out;
    for (const auto& e : fs::directory_iterator(d)) {
        out.push_back(e.path());
    }
    std::sort(out.begin(), out.end());
    return out;
}

JobSpec search_spec(const std::string& kind, const std::string& field, unsigned workers)
{
    JobSpec s;
    s.subcommand = kind;
    s.field = field;
    s.degree = 2;
    s.inputs = json{{"support", {"-1", "0", "1"}}};
    s.workers = workers;
    return s;
}

std::map<std::string, JobResult> search_results; // filled by criterion 4, reused by 11

} // namespace

int main()
{
    criterion(1, "star product expansion reproduced term for term", [](Check& c) {
        auto z = Group::free_abelian(1);
        Q q;
        auto alpha = parse_near_ring("X[(1)]^3*X[(0)] + 1", z, q);
        auto beta = parse_near_ring("X[(2)]^2 - X[(3)]^2", z, q);
        // g = 1, h = 0, g' = 2, h' = 3 in the closed form
        auto closed = parse_near_ring("(X[3]^2 - X[4]^2)^3*(X[2]^2 - X[3]^2) + 1", z, q);
        auto p = star(alpha, beta);
        c.expect(p == closed, "product " + p.str() + " differs from " + closed.str());
        c.expect(p.size() == 9, "expected 9 terms, got " + std::to_string(p.size()));
        auto r = run_job(load_job(fixtures / "jobs" / "star_worked_example.json"));
        c.expect(json::parse(r.report).at("product") == closed.str(), "star job product differs");
    });

    criterion(2, "left distributivity and associativity on 1000 triples; right distributivity witness", [](Check& c) {
        std::mt19937_64 rng(2);
        int triples = 0;
        auto run = [&](const auto& field, const GroupPtr& g, int count) {
            auto support = ball(*g, 2);
            for (int i = 0; i < count; ++i) {
                auto a = random_near_ring(g, field, support, 3, 1 + rng() % 3, rng);
                auto b = random_near_ring(g, field, support, 3, 1 + rng() % 3, rng);
                auto d = random_near_ring(g, field, support, 3, 1 + rng() % 3, rng);
                c.expect(star(a + b, d) == star(a, d) + star(b, d), "left distributivity fails for " + a.str());
                c.expect(star(star(a, b), d) == star(a, star(b, d)), "associativity fails for " + a.str());
                ++triples;
            }
        };
        for (const auto& g : {Group::free_abelian(1), Group::free_abelian(2)}) {
            run(Q{}, g, 250);
            run(PrimeField(5), g, 250);
        }
        c.expect(triples == 1000, "triple count");
        auto z = Group::free_abelian(1);
        auto a = parse_near_ring("X[0]^2", z, Q{});
        auto b = parse_near_ring("X[0]", z, Q{});
        c.expect(!(star(a, b + b) == star(a, b) + star(a, b)), "right distributivity witness X_0^2, X_0 not produced");
    });

    criterion(3, "order compatibility (i)-(iv) and leading-term products; Magnus order on the free group", [](Check& c) {
        auto order_checks = [&](const GroupPtr& g, int count, std::uint64_t seed) {
            auto order = MonomialOrder::for_group(*g);
            auto lt = [&](const ExponentVector& a, const ExponentVector& b) { return order.less(*g, a, b); };
            auto support = ball(*g, 2);
            std::mt19937_64 rng(seed);
            const ExponentVector zero;
            const std::string tag = g->descriptor() + ": ";
            for (int i = 0; i < count; ++i) {
                auto u = random_exponent(support, 3, rng);
                auto v = random_exponent(support, 3, rng);
                auto w = random_exponent(support, 3, rng);
                auto x = random_element(*g, rng, 2);
                if (!w.is_zero()) {
                    c.expect(lt(zero, w), tag + "(i)");
                    c.expect(lt(u, u + w), tag + "(ii)");
                }
                c.expect(lt(u, v) == lt(shift(*g, x, u), shift(*g, x, v)), tag + "(iii)");
                if (lt(u, v) && !w.is_zero()) {
                    c.expect(lt(exp_convolve(*g, u, w), exp_convolve(*g, v, w)), tag + "(iv) right");
                    c.expect(lt(exp_convolve(*g, w, u), exp_convolve(*g, w, v)), tag + "(iv) left");
                }
            }
            auto small = ball(*g, 1);
            for (int i = 0; i < count; ++i) {
                auto a = random_nonconstant(g, Q{}, small, 2, 3, rng);
                auto b = random_nonconstant(g, Q{}, small, 2, 3, rng);
                auto la = leading_term(a, order), lb = leading_term(b, order);
                auto lp = leading_term(star(a, b), order);
                c.expect(lp.exponent == exp_convolve(*g, la.exponent, lb.exponent), tag + "leading exponent");
                c.expect(lp.coefficient == la.coefficient * power(lb.coefficient, la.exponent.total_degree()),
                         tag + "leading coefficient");
            }
        };
        order_checks(Group::free_abelian(1), 1000, 31);
        order_checks(Group::free_abelian(2), 1000, 32);
        order_checks(Group::free(2), 200, 33);
    });

    criterion(4, "exhaustive unit, idempotent and zero-divisor searches over F2 and F3", [](Check& c) {
        for (const std::string field : {"F2", "F3"}) {
            const std::uint32_t p = field == "F2" ? 2 : 3;
            for (const std::string kind : {"units", "idem", "zerodiv"}) {
                auto r = run_job(search_spec(kind, field, 1));
                search_results[kind + field] = r;
                auto rep = json::parse(r.report);
                const auto& f = rep.at("findings");
                const std::string tag = kind + " over " + field + ": ";
                c.expect(r.exit_code == 0 && rep.at("unexpected_findings") == 0, tag + "unexpected findings");
                if (kind == "units") {
                    // a X_g + b with a != 0, g in {-1, 0, 1}
                    c.expect(f.size() == 3 * (p - 1) * p, tag + std::to_string(f.size()) + " units");
                    for (const auto& x : f) {
                        c.expect(x.at("classification") == "TrivialUnit", tag + x.dump());
                    }
                } else if (kind == "idem") {
                    std::set<std::string> got, want{"X[(0)]"};
                    for (std::uint32_t k = 0; k < p; ++k) {
                        want.insert(std::to_string(k));
                    }
                    for (const auto& x : f) {
                        got.insert(x.at("alpha").get<std::string>());
                    }
                    c.expect(got == want, tag + "idempotents differ from the constants and X_0");
                } else {
                    c.expect(f.empty(), tag + "zero-divisor pair " + (f.empty() ? "" : f[0].dump()));
                }
            }
        }
    });

    criterion(5, "iota and j are additive, multiplicative and injective on 500 pairs each", [](Check& c) {
        std::mt19937_64 rng(5);
        auto z2 = Group::free_abelian(2);
        Q q;
        for (int i = 0; i < 500; ++i) {
            auto a = random_group_ring(z2, q, 1 + rng() % 4, rng, 2);
            auto b = random_group_ring(z2, q, 1 + rng() % 4, rng, 2);
            auto ia = embed_group_ring(a), ib = embed_group_ring(b);
            c.expect(embed_group_ring(a * b) == star(ia, ib), "iota not multiplicative on " + a.str() + ", " + b.str());
            c.expect(embed_group_ring(a + b) == ia + ib, "iota not additive");
            c.expect((a == b) == (ia == ib), "iota not injective");
            c.expect(embed_group_ring(a - b).is_zero() == (a == b), "iota kernel nonzero");
        }
        auto twisted_pairs = [&](const auto& field) {
            using F = std::decay_t<decltype(field)>;
            auto z = Group::free_abelian(1);
            auto rand = [&] {
                TwistedGroupRingElement<F> t(z, TwistedRing<F>{field});
                for (std::size_t k = 1 + rng() % 3; k-- > 0;) {
                    t.add_term(random_element(*z, rng, 2), random_twisted(field, 3, rng));
                }
                return t;
            };
            for (int i = 0; i < 500; ++i) {
                auto x = rand(), y = rand();
                auto jx = embed_twisted(x), jy = embed_twisted(y);
                c.expect(embed_twisted(x * y) == star(jx, jy), "j not multiplicative over " + field.name());
                c.expect(embed_twisted(x + y) == jx + jy, "j not additive over " + field.name());
                c.expect((x == y) == (jx == jy), "j not injective over " + field.name());
            }
        };
        twisted_pairs(PrimeField(2));
        twisted_pairs(GaloisField(2, 2));
    });

    criterion(6, "Phi and Psi turn products into composition; Phi injective over QQ only", [](Check& c) {
        std::mt19937_64 rng(6);
        auto z = Group::free_abelian(1);
        auto support = ball(*z, 1);
        for (int i = 0; i < 100; ++i) {
            auto a = random_near_ring(z, Q{}, support, 2, 3, rng);
            auto b = random_near_ring(z, Q{}, support, 2, 3, rng);
            c.expect(composite_matches(phi(a), phi(b), phi(star(a, b)), rng), "Phi(a*b) differs for " + a.str());
        }
        PrimeField f3(3);
        for (int i = 0; i < 100; ++i) {
            auto a = random_matrix_group_ring(z, f3, 2, 3, rng);
            auto b = random_matrix_group_ring(z, f3, 2, 3, rng);
            c.expect(composite_matches(psi(a), psi(b), psi(a * b), rng), "Psi(ab) differs for " + a.str());
        }
        int pairs = 0;
        while (pairs < 100) {
            auto a = random_near_ring(z, Q{}, support, 3, 3, rng);
            auto b = random_near_ring(z, Q{}, support, 3, 3, rng);
            if (a == b) {
                continue;
            }
            ++pairs;
            auto ta = phi(a), tb = phi(b);
            bool differ = false;
            for (int k = 0; k < 50 && !differ; ++k) {
                auto x = random_pattern(ta, support, rng);
                differ = !(ta.evaluate(x, z->identity()) == tb.evaluate(x, z->identity()));
            }
            c.expect(differ, "Phi identifies " + a.str() + " and " + b.str());
        }
        for (std::uint32_t p : {2U, 3U, 5U}) {
            PrimeField f(p);
            auto xp = phi(parse_near_ring("X[0]^" + std::to_string(p), z, f));
            auto x = phi(parse_near_ring("X[0]", z, f));
            bool same = true;
            for (std::uint32_t v = 0; v < p; ++v) {
                auto pat = Pattern<PrimeField>::from_pairs({{z->identity(), {f.from_int(v)}}});
                same = same && xp.evaluate(pat, z->identity()) == x.evaluate(pat, z->identity());
            }
            c.expect(same, "X_0^p and X_0 differ as maps over F" + std::to_string(p));
        }
    });

    criterion(7, "invertible pair composes to the identity; ca-invert recovers nu with memory {0,1}", [](Check& c) {
        Q q;
        auto tau = rule_from_json(Group::free_abelian(1), q, json::parse(read_text_file((fixtures / "rules" / "pair_tau.json").string())));
        auto nu = rule_from_json(tau.group_ptr(), q, json::parse(read_text_file((fixtures / "rules" / "pair_nu.json").string())));
        const auto& z = tau.group();
        std::mt19937_64 rng(7);
        for (std::int64_t k = 1; k <= 16; ++k) {
            auto omega = box(z, 0, k);
            auto x = random_pattern(tau, box(z, 0, k + 2), rng);
            for (const auto& g : omega) {
                c.expect(chain(tau, nu, x, g) == x.at(z, g), "tau after nu is not the identity");
                c.expect(chain(nu, tau, x, g) == x.at(z, g), "nu after tau is not the identity");
            }
        }
        auto inv = find_left_inverse(tau, 4);
        c.expect(inv.inverse.has_value(), "no left inverse found");
        if (inv.inverse) {
            c.expect(inv.inverse->memory_set() == box(z, 0, 2), "memory set is not {0,1}");
            c.expect(inv.inverse->linear().symbol == nu.linear().symbol, "recovered inverse differs from nu");
        }
        auto r = json::parse(run_job(load_job(fixtures / "jobs" / "pair_invert.json")).report);
        c.expect(r.at("result") == "Found" && r.at("memory_set") == json::array({"(0)", "(1)"}), "ca-invert job report");
    });

    criterion(8, "Garden of Eden triple consistent on the linear fixture suite", [](Check& c) {
        int suite = 0;
        for (const auto& path : sorted_dir(fixtures / "rules")) {
            auto j = json::parse(read_text_file(path.string()));
            auto grp = parse_group_descriptor(j.at("group").get<std::string>());
            const auto name = path.stem().string();
            std::visit(
                [&](const auto& field) {
                    auto tau = rule_from_json(grp, field, j);
                    auto rep = goe_report(tau, 32, 8);
                    ++suite;
                    c.expect(rep.verdict != GoeVerdict::theorem_violation_alarm, name + ": theorem-violation alarm");
                    const Rational n(static_cast<std::int64_t>(tau.dimension()));
                    c.expect(!(rep.mdim.estimate < Rational(0)) && !(n < rep.mdim.estimate), name + ": estimate out of [0, n]");
                    if (name.find("identity") != std::string::npos) {
                        c.expect(rep.mdim.estimate == n, name + ": identity estimate is not n");
                    }
                    if (name == "z_minus_one") {
                        c.expect(rep.mdim.estimate == Rational(1), name + ": estimate is not 1");
                        c.expect(rep.verdict == GoeVerdict::consistent_surjective, name + ": not surjective");
                    }
                    if (name.find("rank1") != std::string::npos) {
                        for (std::size_t i = 2; i <= rep.mdim.q.size(); ++i) {
                            c.expect(rep.mdim.q[i - 1] < Rational(2), name + ": q_" + std::to_string(i) + " >= 2");
                        }
                        c.expect(rep.verdict == GoeVerdict::consistent_non_surjective, name + ": not triple-negative");
                    }
                },
                parse_field(j.at("field").get<std::string>()));
        }
        c.expect(suite >= 10, "fixture suite has " + std::to_string(suite) + " rules");
    });

    criterion(9, "sofic certificates on cycles, tori and 20 Schreier graphs", [](Check& c) {
        auto z = Group::free_abelian(1);
        auto z2 = Group::free_abelian(2);
        auto f = Group::free(2);
        auto inv = [&](const SoficCertificate& s, const std::string& tag) {
            c.expect(s.nesting_ok, tag + ": nesting");
            c.expect(s.ball_inclusion_ok, tag + ": ball inclusion");
            c.expect(s.packing_ok, tag + ": packing inequality");
            c.expect(s.covering_ok, tag + ": covering");
        };
        auto c10 = cayley_quotient(*z, QuotientParams::cycle(10));
        auto ok = certificate(c10, *z, 3, Rational(1, 10));
        c.expect(ok.pass, "cycle(10), r=3 fails");
        inv(ok, "cycle(10) r=3");
        for (auto eps : {Rational(1, 100), Rational(1, 2), Rational(9, 10), Rational(999, 1000)}) {
            auto bad = certificate(c10, *z, 5, eps);
            c.expect(!bad.pass, "cycle(10), r=5 passes at eps " + eps.str());
            inv(bad, "cycle(10) r=5");
        }
        auto t = certificate(cayley_quotient(*z2, QuotientParams::torus(16)), *z2, 3, Rational(1, 100));
        c.expect(t.pass, "torus(16), r=3 fails");
        inv(t, "torus(16)");
        for (std::uint64_t seed = 0; seed < 20; ++seed) {
            auto g = cayley_quotient(*f, QuotientParams::schreier(200, seed));
            c.expect(g.involution_consistent(inverse_labels(*f)), "Schreier graph not involution-consistent");
            for (std::size_t r : {1U, 2U}) {
                inv(certificate(g, *f, r, Rational(1, 2)), "schreier seed " + std::to_string(seed));
            }
        }
    });

    criterion(10, "rank audit on cycle(16): eta2 mu1 is the projection and rank(Z) >= n|V(3r)|", [](Check& c) {
        auto z = Group::free_abelian(1);
        Q q;
        auto load = [&](const char* n) {
            return rule_from_json(z, q, json::parse(read_text_file((fixtures / "rules" / n).string())));
        };
        auto c16 = cayley_quotient(*z, QuotientParams::cycle(16));
        auto shift = load("shift.json");
        auto back = find_left_inverse(shift, 2).inverse;
        c.expect(back.has_value(), "no inverse for the shift");
        auto s = graph_ca_rank_audit(c16, shift, 2, back);
        c.expect(s.projection_ok.value_or(false), "shift: eta2 mu1 is not the projection");
        c.expect(s.inequality_ok && s.rank_mu1 >= s.n * s.v_3r, "shift: rank inequality");
        auto p = graph_ca_rank_audit(c16, load("pair_tau.json"), 1, std::optional(load("pair_nu.json")));
        c.expect(p.projection_ok.value_or(false), "pair: eta2 mu1 is not the projection");
        c.expect(p.inequality_ok && p.rank_mu1 >= 2 * p.v_3r, "pair: rank inequality");
    });

    criterion(11, "reports byte-identical across runs and across 1 and 4 workers", [](Check& c) {
        for (const auto& path : sorted_dir(fixtures / "jobs")) {
            auto spec = load_job(path);
            spec.workers = 1;
            auto a = run_job(spec);
            auto b = run_job(spec);
            spec.workers = 4;
            auto d = run_job(spec);
            const auto name = path.stem().string();
            c.expect(a.report == b.report && a.findings == b.findings, name + ": differs between runs");
            c.expect(a.report == d.report && a.findings == d.findings, name + ": differs with 4 workers");
            auto golden = fixtures / "expected" / (name + ".json");
            c.expect(fs::exists(golden) && a.report == read_text_file(golden.string()), name + ": differs from golden");
        }
        for (const std::string kind : {"units", "idem", "zerodiv"}) {
            auto four = run_job(search_spec(kind, "F3", 4));
            const auto& one = search_results[kind + "F3"];
            c.expect(one.report == four.report && one.findings == four.findings, kind + " over F3 differs with 4 workers");
        }
    });

    std::cout << (failures == 0 ? "all criteria pass" : std::to_string(failures) + " criteria fail") << std::endl;
    return failures == 0 ? 0 : 1;
}
