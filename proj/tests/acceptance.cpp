// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include "tlapbt/examples.hpp"
#include "tlapbt/explorer/explorer.hpp"
#include "tlapbt/focusst/steam_boiler.hpp"
#include "tlapbt/pbt/adapter.hpp"
#include "tlapbt/pbt/engine.hpp"
#include "tlapbt/pbt/steam_boiler.hpp"
#include "tlapbt/tla/parser.hpp"
#include "tlapbt/tla/printer.hpp"

#include <chrono>
#include <deque>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>

using namespace tlapbt;
using namespace tlapbt::build;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what)
    {
        if (!detail.empty()) {
            detail += "; ";
        }
        detail += what + (ok ? "" : " [FAILED]");
        pass = pass && ok;
    }
};

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

std::string stats_text(const explorer::ExplorationStats& s)
{
    return std::to_string(s.diameter) + "/" + std::to_string(s.states_found) + "/" + std::to_string(s.distinct_states);
}

std::string fmt(double v)
{
    std::ostringstream ss;
    ss.precision(3);
    ss << v;
    return ss.str();
}

// Reachable node count by evaluating Init and every action on every pair of
// candidate states (the explorer's successor solver is not used).
std::set<State> fixpoint(const TemporalSpec& spec, const std::vector<std::vector<Value>>& grid)
{
    std::vector<std::vector<Value>> rows{{}};
    for (const auto& column : grid) {
        std::vector<std::vector<Value>> next;
        for (const auto& prefix : rows) {
            for (const auto& v : column) {
                auto r = prefix;
                r.push_back(v);
                next.push_back(std::move(r));
            }
        }
        rows = std::move(next);
    }
    auto vl = spec.variable_list();
    std::vector<State> universe;
    for (auto& r : rows) {
        universe.emplace_back(vl, std::move(r));
    }
    Env env = spec.environment();
    std::set<State> seen;
    std::deque<State> work;
    for (const auto& s : universe) {
        if (eval_state_formula(spec.init, s, env) && seen.insert(s).second) {
            work.push_back(s);
        }
    }
    while (!work.empty()) {
        State s = work.front();
        work.pop_front();
        for (const auto& t : universe) {
            for (const auto& a : spec.actions) {
                if (!seen.contains(t) && eval_action(a.formula, s, t, env)) {
                    seen.insert(t);
                    work.push_back(t);
                }
            }
        }
    }
    return seen;
}

std::set<std::tuple<State, std::string, State>> fixpoint_edges(const TemporalSpec& spec, const std::set<State>& nodes)
{
    Env env = spec.environment();
    std::set<std::tuple<State, std::string, State>> out;
    for (const auto& s : nodes) {
        for (const auto& t : nodes) {
            for (const auto& a : spec.actions) {
                if (eval_action(a.formula, s, t, env)) {
                    out.emplace(s, a.name, t);
                }
            }
        }
    }
    return out;
}

std::vector<Value> ints(std::int64_t lo, std::int64_t hi) { return Value::range(lo, hi).items(); }

// Shortest number of states from (0,0) to big = 4, by hand.
int jug_shortest_states()
{
    std::map<std::pair<int, int>, int> dist{{{0, 0}, 1}};
    std::deque<std::pair<int, int>> work{{0, 0}};
    while (!work.empty()) {
        auto [s, b] = work.front();
        work.pop_front();
        if (b == 4) {
            return dist[{s, b}];
        }
        int to_big = std::min(s, 5 - b);
        int to_small = std::min(b, 3 - s);
        for (auto n : {std::pair{3, b}, std::pair{s, 5}, std::pair{0, b}, std::pair{s, 0}, std::pair{s - to_big, b + to_big},
                       std::pair{s + to_small, b - to_small}}) {
            if (dist.emplace(n, dist[{s, b}] + 1).second) {
                work.push_back(n);
            }
        }
    }
    return -1;
}

Outcome criterion1()
{
    Outcome o;
    auto t = Clock::now();
    auto r = explorer::explore(examples::load("onebit"));
    double secs = seconds_since(t);
    o.require(r.stats.diameter == 1 && r.stats.states_found == 4 && r.stats.distinct_states == 2,
              "onebit " + stats_text(r.stats) + " (want 1/4/2)");
    o.require(secs < 1.0, "runtime " + fmt(secs) + " s");
    return o;
}

Outcome criterion2()
{
    Outcome o;
    TemporalSpec spec = examples::load("diehard");
    auto t = Clock::now();
    auto r = explorer::explore(spec);
    double secs = seconds_since(t);
    o.require(r.stats.diameter == 9, "diameter " + std::to_string(r.stats.diameter) + " (want 9)");
    o.require(r.stats.states_found == 97, "states_found " + std::to_string(r.stats.states_found) + " (want 97)");
    o.require(r.stats.distinct_states == 16, "distinct_states " + std::to_string(r.stats.distinct_states) + " (want 16)");
    auto oracle = fixpoint(spec, {ints(-1, 4), ints(-1, 6)});
    o.require(oracle.size() == r.stats.distinct_states, "fixpoint oracle " + std::to_string(oracle.size()));
    o.require(secs < 1.0, "runtime " + fmt(secs) + " s");
    return o;
}

Outcome criterion3()
{
    Outcome o;
    auto t = Clock::now();
    auto r = explorer::explore(examples::load("diehard", {}, {"big_ne_4"}));
    double secs = seconds_since(t);
    o.require(r.counterexamples.size() == 1, "counterexamples " + std::to_string(r.counterexamples.size()));
    if (!r.counterexamples.empty()) {
        const auto& trace = r.counterexamples[0].trace;
        int oracle = jug_shortest_states();
        o.require(static_cast<int>(trace.size()) == oracle,
                  "trace " + std::to_string(trace.size()) + " states, oracle " + std::to_string(oracle));
        o.require(trace.size() == 7, "7 states");
        o.require(trace.back().at("big") == Value::integer(4), "ends with big = 4");
    }
    o.require(secs < 1.0, "runtime " + fmt(secs) + " s");
    return o;
}

Outcome criterion4()
{
    Outcome o;
    auto safe = explorer::explore(focusst::to_temporal_spec({}));
    o.require(!safe.stats.truncated && safe.counterexamples.empty(),
              "300/700: " + std::to_string(safe.stats.distinct_states) + " states, " +
                  std::to_string(safe.counterexamples.size()) + " violations");
    auto wide = explorer::explore(focusst::to_temporal_spec({{190, 810}}));
    bool found = false;
    std::size_t len = 0;
    for (const auto& c : wide.counterexamples) {
        if (c.invariant == "Safe") {
            found = true;
            len = c.trace.size();
        }
    }
    o.require(found, "190/810: violation trace of " + std::to_string(len) + " states");
    return o;
}

Outcome criterion5(const std::string& sut_path)
{
    using pbt::SteamBoilerSut;
    Outcome o;
    auto binding = pbt::steam_boiler_binding();
    auto spec = pbt::steam_boiler_model(binding);
    pbt::Model model(binding, spec);
    auto t = Clock::now();

    std::map<std::string, std::size_t> counts;
    std::size_t ref_pass = 0;
    const std::uint64_t seeds = 20;
    {
        pbt::SubprocessAdapter sut(sut_path + " --mutant none");
        for (std::uint64_t seed = 1; seed <= seeds; ++seed) {
            auto r = pbt::test(binding, spec, sut, {100, 100, seed, false});
            ref_pass += r.passed && r.cases_run == 100;
            for (const auto& [op, n] : r.invocation_counts) {
                counts[op] += n;
            }
        }
    }
    o.require(ref_pass == seeds, "reference passed " + std::to_string(ref_pass) + "/" + std::to_string(seeds) + " seeds");

    for (const char* mutant : {"level-band", "pump-ignore"}) {
        pbt::SubprocessAdapter sut(sut_path + " --mutant " + mutant);
        std::size_t caught = 0;
        std::size_t minimal = 0;
        std::size_t longest = 0;
        for (std::uint64_t seed = 1; seed <= seeds; ++seed) {
            auto r = pbt::test(binding, spec, sut, {100, 100, seed, false});
            if (r.passed || !r.failing) {
                continue;
            }
            ++caught;
            const auto& shrunk = r.failing->shrunk;
            longest = std::max(longest, shrunk.size());
            bool one_minimal = !pbt::run_case(model, sut, shrunk).passed;
            for (std::size_t i = 0; i < shrunk.size() && one_minimal; ++i) {
                auto fewer = shrunk;
                fewer.erase(fewer.begin() + static_cast<std::ptrdiff_t>(i));
                if (pbt::preconditions_hold(model, fewer) && !pbt::run_case(model, sut, fewer).passed) {
                    one_minimal = false;
                }
            }
            minimal += one_minimal;
        }
        o.require(caught == seeds && minimal == seeds, std::string(mutant) + " caught " + std::to_string(caught) + "/" +
                                                           std::to_string(seeds) + ", 1-minimal " +
                                                           std::to_string(minimal) + " (longest " +
                                                           std::to_string(longest) + ")");
    }

    bool all_ops = true;
    for (const auto& op : pbt::steam_boiler_ops()) {
        all_ops = all_ops && counts[op] > 0;
    }
    o.require(all_ops, "all 9 ops invoked");
    double secs = seconds_since(t);
    o.require(secs < 60.0, "suite " + fmt(secs) + " s");
    return o;
}

// Random ASTs over the printable grammar.
struct AstGen {
    std::mt19937_64 rng;
    std::vector<std::string> bound;
    int fresh = 0;

    int pick(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

    Expr leaf()
    {
        int k = pick(0, 6 + static_cast<int>(bound.size()));
        switch (k) {
        case 0: return lit(pick(-50, 50));
        case 1: return truth(pick(0, 1) == 1);
        case 2: return constant(Value::booleans());
        case 3: return var("x");
        case 4: return var("y");
        case 5: return primed("x");
        case 6: return var("N");
        default: return var(bound[static_cast<std::size_t>(k - 7)]);
        }
    }

    Expr expr(int depth)
    {
        static const Op binaries[] = {Op::And, Op::Or,    Op::Implies, Op::Eq,    Op::Neq,   Op::Lt,    Op::Le,
                                      Op::Gt,  Op::Ge,    Op::NotLt,   Op::NotLe, Op::NotGt, Op::NotGe, Op::In,
                                      Op::Add, Op::Sub,   Op::IntRange};
        static const Op binders[] = {Op::Forall, Op::Exists, Op::Choose};
        if (depth <= 0) {
            return leaf();
        }
        switch (pick(0, 8)) {
        case 0:
        case 1:
        case 2:
        case 3: return binary(binaries[pick(0, 16)], expr(depth - 1), expr(depth - 1));
        case 4: return not_(expr(depth - 1));
        case 5:
        case 6: {
            std::vector<Expr> items;
            for (int i = pick(0, 3); i > 0; --i) {
                items.push_back(expr(depth - 2));
            }
            return pick(0, 1) ? set_of(std::move(items)) : seq_of(std::move(items));
        }
        case 7: {
            std::string v = "v" + std::to_string(fresh++);
            Expr domain = expr(depth - 1);
            bound.push_back(v);
            Expr body = expr(depth - 1);
            bound.pop_back();
            return node(binders[pick(0, 2)], {domain, body}, v);
        }
        default: return leaf();
        }
    }
};

Outcome criterion6()
{
    Outcome o;
    AstGen g{std::mt19937_64(6), {}, 0};
    tla::ExprScope scope{{"x", "y"}, {"N"}, {}};
    std::size_t ok = 0;
    std::string first_bad;
    for (int i = 0; i < 1000; ++i) {
        Expr e = g.expr(g.pick(1, 6));
        std::string text = tla::pretty_print(e);
        try {
            if (tla::parse_expr(text, scope) == e) {
                ++ok;
                continue;
            }
        } catch (const Error&) {
        }
        if (first_bad.empty()) {
            first_bad = text;
        }
    }
    o.require(ok == 1000, "round trip " + std::to_string(ok) + "/1000" + (first_bad.empty() ? "" : " e.g. " + first_bad));

    TemporalSpec spec = tla::to_spec(tla::parse_module(examples::find("onebit")->source));
    auto r = explorer::explore(spec);
    o.require(spec.actions.size() == 2 && r.stats == explorer::ExplorationStats{1, 4, 2, false},
              "verbatim one-bit listing " + std::to_string(spec.actions.size()) + " actions, " + stats_text(r.stats));
    return o;
}

Outcome criterion7()
{
    Outcome o;
    std::mt19937_64 rng(7);
    auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
    auto vl = make_variable_list({"x"});

    // Quantifier duality over random domains and bodies.
    std::size_t dual = 0;
    std::size_t negcmp = 0;
    for (int i = 0; i < 500; ++i) {
        Expr domain = range(lit(pick(-3, 2)), lit(pick(-2, 4)));
        Expr body = binary(pick(0, 1) ? Op::Lt : Op::Ge, add(var("k"), lit(pick(-2, 2))), var("x"));
        State s(vl, {Value::integer(pick(-3, 3))});
        dual += eval_state_formula(not_(forall("k", domain, body)), s) ==
                    eval_state_formula(exists("k", domain, not_(body)), s) &&
                eval_state_formula(not_(exists("k", domain, body)), s) ==
                    eval_state_formula(forall("k", domain, not_(body)), s);
        Expr a = add(var("x"), lit(pick(-3, 3)));
        Expr b = lit(pick(-3, 3));
        bool same = true;
        for (auto [n, p] : {std::pair{Op::NotLt, Op::Lt}, std::pair{Op::NotLe, Op::Le}, std::pair{Op::NotGt, Op::Gt},
                            std::pair{Op::NotGe, Op::Ge}}) {
            same = same && eval_state_formula(binary(n, a, b), s) == eval_state_formula(not_(binary(p, a, b)), s);
        }
        negcmp += same;
    }
    o.require(dual == 500, "duality " + std::to_string(dual) + "/500");
    o.require(negcmp == 500, "negated comparisons " + std::to_string(negcmp) + "/500");

    TemporalSpec onebit = examples::load("onebit");
    auto bs = [&](std::vector<std::int64_t> xs) {
        std::vector<State> states;
        for (auto x : xs) {
            states.emplace_back(onebit.variable_list(), std::vector<Value>{Value::integer(x)});
        }
        return Behavior(states);
    };
    o.require(explorer::behavior_satisfies(onebit, bs({0, 1, 1, 0})) && !explorer::behavior_satisfies(onebit, bs({2, 0})),
              "stuttering accepted, Init violation rejected");

    std::size_t stable = 0;
    std::size_t identity = 0;
    for (const auto& name : examples::names()) {
        TemporalSpec spec = examples::load(name);
        auto base = explorer::explore(spec);
        bool all_same = true;
        for (std::uint64_t seed = 1; seed <= 50; ++seed) {
            explorer::ExploreOptions opt;
            opt.shuffle_seed = seed;
            auto r = explorer::explore(spec, {}, opt);
            all_same = all_same && r.stats == base.stats && r.graph.node_set() == base.graph.node_set() &&
                       r.graph.edge_set() == base.graph.edge_set();
        }
        stable += all_same;
        std::size_t expected = explorer::initial_states(spec).size();
        for (const auto& s : base.graph.nodes) {
            expected += explorer::successors(spec, s).size();
        }
        identity += expected == base.stats.states_found;
    }
    o.require(stable == 5, "order independence over 50 shuffles " + std::to_string(stable) + "/5 examples");
    o.require(identity == 5, "statesFound identity " + std::to_string(identity) + "/5 examples");
    return o;
}

Outcome criterion8()
{
    Outcome o;
    struct Case {
        const char* name;
        std::vector<std::vector<Value>> grid;
        const char* table;
    };
    const Case cases[] = {
        {"euclid", {ints(0, 13), ints(0, 9)}, "3/22/8"},
        {"therac25", {ints(-1, 3), ints(-1, 3), ints(-1, 2), ints(-1, 9), ints(-1, 2), ints(-1, 2)}, "9/97/16"},
    };
    for (const auto& c : cases) {
        TemporalSpec spec = examples::load(c.name);
        auto r = explorer::explore(spec);
        auto nodes = fixpoint(spec, c.grid);
        auto edges = fixpoint_edges(spec, nodes);
        auto got_edges = r.graph.edge_set();
        bool match = nodes == std::set<State>(r.graph.nodes.begin(), r.graph.nodes.end()) &&
                     edges == std::set(got_edges.begin(), got_edges.end()) && edges.size() == got_edges.size();
        o.require(match, std::string(c.name) + " oracle nodes/edges match, got " + stats_text(r.stats) + " (table " +
                             c.table + ", not required)");
    }
    return o;
}

} // namespace

int main(int argc, char** argv)
{
    std::string sut = argc > 1 ? argv[1] : TLAPBT_SUT_PATH;
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"onebit 1/4/2 under 1 s", criterion1},
        {"diehard 9/97/16 and fixpoint oracle under 1 s", criterion2},
        {"diehard big # 4 shortest counterexample", criterion3},
        {"steam boiler closed loop safe at 300/700, violated at 190/810", criterion4},
        {"PBT reference passes, mutants caught and shrunk 1-minimally, under 60 s", [&] { return criterion5(sut); }},
        {"parser round trip and verbatim one-bit listing", criterion6},
        {"property suites", criterion7},
        {"euclid and therac25 match brute-force oracle", criterion8},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("error: ") + e.what();
        }
        failed += !o.pass;
        std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << i + 1 << ": " << criteria[i].first << " -- "
                  << o.detail << std::endl;
    }
    std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria passed" << std::endl;
    return failed == 0 ? 0 : 1;
}
