#pragma once

#include "tlapbt/error.hpp"
#include "tlapbt/eval.hpp"
#include "tlapbt/explorer/solver.hpp"
#include "tlapbt/ir_json.hpp"
#include "tlapbt/spec.hpp"
#include "tlapbt/state.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <tuple>
#include <unordered_map>
#include <utility>
#include <vector>

namespace tlapbt::explorer {

struct ExplorationStats {
    std::size_t diameter = 0;
    std::size_t states_found = 0;
    std::size_t distinct_states = 0;
    bool truncated = false;

    friend bool operator==(const ExplorationStats&, const ExplorationStats&) = default;
};

struct Edge {
    std::size_t from;
    std::size_t action;
    std::size_t to;
};

/// Reachable state graph. Node indices follow discovery order; `depth` is the
/// BFS level of each node (initial states have depth 0).
struct StateGraph {
    std::vector<std::string> action_names;
    std::vector<State> nodes;
    std::vector<std::size_t> depth;
    std::vector<std::size_t> initials;
    std::vector<Edge> edges;
    std::unordered_map<State, std::size_t, StateHash> index;

    [[nodiscard]] std::vector<State> node_set() const
    {
        std::vector<State> out = nodes;
        std::sort(out.begin(), out.end());
        return out;
    }

    [[nodiscard]] std::vector<std::tuple<State, std::string, State>> edge_set() const
    {
        std::vector<std::tuple<State, std::string, State>> out;
        out.reserve(edges.size());
        for (const auto& e : edges) {
            out.emplace_back(nodes[e.from], action_names[e.action], nodes[e.to]);
        }
        std::sort(out.begin(), out.end());
        return out;
    }
};

struct Counterexample {
    std::string invariant;
    Behavior trace;
};

struct ExploreLimits {
    std::size_t max_distinct = 1'000'000;
    std::size_t max_depth = 1'000'000;
};

struct ExploreOptions {
    /// When set, each BFS level is processed in a seeded random order.
    std::optional<std::uint64_t> shuffle_seed;
    std::string type_ok_name = "TypeOK";
};

struct ExplorationResult {
    StateGraph graph;
    ExplorationStats stats;
    std::vector<Counterexample> counterexamples;
};

/// Portable uniform draw in [0, n); std::uniform_int_distribution is not
/// specified bit-for-bit across standard libraries.
inline std::size_t uniform_index(std::mt19937_64& rng, std::size_t n)
{
    if (n <= 1) {
        return 0;
    }
    const std::uint64_t bound = static_cast<std::uint64_t>(n);
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t draw = rng();
    while (draw >= limit) {
        draw = rng();
    }
    return static_cast<std::size_t>(draw % bound);
}

template <typename T>
void shuffle(std::vector<T>& items, std::mt19937_64& rng)
{
    for (std::size_t i = items.size(); i > 1; --i) {
        std::swap(items[i - 1], items[uniform_index(rng, i)]);
    }
}

class Explorer {
public:
    explicit Explorer(TemporalSpec spec, std::string type_ok_name = "TypeOK")
        : spec_(std::move(spec)), solver_(spec_, derive_domains(spec_, type_ok_name))
    {
        auto diags = well_formed(spec_);
        if (!diags.empty()) {
            throw Error(ErrorCode::InvalidSpec, "spec '" + spec_.name + "' is not well formed: " + diags.front().to_string());
        }
    }

    [[nodiscard]] const TemporalSpec& spec() const { return spec_; }
    [[nodiscard]] const Domains& domains() const { return solver_.domains(); }

    std::vector<State> initial_states() { return solver_.solve_init(spec_.init); }

    /// (action, successor) pairs ordered by action then canonical state order.
    /// A state reachable by several actions appears once per action.
    std::vector<std::pair<std::size_t, State>> successors(const State& s)
    {
        std::vector<std::pair<std::size_t, State>> out;
        for (std::size_t a = 0; a < spec_.actions.size(); ++a) {
            for (auto& t : solver_.solve_action(spec_.actions[a].formula, s)) {
                out.emplace_back(a, std::move(t));
            }
        }
        return out;
    }

    ExplorationResult explore(const ExploreLimits& limits = {}, const ExploreOptions& options = {})
    {
        if (limits.max_distinct == 0 || limits.max_depth == 0) {
            throw Error(ErrorCode::InvalidArgument, "exploration limits must be positive");
        }
        ExplorationResult result;
        StateGraph& g = result.graph;
        ExplorationStats& stats = result.stats;
        for (const auto& a : spec_.actions) {
            g.action_names.push_back(a.name);
        }
        std::mt19937_64 rng(options.shuffle_seed.value_or(0));
        Env env = spec_.environment();

        std::vector<std::vector<std::size_t>> violations(spec_.invariants.size());
        auto add_node = [&](State s, std::size_t depth) {
            std::size_t id = g.nodes.size();
            std::size_t inv = 0;
            for (const auto& [name, formula] : spec_.invariants) {
                if (!eval_state_formula(formula, s, env)) {
                    violations[inv].push_back(id);
                }
                ++inv;
            }
            g.index.emplace(s, id);
            g.nodes.push_back(std::move(s));
            g.depth.push_back(depth);
            return id;
        };

        std::vector<State> inits = initial_states();
        if (options.shuffle_seed) {
            shuffle(inits, rng);
        }
        std::vector<std::size_t> level;
        for (auto& s : inits) {
            ++stats.states_found;
            if (g.nodes.size() >= limits.max_distinct) {
                stats.truncated = true;
                continue;
            }
            std::size_t id = add_node(std::move(s), 0);
            g.initials.push_back(id);
            level.push_back(id);
        }

        for (std::size_t depth = 0; !level.empty(); ++depth) {
            if (options.shuffle_seed) {
                shuffle(level, rng);
            }
            std::vector<std::size_t> next_level;
            for (std::size_t id : level) {
                State current = g.nodes[id];
                auto succ = successors(current);
                stats.states_found += succ.size();
                for (auto& [action, t] : succ) {
                    std::size_t to = 0;
                    if (auto it = g.index.find(t); it != g.index.end()) {
                        to = it->second;
                    } else if (depth + 1 >= limits.max_depth || g.nodes.size() >= limits.max_distinct) {
                        stats.truncated = true;
                        continue;
                    } else {
                        to = add_node(std::move(t), depth + 1);
                        next_level.push_back(to);
                    }
                    g.edges.push_back({id, action, to});
                }
            }
            level = std::move(next_level);
        }

        stats.distinct_states = g.nodes.size();
        if (!g.nodes.empty()) {
            stats.diameter = 1 + *std::max_element(g.depth.begin(), g.depth.end());
        }

        std::size_t inv = 0;
        for (const auto& [name, formula] : spec_.invariants) {
            if (!violations[inv].empty()) {
                result.counterexamples.push_back({name, shortest_trace(g, pick_violation(g, violations[inv]))});
            }
            ++inv;
        }
        return result;
    }

    /// Init holds on the first state and each step is an action step or a stutter.
    bool behavior_satisfies(const Behavior& b)
    {
        Env env = spec_.environment();
        if (b[0].variables() != spec_.variables) {
            return false;
        }
        if (!eval_state_formula(spec_.init, b[0], env)) {
            return false;
        }
        for (std::size_t i = 1; i < b.size(); ++i) {
            const State& s = b[i - 1];
            const State& t = b[i];
            if (s == t) {
                continue;
            }
            bool stepped = std::any_of(spec_.actions.begin(), spec_.actions.end(),
                                       [&](const NamedAction& a) { return eval_action(a.formula, s, t, env); });
            if (!stepped) {
                return false;
            }
        }
        return true;
    }

private:
    // Shallowest violating node; ties broken by canonical state order so the
    // choice does not depend on frontier order.
    static std::size_t pick_violation(const StateGraph& g, const std::vector<std::size_t>& bad)
    {
        return *std::min_element(bad.begin(), bad.end(), [&](std::size_t a, std::size_t b) {
            return std::tie(g.depth[a], g.nodes[a]) < std::tie(g.depth[b], g.nodes[b]);
        });
    }

    // Walks back one BFS level at a time, always through the canonically
    // smallest predecessor.
    static Behavior shortest_trace(const StateGraph& g, std::size_t target)
    {
        std::vector<std::vector<std::size_t>> preds(g.nodes.size());
        for (const auto& e : g.edges) {
            if (g.depth[e.from] + 1 == g.depth[e.to]) {
                preds[e.to].push_back(e.from);
            }
        }
        std::vector<State> trace{g.nodes[target]};
        std::size_t at = target;
        while (g.depth[at] > 0) {
            const auto& p = preds[at];
            at = *std::min_element(p.begin(), p.end(), [&](std::size_t a, std::size_t b) { return g.nodes[a] < g.nodes[b]; });
            trace.push_back(g.nodes[at]);
        }
        std::reverse(trace.begin(), trace.end());
        return Behavior(std::move(trace));
    }

    TemporalSpec spec_;
    Solver solver_;
};

inline std::vector<State> initial_states(const TemporalSpec& spec) { return Explorer(spec).initial_states(); }

inline std::vector<std::pair<std::string, State>> successors(const TemporalSpec& spec, const State& s)
{
    Explorer ex(spec);
    std::vector<std::pair<std::string, State>> out;
    for (auto& [a, t] : ex.successors(s)) {
        out.emplace_back(spec.actions[a].name, std::move(t));
    }
    return out;
}

inline ExplorationResult explore(const TemporalSpec& spec, const ExploreLimits& limits = {},
                                 const ExploreOptions& options = {})
{
    return Explorer(spec, options.type_ok_name).explore(limits, options);
}

inline bool behavior_satisfies(const TemporalSpec& spec, const Behavior& b) { return Explorer(spec).behavior_satisfies(b); }

/// Seeded random walks over the explored graph. A walk has at most `max_len`
/// states and stops early at a state without successors.
inline std::vector<Behavior> behaviors(const TemporalSpec& spec, std::size_t count, std::size_t max_len,
                                       std::uint64_t seed, const ExploreLimits& limits = {})
{
    if (count == 0) {
        return {};
    }
    if (max_len == 0) {
        throw Error(ErrorCode::InvalidArgument, "behavior length bound must be positive");
    }
    ExplorationResult explored = explore(spec, limits);
    const StateGraph& g = explored.graph;
    if (g.initials.empty()) {
        throw Error(ErrorCode::NoInitialStates, "spec '" + spec.name + "' has no initial states");
    }
    std::vector<std::vector<std::size_t>> out_edges(g.nodes.size());
    for (const auto& e : g.edges) {
        out_edges[e.from].push_back(e.to);
    }
    std::mt19937_64 rng(seed);
    std::vector<Behavior> result;
    result.reserve(count);
    for (std::size_t n = 0; n < count; ++n) {
        std::size_t at = g.initials[uniform_index(rng, g.initials.size())];
        std::vector<State> walk{g.nodes[at]};
        while (walk.size() < max_len && !out_edges[at].empty()) {
            at = out_edges[at][uniform_index(rng, out_edges[at].size())];
            walk.push_back(g.nodes[at]);
        }
        result.emplace_back(std::move(walk));
    }
    return result;
}

inline Json stats_to_json(const ExplorationStats& s)
{
    return Json{{"diameter", s.diameter},
                {"states_found", s.states_found},
                {"distinct_states", s.distinct_states},
                {"truncated", s.truncated}};
}

inline Json counterexample_to_json(const Counterexample& c)
{
    Json trace = Json::array();
    for (const auto& s : c.trace.states()) {
        trace.push_back(state_to_json(s));
    }
    return Json{{"invariant", c.invariant}, {"trace", trace}};
}

} // namespace tlapbt::explorer
