#pragma once

#include "tlapbt/error.hpp"
#include "tlapbt/eval.hpp"
#include "tlapbt/explorer/solver.hpp"
#include "tlapbt/expr.hpp"
#include "tlapbt/pbt/command.hpp"
#include "tlapbt/spec.hpp"
#include "tlapbt/state.hpp"

#include <algorithm>
#include <map>
#include <string>
#include <vector>

namespace tlapbt::pbt {

struct ArgSpec {
    std::string name;
    std::vector<Value> domain;
};

/// One SUT operation as seen by the model. Arguments are in scope in every
/// formula. `effect` is an action formula that must determine the next
/// model state uniquely; `observe` maps reply keys to expressions over the
/// state after the effect.
struct OpBinding {
    std::string name;
    std::vector<ArgSpec> args;
    Expr precondition = build::truth(true);
    Expr effect;
    std::map<std::string, Expr> observe;
    unsigned weight = 1;
};

struct ModelBinding {
    std::string name;
    std::vector<OpBinding> ops;

    [[nodiscard]] const OpBinding* find(const std::string& op) const
    {
        for (const auto& o : ops) {
            if (o.name == op) {
                return &o;
            }
        }
        return nullptr;
    }
};

/// Executable view of a binding over a model spec.
class Model {
public:
    Model(const ModelBinding& binding, const TemporalSpec& spec)
        : binding_(binding), solver_(spec, explorer::derive_domains(spec)), env_(spec.environment())
    {
        auto diags = well_formed(spec);
        if (!diags.empty()) {
            throw Error(ErrorCode::InvalidSpec, "model spec: " + diags.front().to_string());
        }
        for (const auto& op : binding.ops) {
            if (op.effect.empty()) {
                throw Error(ErrorCode::InvalidSpec, "op '" + op.name + "' has no effect formula");
            }
            if (contains_primed(op.precondition)) {
                throw Error(ErrorCode::InvalidSpec, "precondition of '" + op.name + "' is primed");
            }
            for (const auto& [key, e] : op.observe) {
                if (contains_primed(e)) {
                    throw Error(ErrorCode::InvalidSpec, "observation '" + key + "' of '" + op.name + "' is primed");
                }
            }
        }
        auto inits = solver_.solve_init(spec.init);
        if (inits.size() != 1) {
            throw Error(ErrorCode::InvalidSpec, "model needs exactly one initial state, found " + std::to_string(inits.size()));
        }
        initial_ = inits.front();
    }

    [[nodiscard]] const State& initial() const { return initial_; }
    [[nodiscard]] const ModelBinding& binding() const { return binding_; }

    /// Every argument assignment of `op`, in domain order.
    [[nodiscard]] static std::vector<std::map<std::string, Value>> arg_tuples(const OpBinding& op)
    {
        std::vector<std::map<std::string, Value>> out{{}};
        for (const auto& a : op.args) {
            std::vector<std::map<std::string, Value>> next;
            for (const auto& prefix : out) {
                for (const auto& v : a.domain) {
                    auto t = prefix;
                    t.emplace(a.name, v);
                    next.push_back(std::move(t));
                }
            }
            out = std::move(next);
        }
        return out;
    }

    /// The op exists, its arguments are exactly the declared ones with
    /// values in their domains, and the precondition holds in `s`.
    [[nodiscard]] bool enabled(const Command& c, const State& s) const
    {
        const OpBinding* op = binding_.find(c.op);
        if (!op || op->args.size() != c.args.size()) {
            return false;
        }
        for (const auto& a : op->args) {
            auto it = c.args.find(a.name);
            if (it == c.args.end() || std::find(a.domain.begin(), a.domain.end(), it->second) == a.domain.end()) {
                return false;
            }
        }
        return eval_state_formula(op->precondition, s, env_with(c));
    }

    State step(const Command& c, const State& s)
    {
        const OpBinding& op = lookup(c.op);
        Env args;
        for (const auto& [k, v] : c.args) {
            args.emplace_back(k, v);
        }
        auto next = solver_.solve_action(op.effect, s, args);
        if (next.size() != 1) {
            throw Error(ErrorCode::NondeterministicEffect, "effect of " + c.to_string() + " in " + s.to_string() +
                                                               " has " + std::to_string(next.size()) + " successors");
        }
        return next.front();
    }

    [[nodiscard]] Observation expect(const Command& c, const State& post) const
    {
        const OpBinding& op = lookup(c.op);
        Observation out;
        Env env = env_with(c);
        for (const auto& [key, e] : op.observe) {
            out.emplace(key, eval_expr(e, post, nullptr, env));
        }
        return out;
    }

private:
    [[nodiscard]] const OpBinding& lookup(const std::string& name) const
    {
        const OpBinding* op = binding_.find(name);
        if (!op) {
            throw Error(ErrorCode::InvalidArgument, "op '" + name + "' is not in the alphabet of " + binding_.name);
        }
        return *op;
    }

    [[nodiscard]] Env env_with(const Command& c) const
    {
        Env env = env_;
        for (const auto& [k, v] : c.args) {
            env.emplace_back(k, v);
        }
        return env;
    }

    const ModelBinding& binding_;
    explorer::Solver solver_;
    Env env_;
    State initial_;
};

} // namespace tlapbt::pbt
