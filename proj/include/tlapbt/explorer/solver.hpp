#pragma once

#include "tlapbt/error.hpp"
#include "tlapbt/eval.hpp"
#include "tlapbt/expr.hpp"
#include "tlapbt/spec.hpp"
#include "tlapbt/state.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace tlapbt::explorer {

/// Finite candidate values per variable, used when a formula constrains a
/// variable only indirectly (e.g. `x' > 3`).
using Domains = std::map<std::string, std::vector<Value>>;

/// Domains from top-level `x \in S` conjuncts of the TypeOK invariant, falling
/// back to the same kind of conjunct in Init.
inline Domains derive_domains(const TemporalSpec& spec, std::string_view type_ok_name = "TypeOK")
{
    Domains out;
    Env env = spec.environment();
    State empty(spec.variable_list(), std::vector<Value>(spec.variables.size()));
    auto harvest = [&](const Expr& formula) {
        for (const Expr& part : flatten(formula, Op::And)) {
            if (part.op() != Op::In || part.arg(0).op() != Op::Var) {
                continue;
            }
            const std::string& name = part.arg(0).name();
            if (out.contains(name) ||
                std::find(spec.variables.begin(), spec.variables.end(), name) == spec.variables.end()) {
                continue;
            }
            if (contains_primed(part.arg(1))) {
                continue;
            }
            // The set must be a constant (it may mention parameters only).
            bool constant = true;
            std::vector<std::string> bound;
            for_each_reference(
                part.arg(1),
                [&](const Expr& ref, const std::vector<std::string>& scope) {
                    if (std::find(scope.begin(), scope.end(), ref.name()) == scope.end() &&
                        !spec.params.contains(ref.name())) {
                        constant = false;
                    }
                },
                bound);
            if (!constant) {
                continue;
            }
            Value set = eval_expr(part.arg(1), empty, nullptr, env);
            if (set.is_set()) {
                out.emplace(name, set.items());
            }
        }
    };
    if (auto it = spec.invariants.find(std::string(type_ok_name)); it != spec.invariants.end()) {
        harvest(it->second);
    }
    if (!spec.init.empty()) {
        harvest(spec.init);
    }
    return out;
}

// Enumerates the assignments that satisfy a formula, either over the
// unprimed variables (initial states) or over the primed variables given a
// current state (successors).
//
// Conjunctions are processed left to right. A conjunct of the form `v = e` or
// `v \in S`, where v is a still-unassigned target and e/S only mention
// assigned targets, binds v directly. Disjunctions and existential
// quantifiers branch. Any other conjunct is evaluated once every target it
// mentions is assigned; targets that are still free at that point are
// enumerated over their derived domain, and an UnboundedDomain error is
// raised when there is none. Every produced state is re-checked by plain
// evaluation of the whole formula.
class Solver {
public:
    enum class Mode { Init, Action };

    Solver(const TemporalSpec& spec, Domains domains)
        : variables_(spec.variable_list()), domains_(std::move(domains)), base_env_(spec.environment())
    {
    }

    [[nodiscard]] const Domains& domains() const { return domains_; }
    [[nodiscard]] const VariableList& variables() const { return variables_; }

    /// All states satisfying `init`, sorted and unique.
    std::vector<State> solve_init(const Expr& init)
    {
        return run(Mode::Init, init, nullptr, base_env_);
    }

    /// All t such that (s, t) satisfies `action`, sorted and unique.
    std::vector<State> solve_action(const Expr& action, const State& s, const Env& extra = {})
    {
        Env env = base_env_;
        env.insert(env.end(), extra.begin(), extra.end());
        return run(Mode::Action, action, &s, env);
    }

private:
    using Partial = std::vector<std::optional<Value>>;
    using Continuation = std::function<void()>;

    struct PartialScope {
        const Solver* solver;

        [[nodiscard]] const Value* lookup(const std::string& name) const
        {
            if (solver->mode_ == Mode::Init) {
                auto idx = solver->index_of(name);
                return idx && solver->partial_[*idx] ? &*solver->partial_[*idx] : nullptr;
            }
            return solver->current_->find(name);
        }
        [[nodiscard]] bool has_next() const { return solver->mode_ == Mode::Action; }
        [[nodiscard]] const Value* lookup_next(const std::string& name) const
        {
            auto idx = solver->index_of(name);
            return idx && solver->partial_[*idx] ? &*solver->partial_[*idx] : nullptr;
        }
    };

    std::vector<State> run(Mode mode, const Expr& formula, const State* current, const Env& env)
    {
        mode_ = mode;
        current_ = current;
        partial_.assign(variables_->size(), std::nullopt);
        std::vector<State> found;
        solve(formula, env, [&] { complete(formula, env, 0, found); });
        std::sort(found.begin(), found.end());
        found.erase(std::unique(found.begin(), found.end()), found.end());
        return found;
    }

    [[nodiscard]] std::optional<std::size_t> index_of(const std::string& name) const
    {
        for (std::size_t i = 0; i < variables_->size(); ++i) {
            if ((*variables_)[i] == name) {
                return i;
            }
        }
        return std::nullopt;
    }

    static bool bound_in(const Env& env, const std::string& name)
    {
        return std::any_of(env.begin(), env.end(), [&](const auto& b) { return b.first == name; });
    }

    /// Index of the variable targeted by `e`, if `e` is a reference to a target.
    [[nodiscard]] std::optional<std::size_t> target_of(const Expr& e, const Env& env) const
    {
        if (mode_ == Mode::Action && e.op() == Op::Primed) {
            return index_of(e.name());
        }
        if (mode_ == Mode::Init && e.op() == Op::Var && !bound_in(env, e.name())) {
            return index_of(e.name());
        }
        return std::nullopt;
    }

    /// Unassigned targets mentioned in `e`.
    [[nodiscard]] std::vector<std::size_t> free_targets(const Expr& e, const Env& env) const
    {
        std::vector<std::size_t> out;
        std::vector<std::string> bound;
        for_each_reference(
            e,
            [&](const Expr& ref, const std::vector<std::string>& scope) {
                if (ref.op() == Op::Var && std::find(scope.begin(), scope.end(), ref.name()) != scope.end()) {
                    return;
                }
                if (auto idx = target_of(ref, env); idx && !partial_[*idx]) {
                    if (std::find(out.begin(), out.end(), *idx) == out.end()) {
                        out.push_back(*idx);
                    }
                }
            },
            bound);
        return out;
    }

    Value evaluate(const Expr& e, const Env& env)
    {
        PartialScope scope{this};
        Env local = env;
        return Evaluator<PartialScope>(scope, local).eval(e);
    }

    bool holds(const Expr& e, const Env& env)
    {
        Value v = evaluate(e, env);
        if (!v.is_bool()) {
            throw Error(ErrorCode::TypeMismatch, "formula evaluated to non-boolean " + v.to_string());
        }
        return v.as_bool();
    }

    const std::vector<Value>& domain_of(std::size_t idx) const
    {
        auto it = domains_.find((*variables_)[idx]);
        if (it == domains_.end()) {
            throw Error(ErrorCode::UnboundedDomain,
                        "variable '" + (*variables_)[idx] +
                            "' is not determined by the formula and has no finite domain (add `" +
                            (*variables_)[idx] + " \\in S` to TypeOK)");
        }
        return it->second;
    }

    /// Assigns every variable in `vars[i..]` over its domain, then calls k.
    void enumerate(const std::vector<std::size_t>& vars, std::size_t i, const Continuation& k)
    {
        if (i == vars.size()) {
            k();
            return;
        }
        for (const auto& v : domain_of(vars[i])) {
            partial_[vars[i]] = v;
            enumerate(vars, i + 1, k);
        }
        partial_[vars[i]].reset();
    }

    void bind(std::size_t idx, const Value& v, const Continuation& k)
    {
        partial_[idx] = v;
        k();
        partial_[idx].reset();
    }

    void solve(const Expr& e, const Env& env, const Continuation& k)
    {
        switch (e.op()) {
        case Op::And:
            solve(e.arg(0), env, [&] { solve(e.arg(1), env, k); });
            return;
        case Op::Or:
            solve(e.arg(0), env, k);
            solve(e.arg(1), env, k);
            return;
        case Op::Exists: {
            Value domain = value_of(e.arg(0), env);
            if (!domain.is_set()) {
                throw Error(ErrorCode::TypeMismatch, "quantifier domain is not a set: " + domain.to_string());
            }
            for (const auto& v : domain.items()) {
                Env inner = env;
                inner.emplace_back(e.name(), v);
                solve(e.arg(1), inner, k);
            }
            return;
        }
        case Op::Eq:
            for (int side = 0; side < 2; ++side) {
                auto idx = target_of(e.arg(side), env);
                const Expr& other = e.arg(1 - side);
                if (idx && !partial_[*idx] && free_targets(other, env).empty()) {
                    bind(*idx, evaluate(other, env), k);
                    return;
                }
            }
            break;
        case Op::In:
            if (auto idx = target_of(e.arg(0), env); idx && !partial_[*idx] && free_targets(e.arg(1), env).empty()) {
                Value set = evaluate(e.arg(1), env);
                if (!set.is_set()) {
                    throw Error(ErrorCode::TypeMismatch, "membership in non-set " + set.to_string());
                }
                for (const auto& v : set.items()) {
                    partial_[*idx] = v;
                    k();
                }
                partial_[*idx].reset();
                return;
            }
            break;
        default: break;
        }
        // Generic conjunct: enumerate whatever it still needs, then test it.
        std::vector<std::size_t> missing = free_targets(e, env);
        enumerate(missing, 0, [&] {
            if (holds(e, env)) {
                k();
            }
        });
    }

    Value value_of(const Expr& e, const Env& env)
    {
        std::vector<std::size_t> missing = free_targets(e, env);
        if (!missing.empty()) {
            throw Error(ErrorCode::UnboundedDomain, "quantifier domain depends on unassigned variable '" +
                                                        (*variables_)[missing.front()] + "'");
        }
        return evaluate(e, env);
    }

    /// Called when the formula has been fully traversed.
    void complete(const Expr& formula, const Env& env, std::size_t, std::vector<State>& found)
    {
        std::vector<std::size_t> missing;
        for (std::size_t i = 0; i < partial_.size(); ++i) {
            if (!partial_[i]) {
                missing.push_back(i);
            }
        }
        enumerate(missing, 0, [&] {
            std::vector<Value> values;
            values.reserve(partial_.size());
            for (const auto& v : partial_) {
                values.push_back(*v);
            }
            State t(variables_, std::move(values));
            bool ok = mode_ == Mode::Init ? eval_state_formula(formula, t, env)
                                          : eval_action(formula, *current_, t, env);
            if (ok) {
                found.push_back(std::move(t));
            }
        });
    }

    VariableList variables_;
    Domains domains_;
    Env base_env_;

    Mode mode_ = Mode::Action;
    const State* current_ = nullptr;
    Partial partial_;
};

} // namespace tlapbt::explorer
