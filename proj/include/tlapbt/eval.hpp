#pragma once

#include "tlapbt/error.hpp"
#include "tlapbt/expr.hpp"
#include "tlapbt/state.hpp"
#include "tlapbt/value.hpp"

#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace tlapbt {

/// Names bound outside the state: quantifier variables, command arguments and
/// spec parameters. Searched innermost (back) first.
using Env = std::vector<std::pair<std::string, Value>>;

inline Env make_env(const std::map<std::string, std::int64_t>& params)
{
    Env env;
    env.reserve(params.size());
    for (const auto& [name, v] : params) {
        env.emplace_back(name, Value::integer(v));
    }
    return env;
}

/// Smallest element of `domain` (canonical order) satisfying `predicate`.
inline Value choose(const Value& domain, const std::function<bool(const Value&)>& predicate)
{
    if (!domain.is_set()) {
        throw Error(ErrorCode::TypeMismatch, "CHOOSE domain is not a set: " + domain.to_string());
    }
    for (const auto& v : domain.items()) {
        if (predicate(v)) {
            return v;
        }
    }
    throw Error(ErrorCode::EmptyChooseDomain, "no element of " + domain.to_string() + " satisfies the predicate");
}

// Scope over complete states. Other scopes (partial assignments during
// successor enumeration) provide the same two lookups.
struct StateScope {
    const State* current = nullptr;
    const State* next = nullptr;

    [[nodiscard]] const Value* lookup(const std::string& name) const { return current ? current->find(name) : nullptr; }
    [[nodiscard]] bool has_next() const { return next != nullptr; }
    [[nodiscard]] const Value* lookup_next(const std::string& name) const { return next->find(name); }
};

template <typename Scope>
class Evaluator {
public:
    Evaluator(const Scope& scope, Env& env) : scope_(scope), env_(env) {}

    Value eval(const Expr& e)
    {
        switch (e.op()) {
        case Op::Const: return e.value();
        case Op::Var: return read(e.name());
        case Op::Primed: {
            if (!scope_.has_next()) {
                throw Error(ErrorCode::PrimedInStateFormula, e.name() + "' used where no successor state exists");
            }
            if (const Value* v = scope_.lookup_next(e.name())) {
                return *v;
            }
            throw Error(ErrorCode::UnboundVariable, "primed variable '" + e.name() + "' is not bound");
        }
        case Op::And: return Value::boolean(truth(e.arg(0)) && truth(e.arg(1)));
        case Op::Or: return Value::boolean(truth(e.arg(0)) || truth(e.arg(1)));
        case Op::Implies: return Value::boolean(!truth(e.arg(0)) || truth(e.arg(1)));
        case Op::Not: return Value::boolean(!truth(e.arg(0)));
        case Op::Eq: return Value::boolean(eval(e.arg(0)) == eval(e.arg(1)));
        case Op::Neq: return Value::boolean(eval(e.arg(0)) != eval(e.arg(1)));
        case Op::Lt: return Value::boolean(integer(e.arg(0)) < integer(e.arg(1)));
        case Op::Le: return Value::boolean(integer(e.arg(0)) <= integer(e.arg(1)));
        case Op::Gt: return Value::boolean(integer(e.arg(0)) > integer(e.arg(1)));
        case Op::Ge: return Value::boolean(integer(e.arg(0)) >= integer(e.arg(1)));
        case Op::NotLt: return Value::boolean(!(integer(e.arg(0)) < integer(e.arg(1))));
        case Op::NotLe: return Value::boolean(!(integer(e.arg(0)) <= integer(e.arg(1))));
        case Op::NotGt: return Value::boolean(!(integer(e.arg(0)) > integer(e.arg(1))));
        case Op::NotGe: return Value::boolean(!(integer(e.arg(0)) >= integer(e.arg(1))));
        case Op::In: {
            Value element = eval(e.arg(0));
            return Value::boolean(set(e.arg(1)).contains(element));
        }
        case Op::Forall: {
            Value domain = set(e.arg(0));
            for (const auto& v : domain.items()) {
                if (!truth_bound(e.name(), v, e.arg(1))) {
                    return Value::boolean(false);
                }
            }
            return Value::boolean(true);
        }
        case Op::Exists: {
            Value domain = set(e.arg(0));
            for (const auto& v : domain.items()) {
                if (truth_bound(e.name(), v, e.arg(1))) {
                    return Value::boolean(true);
                }
            }
            return Value::boolean(false);
        }
        case Op::Choose: {
            Value domain = set(e.arg(0));
            return choose(domain, [&](const Value& v) { return truth_bound(e.name(), v, e.arg(1)); });
        }
        case Op::Add: {
            std::int64_t out = 0;
            if (__builtin_add_overflow(integer(e.arg(0)), integer(e.arg(1)), &out)) {
                throw Error(ErrorCode::ArithmeticOverflow, "integer overflow in addition");
            }
            return Value::integer(out);
        }
        case Op::Sub: {
            std::int64_t out = 0;
            if (__builtin_sub_overflow(integer(e.arg(0)), integer(e.arg(1)), &out)) {
                throw Error(ErrorCode::ArithmeticOverflow, "integer overflow in subtraction");
            }
            return Value::integer(out);
        }
        case Op::SeqLit:
        case Op::SetLit: {
            std::vector<Value> items;
            items.reserve(e.args().size());
            for (const auto& a : e.args()) {
                items.push_back(eval(a));
            }
            return e.op() == Op::SetLit ? Value::set(std::move(items)) : Value::seq(std::move(items));
        }
        case Op::IntRange: return Value::range(integer(e.arg(0)), integer(e.arg(1)));
        }
        throw Error(ErrorCode::InvalidSpec, "unknown expression node");
    }

    bool truth(const Expr& e)
    {
        Value v = eval(e);
        if (!v.is_bool()) {
            throw Error(ErrorCode::TypeMismatch, "expected a formula, got value " + v.to_string() + " in " +
                                                     std::string(op_name(e.op())));
        }
        return v.as_bool();
    }

private:
    Value read(const std::string& name)
    {
        for (auto it = env_.rbegin(); it != env_.rend(); ++it) {
            if (it->first == name) {
                return it->second;
            }
        }
        if (const Value* v = scope_.lookup(name)) {
            return *v;
        }
        throw Error(ErrorCode::UnboundVariable, "variable '" + name + "' is not bound");
    }

    std::int64_t integer(const Expr& e)
    {
        Value v = eval(e);
        if (!v.is_int()) {
            throw Error(ErrorCode::TypeMismatch, "ordering/arithmetic on non-integer " + v.to_string());
        }
        return v.as_int();
    }

    Value set(const Expr& e)
    {
        Value v = eval(e);
        if (!v.is_set()) {
            throw Error(ErrorCode::TypeMismatch, "expected a set, got " + v.to_string());
        }
        return v;
    }

    bool truth_bound(const std::string& name, const Value& v, const Expr& body)
    {
        env_.emplace_back(name, v);
        struct Pop {
            Env& env;
            ~Pop() { env.pop_back(); }
        } pop{env_};
        return truth(body);
    }

    const Scope& scope_;
    Env& env_;
};

/// Evaluates `e`. Var reads `current`, Primed reads `next`; `next` is null
/// when `e` is evaluated as a state formula.
inline Value eval_expr(const Expr& e, const State& current, const State* next = nullptr, const Env& env = {})
{
    StateScope scope{&current, next};
    Env local = env;
    return Evaluator<StateScope>(scope, local).eval(e);
}

inline bool eval_state_formula(const Expr& f, const State& s, const Env& env = {})
{
    if (contains_primed(f)) {
        throw Error(ErrorCode::PrimedInStateFormula, "state formula mentions a primed variable");
    }
    Value v = eval_expr(f, s, nullptr, env);
    if (!v.is_bool()) {
        throw Error(ErrorCode::TypeMismatch, "state formula evaluated to non-boolean " + v.to_string());
    }
    return v.as_bool();
}

inline bool eval_action(const Expr& action, const State& s, const State& t, const Env& env = {})
{
    Value v = eval_expr(action, s, &t, env);
    if (!v.is_bool()) {
        throw Error(ErrorCode::TypeMismatch, "action formula evaluated to non-boolean " + v.to_string());
    }
    return v.as_bool();
}

} // namespace tlapbt
