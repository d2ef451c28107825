#pragma once

// Canonical JSON form of values, states, expressions and specs. Object keys
// are emitted sorted (nlohmann::json's default map), so dumps are
// byte-stable for golden-file comparison. The schema lives in
// docs/spec-ir.schema.json.

#include "tlapbt/error.hpp"
#include "tlapbt/expr.hpp"
#include "tlapbt/spec.hpp"
#include "tlapbt/state.hpp"
#include "tlapbt/value.hpp"

#include <nlohmann/json.hpp>

#include <map>
#include <string>
#include <vector>

namespace tlapbt {

using Json = nlohmann::json;

inline constexpr int spec_ir_version = 1;

inline Json value_to_json(const Value& v)
{
    switch (v.kind()) {
    case Value::Kind::Int: return v.as_int();
    case Value::Kind::Bool: return v.as_bool();
    case Value::Kind::Seq: {
        Json arr = Json::array();
        for (const auto& item : v.items()) {
            arr.push_back(value_to_json(item));
        }
        return arr;
    }
    case Value::Kind::Set: {
        Json arr = Json::array();
        for (const auto& item : v.items()) {
            arr.push_back(value_to_json(item));
        }
        return Json{{"set", arr}};
    }
    }
    return nullptr;
}

inline Value value_from_json(const Json& j)
{
    if (j.is_boolean()) {
        return Value::boolean(j.get<bool>());
    }
    if (j.is_number_integer()) {
        return Value::integer(j.get<std::int64_t>());
    }
    if (j.is_array()) {
        std::vector<Value> items;
        for (const auto& item : j) {
            items.push_back(value_from_json(item));
        }
        return Value::seq(std::move(items));
    }
    if (j.is_object() && j.size() == 1 && j.contains("set") && j["set"].is_array()) {
        std::vector<Value> items;
        for (const auto& item : j["set"]) {
            items.push_back(value_from_json(item));
        }
        return Value::set(std::move(items));
    }
    throw Error(ErrorCode::InvalidSpec, "not a model value: " + j.dump());
}

inline Json state_to_json(const State& s)
{
    Json out = Json::object();
    for (std::size_t i = 0; i < s.size(); ++i) {
        out[s.variables()[i]] = value_to_json(s.values()[i]);
    }
    return out;
}

inline State state_from_json(const Json& j, const VariableList& variables)
{
    if (!j.is_object()) {
        throw Error(ErrorCode::InvalidSpec, "state must be a JSON object");
    }
    std::map<std::string, Value> bindings;
    for (const auto& [k, v] : j.items()) {
        bindings.emplace(k, value_from_json(v));
    }
    return State::from_map(variables, bindings);
}

inline Json behavior_to_json(const Behavior& b)
{
    Json states = Json::array();
    for (const auto& s : b.states()) {
        states.push_back(state_to_json(s));
    }
    return Json{{"states", states}};
}

inline Behavior behavior_from_json(const Json& j, const VariableList& variables)
{
    if (!j.is_object() || !j.contains("states") || !j["states"].is_array()) {
        throw Error(ErrorCode::InvalidSpec, "behavior must be {\"states\": [...]}");
    }
    std::vector<State> states;
    for (const auto& s : j["states"]) {
        states.push_back(state_from_json(s, variables));
    }
    return Behavior(std::move(states));
}

namespace detail {

inline Op op_from_name(const std::string& name)
{
    static const std::map<std::string, Op> table = [] {
        std::map<std::string, Op> t;
        for (int i = 0; i <= static_cast<int>(Op::IntRange); ++i) {
            auto op = static_cast<Op>(i);
            t.emplace(std::string(op_name(op)), op);
        }
        return t;
    }();
    auto it = table.find(name);
    if (it == table.end()) {
        throw Error(ErrorCode::InvalidSpec, "unknown expression operator '" + name + "'");
    }
    return it->second;
}

inline const Json& field(const Json& j, const char* key)
{
    if (!j.is_object() || !j.contains(key)) {
        throw Error(ErrorCode::InvalidSpec, std::string("missing field '") + key + "' in " + j.dump());
    }
    return j[key];
}

inline std::string string_field(const Json& j, const char* key)
{
    const Json& f = field(j, key);
    if (!f.is_string()) {
        throw Error(ErrorCode::InvalidSpec, std::string("field '") + key + "' must be a string");
    }
    return f.get<std::string>();
}

} // namespace detail

inline Json expr_to_json(const Expr& e)
{
    Json out{{"op", std::string(op_name(e.op()))}};
    switch (e.op()) {
    case Op::Const: out["value"] = value_to_json(e.value()); break;
    case Op::Var:
    case Op::Primed: out["name"] = e.name(); break;
    case Op::Forall:
    case Op::Exists:
    case Op::Choose:
        out["var"] = e.name();
        out["domain"] = expr_to_json(e.arg(0));
        out["body"] = expr_to_json(e.arg(1));
        break;
    default: {
        Json args = Json::array();
        for (const auto& a : e.args()) {
            args.push_back(expr_to_json(a));
        }
        out["args"] = args;
    }
    }
    return out;
}

inline Expr expr_from_json(const Json& j)
{
    Op op = detail::op_from_name(detail::string_field(j, "op"));
    switch (op) {
    case Op::Const: return build::constant(value_from_json(detail::field(j, "value")));
    case Op::Var: return build::var(detail::string_field(j, "name"));
    case Op::Primed: return build::primed(detail::string_field(j, "name"));
    case Op::Forall:
    case Op::Exists:
    case Op::Choose:
        return build::node(op, {expr_from_json(detail::field(j, "domain")), expr_from_json(detail::field(j, "body"))},
                           detail::string_field(j, "var"));
    default: break;
    }
    const Json& args = detail::field(j, "args");
    if (!args.is_array()) {
        throw Error(ErrorCode::InvalidSpec, "'args' must be an array");
    }
    std::vector<Expr> children;
    for (const auto& a : args) {
        children.push_back(expr_from_json(a));
    }
    int expected = arity(op);
    if (expected >= 0 && static_cast<int>(children.size()) != expected) {
        throw Error(ErrorCode::InvalidSpec, std::string(op_name(op)) + " takes " + std::to_string(expected) +
                                                " arguments, got " + std::to_string(children.size()));
    }
    return build::node(op, std::move(children));
}

inline Json spec_to_json(const TemporalSpec& spec)
{
    Json actions = Json::array();
    for (const auto& a : spec.actions) {
        actions.push_back(Json{{"name", a.name}, {"formula", expr_to_json(a.formula)}});
    }
    Json invariants = Json::object();
    for (const auto& [name, f] : spec.invariants) {
        invariants[name] = expr_to_json(f);
    }
    Json params = Json::object();
    for (const auto& [name, v] : spec.params) {
        params[name] = v;
    }
    return Json{{"version", spec_ir_version},
                {"name", spec.name},
                {"variables", spec.variables},
                {"init", expr_to_json(spec.init)},
                {"actions", actions},
                {"invariants", invariants},
                {"params", params}};
}

inline TemporalSpec spec_from_json(const Json& j)
{
    if (!j.is_object()) {
        throw Error(ErrorCode::InvalidSpec, "spec IR must be a JSON object");
    }
    if (j.contains("version") && j["version"] != spec_ir_version) {
        throw Error(ErrorCode::InvalidSpec, "unsupported spec IR version " + j["version"].dump());
    }
    TemporalSpec spec;
    spec.name = detail::string_field(j, "name");
    const Json& vars = detail::field(j, "variables");
    if (!vars.is_array()) {
        throw Error(ErrorCode::InvalidSpec, "'variables' must be an array");
    }
    for (const auto& v : vars) {
        if (!v.is_string()) {
            throw Error(ErrorCode::InvalidSpec, "variable names must be strings");
        }
        spec.variables.push_back(v.get<std::string>());
    }
    spec.init = expr_from_json(detail::field(j, "init"));
    for (const auto& a : detail::field(j, "actions")) {
        spec.actions.push_back({detail::string_field(a, "name"), expr_from_json(detail::field(a, "formula"))});
    }
    if (j.contains("invariants")) {
        for (const auto& [name, f] : j["invariants"].items()) {
            spec.invariants.emplace(name, expr_from_json(f));
        }
    }
    if (j.contains("params")) {
        for (const auto& [name, v] : j["params"].items()) {
            if (!v.is_number_integer()) {
                throw Error(ErrorCode::InvalidSpec, "parameter '" + name + "' must be an integer");
            }
            spec.params.emplace(name, v.get<std::int64_t>());
        }
    }
    return spec;
}

} // namespace tlapbt
