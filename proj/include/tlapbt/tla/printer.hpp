#pragma once

#include "tlapbt/expr.hpp"
#include "tlapbt/spec.hpp"

#include <sstream>
#include <string>

namespace tlapbt::tla {

namespace detail {

inline std::string_view infix_symbol(Op op)
{
    switch (op) {
    case Op::And: return "/\\";
    case Op::Or: return "\\/";
    case Op::Implies: return "=>";
    case Op::Eq: return "=";
    case Op::Neq: return "#";
    case Op::Lt: return "<";
    case Op::Le: return "<=";
    case Op::Gt: return ">";
    case Op::Ge: return ">=";
    case Op::NotLt: return "\\nless";
    case Op::NotLe: return "\\nleq";
    case Op::NotGt: return "\\ngtr";
    case Op::NotGe: return "\\ngeq";
    case Op::In: return "\\in";
    case Op::Add: return "+";
    case Op::Sub: return "-";
    case Op::IntRange: return "..";
    default: return {};
    }
}

inline bool is_atomic(const Expr& e)
{
    switch (e.op()) {
    case Op::Const:
    case Op::Var:
    case Op::Primed:
    case Op::SetLit:
    case Op::SeqLit: return true;
    default: return false;
    }
}

inline std::string print_value(const Value& v)
{
    switch (v.kind()) {
    case Value::Kind::Int: return std::to_string(v.as_int());
    case Value::Kind::Bool: return v.as_bool() ? "TRUE" : "FALSE";
    case Value::Kind::Set:
        if (v == Value::booleans()) {
            return "BOOLEAN";
        }
        [[fallthrough]];
    case Value::Kind::Seq: {
        std::string out = v.is_set() ? "{" : "<<";
        for (std::size_t i = 0; i < v.items().size(); ++i) {
            out += (i ? ", " : "") + print_value(v.items()[i]);
        }
        return out + (v.is_set() ? "}" : ">>");
    }
    }
    return {};
}

} // namespace detail

/// Prints an expression in the accepted TLA+ subset. Every non-atomic
/// operand is parenthesized, so the output parses back to the same tree.
inline std::string pretty_print(const Expr& e)
{
    auto wrap = [](const Expr& c) {
        return detail::is_atomic(c) ? pretty_print(c) : "(" + pretty_print(c) + ")";
    };
    switch (e.op()) {
    case Op::Const: return detail::print_value(e.value());
    case Op::Var: return e.name();
    case Op::Primed: return e.name() + "'";
    case Op::Not: return "~" + wrap(e.arg(0));
    case Op::SetLit:
    case Op::SeqLit: {
        bool set = e.op() == Op::SetLit;
        std::string out = set ? "{" : "<<";
        for (std::size_t i = 0; i < e.args().size(); ++i) {
            out += (i ? ", " : "") + pretty_print(e.arg(i));
        }
        return out + (set ? "}" : ">>");
    }
    case Op::Forall:
    case Op::Exists:
    case Op::Choose: {
        std::string head = e.op() == Op::Forall ? "\\A " : e.op() == Op::Exists ? "\\E " : "CHOOSE ";
        return head + e.name() + " \\in " + wrap(e.arg(0)) + " : " + wrap(e.arg(1));
    }
    default: break;
    }
    return wrap(e.arg(0)) + " " + std::string(detail::infix_symbol(e.op())) + " " + wrap(e.arg(1));
}

/// A module whose Next is the disjunction of the actions, one definition
/// each, with every invariant listed under INVARIANTS. Parameter values are
/// not part of the text.
inline std::string pretty_print(const TemporalSpec& spec)
{
    std::ostringstream out;
    auto list = [&](const char* keyword, const auto& names) {
        if (names.empty()) {
            return;
        }
        out << keyword << ' ';
        bool first = true;
        for (const auto& n : names) {
            out << (first ? "" : ", ") << n;
            first = false;
        }
        out << '\n';
    };
    out << "---- MODULE " << spec.name << " ----\n";
    std::vector<std::string> params;
    for (const auto& [p, _] : spec.params) {
        params.push_back(p);
    }
    list("CONSTANTS", params);
    list("VARIABLES", spec.variables);
    out << '\n';
    std::vector<std::string> invariants;
    for (const auto& [name, f] : spec.invariants) {
        out << name << " == " << pretty_print(f) << '\n';
        invariants.push_back(name);
    }
    out << "Init == " << pretty_print(spec.init) << '\n';
    for (const auto& a : spec.actions) {
        out << a.name << " == " << pretty_print(a.formula) << '\n';
    }
    out << "Next == ";
    if (spec.actions.empty()) {
        out << "FALSE";
    }
    for (std::size_t i = 0; i < spec.actions.size(); ++i) {
        out << (i ? " \\/ " : "") << spec.actions[i].name;
    }
    out << '\n';
    list("INVARIANTS", invariants);
    out << "====\n";
    return out.str();
}

} // namespace tlapbt::tla
