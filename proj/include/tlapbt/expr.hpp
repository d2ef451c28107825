#pragma once

#include "tlapbt/value.hpp"

#include <cstdint>
#include <functional>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace tlapbt {

enum class Op : std::uint8_t {
    Const,
    Var,
    Primed,
    And,
    Or,
    Implies,
    Not,
    Eq,
    Neq,
    Lt,
    Le,
    Gt,
    Ge,
    NotLt,
    NotLe,
    NotGt,
    NotGe,
    In,
    Forall,
    Exists,
    Choose,
    Add,
    Sub,
    SeqLit,
    SetLit,
    IntRange,
};

std::string_view op_name(Op op);

struct ExprNode;

// Immutable, shareable expression tree. Quantifier nodes (Forall, Exists,
// Choose) store the bound variable in `name` and {domain, body} in args.
//
// A node may carry a label naming the definition it was expanded from. The
// label is informational only and does not take part in equality.
class Expr {
public:
    Expr() = default;
    explicit Expr(std::shared_ptr<const ExprNode> node) : node_(std::move(node)) {}

    [[nodiscard]] bool empty() const noexcept { return node_ == nullptr; }
    [[nodiscard]] const ExprNode& node() const { return *node_; }
    [[nodiscard]] const ExprNode* operator->() const { return node_.get(); }

    [[nodiscard]] Op op() const;
    [[nodiscard]] const Value& value() const;
    [[nodiscard]] const std::string& name() const;
    [[nodiscard]] const std::vector<Expr>& args() const;
    [[nodiscard]] const Expr& arg(std::size_t i) const;
    [[nodiscard]] const std::string& label() const;

    /// Copy of this node carrying `label`.
    [[nodiscard]] Expr labeled(std::string label) const;

    friend bool operator==(const Expr& a, const Expr& b);

private:
    std::shared_ptr<const ExprNode> node_;
};

struct ExprNode {
    Op op = Op::Const;
    Value value;
    std::string name;
    std::vector<Expr> args;
    std::string label;
};

inline Op Expr::op() const { return node_->op; }
inline const Value& Expr::value() const { return node_->value; }
inline const std::string& Expr::name() const { return node_->name; }
inline const std::vector<Expr>& Expr::args() const { return node_->args; }
inline const Expr& Expr::arg(std::size_t i) const { return node_->args.at(i); }
inline const std::string& Expr::label() const { return node_->label; }

inline Expr Expr::labeled(std::string label) const
{
    auto copy = std::make_shared<ExprNode>(*node_);
    copy->label = std::move(label);
    return Expr(std::move(copy));
}

inline bool operator==(const Expr& a, const Expr& b)
{
    if (a.node_ == b.node_) {
        return true;
    }
    if (!a.node_ || !b.node_) {
        return false;
    }
    const ExprNode& x = *a.node_;
    const ExprNode& y = *b.node_;
    return x.op == y.op && x.value == y.value && x.name == y.name && x.args == y.args;
}

inline std::string_view op_name(Op op)
{
    switch (op) {
    case Op::Const: return "const";
    case Op::Var: return "var";
    case Op::Primed: return "primed";
    case Op::And: return "and";
    case Op::Or: return "or";
    case Op::Implies: return "implies";
    case Op::Not: return "not";
    case Op::Eq: return "eq";
    case Op::Neq: return "neq";
    case Op::Lt: return "lt";
    case Op::Le: return "le";
    case Op::Gt: return "gt";
    case Op::Ge: return "ge";
    case Op::NotLt: return "not_lt";
    case Op::NotLe: return "not_le";
    case Op::NotGt: return "not_gt";
    case Op::NotGe: return "not_ge";
    case Op::In: return "in";
    case Op::Forall: return "forall";
    case Op::Exists: return "exists";
    case Op::Choose: return "choose";
    case Op::Add: return "add";
    case Op::Sub: return "sub";
    case Op::SeqLit: return "seq";
    case Op::SetLit: return "set";
    case Op::IntRange: return "range";
    }
    return "?";
}

[[nodiscard]] inline bool is_binder(Op op) { return op == Op::Forall || op == Op::Exists || op == Op::Choose; }

[[nodiscard]] inline bool is_comparison(Op op)
{
    switch (op) {
    case Op::Eq:
    case Op::Neq:
    case Op::Lt:
    case Op::Le:
    case Op::Gt:
    case Op::Ge:
    case Op::NotLt:
    case Op::NotLe:
    case Op::NotGt:
    case Op::NotGe:
    case Op::In: return true;
    default: return false;
    }
}

/// Number of children an operator takes; -1 for variadic literals.
[[nodiscard]] inline int arity(Op op)
{
    switch (op) {
    case Op::Const:
    case Op::Var:
    case Op::Primed: return 0;
    case Op::Not: return 1;
    case Op::SeqLit:
    case Op::SetLit: return -1;
    default: return 2;
    }
}

namespace build {

inline Expr node(Op op, std::vector<Expr> args = {}, std::string name = {}, Value value = {})
{
    auto n = std::make_shared<ExprNode>();
    n->op = op;
    n->args = std::move(args);
    n->name = std::move(name);
    n->value = std::move(value);
    return Expr(std::move(n));
}

inline Expr constant(Value v) { return node(Op::Const, {}, {}, std::move(v)); }
inline Expr lit(std::int64_t v) { return constant(Value::integer(v)); }
inline Expr truth(bool v) { return constant(Value::boolean(v)); }
inline Expr var(std::string name) { return node(Op::Var, {}, std::move(name)); }
inline Expr primed(std::string name) { return node(Op::Primed, {}, std::move(name)); }

inline Expr binary(Op op, Expr l, Expr r) { return node(op, {std::move(l), std::move(r)}); }
inline Expr and_(Expr l, Expr r) { return binary(Op::And, std::move(l), std::move(r)); }
inline Expr or_(Expr l, Expr r) { return binary(Op::Or, std::move(l), std::move(r)); }
inline Expr implies(Expr l, Expr r) { return binary(Op::Implies, std::move(l), std::move(r)); }
inline Expr not_(Expr e) { return node(Op::Not, {std::move(e)}); }
inline Expr eq(Expr l, Expr r) { return binary(Op::Eq, std::move(l), std::move(r)); }
inline Expr neq(Expr l, Expr r) { return binary(Op::Neq, std::move(l), std::move(r)); }
inline Expr lt(Expr l, Expr r) { return binary(Op::Lt, std::move(l), std::move(r)); }
inline Expr le(Expr l, Expr r) { return binary(Op::Le, std::move(l), std::move(r)); }
inline Expr gt(Expr l, Expr r) { return binary(Op::Gt, std::move(l), std::move(r)); }
inline Expr ge(Expr l, Expr r) { return binary(Op::Ge, std::move(l), std::move(r)); }
inline Expr in(Expr e, Expr s) { return binary(Op::In, std::move(e), std::move(s)); }
inline Expr add(Expr l, Expr r) { return binary(Op::Add, std::move(l), std::move(r)); }
inline Expr sub(Expr l, Expr r) { return binary(Op::Sub, std::move(l), std::move(r)); }
inline Expr range(Expr lo, Expr hi) { return binary(Op::IntRange, std::move(lo), std::move(hi)); }
inline Expr set_of(std::vector<Expr> items) { return node(Op::SetLit, std::move(items)); }
inline Expr seq_of(std::vector<Expr> items) { return node(Op::SeqLit, std::move(items)); }

inline Expr forall(std::string x, Expr domain, Expr body)
{
    return node(Op::Forall, {std::move(domain), std::move(body)}, std::move(x));
}
inline Expr exists(std::string x, Expr domain, Expr body)
{
    return node(Op::Exists, {std::move(domain), std::move(body)}, std::move(x));
}
inline Expr choose(std::string x, Expr domain, Expr body)
{
    return node(Op::Choose, {std::move(domain), std::move(body)}, std::move(x));
}

/// Left-nested conjunction of `parts`; TRUE when empty.
inline Expr conjunction(const std::vector<Expr>& parts)
{
    if (parts.empty()) {
        return truth(true);
    }
    Expr out = parts.front();
    for (std::size_t i = 1; i < parts.size(); ++i) {
        out = and_(out, parts[i]);
    }
    return out;
}

/// Left-nested disjunction of `parts`; FALSE when empty.
inline Expr disjunction(const std::vector<Expr>& parts)
{
    if (parts.empty()) {
        return truth(false);
    }
    Expr out = parts.front();
    for (std::size_t i = 1; i < parts.size(); ++i) {
        out = or_(out, parts[i]);
    }
    return out;
}

} // namespace build

namespace detail {
inline void flatten_into(const Expr& e, Op op, std::vector<Expr>& out, bool stop_at_labels, bool top)
{
    if (e.op() == op && (top || !stop_at_labels || e.label().empty())) {
        flatten_into(e.arg(0), op, out, stop_at_labels, false);
        flatten_into(e.arg(1), op, out, stop_at_labels, false);
        return;
    }
    out.push_back(e);
}
} // namespace detail

/// Flattens nested applications of `op` into a list of operands. With
/// `stop_at_labels`, a labeled sub-node below the root is kept whole.
inline std::vector<Expr> flatten(const Expr& e, Op op, bool stop_at_labels = false)
{
    std::vector<Expr> out;
    detail::flatten_into(e, op, out, stop_at_labels, true);
    return out;
}

inline bool contains_primed(const Expr& e)
{
    if (e.op() == Op::Primed) {
        return true;
    }
    for (const auto& a : e.args()) {
        if (contains_primed(a)) {
            return true;
        }
    }
    return false;
}

/// Calls `visit(node, bound)` for every Var/Primed occurrence not captured by
/// an enclosing binder, where `bound` is the set of names bound at that point.
inline void for_each_reference(const Expr& e, const std::function<void(const Expr&, const std::vector<std::string>&)>& visit,
                               std::vector<std::string>& bound)
{
    switch (e.op()) {
    case Op::Var:
    case Op::Primed: visit(e, bound); return;
    case Op::Forall:
    case Op::Exists:
    case Op::Choose:
        for_each_reference(e.arg(0), visit, bound);
        bound.push_back(e.name());
        for_each_reference(e.arg(1), visit, bound);
        bound.pop_back();
        return;
    default:
        for (const auto& a : e.args()) {
            for_each_reference(a, visit, bound);
        }
    }
}

} // namespace tlapbt
