#pragma once

#include "tlapbt/error.hpp"
#include "tlapbt/expr.hpp"
#include "tlapbt/spec.hpp"
#include "tlapbt/tla/lexer.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace tlapbt::tla {

struct Definition {
    std::string name;
    Expr body;
    Position pos;
};

struct Note {
    Position pos;
    std::string message;
};

struct ParsedModule {
    std::string name;
    std::vector<std::string> variables;
    std::vector<std::string> constants;
    std::vector<Definition> definitions;
    std::vector<std::string> invariant_decls;
    std::vector<Note> diagnostics;

    [[nodiscard]] const Definition* find(std::string_view def) const
    {
        for (const auto& d : definitions) {
            if (d.name == def) {
                return &d;
            }
        }
        return nullptr;
    }
};

/// Names visible to an expression parsed outside a module.
struct ExprScope {
    std::vector<std::string> variables;
    std::vector<std::string> constants;
    std::vector<std::string> bound;
};

// Recursive descent over the token stream. Precedence, loosest first:
//   =>  (right assoc)  <  \/  <  /\  <  ~  <  comparisons and \in
//   <  ..  <  + -  <  prime  <  atoms
// Quantifier and CHOOSE bodies extend as far right as possible.
//
// Junction lists: a bullet in prefix position opens a list at its column.
// While an item is parsed, any token at or left of that column ends the
// item; a bullet of the same kind exactly at the column starts the next one.
class Parser {
public:
    explicit Parser(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

    ParsedModule parse_module()
    {
        ParsedModule m;
        module_ = &m;
        if (raw_is("----")) {
            ++pos_;
            expect_keyword("MODULE");
            m.name = expect_identifier("module name");
            if (!raw_is("----")) {
                fail("'----' after the module name");
            }
            ++pos_;
        }
        while (pos_ < tokens_.size()) {
            const Token& t = tokens_[pos_];
            if (is_rule("====")) {
                ++pos_;
                if (pos_ < tokens_.size()) {
                    throw SourceError(ErrorCode::ParseError, tokens_[pos_].pos, "text after the end of the module");
                }
                break;
            }
            if (t.kind == TokenKind::Keyword) {
                if (t.lexeme == "VARIABLE" || t.lexeme == "VARIABLES") {
                    ++pos_;
                    for (auto& n : identifier_list("variable name")) {
                        declare(n, tokens_[pos_ - 1].pos);
                        m.variables.push_back(std::move(n));
                    }
                    continue;
                }
                if (t.lexeme == "CONSTANT" || t.lexeme == "CONSTANTS") {
                    ++pos_;
                    for (auto& n : identifier_list("constant name")) {
                        declare(n, tokens_[pos_ - 1].pos);
                        m.constants.push_back(std::move(n));
                    }
                    continue;
                }
                if (t.lexeme == "INVARIANT" || t.lexeme == "INVARIANTS") {
                    ++pos_;
                    for (auto& n : identifier_list("invariant name")) {
                        m.invariant_decls.push_back(std::move(n));
                    }
                    continue;
                }
                unsupported(t);
            }
            if (t.kind != TokenKind::Identifier) {
                throw SourceError(ErrorCode::ParseError, t.pos, "expected a declaration or definition, found '" + t.lexeme + "'");
            }
            parse_definition(m);
        }
        for (const auto& inv : m.invariant_decls) {
            if (!m.find(inv)) {
                throw Error(ErrorCode::UnknownInvariant, "INVARIANT names undefined '" + inv + "'");
            }
        }
        for (const auto& d : m.definitions) {
            bool conventional = d.name == "Init" || d.name == "Next" || d.name == "TypeOK" ||
                                std::find(m.invariant_decls.begin(), m.invariant_decls.end(), d.name) !=
                                    m.invariant_decls.end();
            if (!conventional && !referenced_.contains(d.name)) {
                m.diagnostics.push_back({d.pos, "definition '" + d.name + "' is never referenced"});
            }
        }
        module_ = nullptr;
        return m;
    }

    Expr parse_standalone(const ExprScope& scope)
    {
        scope_ = &scope;
        bound_ = scope.bound;
        Expr e = parse_expr();
        if (pos_ < tokens_.size()) {
            throw SourceError(ErrorCode::ParseError, tokens_[pos_].pos, "unexpected '" + tokens_[pos_].lexeme + "'");
        }
        return e;
    }

private:
    // ---- token access -------------------------------------------------

    [[nodiscard]] bool raw_is(std::string_view lexeme) const
    {
        if (pos_ >= tokens_.size()) {
            return false;
        }
        const Token& t = tokens_[pos_];
        if (lexeme == "----" || lexeme == "====") {
            return t.lexeme.size() >= 4 && t.lexeme.find_first_not_of(lexeme.front()) == std::string::npos;
        }
        return t.lexeme == lexeme;
    }

    [[nodiscard]] bool is_rule(std::string_view rule) const { return raw_is(rule); }

    [[nodiscard]] bool at_definition_start() const
    {
        return pos_ + 1 < tokens_.size() && tokens_[pos_].kind == TokenKind::Identifier &&
               tokens_[pos_ + 1].lexeme == "==";
    }

    /// True when the current token cannot continue the expression being parsed.
    [[nodiscard]] bool at_end() const
    {
        if (pos_ >= tokens_.size()) {
            return true;
        }
        const Token& t = tokens_[pos_];
        if (!fences_.empty() && fences_.back() >= 0 && static_cast<long>(t.pos.column) <= fences_.back()) {
            return true;
        }
        if (at_definition_start() || is_rule("====") || is_rule("----")) {
            return true;
        }
        if (t.kind == TokenKind::Keyword) {
            static const std::set<std::string> stops{"VARIABLE",  "VARIABLES", "CONSTANT",   "CONSTANTS",
                                                     "INVARIANT", "INVARIANTS", "EXTENDS"};
            return stops.contains(t.lexeme);
        }
        return false;
    }

    [[nodiscard]] const Token* peek() const { return at_end() ? nullptr : &tokens_[pos_]; }

    [[nodiscard]] bool next_is(std::string_view lexeme) const
    {
        const Token* t = peek();
        return t && t->lexeme == lexeme;
    }

    bool accept(std::string_view lexeme)
    {
        if (next_is(lexeme)) {
            ++pos_;
            return true;
        }
        return false;
    }

    [[nodiscard]] Position here() const
    {
        if (pos_ < tokens_.size()) {
            return tokens_[pos_].pos;
        }
        if (tokens_.empty()) {
            return {};
        }
        Position p = tokens_.back().pos;
        p.column += tokens_.back().lexeme.size();
        p.offset += tokens_.back().lexeme.size();
        return p;
    }

    [[noreturn]] void fail(const std::string& expected) const
    {
        std::string found = pos_ < tokens_.size() ? "'" + tokens_[pos_].lexeme + "'" : "end of input";
        throw SourceError(ErrorCode::ParseError, here(), "expected " + expected + ", found " + found);
    }

    [[noreturn]] void unsupported(const Token& t) const
    {
        throw SourceError(ErrorCode::UnsupportedConstruct, t.pos, "'" + t.lexeme + "' is outside the supported TLA+ subset");
    }

    void expect(std::string_view lexeme, const std::string& what)
    {
        if (!accept(lexeme)) {
            fail(what);
        }
    }

    void expect_keyword(std::string_view kw)
    {
        if (pos_ < tokens_.size() && tokens_[pos_].lexeme == kw) {
            ++pos_;
            return;
        }
        fail("'" + std::string(kw) + "'");
    }

    std::string expect_identifier(const std::string& what)
    {
        if (pos_ < tokens_.size() && tokens_[pos_].kind == TokenKind::Identifier) {
            return tokens_[pos_++].lexeme;
        }
        if (pos_ < tokens_.size() && tokens_[pos_].kind == TokenKind::Keyword) {
            unsupported(tokens_[pos_]);
        }
        fail(what);
    }

    std::vector<std::string> identifier_list(const std::string& what)
    {
        std::vector<std::string> names{expect_identifier(what)};
        while (pos_ < tokens_.size() && tokens_[pos_].lexeme == ",") {
            ++pos_;
            names.push_back(expect_identifier(what));
        }
        return names;
    }

    // ---- names --------------------------------------------------------

    [[nodiscard]] bool is_variable(const std::string& n) const
    {
        const auto& vars = module_ ? module_->variables : scope_->variables;
        return std::find(vars.begin(), vars.end(), n) != vars.end();
    }

    [[nodiscard]] bool is_constant(const std::string& n) const
    {
        const auto& consts = module_ ? module_->constants : scope_->constants;
        return std::find(consts.begin(), consts.end(), n) != consts.end();
    }

    [[nodiscard]] bool is_bound(const std::string& n) const
    {
        return std::find(bound_.begin(), bound_.end(), n) != bound_.end();
    }

    void declare(const std::string& n, Position pos)
    {
        if (is_variable(n) || is_constant(n) || (module_ && module_->find(n))) {
            throw SourceError(ErrorCode::ParseError, pos, "'" + n + "' is declared twice");
        }
    }

    void parse_definition(ParsedModule& m)
    {
        Position pos = tokens_[pos_].pos;
        std::string name = tokens_[pos_++].lexeme;
        if (pos_ < tokens_.size() && tokens_[pos_].lexeme == "(") {
            throw SourceError(ErrorCode::UnsupportedConstruct, tokens_[pos_].pos,
                              "operator definitions with parameters are outside the supported TLA+ subset");
        }
        if (pos_ >= tokens_.size() || tokens_[pos_].lexeme != "==") {
            fail("'==' after '" + name + "'");
        }
        ++pos_;
        if (m.find(name) || is_variable(name) || is_constant(name)) {
            throw SourceError(ErrorCode::ParseError, pos, "'" + name + "' is defined twice");
        }
        bound_.clear();
        Expr body = parse_expr();
        if (pos_ < tokens_.size() && !at_definition_start() && !is_rule("====") &&
            tokens_[pos_].kind != TokenKind::Keyword) {
            throw SourceError(ErrorCode::ParseError, tokens_[pos_].pos,
                              "unexpected '" + tokens_[pos_].lexeme + "' in definition of " + name);
        }
        m.definitions.push_back({std::move(name), std::move(body), pos});
    }

    // ---- expressions --------------------------------------------------

    Expr parse_expr() { return parse_implies(); }

    Expr parse_implies()
    {
        Expr lhs = parse_or();
        if (accept("=>")) {
            return build::implies(lhs, parse_implies());
        }
        return lhs;
    }

    Expr parse_or()
    {
        Expr lhs = parse_and();
        while (next_is("\\/") || next_is("\\lor")) {
            ++pos_;
            lhs = build::or_(lhs, parse_and());
        }
        return lhs;
    }

    Expr parse_and()
    {
        Expr lhs = parse_not();
        while (next_is("/\\") || next_is("\\land")) {
            ++pos_;
            lhs = build::and_(lhs, parse_not());
        }
        return lhs;
    }

    Expr parse_not()
    {
        if (accept("~") || accept("\\lnot") || accept("\\neg")) {
            return build::not_(parse_not());
        }
        return parse_comparison();
    }

    static std::optional<Op> comparison_op(std::string_view lexeme)
    {
        static const std::map<std::string_view, Op> table{
            {"=", Op::Eq},      {"#", Op::Neq},       {"/=", Op::Neq},      {"<", Op::Lt},
            {"<=", Op::Le},     {"=<", Op::Le},       {">", Op::Gt},        {">=", Op::Ge},
            {"\\in", Op::In},   {"\\nless", Op::NotLt}, {"\\nleq", Op::NotLe}, {"\\ngtr", Op::NotGt},
            {"\\ngeq", Op::NotGe},
        };
        auto it = table.find(lexeme);
        return it == table.end() ? std::nullopt : std::optional<Op>(it->second);
    }

    Expr parse_comparison()
    {
        Expr lhs = parse_range();
        const Token* t = peek();
        if (!t) {
            return lhs;
        }
        auto op = comparison_op(t->lexeme);
        if (!op) {
            return lhs;
        }
        ++pos_;
        Expr rhs = parse_range();
        if (const Token* after = peek(); after && comparison_op(after->lexeme)) {
            throw SourceError(ErrorCode::ParseError, after->pos, "chained comparison needs parentheses");
        }
        return build::binary(*op, lhs, rhs);
    }

    Expr parse_range()
    {
        Expr lo = parse_additive();
        if (accept("..")) {
            return build::range(lo, parse_additive());
        }
        return lo;
    }

    Expr parse_additive()
    {
        Expr lhs = parse_unary();
        for (;;) {
            if (accept("+")) {
                lhs = build::add(lhs, parse_unary());
            } else if (accept("-")) {
                lhs = build::sub(lhs, parse_unary());
            } else {
                return lhs;
            }
        }
    }

    Expr parse_unary()
    {
        if (next_is("-")) {
            Position pos = tokens_[pos_].pos;
            ++pos_;
            const Token* t = peek();
            if (!t || t->kind != TokenKind::Integer) {
                throw SourceError(ErrorCode::UnsupportedConstruct, pos, "unary minus applies only to integer literals");
            }
            ++pos_;
            return build::lit(-std::stoll(t->lexeme));
        }
        return parse_primary();
    }

    Expr parse_primary()
    {
        const Token* t = peek();
        if (!t) {
            fail("an expression");
        }
        if (t->kind == TokenKind::Layout) {
            return parse_junction_list();
        }
        if (t->kind == TokenKind::Integer) {
            ++pos_;
            return build::lit(std::stoll(t->lexeme));
        }
        if (t->kind == TokenKind::Keyword) {
            if (t->lexeme == "TRUE" || t->lexeme == "FALSE") {
                ++pos_;
                return build::truth(t->lexeme == "TRUE");
            }
            if (t->lexeme == "BOOLEAN") {
                ++pos_;
                return build::constant(Value::booleans());
            }
            if (t->lexeme == "CHOOSE") {
                ++pos_;
                return parse_binder(Op::Choose);
            }
            unsupported(*t);
        }
        if (t->kind == TokenKind::Identifier) {
            return parse_name();
        }
        if (t->lexeme == "\\A" || t->lexeme == "\\E") {
            Op op = t->lexeme == "\\A" ? Op::Forall : Op::Exists;
            ++pos_;
            return parse_binder(op);
        }
        if (t->lexeme == "(") {
            ++pos_;
            fences_.push_back(-1);
            Expr inner = parse_expr();
            fences_.pop_back();
            expect(")", "')'");
            return inner;
        }
        if (t->lexeme == "{") {
            ++pos_;
            return build::set_of(parse_items("}"));
        }
        if (t->lexeme == "<<") {
            ++pos_;
            return build::seq_of(parse_items(">>"));
        }
        if (t->lexeme == "[") {
            throw SourceError(ErrorCode::UnsupportedConstruct, t->pos,
                              "functions and records are outside the supported TLA+ subset");
        }
        fail("an expression");
    }

    std::vector<Expr> parse_items(std::string_view close)
    {
        fences_.push_back(-1);
        std::vector<Expr> items;
        if (!next_is(close)) {
            do {
                items.push_back(parse_expr());
                if (next_is(":")) {
                    throw SourceError(ErrorCode::UnsupportedConstruct, tokens_[pos_].pos,
                                      "set comprehensions are outside the supported TLA+ subset");
                }
            } while (accept(","));
        }
        fences_.pop_back();
        expect(close, "'" + std::string(close) + "'");
        return items;
    }

    Expr parse_name()
    {
        const Token& t = tokens_[pos_++];
        const std::string& n = t.lexeme;
        bool primed = next_is("'");
        if (is_bound(n)) {
            if (primed) {
                throw SourceError(ErrorCode::ParseError, t.pos, "bound variable '" + n + "' cannot be primed");
            }
            return build::var(n);
        }
        if (is_variable(n)) {
            if (primed) {
                ++pos_;
                return build::primed(n);
            }
            return build::var(n);
        }
        if (is_constant(n)) {
            if (primed) {
                throw SourceError(ErrorCode::ParseError, t.pos, "constant '" + n + "' cannot be primed");
            }
            return build::var(n);
        }
        if (module_) {
            if (const Definition* d = module_->find(n)) {
                if (primed) {
                    throw SourceError(ErrorCode::UnsupportedConstruct, t.pos, "priming a definition ('" + n + "')");
                }
                referenced_.insert(n);
                return d->body.labeled(n);
            }
        }
        throw SourceError(ErrorCode::ParseError, t.pos, "unknown identifier '" + n + "'");
    }

    // \A x \in S : body, \E x \in S, y \in T : body, CHOOSE x \in S : body
    Expr parse_binder(Op op)
    {
        Position pos = here();
        std::string x = expect_identifier_here("a bound variable");
        expect("\\in", "'\\in' (unbounded quantifiers are not supported)");
        Expr domain = parse_range();
        bound_.push_back(x);
        Expr body;
        if (op != Op::Choose && accept(",")) {
            body = parse_binder(op);
        } else {
            expect(":", "':'");
            body = parse_expr();
        }
        bound_.pop_back();
        (void)pos;
        return build::node(op, {domain, body}, x);
    }

    std::string expect_identifier_here(const std::string& what)
    {
        const Token* t = peek();
        if (!t || t->kind != TokenKind::Identifier) {
            fail(what);
        }
        ++pos_;
        return t->lexeme;
    }

    Expr parse_junction_list()
    {
        const Token& first = tokens_[pos_];
        const std::string kind = first.lexeme;
        const long column = static_cast<long>(first.pos.column);
        Expr out;
        for (;;) {
            ++pos_; // the bullet
            fences_.push_back(column);
            Expr item = parse_expr();
            fences_.pop_back();
            out = out.empty() ? item : build::binary(kind == "/\\" ? Op::And : Op::Or, out, item);
            const Token* t = peek();
            if (!t || t->kind != TokenKind::Layout || t->lexeme != kind || static_cast<long>(t->pos.column) != column) {
                return out;
            }
        }
    }

    std::vector<Token> tokens_;
    std::size_t pos_ = 0;
    std::vector<long> fences_;
    std::vector<std::string> bound_;
    ParsedModule* module_ = nullptr;
    const ExprScope* scope_ = nullptr;
    std::set<std::string> referenced_;
};

inline ParsedModule parse(std::vector<Token> tokens) { return Parser(std::move(tokens)).parse_module(); }

inline ParsedModule parse_module(std::string_view source) { return parse(tokenize(source)); }

inline Expr parse_expr(std::string_view source, const ExprScope& scope)
{
    return Parser(tokenize(source)).parse_standalone(scope);
}

struct Conventions {
    std::string init_name = "Init";
    std::string next_name = "Next";
    std::string type_ok_name = "TypeOK";
    /// Extra definitions to check as invariants, in addition to TypeOK and
    /// the module's INVARIANT declarations.
    std::vector<std::string> invariants;
    /// Values for the module's CONSTANTS.
    std::map<std::string, std::int64_t> params;
};

/// Builds a spec from a parsed module: Init, the top-level disjuncts of
/// Next as actions (named after the definition they reference, otherwise
/// A1..An), and the selected invariants.
inline TemporalSpec to_spec(const ParsedModule& m, const Conventions& conv = {})
{
    const Definition* init = m.find(conv.init_name);
    if (!init) {
        throw Error(ErrorCode::MissingDefinition, "module does not define " + conv.init_name);
    }
    const Definition* next = m.find(conv.next_name);
    if (!next) {
        throw Error(ErrorCode::MissingDefinition, "module does not define " + conv.next_name);
    }
    TemporalSpec spec;
    spec.name = m.name.empty() ? "Spec" : m.name;
    spec.variables = m.variables;
    spec.init = init->body;

    for (const auto& c : m.constants) {
        auto it = conv.params.find(c);
        if (it == conv.params.end()) {
            throw Error(ErrorCode::MissingParameter, "no value given for constant " + c);
        }
        spec.params.emplace(c, it->second);
    }
    for (const auto& [p, _] : conv.params) {
        if (std::find(m.constants.begin(), m.constants.end(), p) == m.constants.end()) {
            throw Error(ErrorCode::InvalidArgument, "module declares no constant named " + p);
        }
    }

    if (!(next->body.op() == Op::Const && next->body.value() == Value::boolean(false))) {
        std::vector<Expr> disjuncts = flatten(next->body, Op::Or, true);
        std::set<std::string> used;
        for (std::size_t i = 0; i < disjuncts.size(); ++i) {
            std::string name = disjuncts[i].label().empty() ? "A" + std::to_string(i + 1) : disjuncts[i].label();
            if (!used.insert(name).second) {
                name += "_" + std::to_string(i + 1);
                used.insert(name);
            }
            spec.actions.push_back({name, disjuncts[i]});
        }
    }

    auto add_invariant = [&](const std::string& n) {
        const Definition* d = m.find(n);
        if (!d) {
            throw Error(ErrorCode::UnknownInvariant, "no definition named " + n);
        }
        spec.invariants.emplace(n, d->body);
    };
    if (m.find(conv.type_ok_name)) {
        add_invariant(conv.type_ok_name);
    }
    for (const auto& n : m.invariant_decls) {
        add_invariant(n);
    }
    for (const auto& n : conv.invariants) {
        add_invariant(n);
    }

    auto diags = well_formed(spec);
    if (!diags.empty()) {
        throw Error(ErrorCode::InvalidSpec, diags.front().to_string());
    }
    return spec;
}

} // namespace tlapbt::tla
