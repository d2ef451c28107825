#include "tlapbt/examples.hpp"
#include "tlapbt/explorer/explorer.hpp"
#include "tlapbt/ir_json.hpp"
#include "tlapbt/tla/lexer.hpp"
#include "tlapbt/tla/parser.hpp"
#include "tlapbt/tla/printer.hpp"

#include <gtest/gtest.h>

#include <fstream>
#include <random>
#include <sstream>

using namespace tlapbt;
using namespace tlapbt::build;
using namespace tlapbt::tla;

namespace {

std::string slurp(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string source_path(const std::string& rel) { return std::string(TLAPBT_SOURCE_DIR) + "/" + rel; }

ErrorCode parse_error_of(std::string_view src)
{
    try {
        parse_module(src);
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "parsed: " << src;
    return ErrorCode::InvalidArgument;
}

const ExprScope xy_scope{{"x", "y"}, {"N"}, {}};

Expr px(std::string_view src) { return parse_expr(src, xy_scope); }

// Random ASTs over the printable subset. Bound names are fresh per binder.
struct AstGen {
    std::mt19937_64 rng;
    std::vector<std::string> bound;
    int fresh = 0;

    int pick(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

    Expr name()
    {
        int n = pick(0, static_cast<int>(bound.size()) + 2);
        if (n == 0) {
            return var("x");
        }
        if (n == 1) {
            return pick(0, 1) ? var("y") : var("N");
        }
        if (n == 2) {
            return primed(pick(0, 1) ? "x" : "y");
        }
        return var(bound[static_cast<std::size_t>(n - 3)]);
    }

    Expr leaf()
    {
        switch (pick(0, 4)) {
        case 0: return lit(pick(-20, 20));
        case 1: return truth(pick(0, 1) == 1);
        case 2: return constant(Value::booleans());
        default: return name();
        }
    }

    Expr binder(int depth)
    {
        static const Op ops[] = {Op::Forall, Op::Exists, Op::Choose};
        std::string v = "k" + std::to_string(fresh++);
        Expr domain = expr(depth - 1);
        bound.push_back(v);
        Expr body = expr(depth - 1);
        bound.pop_back();
        return node(ops[pick(0, 2)], {domain, body}, v);
    }

    Expr expr(int depth)
    {
        static const Op binaries[] = {Op::And, Op::Or,    Op::Implies, Op::Eq,    Op::Neq,   Op::Lt,     Op::Le,
                                      Op::Gt,  Op::Ge,    Op::NotLt,   Op::NotLe, Op::NotGt, Op::NotGe,  Op::In,
                                      Op::Add, Op::Sub,   Op::IntRange};
        if (depth <= 0) {
            return leaf();
        }
        int k = pick(0, 9);
        if (k <= 4) {
            return binary(binaries[pick(0, 16)], expr(depth - 1), expr(depth - 1));
        }
        if (k == 5) {
            return not_(expr(depth - 1));
        }
        if (k == 6 || k == 7) {
            std::vector<Expr> items;
            int n = pick(0, 3);
            for (int i = 0; i < n; ++i) {
                items.push_back(expr(depth - 2));
            }
            return k == 6 ? set_of(std::move(items)) : seq_of(std::move(items));
        }
        if (k == 8) {
            return binder(depth);
        }
        return leaf();
    }
};

} // namespace

TEST(Lexer, PrimedAssignment)
{
    auto toks = tokenize("b' = 1");
    ASSERT_EQ(toks.size(), 4u);
    EXPECT_EQ(toks[0].kind, TokenKind::Identifier);
    EXPECT_EQ(toks[0].lexeme, "b");
    EXPECT_EQ(toks[1].lexeme, "'");
    EXPECT_EQ(toks[2].lexeme, "=");
    EXPECT_EQ(toks[3].kind, TokenKind::Integer);
    EXPECT_EQ(toks[3].lexeme, "1");
    EXPECT_EQ(toks[3].pos.column, 6u);
}

TEST(Lexer, BulletsAndComments)
{
    auto toks = tokenize("Init == (* block (* nested *) *)\n  /\\ x = 0 \\* line\n  /\\ y \\in 1..3");
    std::vector<std::string> lexemes;
    for (const auto& t : toks) {
        lexemes.push_back(t.lexeme);
    }
    EXPECT_EQ(lexemes, (std::vector<std::string>{"Init", "==", "/\\", "x", "=", "0", "/\\", "y", "\\in", "1", "..", "3"}));
    EXPECT_EQ(toks[2].kind, TokenKind::Layout);
    EXPECT_EQ(toks[2].pos.line, 2u);
    EXPECT_EQ(toks[2].pos.column, 3u);
    EXPECT_EQ(tokenize("a /\\ b")[1].kind, TokenKind::Operator);
}

TEST(Lexer, Errors)
{
    EXPECT_THROW(tokenize("x = $"), SourceError);
    EXPECT_THROW(tokenize("(* open"), SourceError);
    EXPECT_THROW(tokenize("x = 12ab"), SourceError);
    try {
        tokenize("x\n  @");
        FAIL();
    } catch (const SourceError& e) {
        EXPECT_EQ(e.code(), ErrorCode::LexError);
        EXPECT_EQ(e.position().line, 2u);
        EXPECT_EQ(e.position().column, 3u);
    }
}

TEST(Parser, OneBitListing)
{
    ParsedModule m = parse_module(examples::find("onebit")->source);
    EXPECT_EQ(m.variables, (std::vector<std::string>{"b"}));
    ASSERT_NE(m.find("Init"), nullptr);
    ASSERT_NE(m.find("Next"), nullptr);
    EXPECT_EQ(m.find("Init")->body, or_(eq(var("b"), lit(0)), eq(var("b"), lit(1))));
    EXPECT_EQ(m.find("Next")->body, or_(and_(eq(var("b"), lit(0)), eq(primed("b"), lit(1))),
                                        and_(eq(var("b"), lit(1)), eq(primed("b"), lit(0)))));
}

TEST(Parser, Precedence)
{
    EXPECT_EQ(px("x = 1 /\\ y = 2 \\/ x = 3"), or_(and_(eq(var("x"), lit(1)), eq(var("y"), lit(2))), eq(var("x"), lit(3))));
    EXPECT_EQ(px("x = 1 => y = 2 => x = 3"), implies(eq(var("x"), lit(1)), implies(eq(var("y"), lit(2)), eq(var("x"), lit(3)))));
    EXPECT_EQ(px("~x = 1 /\\ y > 0"), and_(not_(eq(var("x"), lit(1))), gt(var("y"), lit(0))));
    EXPECT_EQ(px("x - y - 1 + N"), add(sub(sub(var("x"), var("y")), lit(1)), var("N")));
    EXPECT_EQ(px("x \\in 0..N + 1"), in(var("x"), range(lit(0), add(var("N"), lit(1)))));
    EXPECT_EQ(px("x /= -3"), neq(var("x"), lit(-3)));
    EXPECT_EQ(px("x # y"), neq(var("x"), var("y")));
    EXPECT_EQ(px("x =< y"), le(var("x"), var("y")));
    EXPECT_EQ(px("x \\ngeq y"), binary(Op::NotGe, var("x"), var("y")));
    EXPECT_EQ(px("\\lnot x = 1 \\land y' = 2 \\lor TRUE"),
              or_(and_(not_(eq(var("x"), lit(1))), eq(primed("y"), lit(2))), truth(true)));
    EXPECT_EQ(px("y \\in BOOLEAN"), in(var("y"), constant(Value::booleans())));
    EXPECT_EQ(px("<<x, 1>> = <<>>"), eq(seq_of({var("x"), lit(1)}), seq_of({})));
    EXPECT_EQ(px("{1, x} = {}"), eq(set_of({lit(1), var("x")}), set_of({})));
}

TEST(Parser, Binders)
{
    EXPECT_EQ(px("\\A k \\in 0..N : k <= N /\\ x = k"),
              forall("k", range(lit(0), var("N")), and_(le(var("k"), var("N")), eq(var("x"), var("k")))));
    EXPECT_EQ(px("\\E a \\in {1}, b \\in {2} : a < b"),
              exists("a", set_of({lit(1)}), exists("b", set_of({lit(2)}), lt(var("a"), var("b")))));
    EXPECT_EQ(px("x = CHOOSE k \\in 1..3 : k > 1"), eq(var("x"), choose("k", range(lit(1), lit(3)), gt(var("k"), lit(1)))));
}

TEST(Parser, BulletListsFollowColumns)
{
    const char* nested = R"(---- MODULE M ----
VARIABLES x, y
Init == /\ x = 0
        /\ \/ y = 1
           \/ y = 2
        /\ x < 3
Next == x' = x /\ y' = y
====)";
    ParsedModule m = parse_module(nested);
    EXPECT_EQ(m.find("Init")->body,
              and_(and_(eq(var("x"), lit(0)), or_(eq(var("y"), lit(1)), eq(var("y"), lit(2)))), lt(var("x"), lit(3))));

    // The same formula written inline.
    const char* inline_form = "---- MODULE M ----\nVARIABLES x, y\n"
                              "Init == x = 0 /\\ (y = 1 \\/ y = 2) /\\ x < 3\nNext == x' = x /\\ y' = y\n====";
    EXPECT_EQ(parse_module(inline_form).find("Init")->body, m.find("Init")->body);
}

TEST(Parser, DefinitionsAreInlinedAndLabeled)
{
    ParsedModule m = parse_module(examples::find("diehard")->source);
    const Expr& next = m.find("Next")->body;
    auto parts = flatten(next, Op::Or, true);
    ASSERT_EQ(parts.size(), 6u);
    EXPECT_EQ(parts[0].label(), "FillSmall");
    EXPECT_EQ(parts[5].label(), "BigToSmall");
    EXPECT_EQ(parts[0], m.find("FillSmall")->body);
}

TEST(Parser, Errors)
{
    EXPECT_EQ(parse_error_of("VARIABLE x\nInit == x = \nNext == x' = x"), ErrorCode::ParseError);
    EXPECT_EQ(parse_error_of("VARIABLE x\nInit == x < 1 < 2\nNext == x' = x"), ErrorCode::ParseError);
    EXPECT_EQ(parse_error_of("VARIABLE x\nInit == z = 1\nNext == x' = x"), ErrorCode::ParseError);
    EXPECT_EQ(parse_error_of("VARIABLE x\nInit == x = 1\nInit == x = 2\nNext == x' = x"), ErrorCode::ParseError);
    EXPECT_EQ(parse_error_of("VARIABLE x\nInit == IF x THEN 1 ELSE 2\nNext == x' = x"), ErrorCode::UnsupportedConstruct);
    EXPECT_EQ(parse_error_of("VARIABLE x\nInit == x = [1]\nNext == x' = x"), ErrorCode::UnsupportedConstruct);
    EXPECT_EQ(parse_error_of("VARIABLE x\nInit == -x = 1\nNext == x' = x"), ErrorCode::UnsupportedConstruct);
    EXPECT_EQ(parse_error_of("VARIABLE x\nF(a) == a\nInit == x = 1\nNext == x' = x"), ErrorCode::UnsupportedConstruct);
    EXPECT_EQ(parse_error_of("VARIABLE x\nInit == x = 1\nNext == x' = x\nINVARIANTS Nope"), ErrorCode::UnknownInvariant);
    EXPECT_EQ(parse_error_of("---- MODULE M ----\nEXTENDS Naturals\nVARIABLE x\nInit == x = 1\nNext == x' = x\n===="),
              ErrorCode::UnsupportedConstruct);
}

TEST(Parser, UnreferencedDefinitionsAreNoted)
{
    ParsedModule m = parse_module("VARIABLE x\nHelper == x = 3\nInit == x = 1\nNext == x' = x");
    ASSERT_EQ(m.diagnostics.size(), 1u);
    EXPECT_NE(m.diagnostics[0].message.find("Helper"), std::string::npos);
}

TEST(ToSpec, OneBitEndToEnd)
{
    TemporalSpec spec = to_spec(parse_module(examples::find("onebit")->source));
    EXPECT_EQ(spec.actions.size(), 2u);
    EXPECT_EQ(spec.variables, (std::vector<std::string>{"b"}));
    auto r = explorer::explore(spec);
    EXPECT_EQ(r.stats, (explorer::ExplorationStats{1, 4, 2, false}));
}

TEST(ToSpec, DieHardHasSixNamedActions)
{
    TemporalSpec spec = to_spec(parse_module(examples::find("diehard")->source));
    std::vector<std::string> names;
    for (const auto& a : spec.actions) {
        names.push_back(a.name);
    }
    EXPECT_EQ(names, (std::vector<std::string>{"FillSmall", "FillBig", "EmptySmall", "EmptyBig", "SmallToBig", "BigToSmall"}));
    EXPECT_TRUE(spec.invariants.contains("TypeOK"));
    EXPECT_FALSE(spec.invariants.contains("big_ne_4"));
}

TEST(ToSpec, ConventionsAndParams)
{
    auto m = parse_module(examples::find("euclid")->source);
    auto code = [&](const Conventions& c) {
        try {
            to_spec(m, c);
        } catch (const Error& e) {
            return e.code();
        }
        return ErrorCode::InvalidArgument;
    };
    EXPECT_EQ(code({}), ErrorCode::MissingParameter);
    Conventions extra;
    extra.params = {{"M", 1}, {"N", 1}, {"K", 1}};
    EXPECT_EQ(code(extra), ErrorCode::InvalidArgument);
    Conventions missing_next;
    missing_next.next_name = "Step";
    EXPECT_EQ(code(missing_next), ErrorCode::MissingDefinition);
    Conventions bad_inv;
    bad_inv.params = {{"M", 4}, {"N", 6}};
    bad_inv.invariants = {"Nope"};
    EXPECT_EQ(code(bad_inv), ErrorCode::UnknownInvariant);

    Conventions ok;
    ok.params = {{"M", 4}, {"N", 6}};
    TemporalSpec spec = to_spec(m, ok);
    EXPECT_EQ(spec.params, (std::map<std::string, std::int64_t>{{"M", 4}, {"N", 6}}));
    EXPECT_EQ(spec.name, "Euclid");
}

TEST(ToSpec, NextFalseHasNoActions)
{
    TemporalSpec spec = to_spec(parse_module("VARIABLE x\nInit == x = 1\nNext == FALSE"));
    EXPECT_TRUE(spec.actions.empty());
    EXPECT_EQ(explorer::explore(spec).stats, (explorer::ExplorationStats{1, 1, 1, false}));
}

TEST(Printer, ExampleForms)
{
    EXPECT_EQ(pretty_print(or_(eq(var("b"), lit(0)), eq(var("b"), lit(1)))), "(b = 0) \\/ (b = 1)");
    EXPECT_EQ(pretty_print(and_(eq(var("b"), lit(0)), eq(primed("b"), lit(1)))), "(b = 0) /\\ (b' = 1)");
    EXPECT_EQ(pretty_print(in(var("y"), constant(Value::booleans()))), "y \\in BOOLEAN");
    EXPECT_EQ(pretty_print(forall("k", range(lit(0), lit(2)), gt(var("k"), lit(-1)))), "\\A k \\in (0 .. 2) : (k > -1)");
}

TEST(RoundTrip, ThousandRandomAsts)
{
    AstGen g{std::mt19937_64(2024), {}, 0};
    ExprScope scope{{"x", "y"}, {"N"}, {}};
    for (int i = 0; i < 1000; ++i) {
        Expr e = g.expr(g.pick(1, 5));
        std::string text = pretty_print(e);
        Expr back;
        try {
            back = parse_expr(text, scope);
        } catch (const Error& err) {
            FAIL() << "case " << i << ": " << text << "\n" << err.what();
        }
        ASSERT_EQ(back, e) << "case " << i << ": " << text << "\nreprinted: " << pretty_print(back);
    }
}

TEST(RoundTrip, SpecsThroughPrinter)
{
    for (const auto& name : examples::names()) {
        TemporalSpec spec = examples::load(name);
        std::string text = pretty_print(spec);
        Conventions conv;
        conv.params = spec.params;
        for (const auto& [inv, _] : spec.invariants) {
            if (inv != "TypeOK") {
                conv.invariants.push_back(inv);
            }
        }
        TemporalSpec back = to_spec(parse_module(text), conv);
        back.name = spec.name;
        EXPECT_EQ(back, spec) << text;
    }
}

TEST(Golden, OneBitIr)
{
    TemporalSpec spec = to_spec(parse_module(slurp(source_path("specs/onebit.tla"))));
    spec.name = "OneBitClock";
    Json golden = Json::parse(slurp(source_path("tests/golden/onebit.json")));
    EXPECT_EQ(spec_to_json(spec), golden);
    EXPECT_EQ(spec_from_json(golden), spec);
}

TEST(Examples, EmbeddedSourcesMatchSpecFiles)
{
    for (const auto& ex : examples::all()) {
        EXPECT_EQ(ex.source, slurp(source_path("specs/" + std::string(ex.name) + ".tla"))) << ex.name;
    }
    EXPECT_EQ(examples::find("nosuch"), nullptr);
    EXPECT_THROW(examples::load("nosuch"), Error);
}
