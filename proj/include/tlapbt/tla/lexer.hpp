#pragma once

#include "tlapbt/error.hpp"

#include <array>
#include <cctype>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace tlapbt::tla {

struct Position {
    std::size_t offset = 0;
    std::size_t line = 1;
    std::size_t column = 1;

    [[nodiscard]] std::string to_string() const { return std::to_string(line) + ":" + std::to_string(column); }
    friend bool operator==(const Position&, const Position&) = default;
};

/// Lexical and syntactic errors carry the source position they refer to.
class SourceError : public Error {
public:
    SourceError(ErrorCode code, Position pos, const std::string& message)
        : Error(code, pos.to_string() + ": " + message), position_(pos)
    {
    }

    [[nodiscard]] const Position& position() const noexcept { return position_; }

private:
    Position position_;
};

// Layout marks a /\ or \/ in prefix position (start of a line, or after an
// operator): a bullet of a junction list. The parser decides by column
// whether a bullet opens a new list or continues the enclosing one.
enum class TokenKind : std::uint8_t { Identifier, Integer, Operator, Keyword, Layout };

struct Token {
    TokenKind kind;
    std::string lexeme;
    Position pos;

    friend bool operator==(const Token&, const Token&) = default;
};

inline bool is_keyword(std::string_view word)
{
    static constexpr std::array<std::string_view, 37> keywords{
        "VARIABLE", "VARIABLES", "CONSTANT",  "CONSTANTS", "INVARIANT", "INVARIANTS", "CHOOSE",   "TRUE",
        "FALSE",    "BOOLEAN",   "MODULE",    "EXTENDS",   "INSTANCE",  "LOCAL",      "ASSUME",   "THEOREM",
        "IF",       "THEN",      "ELSE",      "LET",       "IN",        "CASE",       "OTHER",    "UNCHANGED",
        "ENABLED",  "SUBSET",    "UNION",     "DOMAIN",    "EXCEPT",    "LAMBDA",     "RECURSIVE", "WF_",
        "SF_",      "ASSUMPTION", "AXIOM",    "LEMMA",     "PROOF",
    };
    for (auto k : keywords) {
        if (k == word) {
            return true;
        }
    }
    return false;
}

namespace detail {

inline bool ends_operand(const Token& t)
{
    switch (t.kind) {
    case TokenKind::Identifier:
    case TokenKind::Integer: return true;
    case TokenKind::Keyword: return t.lexeme == "TRUE" || t.lexeme == "FALSE" || t.lexeme == "BOOLEAN";
    case TokenKind::Operator: return t.lexeme == ")" || t.lexeme == "}" || t.lexeme == ">>" || t.lexeme == "'";
    case TokenKind::Layout: return false;
    }
    return false;
}

} // namespace detail

/// Splits ASCII source into tokens. Whitespace, `\*` line comments and
/// `(* ... *)` block comments are skipped.
inline std::vector<Token> tokenize(std::string_view src)
{
    // Longest first within each shared prefix.
    static constexpr std::array<std::string_view, 32> symbols{
        "\\nless", "\\ngeq", "\\ngtr", "\\nleq", "\\land", "\\lnot", "\\neg", "\\lor", "\\in", "\\A", "\\E",
        "/\\",     "\\/",    "==",     "=>",     "=<",     "<=",     ">=",    "<<",    ">>",  "/=",  "..",
        "=",       "'",      "~",      "<",      ">",      ":",      ",",     "+",     "-",   "#",
    };
    static constexpr std::string_view single = "(){}[]";

    std::vector<Token> out;
    std::size_t i = 0;
    std::size_t line = 1;
    std::size_t line_start = 0;
    bool line_has_token = false;
    auto here = [&](std::size_t at) { return Position{at, line, at - line_start + 1}; };
    auto newline = [&](std::size_t at) {
        ++line;
        line_start = at + 1;
        line_has_token = false;
    };
    auto push = [&](TokenKind kind, std::size_t start, std::size_t end) {
        out.push_back({kind, std::string(src.substr(start, end - start)), here(start)});
        line_has_token = true;
    };

    while (i < src.size()) {
        char c = src[i];
        if (c == '\n') {
            newline(i);
            ++i;
            continue;
        }
        if (c == ' ' || c == '\t' || c == '\r') {
            ++i;
            continue;
        }
        if (static_cast<unsigned char>(c) >= 0x80) {
            throw SourceError(ErrorCode::LexError, here(i), "non-ASCII character");
        }
        if (src.substr(i, 2) == "\\*") {
            while (i < src.size() && src[i] != '\n') {
                ++i;
            }
            continue;
        }
        if (src.substr(i, 2) == "(*") {
            Position start = here(i);
            int nesting = 0;
            while (i < src.size()) {
                if (src.substr(i, 2) == "(*") {
                    ++nesting;
                    i += 2;
                } else if (src.substr(i, 2) == "*)") {
                    --nesting;
                    i += 2;
                    if (nesting == 0) {
                        break;
                    }
                } else {
                    if (src[i] == '\n') {
                        newline(i);
                    }
                    ++i;
                }
            }
            if (nesting != 0) {
                throw SourceError(ErrorCode::LexError, start, "unterminated comment");
            }
            continue;
        }
        // Module rules: ---- and ====.
        if ((c == '-' || c == '=') && src.substr(i, 4) == std::string(4, c)) {
            std::size_t start = i;
            while (i < src.size() && src[i] == c) {
                ++i;
            }
            push(TokenKind::Operator, start, i);
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t start = i;
            while (i < src.size() && std::isdigit(static_cast<unsigned char>(src[i]))) {
                ++i;
            }
            if (i < src.size() && (std::isalpha(static_cast<unsigned char>(src[i])) || src[i] == '_')) {
                throw SourceError(ErrorCode::LexError, here(start), "malformed number");
            }
            std::string_view digits = src.substr(start, i - start);
            if (digits.size() > 18) {
                throw SourceError(ErrorCode::LexError, here(start), "integer literal too large");
            }
            push(TokenKind::Integer, start, i);
            continue;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t start = i;
            while (i < src.size() && (std::isalnum(static_cast<unsigned char>(src[i])) || src[i] == '_')) {
                ++i;
            }
            std::string_view word = src.substr(start, i - start);
            push(is_keyword(word) ? TokenKind::Keyword : TokenKind::Identifier, start, i);
            continue;
        }
        bool matched = false;
        for (auto sym : symbols) {
            if (src.substr(i, sym.size()) != sym) {
                continue;
            }
            // A backslash word must not run into a longer identifier (\inx).
            if (sym.front() == '\\' && std::isalpha(static_cast<unsigned char>(sym.back())) &&
                i + sym.size() < src.size() && std::isalnum(static_cast<unsigned char>(src[i + sym.size()]))) {
                continue;
            }
            bool bullet = (sym == "/\\" || sym == "\\/") &&
                          (!line_has_token || out.empty() || !detail::ends_operand(out.back()));
            push(bullet ? TokenKind::Layout : TokenKind::Operator, i, i + sym.size());
            i += sym.size();
            matched = true;
            break;
        }
        if (matched) {
            continue;
        }
        if (single.find(c) != std::string_view::npos) {
            push(TokenKind::Operator, i, i + 1);
            ++i;
            continue;
        }
        throw SourceError(ErrorCode::LexError, here(i), std::string("unexpected character '") + c + "'");
    }
    return out;
}

} // namespace tlapbt::tla
