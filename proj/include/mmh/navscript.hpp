#pragma once

#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "mmh/errors.hpp"
#include "mmh/sim.hpp"

namespace mmh::navscript {

struct Forward {
    double distance = 0.0;
    bool operator==(const Forward&) const = default;
};
struct ForwardUntilTurningPoint {
    int skip = 1;
    bool operator==(const ForwardUntilTurningPoint&) const = default;
};
struct ForwardUntilObject {
    std::string label;
    int count = 1;
    double overshoot = 0.0;
    bool operator==(const ForwardUntilObject&) const = default;
};
struct Turn {
    TurnDirection direction = TurnDirection::Left;
    bool operator==(const Turn&) const = default;
};
struct Stop {
    bool operator==(const Stop&) const = default;
};

using Stmt = std::variant<Forward, ForwardUntilTurningPoint, ForwardUntilObject, Turn, Stop>;

struct NavProgram {
    std::vector<Stmt> statements;
    bool operator==(const NavProgram&) const = default;
};

struct ParseError {
    int line = 0;
    int column = 0;
    std::string expected;
    std::string found;

    std::string to_string() const {
        std::ostringstream s;
        s << "line " << line << ", col " << column << ": expected " << expected << ", found "
          << found;
        return s.str();
    }
};

enum class TokenKind : std::uint8_t { Word, Number, String, Equals, Newline, End };

struct Token {
    TokenKind kind = TokenKind::End;
    std::string text;
    double number = 0.0;
    int line = 1;
    int column = 1;
};

// Lexer for the statement grammar: bare words, decimal numbers, double-quoted
// strings, `=`, `#` comments, newline separators.
inline Expected<std::vector<Token>, ParseError> tokenize(const std::string& source) {
    std::vector<Token> tokens;
    int line = 1;
    int col = 1;
    std::size_t i = 0;
    const auto peek = [&]() -> char { return i < source.size() ? source[i] : '\0'; };
    const auto advance = [&] {
        if (source[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
        ++i;
    };

    while (i < source.size()) {
        const char c = peek();
        if (c == '\n') {
            if (!tokens.empty() && tokens.back().kind != TokenKind::Newline)
                tokens.push_back({TokenKind::Newline, "\\n", 0.0, line, col});
            advance();
            continue;
        }
        if (c == ' ' || c == '\t' || c == '\r') {
            advance();
            continue;
        }
        if (c == '#') {
            while (i < source.size() && peek() != '\n') advance();
            continue;
        }
        if (c == '=') {
            tokens.push_back({TokenKind::Equals, "=", 0.0, line, col});
            advance();
            continue;
        }
        if (c == '"') {
            Token tok{TokenKind::String, "", 0.0, line, col};
            advance();
            bool closed = false;
            while (i < source.size()) {
                const char s = peek();
                if (s == '"') {
                    advance();
                    closed = true;
                    break;
                }
                if (s == '\n') break;
                if (s == '\\' && i + 1 < source.size() &&
                    (source[i + 1] == '"' || source[i + 1] == '\\')) {
                    advance();
                }
                tok.text += peek();
                advance();
            }
            if (!closed)
                return ParseError{tok.line, tok.column, "closing '\"'", "end of line"};
            tokens.push_back(std::move(tok));
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            Token tok{TokenKind::Number, "", 0.0, line, col};
            while (std::isdigit(static_cast<unsigned char>(peek()))) {
                tok.text += peek();
                advance();
            }
            if (peek() == '.') {
                tok.text += '.';
                advance();
                if (!std::isdigit(static_cast<unsigned char>(peek())))
                    return ParseError{tok.line, tok.column, "digit after decimal point",
                                      tok.text + std::string(1, peek() ? peek() : ' ')};
                while (std::isdigit(static_cast<unsigned char>(peek()))) {
                    tok.text += peek();
                    advance();
                }
            }
            if (peek() == '.' || std::isalpha(static_cast<unsigned char>(peek())) ||
                peek() == '_')
                return ParseError{tok.line, tok.column, "number literal",
                                  tok.text + std::string(1, peek())};
            tok.number = std::strtod(tok.text.c_str(), nullptr);
            tokens.push_back(std::move(tok));
            continue;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            Token tok{TokenKind::Word, "", 0.0, line, col};
            while (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_') {
                tok.text += peek();
                advance();
            }
            tokens.push_back(std::move(tok));
            continue;
        }
        return ParseError{line, col, "statement keyword", "'" + std::string(1, c) + "'"};
    }
    tokens.push_back({TokenKind::End, "", 0.0, line, col});
    return tokens;
}

namespace detail {

class Parser {
public:
    explicit Parser(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

    Expected<NavProgram, ParseError> run() {
        NavProgram program;
        skip_newlines();
        while (current().kind != TokenKind::End) {
            auto stmt = parse_statement();
            if (!stmt.has_value()) return stmt.error();
            program.statements.push_back(std::move(stmt.value()));
            if (current().kind != TokenKind::End) {
                if (current().kind != TokenKind::Newline)
                    return error("end of statement", current());
                skip_newlines();
            }
        }
        if (program.statements.empty() ||
            !std::holds_alternative<Stop>(program.statements.back()))
            program.statements.emplace_back(Stop{});
        return program;
    }

private:
    Expected<Stmt, ParseError> parse_statement() {
        const Token& t = current();
        if (t.kind != TokenKind::Word)
            return error("one of {forward, forward_until, turn, stop}", t);
        if (t.text == "forward") {
            next();
            const Token& num = current();
            if (num.kind != TokenKind::Number) return error("distance in meters", num);
            next();
            return Stmt{Forward{num.number}};
        }
        if (t.text == "forward_until") {
            next();
            const Token& what = current();
            if (what.kind == TokenKind::Word && what.text == "turning_point") {
                next();
                ForwardUntilTurningPoint stmt;
                if (is_word("skip")) {
                    next();
                    auto v = parse_assigned_int("skip");
                    if (!v.has_value()) return v.error();
                    stmt.skip = v.value();
                }
                return Stmt{stmt};
            }
            if (what.kind == TokenKind::Word && what.text == "object") {
                next();
                const Token& label = current();
                if (label.kind != TokenKind::String) return error("quoted object label", label);
                next();
                ForwardUntilObject stmt;
                stmt.label = label.text;
                if (!is_word("count")) return error("count=<n>", current());
                next();
                auto v = parse_assigned_int("count");
                if (!v.has_value()) return v.error();
                stmt.count = v.value();
                if (is_word("overshoot")) {
                    next();
                    auto ov = parse_assigned_number("overshoot");
                    if (!ov.has_value()) return ov.error();
                    stmt.overshoot = ov.value();
                }
                return Stmt{stmt};
            }
            return error("one of {turning_point, object}", what);
        }
        if (t.text == "turn") {
            next();
            const Token& dir = current();
            if (dir.kind == TokenKind::Word) {
                if (dir.text == "left") {
                    next();
                    return Stmt{Turn{TurnDirection::Left}};
                }
                if (dir.text == "right") {
                    next();
                    return Stmt{Turn{TurnDirection::Right}};
                }
                if (dir.text == "around") {
                    next();
                    return Stmt{Turn{TurnDirection::Around}};
                }
            }
            return error("one of {left, right, around}", dir);
        }
        if (t.text == "stop") {
            next();
            return Stmt{Stop{}};
        }
        return error("one of {forward, forward_until, turn, stop}", t);
    }

    Expected<double, ParseError> parse_assigned_number(const std::string& key) {
        if (current().kind != TokenKind::Equals) return error("'=' after " + key, current());
        next();
        const Token& num = current();
        if (num.kind != TokenKind::Number) return error("number for " + key, num);
        next();
        return num.number;
    }

    Expected<int, ParseError> parse_assigned_int(const std::string& key) {
        const Token& at = current();
        auto v = parse_assigned_number(key);
        if (!v.has_value()) return v.error();
        const double d = v.value();
        if (d != static_cast<double>(static_cast<long long>(d)))
            return ParseError{at.line, at.column, "integer for " + key, "non-integer"};
        return static_cast<int>(d);
    }

    bool is_word(const char* w) const {
        return current().kind == TokenKind::Word && current().text == w;
    }
    const Token& current() const { return tokens_[pos_]; }
    void next() {
        if (pos_ + 1 < tokens_.size()) ++pos_;
    }
    void skip_newlines() {
        while (current().kind == TokenKind::Newline) next();
    }
    static ParseError error(std::string expected, const Token& found) {
        std::string found_text;
        switch (found.kind) {
            case TokenKind::End: found_text = "end of input"; break;
            case TokenKind::Newline: found_text = "end of line"; break;
            case TokenKind::String: found_text = '"' + found.text + '"'; break;
            default: found_text = "'" + found.text + "'";
        }
        return {found.line, found.column, std::move(expected), std::move(found_text)};
    }

    std::vector<Token> tokens_;
    std::size_t pos_ = 0;
};

// Shortest decimal representation that parses back to exactly `value`.
inline std::string format_number(double value) {
    char buf[64];
    for (int prec = 1; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof(buf), "%.*g", prec, value);
        if (std::strtod(buf, nullptr) == value) break;
    }
    return buf;
}

}  // namespace detail

inline Expected<NavProgram, ParseError> parse(std::vector<Token> tokens) {
    return detail::Parser(std::move(tokens)).run();
}

inline Expected<NavProgram, ParseError> parse_source(const std::string& source) {
    auto tokens = tokenize(source);
    if (!tokens.has_value()) return tokens.error();
    return parse(std::move(tokens.value()));
}

enum class SemanticIssue : std::uint8_t {
    NegativeDistance,
    NonPositiveSkip,
    NonPositiveCount,
    NegativeOvershoot,
    EmptyLabel,
    UnreachableStatement,
};

struct SemanticError {
    SemanticIssue issue;
    std::size_t index = 0;
    std::string message;
};

// Constraints unreachable through the parser but violable by programmatic
// construction, plus dead statements after stop.
inline std::vector<SemanticError> validate(const NavProgram& program) {
    std::vector<SemanticError> errors;
    bool stopped = false;
    for (std::size_t i = 0; i < program.statements.size(); ++i) {
        const Stmt& s = program.statements[i];
        if (stopped) {
            errors.push_back({SemanticIssue::UnreachableStatement, i, "statement after stop"});
            continue;
        }
        if (const auto* f = std::get_if<Forward>(&s)) {
            if (f->distance < 0.0)
                errors.push_back({SemanticIssue::NegativeDistance, i, "negative distance"});
        } else if (const auto* tp = std::get_if<ForwardUntilTurningPoint>(&s)) {
            if (tp->skip < 1)
                errors.push_back({SemanticIssue::NonPositiveSkip, i, "skip must be >= 1"});
        } else if (const auto* ob = std::get_if<ForwardUntilObject>(&s)) {
            if (ob->count < 1)
                errors.push_back({SemanticIssue::NonPositiveCount, i, "count must be >= 1"});
            if (ob->overshoot < 0.0)
                errors.push_back({SemanticIssue::NegativeOvershoot, i, "negative overshoot"});
            if (ob->label.empty())
                errors.push_back({SemanticIssue::EmptyLabel, i, "empty object label"});
        } else if (std::holds_alternative<Stop>(s)) {
            stopped = true;
        }
    }
    return errors;
}

inline std::string pretty_print(const NavProgram& program) {
    std::ostringstream out;
    for (const Stmt& s : program.statements) {
        if (const auto* f = std::get_if<Forward>(&s)) {
            out << "forward " << detail::format_number(f->distance) << '\n';
        } else if (const auto* tp = std::get_if<ForwardUntilTurningPoint>(&s)) {
            out << "forward_until turning_point skip=" << tp->skip << '\n';
        } else if (const auto* ob = std::get_if<ForwardUntilObject>(&s)) {
            std::string escaped;
            for (const char c : ob->label) {
                if (c == '"' || c == '\\') escaped += '\\';
                escaped += c;
            }
            out << "forward_until object \"" << escaped << "\" count=" << ob->count
                << " overshoot=" << detail::format_number(ob->overshoot) << '\n';
        } else if (const auto* t = std::get_if<Turn>(&s)) {
            out << "turn " << turn_direction_name(t->direction) << '\n';
        } else {
            out << "stop\n";
        }
    }
    return out.str();
}

}  // namespace mmh::navscript
