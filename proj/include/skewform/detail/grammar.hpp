#pragma once

// Shared recursive-descent grammar for scalar expressions and form expressions.
//
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := ('+' | '-') unary | power
//   power   := primary ('^' (exponent | primary))*
//   exponent:= ['-'] INTEGER | '(' ['-'] INTEGER ')'
//   primary := NUMBER | IDENT | IDENT '(' expr ')' | 'd' '[' IDENT ']' | '(' expr ')'
//
// A '^' followed by an integer is a power; otherwise it is a wedge product.
// The semantics object decides which constructs are legal for its value type.

#include "skewform/errors.hpp"
#include "skewform/expr.hpp"

#include <cctype>
#include <string>
#include <string_view>
#include <vector>

namespace skewform::detail {

enum class Tok { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, LBracket, RBracket, End };

struct Token {
    Tok kind;
    std::size_t pos;
    std::string text;
    Rational number;
};

inline std::vector<Token> tokenize(std::string_view s)
{
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < s.size()) {
        const char c = s[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
            continue;
        }
        const std::size_t start = i;
        if (std::isdigit(static_cast<unsigned char>(c)) || (c == '.' && i + 1 < s.size() && std::isdigit(static_cast<unsigned char>(s[i + 1])))) {
            std::string digits;
            std::string frac;
            while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
                digits += s[i++];
            }
            if (i < s.size() && s[i] == '.') {
                ++i;
                while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
                    frac += s[i++];
                }
            }
            mpz_class num(digits.empty() && frac.empty() ? std::string("0") : digits + frac, 10);
            mpz_class den;
            mpz_ui_pow_ui(den.get_mpz_t(), 10, frac.size());
            Rational q(num, den);
            q.canonicalize();
            out.push_back({Tok::Number, start, std::string(s.substr(start, i - start)), q});
            continue;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            while (i < s.size() && (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_')) {
                ++i;
            }
            out.push_back({Tok::Ident, start, std::string(s.substr(start, i - start)), {}});
            continue;
        }
        Tok kind{};
        switch (c) {
        case '+': kind = Tok::Plus; break;
        case '-': kind = Tok::Minus; break;
        case '*': kind = Tok::Star; break;
        case '/': kind = Tok::Slash; break;
        case '^': kind = Tok::Caret; break;
        case '(': kind = Tok::LParen; break;
        case ')': kind = Tok::RParen; break;
        case '[': kind = Tok::LBracket; break;
        case ']': kind = Tok::RBracket; break;
        default:
            throw ParseError(std::string("unexpected character '") + c + "'", i);
        }
        out.push_back({kind, start, std::string(1, c), {}});
        ++i;
    }
    out.push_back({Tok::End, s.size(), "", {}});
    return out;
}

template <class Sem>
class Grammar {
public:
    using Value = typename Sem::Value;

    Grammar(std::string_view text, Sem &sem) : tokens_(tokenize(text)), sem_(sem) {}

    Value parse()
    {
        Value v = expr();
        if (peek().kind != Tok::End) {
            throw ParseError("unexpected '" + peek().text + "'", peek().pos);
        }
        return v;
    }

private:
    const Token &peek(std::size_t ahead = 0) const
    {
        const std::size_t k = std::min(cur_ + ahead, tokens_.size() - 1);
        return tokens_[k];
    }

    const Token &next() { return tokens_[std::min(cur_++, tokens_.size() - 1)]; }

    void expect(Tok kind, const char *what)
    {
        if (peek().kind != kind) {
            throw ParseError(std::string("expected ") + what, peek().pos);
        }
        ++cur_;
    }

    Value expr()
    {
        Value v = term();
        while (peek().kind == Tok::Plus || peek().kind == Tok::Minus) {
            const Token op = next();
            Value rhs = term();
            v = op.kind == Tok::Plus ? sem_.add(std::move(v), rhs, op.pos) : sem_.sub(std::move(v), rhs, op.pos);
        }
        return v;
    }

    Value term()
    {
        Value v = unary();
        while (peek().kind == Tok::Star || peek().kind == Tok::Slash) {
            const Token op = next();
            Value rhs = unary();
            v = op.kind == Tok::Star ? sem_.mul(std::move(v), rhs, op.pos) : sem_.div(std::move(v), rhs, op.pos);
        }
        return v;
    }

    Value unary()
    {
        if (peek().kind == Tok::Minus) {
            const std::size_t pos = next().pos;
            return sem_.neg(unary(), pos);
        }
        if (peek().kind == Tok::Plus) {
            next();
            return unary();
        }
        return power();
    }

    // Length in tokens of an integer exponent starting at the cursor, 0 if none.
    std::size_t exponent_length() const
    {
        std::size_t k = 0;
        bool paren = false;
        if (peek(k).kind == Tok::LParen) {
            paren = true;
            ++k;
        }
        if (peek(k).kind == Tok::Minus) {
            ++k;
        }
        if (peek(k).kind != Tok::Number) {
            return 0;
        }
        ++k;
        if (paren) {
            if (peek(k).kind != Tok::RParen) {
                return 0;
            }
            ++k;
        }
        return k;
    }

    int read_exponent()
    {
        const bool paren = peek().kind == Tok::LParen;
        if (paren) {
            next();
        }
        bool negative = false;
        if (peek().kind == Tok::Minus) {
            negative = true;
            next();
        }
        const Token num = next();
        if (num.number.get_den() != 1 || num.text.find('.') != std::string::npos) {
            throw ParseError("exponent must be an integer literal", num.pos);
        }
        if (abs(num.number) > 10000) {
            throw ParseError("exponent too large", num.pos);
        }
        if (paren) {
            next();
        }
        const int k = static_cast<int>(num.number.get_num().get_si());
        return negative ? -k : k;
    }

    Value power()
    {
        Value v = primary();
        while (peek().kind == Tok::Caret) {
            const std::size_t pos = next().pos;
            if (exponent_length() > 0) {
                v = sem_.power(std::move(v), read_exponent(), pos);
            } else {
                Value rhs = primary();
                v = sem_.wedge(std::move(v), rhs, pos);
            }
        }
        return v;
    }

    Value primary()
    {
        const Token t = next();
        switch (t.kind) {
        case Tok::Number:
            return sem_.number(t.number, t.pos);
        case Tok::Ident: {
            if (t.text == "d" && peek().kind == Tok::LBracket) {
                next();
                const Token var = next();
                if (var.kind != Tok::Ident) {
                    throw ParseError("expected a variable name inside d[...]", var.pos);
                }
                expect(Tok::RBracket, "']'");
                return sem_.differential(var.text, t.pos);
            }
            if (peek().kind == Tok::LParen) {
                const auto f = func_from_name(t.text);
                if (!f) {
                    throw UnknownFunctionError("unknown function '" + t.text + "'", t.pos);
                }
                next();
                Value arg = expr();
                expect(Tok::RParen, "')'");
                return sem_.call(*f, std::move(arg), t.pos);
            }
            if (func_from_name(t.text)) {
                throw ParseError("function '" + t.text + "' needs an argument", t.pos);
            }
            return sem_.identifier(t.text, t.pos);
        }
        case Tok::LParen: {
            Value v = expr();
            expect(Tok::RParen, "')'");
            return v;
        }
        case Tok::End:
            throw ParseError("unexpected end of input", t.pos);
        default:
            throw ParseError("unexpected '" + t.text + "'", t.pos);
        }
    }

    std::vector<Token> tokens_;
    std::size_t cur_ = 0;
    Sem &sem_;
};

} // namespace skewform::detail
