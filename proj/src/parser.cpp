#include "skewform/parser.hpp"
#include "skewform/detail/grammar.hpp"

namespace skewform {

namespace {

struct ScalarSemantics {
    using Value = Expr;

    const ParseOptions &opts;

    Value number(const Rational &q, std::size_t) const { return Expr(q); }

    Value identifier(const std::string &name, std::size_t pos) const
    {
        if (opts.scalars && !opts.scalars->count(name)) {
            throw ParseError("'" + name + "' is not a declared scalar", pos);
        }
        return Expr::symbol(name);
    }

    Value call(Func f, Value arg, std::size_t) const { return Expr::apply(f, arg); }

    Value differential(const std::string &var, std::size_t pos) const
    {
        throw ParseError("d[" + var + "] is a differential, not a scalar", pos);
    }

    Value add(Value a, const Value &b, std::size_t) const { return a + b; }
    Value sub(Value a, const Value &b, std::size_t) const { return a - b; }
    Value mul(Value a, const Value &b, std::size_t) const { return a * b; }
    Value div(Value a, const Value &b, std::size_t) const { return a / b; }
    Value neg(Value a, std::size_t) const { return -a; }
    Value power(Value a, int k, std::size_t) const { return pow(a, k); }

    Value wedge(Value, const Value &, std::size_t pos) const
    {
        throw ParseError("exponent must be an integer literal", pos);
    }
};

} // namespace

Expr parse(std::string_view text, const ParseOptions &opts)
{
    ScalarSemantics sem{opts};
    detail::Grammar<ScalarSemantics> g(text, sem);
    return g.parse();
}

} // namespace skewform
