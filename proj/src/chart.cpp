#include "skewform/chart.hpp"
#include "skewform/errors.hpp"

#include <cctype>
#include <set>

namespace skewform {

namespace {

bool valid_identifier(const std::string &s)
{
    if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) {
        return false;
    }
    for (char c : s) {
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) {
            return false;
        }
    }
    return !func_from_name(s).has_value();
}

} // namespace

Chart::Chart() : vars_(std::make_shared<const std::vector<std::string>>()) {}

Chart::Chart(std::vector<std::string> vars)
{
    std::set<std::string> seen;
    for (const auto &v : vars) {
        if (!valid_identifier(v)) {
            throw Error("invalid chart variable '" + v + "'");
        }
        if (v == "d") {
            throw Error("'d' is reserved for differentials and cannot be a chart variable");
        }
        if (!seen.insert(v).second) {
            throw Error("duplicate chart variable '" + v + "'");
        }
    }
    vars_ = std::make_shared<const std::vector<std::string>>(std::move(vars));
}

std::optional<std::size_t> Chart::find(const std::string &name) const
{
    for (std::size_t i = 0; i < vars_->size(); ++i) {
        if ((*vars_)[i] == name) {
            return i;
        }
    }
    return std::nullopt;
}

std::size_t Chart::index_of(const std::string &name) const
{
    if (auto i = find(name)) {
        return *i;
    }
    throw UndeclaredVariableError("variable '" + name + "' is not declared in chart (" + str() + ")");
}

std::string Chart::str() const
{
    std::string s;
    for (const auto &v : *vars_) {
        if (!s.empty()) {
            s += ' ';
        }
        s += v;
    }
    return s;
}

Expr diff(const Expr &e, const Chart &chart, const std::string &var)
{
    chart.index_of(var);
    return diff(e, var);
}

bool is_polynomial_in(const Expr &e, const Chart &chart)
{
    auto involves_chart = [&](const Atom &a) {
        for (const auto &v : chart.vars()) {
            if (a.depends_on(v)) {
                return true;
            }
        }
        return false;
    };
    for (const auto &a : e.denominator().atoms()) {
        if (involves_chart(a)) {
            return false;
        }
    }
    for (const auto &a : e.numerator().atoms()) {
        if (!a.is_symbol() && involves_chart(a)) {
            return false;
        }
    }
    return true;
}

} // namespace skewform
