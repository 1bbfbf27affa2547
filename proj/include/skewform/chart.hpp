#pragma once

#include "skewform/expr.hpp"

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace skewform {

// Ordered coordinate list x^1..x^n. The order fixes basis indexing and orientation.
class Chart {
public:
    Chart();
    explicit Chart(std::vector<std::string> vars);

    std::size_t dim() const noexcept { return vars_->size(); }
    const std::vector<std::string> &vars() const noexcept { return *vars_; }
    const std::string &var(std::size_t i) const { return vars_->at(i); }
    std::optional<std::size_t> find(const std::string &name) const;
    // Throws UndeclaredVariableError.
    std::size_t index_of(const std::string &name) const;
    bool contains(const std::string &name) const { return find(name).has_value(); }
    std::string str() const;

    friend bool operator==(const Chart &a, const Chart &b) { return a.vars_ == b.vars_ || *a.vars_ == *b.vars_; }

private:
    std::shared_ptr<const std::vector<std::string>> vars_;
};

// Partial derivative with respect to a chart coordinate.
Expr diff(const Expr &e, const Chart &chart, const std::string &var);

// Holds iff e involves no chart coordinate inside a denominator or a function atom.
bool is_polynomial_in(const Expr &e, const Chart &chart);

} // namespace skewform
