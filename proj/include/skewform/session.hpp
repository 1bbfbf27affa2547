#pragma once

// Line-oriented declaration language: see docs/grammar.md.

#include "skewform/catalog.hpp"
#include "skewform/errors.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace skewform {

class SessionError : public Error {
public:
    SessionError(const std::string &msg, std::size_t line, std::size_t column)
        : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + msg), line_(line), column_(column),
          detail_(msg)
    {
    }

    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }
    const std::string &detail() const noexcept { return detail_; }

private:
    std::size_t line_;
    std::size_t column_;
    std::string detail_;
};

struct ChartDecl {
    Chart chart;
};
struct ParamDecl {
    std::vector<std::string> names;
};
struct FormDecl {
    std::string name;
    DiffForm form;
};
struct MetricDecl {
    std::string name;
    Metric metric;
};
struct ConnectionDecl {
    std::string name;
    Connection connection;
};
struct PseudoDecl {
    std::string name;
    Pseudostructure pseudo;
};
struct RelationDecl {
    std::string name;
    Relation relation;
};

// A form operand as written: a declared name, or the canonical expansion.
struct FormRef {
    std::string text;
    DiffForm form;
};

// A relation operand: a declared relation, or inline `lhs => rhs`.
struct RelationRef {
    std::string name;
    FormRef lhs;
    FormRef rhs;
    Relation relation;
};

template <class T>
struct Named {
    std::string name;
    T value;
};

enum class CheckKind { Closed, Exact, Zero, Dual, Bianchi, TorsionFree };

struct CheckCmd {
    CheckKind kind;
    std::optional<FormRef> form;
    std::optional<Named<Metric>> metric;
    std::optional<Named<Connection>> connection;
    std::optional<Named<Pseudostructure>> on;
    DualOrder order = DualOrder::AmbientThenPullback;
    bool expected = true;
};

struct ClassifyCmd {
    RelationRef relation;
    std::optional<Named<Pseudostructure>> on;
    std::optional<Classification> expected;
};

enum class LocusExpectation { Degenerate, Nondegenerate, IdenticallyZero };

struct ScanCmd {
    Chart chart;
    ScanRequest request;
    std::optional<LocusExpectation> expected;
};

struct ChainCmd {
    RelationRef relation;
    std::optional<Named<Pseudostructure>> on;
};

struct CatalogCmd {
    std::string entry; // "all" runs every entry
};

using Statement = std::variant<ChartDecl, ParamDecl, FormDecl, MetricDecl, ConnectionDecl, PseudoDecl, RelationDecl,
                               CheckCmd, ClassifyCmd, ScanCmd, ChainCmd, CatalogCmd>;

struct SessionLine {
    std::size_t line;
    Statement statement;
};

struct Session {
    std::vector<SessionLine> statements;

    std::size_t command_count() const;
};

// Throws SessionError with the 1-based line and column of the offending text.
Session parse_session(std::string_view source);
// Canonical text; parse_session(print_session(s)) prints back identically.
std::string print_session(const Session &s);
std::string print_statement(const Statement &s);

struct RunOptions {
    ZeroTestOptions zero;
    ScanOptions scan;
    CatalogOptions catalog;
    int max_steps = 8;

    // Applies one seed everywhere randomness enters.
    void set_seed(std::uint64_t seed);
};

struct CommandResult {
    std::size_t line = 0;
    std::string command;
    bool ok = true;
    std::string error;
    std::vector<std::string> text;
    Json data = Json::object();
};

struct SessionReport {
    std::vector<CommandResult> results;

    bool ok() const;
};

// Commands run in order; a failing command does not stop the rest.
SessionReport run_session(const Session &s, const RunOptions &opts = {});

Json to_json(const SessionReport &r);
std::string to_text(const SessionReport &r);

} // namespace skewform
