#include "skewform/session.hpp"
#include "skewform/parser.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

using namespace skewform;

namespace {

struct Flags {
    bool json = false;
    std::uint64_t seed = 0;
    double tolerance = 1e-9;
    int max_steps = 8;
};

RunOptions run_options(const Flags &f)
{
    RunOptions o;
    o.set_seed(f.seed);
    o.max_steps = f.max_steps;
    o.scan.tolerance = f.tolerance;
    o.catalog.tolerance = f.tolerance;
    o.catalog.scan.tolerance = f.tolerance;
    o.catalog.max_steps = f.max_steps;
    return o;
}

void emit(const Json &j) { std::cout << j.dump(2) << "\n"; }

int check(const Flags &f, const std::string &path)
{
    std::ifstream in(path);
    if (!in) {
        std::cerr << "skewform: cannot open '" << path << "'\n";
        return 2;
    }
    std::stringstream buf;
    buf << in.rdbuf();
    Session session;
    try {
        session = parse_session(buf.str());
    } catch (const SessionError &e) {
        std::cerr << path << ":" << e.what() << "\n";
        return 2;
    }
    const SessionReport report = run_session(session, run_options(f));
    if (f.json) {
        emit(to_json(report));
    } else {
        std::cout << to_text(report);
    }
    return report.ok() ? 0 : 1;
}

int catalog_list(const Flags &f)
{
    const auto entries = catalog_entries();
    if (f.json) {
        Json out = Json::array();
        for (const auto &e : entries) {
            out.push_back(Json{{"name", e.name}, {"title", e.title}});
        }
        emit(Json{{"schema", kSchemaVersion}, {"entries", out}});
        return 0;
    }
    for (const auto &e : entries) {
        std::cout << e.name << "  " << e.title << "\n";
    }
    return 0;
}

int catalog_run(const Flags &f, const std::string &name, bool all)
{
    const RunOptions o = run_options(f);
    std::vector<EntryReport> reports;
    try {
        reports = all ? run_all(o.catalog) : std::vector<EntryReport>{run_entry(name, o.catalog)};
    } catch (const UnknownEntryError &e) {
        std::cerr << "skewform: " << e.what() << "\n";
        return 2;
    }
    bool ok = true;
    Json entries = Json::array();
    for (const auto &r : reports) {
        ok = ok && r.passed();
        entries.push_back(to_json(r));
    }
    if (f.json) {
        emit(Json{{"schema", kSchemaVersion}, {"ok", ok}, {"entries", entries}});
    } else {
        for (const auto &r : reports) {
            std::cout << (r.passed() ? "PASS " : "FAIL ") << r.name << "  " << r.title << "\n";
            for (const auto &c : r.checks) {
                std::cout << "    [" << (c.passed ? "ok" : "!!") << "] " << c.label;
                if (!c.passed && !c.detail.empty()) {
                    std::cout << ": " << c.detail;
                }
                std::cout << "\n";
            }
        }
    }
    return ok ? 0 : 1;
}

int eval(const Flags &f, const std::string &text, const std::string &chart_vars, const std::vector<std::string> &at)
{
    Json out{{"schema", kSchemaVersion}, {"input", text}};
    try {
        if (!chart_vars.empty()) {
            std::istringstream vs(chart_vars);
            std::vector<std::string> vars;
            for (std::string v; vs >> v;) {
                vars.push_back(v);
            }
            const DiffForm a = parse_form(text, Chart(vars));
            const DiffForm da = ext_d(a);
            out["form"] = to_json(a);
            out["differential"] = to_json(da);
            if (!f.json) {
                std::cout << a.str() << "\nd: " << da.str() << "\n";
            }
        } else {
            const Expr e = parse(text);
            out["canonical"] = e.str();
            std::map<std::string, Rational> point;
            for (const auto &binding : at) {
                const auto eq = binding.find('=');
                if (eq == std::string::npos) {
                    throw Error("--at expects name=value, got '" + binding + "'");
                }
                const Expr v = parse(binding.substr(eq + 1));
                if (!v.is_constant()) {
                    throw Error("--at value for '" + binding.substr(0, eq) + "' is not a number");
                }
                point.emplace(binding.substr(0, eq), v.constant_value());
            }
            if (!at.empty()) {
                out["value"] = value_str(skewform::eval(e, point));
            }
            if (!f.json) {
                std::cout << e.str() << "\n";
                if (!at.empty()) {
                    std::cout << "= " << out["value"].get<std::string>() << "\n";
                }
            }
        }
    } catch (const Error &e) {
        std::cerr << "skewform: " << e.what() << "\n";
        return 2;
    }
    if (f.json) {
        emit(out);
    }
    return 0;
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"skewform: exterior and evolutionary differential forms"};
    app.require_subcommand(1);
    Flags flags;
    app.add_flag("--json", flags.json, "Machine-readable output");
    app.add_option("--seed", flags.seed, "Seed for sampled zero tests and locus scans");
    app.add_option("--tolerance", flags.tolerance, "Tolerance for numeric checks")->check(CLI::PositiveNumber);
    app.add_option("--max-steps", flags.max_steps, "Step limit for integration chains");

    std::string file;
    auto *check_cmd = app.add_subcommand("check", "Run a session file");
    check_cmd->add_option("file", file, "Session file")->required();
    check_cmd->fallthrough();

    auto *catalog = app.add_subcommand("catalog", "Worked relations");
    catalog->require_subcommand(1);
    catalog->fallthrough();
    auto *list = catalog->add_subcommand("list", "List entries");
    list->fallthrough();
    std::string entry;
    bool all = false;
    auto *run = catalog->add_subcommand("run", "Run one entry or all of them");
    run->add_option("name", entry, "Entry name");
    run->add_flag("--all", all, "Run every entry in parallel");
    run->fallthrough();

    std::string expr;
    std::string chart_vars;
    std::vector<std::string> at;
    auto *eval_cmd = app.add_subcommand("eval", "Canonicalize an expression or form");
    eval_cmd->add_option("expr", expr, "Expression")->required();
    eval_cmd->add_option("--chart", chart_vars, "Space-separated chart variables; parses a form");
    eval_cmd->add_option("--at", at, "Evaluate at name=value (repeatable)");
    eval_cmd->fallthrough();

    CLI11_PARSE(app, argc, argv);

    if (*check_cmd) {
        return check(flags, file);
    }
    if (*list) {
        return catalog_list(flags);
    }
    if (*run) {
        if (all == !entry.empty()) {
            std::cerr << "skewform: catalog run needs exactly one of <name> or --all\n";
            return 2;
        }
        return catalog_run(flags, entry, all);
    }
    return eval(flags, expr, chart_vars, at);
}
