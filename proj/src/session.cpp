#include "skewform/session.hpp"
#include "skewform/parser.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <sstream>

namespace skewform {

namespace {

// A slice of one source line; col is the 1-based column of text[0].
struct Seg {
    std::string_view text;
    std::size_t col = 1;

    bool empty() const { return text.empty(); }
    std::string str() const { return std::string(text); }
};

Seg trim(Seg s)
{
    while (!s.text.empty() && std::isspace(static_cast<unsigned char>(s.text.front()))) {
        s.text.remove_prefix(1);
        ++s.col;
    }
    while (!s.text.empty() && std::isspace(static_cast<unsigned char>(s.text.back()))) {
        s.text.remove_suffix(1);
    }
    return s;
}

Seg sub(const Seg &s, std::size_t pos, std::size_t len = std::string_view::npos)
{
    return trim(Seg{s.text.substr(pos, len), s.col + pos});
}

bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

bool is_identifier(std::string_view s)
{
    return !s.empty() && (std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_') &&
           std::all_of(s.begin(), s.end(), ident_char);
}

// Byte offsets of depth-0 characters.
template <class F>
void for_top_level(std::string_view s, F &&f)
{
    int depth = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        const char c = s[i];
        if (c == '(' || c == '[' || c == '{') {
            ++depth;
        } else if (c == ')' || c == ']' || c == '}') {
            --depth;
        } else if (depth == 0) {
            f(i);
        }
    }
}

std::optional<std::size_t> find_word(const Seg &s, std::string_view word)
{
    std::optional<std::size_t> found;
    for_top_level(s.text, [&](std::size_t i) {
        if (s.text.compare(i, word.size(), word) != 0) {
            return;
        }
        const bool left = i == 0 || !ident_char(s.text[i - 1]);
        const std::size_t end = i + word.size();
        const bool right = end == s.text.size() || !ident_char(s.text[end]);
        if (left && right) {
            found = i;
        }
    });
    return found;
}

std::optional<std::size_t> find_token(const Seg &s, std::string_view tok)
{
    std::optional<std::size_t> found;
    for_top_level(s.text, [&](std::size_t i) {
        if (!found && s.text.compare(i, tok.size(), tok) == 0) {
            found = i;
        }
    });
    return found;
}

std::vector<Seg> split_list(const Seg &s, char sep)
{
    std::vector<Seg> out;
    std::size_t start = 0;
    for_top_level(s.text, [&](std::size_t i) {
        if (s.text[i] == sep) {
            out.push_back(sub(s, start, i - start));
            start = i + 1;
        }
    });
    out.push_back(sub(s, start));
    return out;
}

std::pair<Seg, Seg> first_word(const Seg &s)
{
    std::size_t i = 0;
    while (i < s.text.size() && !std::isspace(static_cast<unsigned char>(s.text[i]))) {
        ++i;
    }
    return {sub(s, 0, i), sub(s, i)};
}

std::string join(const std::vector<std::string> &parts, const std::string &sep)
{
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        out += (i ? sep : "") + parts[i];
    }
    return out;
}

std::string check_keyword(CheckKind k)
{
    switch (k) {
    case CheckKind::Closed:
        return "closed";
    case CheckKind::Exact:
        return "exact";
    case CheckKind::Zero:
        return "zero";
    case CheckKind::Dual:
        return "dual";
    case CheckKind::Bianchi:
        return "bianchi";
    case CheckKind::TorsionFree:
        return "torsion-free";
    }
    return "";
}

std::string locus_keyword(LocusExpectation e)
{
    switch (e) {
    case LocusExpectation::Degenerate:
        return "degenerate";
    case LocusExpectation::Nondegenerate:
        return "nondegenerate";
    case LocusExpectation::IdenticallyZero:
        return "identically-zero";
    }
    return "";
}

class Parser {
public:
    Statement statement(std::size_t line, Seg s)
    {
        line_ = line;
        auto [head, rest] = first_word(s);
        const std::string kw = head.str();
        if (kw == "chart") {
            return chart(rest);
        }
        if (kw == "param") {
            return param(rest);
        }
        if (kw == "form") {
            return form(rest);
        }
        if (kw == "metric") {
            return metric(rest);
        }
        if (kw == "connection") {
            return connection(rest);
        }
        if (kw == "pseudo") {
            return pseudo(rest);
        }
        if (kw == "relation") {
            return relation(rest);
        }
        if (kw == "check") {
            return check(rest);
        }
        if (kw == "classify") {
            return classify_cmd(rest);
        }
        if (kw == "scan") {
            return scan(rest);
        }
        if (kw == "chain") {
            return chain(rest);
        }
        if (kw == "catalog") {
            return catalog(rest);
        }
        fail("unknown statement '" + kw + "'", head);
    }

private:
    [[noreturn]] void fail(const std::string &msg, const Seg &at) const { throw SessionError(msg, line_, at.col); }
    [[noreturn]] void fail_at(const std::string &msg, std::size_t col) const { throw SessionError(msg, line_, col); }

    const Chart &current_chart(const Seg &at) const
    {
        if (!chart_) {
            fail("no chart declared yet", at);
        }
        return *chart_;
    }

    std::string name(const Seg &s, const char *what) const
    {
        if (!is_identifier(s.text)) {
            fail(std::string("expected a ") + what + " name, got '" + s.str() + "'", s);
        }
        return s.str();
    }

    void unique(const std::set<std::string> &taken, const Seg &s, const char *what) const
    {
        if (taken.count(s.str())) {
            fail(std::string(what) + " '" + s.str() + "' is already declared", s);
        }
    }

    template <class F>
    auto guarded(const Seg &s, F &&f) const -> decltype(f())
    {
        try {
            return f();
        } catch (const SessionError &) {
            throw;
        } catch (const ParseError &e) {
            fail_at(e.detail(), s.col + std::min(e.position(), s.text.size()));
        } catch (const Error &e) {
            fail(e.what(), s);
        }
    }

    Expr scalar(const Seg &s, const std::set<std::string> &allowed) const
    {
        if (s.empty()) {
            fail("expected an expression", s);
        }
        return guarded(s, [&] { return parse(s.text, ParseOptions{allowed}); });
    }

    std::set<std::string> chart_scalars(const Seg &at) const
    {
        std::set<std::string> allowed(params_);
        const auto &vars = current_chart(at).vars();
        allowed.insert(vars.begin(), vars.end());
        return allowed;
    }

    FormRef form_ref(const Seg &s) const
    {
        const Chart &chart = current_chart(s);
        if (s.empty()) {
            fail("expected a form", s);
        }
        FormParseOptions opts;
        opts.scalars = params_;
        opts.lookup = [this](const std::string &n) -> std::optional<DiffForm> {
            auto it = forms_.find(n);
            return it == forms_.end() ? std::nullopt : std::optional<DiffForm>(it->second);
        };
        DiffForm f = guarded(s, [&] { return parse_form(s.text, chart, opts); });
        if (is_identifier(s.text) && forms_.count(s.str())) {
            return {s.str(), std::move(f)};
        }
        return {f.str(), std::move(f)};
    }

    template <class T>
    Named<T> lookup(const std::map<std::string, T> &table, const Seg &s, const char *what) const
    {
        auto it = table.find(s.str());
        if (it == table.end()) {
            fail(std::string("undeclared ") + what + " '" + s.str() + "'", s);
        }
        return {it->first, it->second};
    }

    RelationRef relation_ref(const Seg &s) const
    {
        if (auto arrow = find_token(s, "=>")) {
            FormRef lhs = form_ref(sub(s, 0, *arrow));
            FormRef rhs = form_ref(sub(s, *arrow + 2));
            if (lhs.form.is_zero() && lhs.form.degree() + 1 != rhs.form.degree() && rhs.form.degree() > 0) {
                lhs.form = DiffForm(rhs.form.chart(), rhs.form.degree() - 1);
            }
            Relation r = guarded(s, [&] { return Relation(lhs.form, rhs.form); });
            return {"", std::move(lhs), std::move(rhs), std::move(r)};
        }
        auto named = lookup(relations_, s, "relation");
        const Relation &r = named.value;
        return {named.name, {r.psi().str(), r.psi()}, {r.omega().str(), r.omega()}, r};
    }

    std::optional<Seg> take_clause(Seg &s, std::string_view word) const
    {
        auto pos = find_word(s, word);
        if (!pos) {
            return std::nullopt;
        }
        Seg clause = sub(s, *pos + word.size());
        s = sub(s, 0, *pos);
        if (clause.empty()) {
            fail("'" + std::string(word) + "' needs an argument", Seg{s.text, s.col + s.text.size()});
        }
        return clause;
    }

    std::optional<Named<Pseudostructure>> on_clause(Seg &s, bool *induced = nullptr) const
    {
        auto clause = take_clause(s, "on");
        if (!clause) {
            return std::nullopt;
        }
        auto [target, rest] = first_word(*clause);
        if (!rest.empty()) {
            if (induced && rest.text == "induced") {
                *induced = true;
            } else {
                fail("unexpected '" + rest.str() + "'", rest);
            }
        }
        return lookup(pseudos_, target, "pseudostructure");
    }

    void declare_chart_names(const Seg &at, const std::vector<std::string> &names)
    {
        static const std::set<std::string> reserved{"on", "expect", "under", "pairs", "vars", "induced", "d"};
        for (const auto &n : names) {
            if (reserved.count(n)) {
                fail("'" + n + "' is a reserved word", at);
            }
        }
    }

    Statement chart(const Seg &rest)
    {
        std::vector<std::string> vars;
        Seg s = rest;
        while (!s.empty()) {
            auto [w, tail] = first_word(s);
            vars.push_back(name(w, "variable"));
            if (std::count(vars.begin(), vars.end(), vars.back()) > 1) {
                fail("variable '" + vars.back() + "' repeated", w);
            }
            s = tail;
        }
        if (vars.empty()) {
            fail("chart needs at least one variable", rest);
        }
        declare_chart_names(rest, vars);
        chart_ = Chart(vars);
        return ChartDecl{*chart_};
    }

    Statement param(const Seg &rest)
    {
        std::vector<std::string> names;
        Seg s = rest;
        while (!s.empty()) {
            auto [w, tail] = first_word(s);
            names.push_back(name(w, "parameter"));
            declare_chart_names(w, {names.back()});
            params_.insert(names.back());
            s = tail;
        }
        if (names.empty()) {
            fail("param needs at least one name", rest);
        }
        return ParamDecl{names};
    }

    // NAME = rhs  or  NAME: rhs
    std::pair<Seg, Seg> binding(const Seg &rest, char sep, const char *what) const
    {
        auto pos = find_token(rest, std::string_view(&sep, 1));
        if (!pos) {
            fail(std::string("expected '") + sep + "' after the " + what + " name", rest);
        }
        return {sub(rest, 0, *pos), sub(rest, *pos + 1)};
    }

    Statement form(const Seg &rest)
    {
        auto [n, body] = binding(rest, '=', "form");
        const std::string nm = name(n, "form");
        unique(form_names_, n, "form");
        FormRef f = form_ref(body);
        forms_.emplace(nm, f.form);
        form_names_.insert(nm);
        return FormDecl{nm, f.form};
    }

    Statement metric(const Seg &rest)
    {
        auto [n, body] = binding(rest, '=', "metric");
        const std::string nm = name(n, "metric");
        unique(metric_names_, n, "metric");
        const Chart &chart = current_chart(rest);
        int orientation = 1;
        if (auto o = take_clause(body, "orientation")) {
            if (o->text == "-1") {
                orientation = -1;
            } else if (o->text != "1" && o->text != "+1") {
                fail("orientation must be 1 or -1", *o);
            }
        }
        const auto allowed = chart_scalars(body);
        ExprMatrix g(chart.dim(), chart.dim());
        if (body.text == "euclidean" || body.text == "minkowski") {
            const bool mink = body.text == "minkowski";
            for (std::size_t i = 0; i < chart.dim(); ++i) {
                g(i, i) = Expr(mink && i > 0 ? -1 : 1);
            }
        } else if (body.text.substr(0, 5) == "diag(" && body.text.back() == ')') {
            const auto items = split_list(sub(body, 5, body.text.size() - 6), ',');
            if (items.size() != chart.dim()) {
                fail("diag needs " + std::to_string(chart.dim()) + " entries, got " + std::to_string(items.size()),
                     body);
            }
            for (std::size_t i = 0; i < items.size(); ++i) {
                g(i, i) = scalar(items[i], allowed);
            }
        } else if (!body.empty() && body.text.front() == '[' && body.text.back() == ']') {
            const auto rows = split_list(sub(body, 1, body.text.size() - 2), ';');
            if (rows.size() != chart.dim()) {
                fail("metric needs " + std::to_string(chart.dim()) + " rows, got " + std::to_string(rows.size()), body);
            }
            for (std::size_t i = 0; i < rows.size(); ++i) {
                const auto cols = split_list(rows[i], ',');
                if (cols.size() != chart.dim()) {
                    fail("row needs " + std::to_string(chart.dim()) + " entries, got " + std::to_string(cols.size()),
                         rows[i]);
                }
                for (std::size_t j = 0; j < cols.size(); ++j) {
                    g(i, j) = scalar(cols[j], allowed);
                }
            }
        } else {
            fail("expected euclidean, minkowski, diag(...) or [..; ..]", body);
        }
        Metric m = guarded(body, [&] { return Metric(chart, g, orientation); });
        metrics_.emplace(nm, m);
        metric_names_.insert(nm);
        return MetricDecl{nm, std::move(m)};
    }

    Statement connection(const Seg &rest)
    {
        auto [n, body] = binding(rest, ':', "connection");
        const std::string nm = name(n, "connection");
        unique(connection_names_, n, "connection");
        const Chart &chart = current_chart(rest);
        const auto allowed = chart_scalars(body);
        Connection c(chart);
        if (!body.empty()) {
            for (const Seg &item : split_list(body, ',')) {
                auto eq = find_token(item, "=");
                if (!eq || item.text.front() != '(') {
                    fail("expected (upper; lower, lower) = value", item);
                }
                Seg idx = sub(item, 0, *eq);
                if (idx.text.back() != ')') {
                    fail("expected (upper; lower, lower) = value", item);
                }
                idx = sub(idx, 1, idx.text.size() - 2);
                const auto parts = split_list(idx, ';');
                const auto lower = parts.size() == 2 ? split_list(parts[1], ',') : std::vector<Seg>{};
                if (lower.size() != 2) {
                    fail("expected (upper; lower, lower)", idx);
                }
                const Seg names[3] = {parts[0], lower[0], lower[1]};
                std::size_t slots[3];
                for (int k = 0; k < 3; ++k) {
                    auto found = chart.find(names[k].str());
                    if (!found) {
                        fail("'" + names[k].str() + "' is not a chart variable", names[k]);
                    }
                    slots[k] = *found;
                }
                c.set(slots[0], slots[1], slots[2], scalar(sub(item, *eq + 1), allowed));
            }
        }
        connections_.emplace(nm, c);
        connection_names_.insert(nm);
        return ConnectionDecl{nm, std::move(c)};
    }

    Statement pseudo(const Seg &rest)
    {
        auto [head, body] = binding(rest, ':', "pseudostructure");
        const std::size_t paren = head.text.find('(');
        const std::optional<std::size_t> open =
            paren == std::string_view::npos ? std::nullopt : std::optional<std::size_t>(paren);
        if (!open || head.text.back() != ')') {
            fail("expected NAME(param, ...)", head);
        }
        const Seg n = sub(head, 0, *open);
        const std::string nm = name(n, "pseudostructure");
        unique(pseudo_names_, n, "pseudostructure");
        const Chart &chart = current_chart(rest);
        std::vector<std::string> params;
        for (const Seg &p : split_list(sub(head, *open + 1, head.text.size() - *open - 2), ',')) {
            params.push_back(name(p, "parameter"));
        }
        std::set<std::string> allowed(params_);
        allowed.insert(params.begin(), params.end());
        std::vector<std::optional<Expr>> map(chart.dim());
        for (const Seg &item : split_list(body, ',')) {
            auto eq = find_token(item, "=");
            if (!eq) {
                fail("expected VAR = expression", item);
            }
            const Seg var = sub(item, 0, *eq);
            auto slot = chart.find(var.str());
            if (!slot) {
                fail("'" + var.str() + "' is not a chart variable", var);
            }
            if (map[*slot]) {
                fail("'" + var.str() + "' assigned twice", var);
            }
            map[*slot] = scalar(sub(item, *eq + 1), allowed);
        }
        std::vector<Expr> phi;
        for (std::size_t i = 0; i < map.size(); ++i) {
            if (!map[i]) {
                fail("no expression for chart variable '" + chart.var(i) + "'", body);
            }
            phi.push_back(*map[i]);
        }
        Pseudostructure ps = guarded(rest, [&] { return Pseudostructure(chart, Chart(params), phi); });
        pseudos_.emplace(nm, ps);
        pseudo_names_.insert(nm);
        return PseudoDecl{nm, std::move(ps)};
    }

    Statement relation(const Seg &rest)
    {
        auto [n, body] = binding(rest, ':', "relation");
        const std::string nm = name(n, "relation");
        unique(relation_names_, n, "relation");
        if (!find_token(body, "=>")) {
            fail("expected LHS => RHS", body);
        }
        RelationRef r = relation_ref(body);
        relations_.emplace(nm, r.relation);
        relation_names_.insert(nm);
        return RelationDecl{nm, r.relation};
    }

    bool expect_bool(Seg &s) const
    {
        if (auto e = take_clause(s, "expect")) {
            if (e->text == "true") {
                return true;
            }
            if (e->text == "false") {
                return false;
            }
            fail("expected true or false", *e);
        }
        return true;
    }

    Statement check(const Seg &rest)
    {
        auto [kw, body] = first_word(rest);
        CheckCmd cmd{CheckKind::Closed, {}, {}, {}, {}, DualOrder::AmbientThenPullback, true};
        cmd.expected = expect_bool(body);
        const std::string k = kw.str();
        if (k == "closed" || k == "exact" || k == "zero") {
            cmd.kind = k == "closed" ? CheckKind::Closed : k == "exact" ? CheckKind::Exact : CheckKind::Zero;
            cmd.form = form_ref(body);
        } else if (k == "dual") {
            cmd.kind = CheckKind::Dual;
            bool induced = false;
            cmd.on = on_clause(body, &induced);
            cmd.order = induced ? DualOrder::InducedMetric : DualOrder::AmbientThenPullback;
            auto under = take_clause(body, "under");
            if (!under) {
                fail("check dual needs 'under METRIC'", body);
            }
            cmd.metric = lookup(metrics_, *under, "metric");
            cmd.form = form_ref(body);
        } else if (k == "bianchi" || k == "torsion-free") {
            cmd.kind = k == "bianchi" ? CheckKind::Bianchi : CheckKind::TorsionFree;
            cmd.connection = lookup(connections_, body, "connection");
        } else {
            fail("unknown check '" + k + "'", kw);
        }
        return cmd;
    }

    Statement classify_cmd(const Seg &rest)
    {
        Seg body = rest;
        std::optional<Classification> expected;
        if (auto e = take_clause(body, "expect")) {
            expected = classification_from_string(e->str());
            if (!expected) {
                fail("unknown classification '" + e->str() + "'", *e);
            }
        }
        auto on = on_clause(body);
        return ClassifyCmd{relation_ref(body), std::move(on), expected};
    }

    Statement scan(const Seg &rest)
    {
        auto [kw, body] = first_word(rest);
        ScanCmd cmd{current_chart(rest), {}, {}};
        if (auto e = take_clause(body, "expect")) {
            const std::string v = e->str();
            for (auto x : {LocusExpectation::Degenerate, LocusExpectation::Nondegenerate,
                           LocusExpectation::IdenticallyZero}) {
                if (v == locus_keyword(x)) {
                    cmd.expected = x;
                }
            }
            if (!cmd.expected) {
                fail("unknown scan expectation '" + v + "'", *e);
            }
        }
        auto kind = scan_kind_from_string(kw.str());
        if (!kind) {
            fail("unknown scan kind '" + kw.str() + "'", kw);
        }
        cmd.request.kind = *kind;
        if (*kind == ScanKind::Poisson) {
            auto pairs = take_clause(body, "pairs");
            if (!pairs) {
                fail("poisson scan needs 'pairs q:p, ...'", body);
            }
            for (const Seg &p : split_list(*pairs, ',')) {
                const auto qp = split_list(p, ':');
                if (qp.size() != 2) {
                    fail("expected q:p", p);
                }
                for (const Seg &v : qp) {
                    if (!cmd.chart.contains(v.str())) {
                        fail("'" + v.str() + "' is not a chart variable", v);
                    }
                }
                cmd.request.pairs.emplace_back(qp[0].str(), qp[1].str());
            }
        }
        if (*kind == ScanKind::Jacobian) {
            if (auto vars = take_clause(body, "vars")) {
                for (const Seg &v : split_list(*vars, ',')) {
                    if (!cmd.chart.contains(v.str())) {
                        fail("'" + v.str() + "' is not a chart variable", v);
                    }
                    cmd.request.vars.push_back(v.str());
                }
            }
        }
        const auto allowed = chart_scalars(body);
        for (const Seg &e : split_list(body, ',')) {
            cmd.request.exprs.push_back(scalar(e, allowed));
        }
        return cmd;
    }

    Statement chain(const Seg &rest)
    {
        Seg body = rest;
        auto on = on_clause(body);
        return ChainCmd{relation_ref(body), std::move(on)};
    }

    Statement catalog(const Seg &rest)
    {
        const std::string n = rest.str();
        if (n != "all") {
            const auto entries = catalog_entries();
            if (std::none_of(entries.begin(), entries.end(), [&](const auto &e) { return e.name == n; })) {
                fail("unknown catalog entry '" + n + "'", rest);
            }
        }
        return CatalogCmd{n};
    }

    std::size_t line_ = 0;
    std::optional<Chart> chart_;
    std::set<std::string> params_;
    std::map<std::string, DiffForm> forms_;
    std::map<std::string, Metric> metrics_;
    std::map<std::string, Connection> connections_;
    std::map<std::string, Pseudostructure> pseudos_;
    std::map<std::string, Relation> relations_;
    std::set<std::string> form_names_, metric_names_, connection_names_, pseudo_names_, relation_names_;
};

std::string pseudo_text(const Named<Pseudostructure> &p) { return p.name; }

std::string relation_text(const RelationRef &r)
{
    return r.name.empty() ? r.lhs.text + " => " + r.rhs.text : r.name;
}

struct Printer {
    std::string operator()(const ChartDecl &d) const { return "chart " + join(d.chart.vars(), " "); }
    std::string operator()(const ParamDecl &d) const { return "param " + join(d.names, " "); }
    std::string operator()(const FormDecl &d) const { return "form " + d.name + " = " + d.form.str(); }
    std::string operator()(const MetricDecl &d) const
    {
        return "metric " + d.name + " = " + d.metric.str() + (d.metric.orientation() < 0 ? " orientation -1" : "");
    }
    std::string operator()(const ConnectionDecl &d) const
    {
        const Chart &c = d.connection.chart();
        std::vector<std::string> items;
        for (std::size_t s = 0; s < c.dim(); ++s) {
            for (std::size_t a = 0; a < c.dim(); ++a) {
                for (std::size_t b = 0; b < c.dim(); ++b) {
                    const Expr &g = d.connection.gamma(s, a, b);
                    if (!g.is_zero()) {
                        items.push_back("(" + c.var(s) + "; " + c.var(a) + ", " + c.var(b) + ") = " + g.str());
                    }
                }
            }
        }
        return "connection " + d.name + ":" + (items.empty() ? "" : " " + join(items, ", "));
    }
    std::string operator()(const PseudoDecl &d) const
    {
        const auto &p = d.pseudo;
        std::vector<std::string> items;
        for (std::size_t i = 0; i < p.map().size(); ++i) {
            items.push_back(p.ambient().var(i) + " = " + p.map()[i].str());
        }
        return "pseudo " + d.name + "(" + join(p.params().vars(), ", ") + "): " + join(items, ", ");
    }
    std::string operator()(const RelationDecl &d) const
    {
        return "relation " + d.name + ": " + d.relation.psi().str() + " => " + d.relation.omega().str();
    }
    std::string operator()(const CheckCmd &c) const
    {
        std::string s = "check " + check_keyword(c.kind);
        if (c.form) {
            s += " " + c.form->text;
        }
        if (c.metric) {
            s += " under " + c.metric->name;
        }
        if (c.on) {
            s += " on " + pseudo_text(*c.on) + (c.order == DualOrder::InducedMetric ? " induced" : "");
        }
        if (c.connection) {
            s += " " + c.connection->name;
        }
        return s + (c.expected ? "" : " expect false");
    }
    std::string operator()(const ClassifyCmd &c) const
    {
        return "classify " + relation_text(c.relation) + (c.on ? " on " + pseudo_text(*c.on) : "") +
               (c.expected ? " expect " + to_string(*c.expected) : "");
    }
    std::string operator()(const ScanCmd &c) const
    {
        std::vector<std::string> exprs;
        for (const auto &e : c.request.exprs) {
            exprs.push_back(e.str());
        }
        std::string s = "scan " + to_string(c.request.kind) + " " + join(exprs, ", ");
        if (!c.request.vars.empty()) {
            s += " vars " + join(c.request.vars, ", ");
        }
        if (!c.request.pairs.empty()) {
            std::vector<std::string> pairs;
            for (const auto &[q, p] : c.request.pairs) {
                pairs.push_back(q + ":" + p);
            }
            s += " pairs " + join(pairs, ", ");
        }
        return s + (c.expected ? " expect " + locus_keyword(*c.expected) : "");
    }
    std::string operator()(const ChainCmd &c) const
    {
        return "chain " + relation_text(c.relation) + (c.on ? " on " + pseudo_text(*c.on) : "");
    }
    std::string operator()(const CatalogCmd &c) const { return "catalog " + c.entry; }
};

bool is_command(const Statement &s) { return s.index() >= 7; }

std::string yes_no(const Decision &d) { return std::string(d.holds ? "yes" : "no") + (d.probabilistic ? " (sampled)" : ""); }

struct Runner {
    const RunOptions &opts;
    CommandResult &out;

    void operator()(const CheckCmd &c) const
    {
        Decision d;
        switch (c.kind) {
        case CheckKind::Closed:
            d = is_closed(c.form->form, opts.zero);
            out.data["differential"] = to_json(ext_d(c.form->form));
            break;
        case CheckKind::Exact: {
            auto w = is_exact(c.form->form, opts.zero);
            d.holds = w.has_value();
            out.data["antiderivative"] = w ? to_json(*w) : Json(nullptr);
            if (w) {
                out.text.push_back("antiderivative: " + w->str());
            }
            break;
        }
        case CheckKind::Zero:
            d = is_zero(c.form->form, opts.zero);
            break;
        case CheckKind::Dual:
            d = c.on ? dual_closure_on(c.form->form, c.metric->value, c.on->value, c.order, opts.zero)
                     : dual_closure_check(c.form->form, c.metric->value, opts.zero);
            if (!c.on) {
                out.data["dual"] = to_json(hodge_star(c.form->form, c.metric->value));
            }
            break;
        case CheckKind::Bianchi:
            d = bianchi_first_check(c.connection->value, opts.zero);
            break;
        case CheckKind::TorsionFree:
            d = is_zero(torsion(c.connection->value), opts.zero);
            break;
        }
        out.ok = d.holds == c.expected;
        out.data["holds"] = to_json(d);
        out.data["expected"] = c.expected;
        out.text.insert(out.text.begin(), check_keyword(c.kind) + ": " + yes_no(d));
    }

    void operator()(const ClassifyCmd &c) const
    {
        const Verdict v = c.on ? classify_on(c.relation.relation, c.on->value, opts.zero)
                               : classify(c.relation.relation, opts.zero);
        out.data["verdict"] = to_json(v);
        out.data["expected"] = c.expected ? Json(to_string(*c.expected)) : Json(nullptr);
        out.ok = !c.expected || *c.expected == v.classification;
        out.text.push_back("verdict: " + to_string(v.classification) + (v.probabilistic ? " (sampled)" : ""));
        out.text.push_back("residual: " + v.residual.str());
        out.text.push_back("commutator: " + v.commutator.str());
        if (v.pi_closure) {
            out.text.push_back(std::string("closed on pseudostructure: ") + (*v.pi_closure ? "yes" : "no"));
        }
    }

    void operator()(const ScanCmd &c) const
    {
        const LocusReport r = degenerate_scan(c.request, c.chart, opts.scan);
        out.data["locus"] = to_json(r);
        out.data["expected"] = c.expected ? Json(locus_keyword(*c.expected)) : Json(nullptr);
        if (c.expected) {
            switch (*c.expected) {
            case LocusExpectation::Degenerate:
                out.ok = !r.identically_zero && !r.points.empty();
                break;
            case LocusExpectation::Nondegenerate:
                out.ok = !r.identically_zero && r.points.empty();
                break;
            case LocusExpectation::IdenticallyZero:
                out.ok = r.identically_zero;
                break;
            }
        }
        out.text.push_back("functional: " + r.functional.str());
        out.text.push_back(r.identically_zero ? std::string("vanishes identically")
                                              : std::to_string(r.points.size()) + " locus point(s)");
    }

    void operator()(const ChainCmd &c) const
    {
        const auto chain = c.on ? integrate_chain(c.relation.relation, c.on->value, opts.max_steps, opts.zero)
                                : integrate_chain(c.relation.relation, opts.max_steps, opts.zero);
        out.data["steps"] = to_json(chain);
        for (const auto &step : chain) {
            out.ok = out.ok && step.witness.holds;
            out.text.push_back("degree " + std::to_string(step.degree) + ": theta = " + step.right.str() +
                               ", witness " + yes_no(step.witness));
        }
    }

    void operator()(const CatalogCmd &c) const
    {
        const auto reports = c.entry == "all" ? run_all(opts.catalog)
                                              : std::vector<EntryReport>{run_entry(c.entry, opts.catalog)};
        Json entries = Json::array();
        for (const auto &r : reports) {
            out.ok = out.ok && r.passed();
            entries.push_back(to_json(r));
            out.text.push_back(r.name + ": " + (r.passed() ? "pass" : "FAIL"));
            for (const auto &chk : r.checks) {
                if (!chk.passed) {
                    out.text.push_back("  " + chk.label + ": " + chk.detail);
                }
            }
        }
        out.data["entries"] = entries;
    }

    template <class T>
    void operator()(const T &) const
    {
    }
};

} // namespace

std::size_t Session::command_count() const
{
    return static_cast<std::size_t>(
        std::count_if(statements.begin(), statements.end(), [](const auto &s) { return is_command(s.statement); }));
}

Session parse_session(std::string_view source)
{
    Session out;
    Parser parser;
    std::size_t line = 0;
    std::size_t start = 0;
    while (start <= source.size()) {
        std::size_t end = source.find('\n', start);
        if (end == std::string_view::npos) {
            end = source.size();
        }
        ++line;
        std::string_view text = source.substr(start, end - start);
        if (auto hash = text.find('#'); hash != std::string_view::npos) {
            text = text.substr(0, hash);
        }
        const Seg seg = trim(Seg{text, 1});
        if (!seg.empty()) {
            out.statements.push_back({line, parser.statement(line, seg)});
        }
        start = end + 1;
    }
    return out;
}

std::string print_statement(const Statement &s) { return std::visit(Printer{}, s); }

std::string print_session(const Session &s)
{
    std::string out;
    for (const auto &st : s.statements) {
        out += print_statement(st.statement) + "\n";
    }
    return out;
}

void RunOptions::set_seed(std::uint64_t seed)
{
    zero.seed = seed;
    scan.seed = seed;
    scan.zero.seed = seed;
    catalog.zero.seed = seed;
    catalog.scan.seed = seed;
    catalog.scan.zero.seed = seed;
}

bool SessionReport::ok() const
{
    return std::all_of(results.begin(), results.end(), [](const CommandResult &r) { return r.ok; });
}

SessionReport run_session(const Session &s, const RunOptions &opts)
{
    SessionReport report;
    for (const auto &st : s.statements) {
        if (!is_command(st.statement)) {
            continue;
        }
        CommandResult r;
        r.line = st.line;
        r.command = print_statement(st.statement);
        try {
            std::visit(Runner{opts, r}, st.statement);
        } catch (const Error &e) {
            r.ok = false;
            r.error = e.what();
        }
        report.results.push_back(std::move(r));
    }
    return report;
}

Json to_json(const SessionReport &r)
{
    Json results = Json::array();
    for (const auto &c : r.results) {
        results.push_back(Json{{"line", c.line},
                               {"command", c.command},
                               {"ok", c.ok},
                               {"error", c.error.empty() ? Json(nullptr) : Json(c.error)},
                               {"data", c.data}});
    }
    return Json{{"schema", kSchemaVersion}, {"ok", r.ok()}, {"results", results}};
}

std::string to_text(const SessionReport &r)
{
    std::ostringstream os;
    std::size_t failed = 0;
    for (const auto &c : r.results) {
        os << "line " << c.line << ": " << c.command << (c.ok ? "" : "  [FAILED]") << "\n";
        for (const auto &t : c.text) {
            os << "    " << t << "\n";
        }
        if (!c.error.empty()) {
            os << "    error: " << c.error << "\n";
        }
        failed += c.ok ? 0 : 1;
    }
    os << r.results.size() << " command(s), " << failed << " failed\n";
    return os.str();
}

} // namespace skewform
