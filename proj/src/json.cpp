#include "skewform/json.hpp"
#include "skewform/errors.hpp"
#include "skewform/parser.hpp"

namespace skewform {

Json to_json(const Expr &e) { return e.str(); }

Json to_json(const Decision &d) { return Json{{"holds", d.holds}, {"probabilistic", d.probabilistic}}; }

Json to_json(const Chart &c) { return c.vars(); }

Json to_json(const DiffForm &a)
{
    Json terms = Json::array();
    for (const auto &[idx, coeff] : a.terms()) {
        Json names = Json::array();
        for (int i : idx) {
            names.push_back(a.chart().var(static_cast<std::size_t>(i)));
        }
        terms.push_back(Json{{"indices", names}, {"coefficient", coeff.str()}});
    }
    return Json{{"chart", to_json(a.chart())}, {"degree", a.degree()}, {"terms", terms}};
}

Json to_json(const ExprMatrix &m)
{
    Json rows = Json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (std::size_t j = 0; j < m.cols(); ++j) {
            row.push_back(m(i, j).str());
        }
        rows.push_back(row);
    }
    return rows;
}

Json to_json(const Connection &c)
{
    const Chart &chart = c.chart();
    const std::size_t n = chart.dim();
    Json out = Json::array();
    for (std::size_t s = 0; s < n; ++s) {
        for (std::size_t a = 0; a < n; ++a) {
            for (std::size_t b = 0; b < n; ++b) {
                const Expr &g = c.gamma(s, a, b);
                if (!g.is_zero()) {
                    out.push_back(Json{{"upper", chart.var(s)},
                                       {"lower", Json::array({chart.var(a), chart.var(b)})},
                                       {"value", g.str()}});
                }
            }
        }
    }
    return out;
}

Json to_json(const Verdict &v)
{
    Json j{{"classification", to_string(v.classification)},
           {"residual", to_json(v.residual)},
           {"commutator", to_json(v.commutator)}};
    j["pi_closure"] = v.pi_closure ? Json(*v.pi_closure) : Json(nullptr);
    j["probabilistic"] = v.probabilistic;
    return j;
}

Json to_json(const LocusReport &r)
{
    return Json{{"kind", to_string(r.kind)},
                {"functional", r.functional.str()},
                {"identically_zero", r.identically_zero},
                {"probabilistic", r.probabilistic},
                {"variables", r.variables},
                {"points", r.points}};
}

Json to_json(const ChainStep &s)
{
    return Json{{"degree", s.degree},         {"rhs", to_json(s.rhs)},
                {"left", to_json(s.left)},    {"right", to_json(s.right)},
                {"witness", to_json(s.witness)}, {"literal_closed", to_json(s.literal_closed)}};
}

Json to_json(const std::vector<ChainStep> &chain)
{
    Json out = Json::array();
    for (const auto &s : chain) {
        out.push_back(to_json(s));
    }
    return out;
}

Json to_json(const Pseudostructure &s)
{
    Json map = Json::object();
    for (std::size_t i = 0; i < s.map().size(); ++i) {
        map[s.ambient().var(i)] = s.map()[i].str();
    }
    return Json{{"ambient", to_json(s.ambient())}, {"params", to_json(s.params())}, {"map", map}};
}

namespace {

const Json &field(const Json &j, const char *key)
{
    if (!j.is_object() || !j.contains(key)) {
        throw Error(std::string("JSON object is missing '") + key + "'");
    }
    return j.at(key);
}

std::string string_field(const Json &j, const char *key)
{
    const Json &v = field(j, key);
    if (!v.is_string()) {
        throw Error(std::string("JSON field '") + key + "' must be a string");
    }
    return v.get<std::string>();
}

} // namespace

DiffForm form_from_json(const Json &j)
{
    try {
        const Chart chart(field(j, "chart").get<std::vector<std::string>>());
        const int degree = field(j, "degree").get<int>();
        if (degree < 0 || degree > static_cast<int>(chart.dim())) {
            throw DegreeError("degree " + std::to_string(degree) + " out of range for chart (" + chart.str() + ")");
        }
        DiffForm out(chart, degree);
        for (const Json &t : field(j, "terms")) {
            MultiIndex idx;
            for (const auto &name : field(t, "indices").get<std::vector<std::string>>()) {
                idx.push_back(static_cast<int>(chart.index_of(name)));
            }
            if (static_cast<int>(idx.size()) != degree) {
                throw DegreeError("term has " + std::to_string(idx.size()) + " indices, form degree is " +
                                  std::to_string(degree));
            }
            const int sign = sort_with_sign(idx);
            if (sign == 0) {
                continue;
            }
            const Expr c = parse(string_field(t, "coefficient"));
            out += DiffForm::basis(chart, idx, sign > 0 ? c : -c);
        }
        return out;
    } catch (const nlohmann::json::exception &e) {
        throw Error(std::string("malformed form JSON: ") + e.what());
    }
}

Connection connection_from_json(const Json &j, const Chart &chart)
{
    if (!j.is_array()) {
        throw Error("connection JSON must be an array of components");
    }
    std::vector<ConnectionEntry> entries;
    try {
        for (const Json &c : j) {
            const auto lower = field(c, "lower").get<std::vector<std::string>>();
            if (lower.size() != 2) {
                throw Error("connection component needs exactly two lower indices");
            }
            entries.push_back({string_field(c, "upper"), lower[0], lower[1], string_field(c, "value")});
        }
    } catch (const nlohmann::json::exception &e) {
        throw Error(std::string("malformed connection JSON: ") + e.what());
    }
    return Connection::from_entries(chart, entries);
}

} // namespace skewform
