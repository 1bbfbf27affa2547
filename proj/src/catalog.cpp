#include "skewform/catalog.hpp"
#include "skewform/errors.hpp"
#include "skewform/parser.hpp"

#include <cmath>
#include <functional>
#include <future>
#include <sstream>

namespace skewform {

bool EntryReport::passed() const
{
    return !checks.empty() && std::all_of(checks.begin(), checks.end(), [](const Check &c) { return c.passed; });
}

Json to_json(const EntryReport &r)
{
    Json checks = Json::array();
    for (const auto &c : r.checks) {
        checks.push_back(Json{{"label", c.label}, {"passed", c.passed}, {"detail", c.detail}});
    }
    return Json{{"name", r.name}, {"title", r.title}, {"note", r.note},
                {"passed", r.passed()}, {"checks", checks}, {"data", r.data}};
}

// --- Legendre -------------------------------------------------------------------------

LegendreResult legendre_transform(const Expr &lagrangian, const std::vector<std::string> &qdot,
                                  const std::vector<std::string> &p, const ScanOptions &opts)
{
    const std::size_t n = qdot.size();
    if (n == 0 || p.size() != n) {
        throw PreconditionError("legendre transform needs one momentum name per velocity");
    }
    for (const auto &name : p) {
        if (lagrangian.depends_on(name)) {
            throw PreconditionError("momentum name '" + name + "' already occurs in the Lagrangian");
        }
    }
    LegendreResult out;
    for (const auto &v : qdot) {
        out.momenta.push_back(diff(lagrangian, v));
    }
    ExprMatrix hessian(n, n);
    bool constant = true;
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t k = 0; k < n; ++k) {
            hessian(j, k) = diff(out.momenta[j], qdot[k]);
            for (const auto &v : qdot) {
                constant = constant && !hessian(j, k).depends_on(v);
            }
        }
    }
    out.degeneracy = determinant(hessian);
    if (is_zero(out.degeneracy, opts.zero).holds) {
        throw PreconditionError("Hessian of '" + lagrangian.str() +
                                "' in the velocities is identically singular; no Hamiltonian exists");
    }
    if (!constant) {
        ScanRequest req{ScanKind::Jacobian, out.momenta, qdot, {}};
        out.locus = degenerate_scan(req, Chart(qdot), opts);
        return out;
    }
    // p = W q̇ + b(q) with W free of q̇, so q̇ = W^{-1}(p - b).
    const auto inv = inverse(hessian);
    std::map<std::string, Expr> at_rest;
    for (const auto &v : qdot) {
        at_rest.emplace(v, Expr(0));
    }
    std::vector<Expr> shifted;
    for (std::size_t j = 0; j < n; ++j) {
        shifted.push_back(Expr::symbol(p[j]) - subs(out.momenta[j], at_rest));
    }
    std::map<std::string, Expr> velocity;
    for (std::size_t k = 0; k < n; ++k) {
        Expr v;
        for (std::size_t j = 0; j < n; ++j) {
            v += (*inv)(k, j) * shifted[j];
        }
        velocity.emplace(qdot[k], v);
    }
    Expr h = -lagrangian;
    for (std::size_t j = 0; j < n; ++j) {
        h += Expr::symbol(p[j]) * Expr::symbol(qdot[j]);
    }
    out.hamiltonian = subs(h, velocity);
    return out;
}

// --- canonical ------------------------------------------------------------------------

CanonicalResult canonical_check(const std::vector<std::string> &q, const std::vector<std::string> &p,
                                const std::vector<Expr> &Q, const std::vector<Expr> &P, const ZeroTestOptions &opts)
{
    const std::size_t n = q.size();
    if (p.size() != n || Q.size() != n || P.size() != n) {
        throw PreconditionError("canonical check needs q, p, Q, P of equal length");
    }
    std::vector<std::string> vars = q;
    vars.insert(vars.end(), p.begin(), p.end());
    const Chart chart(vars);
    DiffForm sigma(chart, 1);
    for (std::size_t j = 0; j < n; ++j) {
        sigma += Expr::symbol(p[j]) * DiffForm::differential(chart, q[j]);
        sigma -= P[j] * ext_d(DiffForm::scalar(chart, Q[j]));
    }
    CanonicalResult out{sigma, is_closed(sigma, opts), std::nullopt};
    if (out.is_canonical.holds) {
        if (auto w = is_exact(sigma, opts)) {
            out.generating_function = w->value();
        }
    }
    return out;
}

// --- Green ----------------------------------------------------------------------------

namespace {

double sample(const Expr &e, const std::string &x, double xv, const std::string &y, double yv)
{
    const double v = eval_double(e, {{x, xv}, {y, yv}});
    if (!std::isfinite(v)) {
        throw PoleError("integrand '" + e.str() + "' is singular at (" + std::to_string(xv) + ", " +
                        std::to_string(yv) + ")");
    }
    return v;
}

double simpson_weight(int i, int n) { return (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0); }

} // namespace

GreenResult green_check(const Expr &P, const Expr &Q, int grid_n, const std::string &x, const std::string &y)
{
    if (grid_n < 2 || grid_n % 2) {
        throw PreconditionError("composite Simpson needs an even positive subinterval count, got " +
                                std::to_string(grid_n));
    }
    const double h = 1.0 / grid_n;
    GreenResult r;
    // Counterclockwise: bottom, right, top (reversed), left (reversed).
    double edge = 0;
    for (int i = 0; i <= grid_n; ++i) {
        const double s = i * h;
        const double w = simpson_weight(i, grid_n);
        edge += w * (sample(P, x, s, y, 0.0) + sample(Q, x, 1.0, y, s) - sample(P, x, s, y, 1.0) -
                     sample(Q, x, 0.0, y, s));
    }
    r.circulation = edge * h / 3.0;

    const Expr curl = diff(Q, x) - diff(P, y);
    double area = 0;
    for (int i = 0; i <= grid_n; ++i) {
        double row = 0;
        for (int j = 0; j <= grid_n; ++j) {
            row += simpson_weight(j, grid_n) * sample(curl, x, i * h, y, j * h);
        }
        area += simpson_weight(i, grid_n) * row;
    }
    r.area_integral = area * h * h / 9.0;
    r.abs_diff = std::fabs(r.circulation - r.area_integral);
    return r;
}

// --- entries --------------------------------------------------------------------------

namespace {

std::string fmt(double v)
{
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

class Recorder {
public:
    explicit Recorder(EntryReport &r) : r_(r) {}

    bool expect(std::string label, bool ok, std::string detail = {})
    {
        r_.checks.push_back({std::move(label), ok, std::move(detail)});
        return ok;
    }

    template <class T>
    bool equal(std::string label, const T &got, const T &want)
    {
        return expect(std::move(label), got == want, "got " + got.str() + ", expected " + want.str());
    }

    bool verdict(std::string label, const Verdict &v, Classification want)
    {
        return expect(std::move(label), v.classification == want,
                      "got " + to_string(v.classification) + ", expected " + to_string(want));
    }

    bool near(std::string label, double got, double want, double tol)
    {
        return expect(std::move(label), std::fabs(got - want) <= tol,
                      "got " + fmt(got) + ", expected " + fmt(want) + " within " + fmt(tol));
    }

    Json &data() { return r_.data; }

private:
    EntryReport &r_;
};

Expr E(const std::string &s) { return parse(s); }

Relation zero_lhs(const DiffForm &omega) { return Relation(DiffForm(omega.chart(), omega.degree() - 1), omega); }

void poincare_invariant(Recorder &rec, const CatalogOptions &o)
{
    const Chart c({"t", "q", "p"});
    const DiffForm omega = parse_form("p*d[q] - p^2/2*d[t]", c);
    const Relation r = zero_lhs(omega);
    const Verdict ambient = classify(r, o.zero);
    rec.verdict("ambient relation ds = p dq - H dt is nonidentical", ambient, Classification::NonIdentical);
    rec.equal("commutator dω = dp^dq - p dp^dt", ambient.commutator, parse_form("d[p]^d[q] - p*d[p]^d[t]", c));

    const Pseudostructure traj(c, Chart({"u"}), {E("u"), E("c*u"), E("c")}, o.zero);
    const Verdict on = classify_on(r, traj, o.zero);
    rec.expect("d_π ω_π = 0 on the trajectory t = u, q = c u, p = c", on.pi_closure.value_or(false),
               "ω_π = " + on.residual.str());
    rec.verdict("relation on the trajectory has a closed right side", on, Classification::ClosedRhs);

    const auto chain = integrate_chain(r, traj, o.max_steps, o.zero);
    const bool one = chain.size() == 1 && chain[0].degree == 0;
    rec.expect("integration descends to a scalar relation in one step", one,
               std::to_string(chain.size()) + " step(s)");
    if (one) {
        rec.equal("θ = (c^2/2) u", chain[0].right.value(), E("c^2*u/2"));
        rec.expect("difference ψ_π - θ is closed given the relation", chain[0].witness.holds);
    }
    rec.data()["ambient"] = to_json(ambient);
    rec.data()["pseudostructure"] = to_json(traj);
    rec.data()["on_pseudostructure"] = to_json(on);
    rec.data()["chain"] = to_json(chain);
}

void cauchy_riemann(Recorder &rec, const CatalogOptions &o)
{
    const Chart c({"x", "y"});
    const Expr u = E("x^2 - y^2");
    const Expr v = E("2*x*y");
    rec.expect("u_x = v_y", diff(u, "x") == diff(v, "y"));
    rec.expect("u_y = -v_x", diff(u, "y") == -diff(v, "x"));
    const DiffForm w1 = u * DiffForm::differential(c, "x") - v * DiffForm::differential(c, "y");
    const DiffForm w2 = v * DiffForm::differential(c, "x") + u * DiffForm::differential(c, "y");
    const Verdict v1 = classify(zero_lhs(w1), o.zero);
    const Verdict v2 = classify(zero_lhs(w2), o.zero);
    rec.verdict("Re(z^2 dz) = u dx - v dy is closed", v1, Classification::ClosedRhs);
    rec.verdict("Im(z^2 dz) = v dx + u dy is closed", v2, Classification::ClosedRhs);
    // conj(z)^2 is not analytic.
    const DiffForm w3 = u * DiffForm::differential(c, "x") + v * DiffForm::differential(c, "y");
    const Verdict v3 = classify(zero_lhs(w3), o.zero);
    rec.verdict("Re(conj(z)^2 dz) is not closed", v3, Classification::NonIdentical);
    rec.data()["real_part"] = to_json(v1);
    rec.data()["imaginary_part"] = to_json(v2);
    rec.data()["conjugate"] = to_json(v3);
}

void vital_force(Recorder &rec, const CatalogOptions &o)
{
    // On the energy shell T = E + U with potential U = -k(x^2 + y^2)/2.
    const Chart c({"x", "y"});
    const Expr t = E("E - k*(x^2 + y^2)/2");
    const DiffForm kinetic = DiffForm::scalar(c, t);
    const DiffForm work = parse_form("-k*x*d[x] - k*y*d[y]", c);
    const Verdict conservative = classify(Relation(kinetic, work), o.zero);
    rec.verdict("dT = X_i dx^i with X = grad U is identical", conservative, Classification::Identical);
    const DiffForm rotational = work + parse_form("-b*y*d[x] + b*x*d[y]", c);
    const Verdict forced = classify(Relation(kinetic, rotational), o.zero);
    rec.verdict("adding a rotational force makes it nonidentical", forced, Classification::NonIdentical);
    rec.equal("commutator of the rotational work form", forced.commutator, parse_form("2*b*d[x]^d[y]", c));
    rec.data()["conservative"] = to_json(conservative);
    rec.data()["rotational"] = to_json(forced);
}

void thermo_first(Recorder &rec, const CatalogOptions &o)
{
    const Chart c({"E", "V", "p"});
    const DiffForm omega = parse_form("d[E] + p*d[V]", c);
    const Verdict v = classify(zero_lhs(omega), o.zero);
    rec.verdict("dE + p dV is not a differential", v, Classification::NonIdentical);
    rec.equal("commutator dp^dV", v.commutator, parse_form("d[p]^d[V]", c));
    rec.data()["verdict"] = to_json(v);
}

void thermo_second(Recorder &rec, const CatalogOptions &o)
{
    const Chart c({"E", "V", "p", "T", "S"});
    const DiffForm entropy = DiffForm::scalar(c, E("S"));
    const DiffForm heat = parse_form("1/T*d[E] + p/T*d[V]", c);
    const Relation r(entropy, heat);
    const Verdict ambient = classify(r, o.zero);
    rec.verdict("dS = (dE + p dV)/T off the state surface is nonidentical", ambient, Classification::NonIdentical);
    // Ideal gas: E = cv T, p V = R T, S = cv ln T + R ln V.
    const Pseudostructure gas(c, Chart({"T", "V"}),
                              {E("cv*T"), E("V"), E("R*T/V"), E("T"), E("cv*ln(T) + R*ln(V)")}, o.zero);
    const Verdict on = classify_on(r, gas, o.zero);
    rec.verdict("on the ideal-gas state surface the relation is identical", on, Classification::Identical);
    rec.expect("heat form divided by T is closed on the state surface", on.pi_closure.value_or(false));
    rec.data()["ambient"] = to_json(ambient);
    rec.data()["pseudostructure"] = to_json(gas);
    rec.data()["on_pseudostructure"] = to_json(on);
}

void legendre(Recorder &rec, const CatalogOptions &o)
{
    const Expr lagrangian = E("qdot^2/2 - (k*q^2/2 + q^4/4)");
    const LegendreResult one = legendre_transform(lagrangian, {"qdot"}, {"p"}, o.scan);
    rec.equal("p = qdot", one.momenta[0], E("qdot"));
    rec.equal("degeneracy = 1", one.degeneracy, Expr(1));
    const bool has_h = rec.expect("Hamiltonian exists", one.hamiltonian.has_value());
    if (has_h) {
        rec.equal("H = p^2/2 + V(q)", *one.hamiltonian, E("p^2/2 + k*q^2/2 + q^4/4"));
    }

    const Expr coupled = E("(a^2 + a*b + b^2)/2 - x*y");
    const LegendreResult two = legendre_transform(coupled, {"a", "b"}, {"pa", "pb"}, o.scan);
    rec.equal("two degrees of freedom: degeneracy = 3/4", two.degeneracy, E("3/4"));
    if (rec.expect("two degrees of freedom: Hamiltonian exists", two.hamiltonian.has_value())) {
        // ∂H/∂p_j evaluated at p = ∂L/∂q̇ gives back q̇_j.
        const std::map<std::string, Expr> back{{"pa", two.momenta[0]}, {"pb", two.momenta[1]}};
        rec.equal("dH/dpa = a", subs(diff(*two.hamiltonian, "pa"), back), E("a"));
        rec.equal("dH/dpb = b", subs(diff(*two.hamiltonian, "pb"), back), E("b"));
        rec.data()["coupled_hamiltonian"] = two.hamiltonian->str();
    }

    const CanonicalResult swap = canonical_check({"q"}, {"p"}, {E("p")}, {E("-q")}, o.zero);
    rec.expect("Q = p, P = -q is canonical", swap.is_canonical.holds, "σ = " + swap.sigma.str());
    if (rec.expect("generating function recovered", swap.generating_function.has_value())) {
        rec.equal("W = p q", *swap.generating_function, E("p*q"));
    }
    rec.data()["hamiltonian"] = one.hamiltonian ? Json(one.hamiltonian->str()) : Json(nullptr);
    rec.data()["sigma"] = to_json(swap.sigma);
}

void legendre_degenerate(Recorder &rec, const CatalogOptions &o)
{
    const LegendreResult r = legendre_transform(E("qdot^3/3"), {"qdot"}, {"p"}, o.scan);
    rec.equal("degeneracy = 2 qdot", r.degeneracy, E("2*qdot"));
    rec.expect("elimination refused", !r.hamiltonian.has_value());
    const bool has_locus = rec.expect("locus report produced", r.locus.has_value() && !r.locus->points.empty());
    if (has_locus) {
        double worst = 0;
        for (const auto &pt : r.locus->points) {
            worst = std::max(worst, std::fabs(2 * pt[0]));
        }
        rec.expect("every locus point has |2 qdot| < 1e-9", worst < 1e-9, "max |2 qdot| = " + fmt(worst));
        rec.data()["locus"] = to_json(*r.locus);
    }
    bool refused = false;
    std::string why;
    try {
        legendre_transform(E("qdot"), {"qdot"}, {"p"}, o.scan);
    } catch (const PreconditionError &e) {
        refused = true;
        why = e.what();
    }
    rec.expect("linear Lagrangian is totally degenerate", refused, why);
}

void canonical_transformations(Recorder &rec, const CatalogOptions &o)
{
    const CanonicalResult swap = canonical_check({"q"}, {"p"}, {E("p")}, {E("-q")}, o.zero);
    rec.expect("Q = p, P = -q is canonical", swap.is_canonical.holds);
    rec.expect("W = p q", swap.generating_function && *swap.generating_function == E("p*q"));
    const CanonicalResult id = canonical_check({"q"}, {"p"}, {E("q")}, {E("p")}, o.zero);
    rec.expect("identity is canonical with σ = 0", id.is_canonical.holds && id.sigma.is_zero());
    rec.expect("identity has W = 0", id.generating_function && id.generating_function->is_zero());
    const CanonicalResult sq = canonical_check({"q"}, {"p"}, {E("q^2")}, {E("p")}, o.zero);
    rec.expect("Q = q^2, P = p is not canonical", !sq.is_canonical.holds);
    rec.equal("dσ = (1 - 2q) dp^dq", ext_d(sq.sigma), parse_form("(1 - 2*q)*d[p]^d[q]", sq.sigma.chart()));
    Json cases = Json::array();
    for (const auto *r : {&swap, &id, &sq}) {
        cases.push_back(Json{{"sigma", to_json(r->sigma)},
                             {"is_canonical", to_json(r->is_canonical)},
                             {"generating_function", r->generating_function ? Json(r->generating_function->str())
                                                                            : Json(nullptr)}});
    }
    rec.data()["cases"] = cases;
}

void poisson_scan(Recorder &rec, const CatalogOptions &o)
{
    const Chart c({"q", "p"});
    const std::vector<std::pair<std::string, std::string>> pairs{{"q", "p"}};
    const LocusReport r = degenerate_scan({ScanKind::Poisson, {E("q^2 + p^2"), E("q*p")}, {}, pairs}, c, o.scan);
    rec.equal("{q^2 + p^2, q p} = 2(q^2 - p^2)", r.functional, E("2*(q^2 - p^2)"));
    double worst = 0;
    for (const auto &pt : r.points) {
        worst = std::max(worst, std::fabs(std::fabs(pt[0]) - std::fabs(pt[1])));
    }
    rec.expect("degenerate locus lies on |q| = |p|", !r.points.empty() && worst < 1e-6,
               std::to_string(r.points.size()) + " points, max ||q| - |p|| = " + fmt(worst));
    rec.equal("{q, p} = 1", poisson_bracket(E("q"), E("p"), pairs), Expr(1));
    const LocusReport self = degenerate_scan({ScanKind::Poisson, {E("q^2*p"), E("q^2*p")}, {}, pairs}, c, o.scan);
    rec.expect("{f, f} vanishes identically", self.identically_zero);
    rec.data()["locus"] = to_json(r);
}

void green_stokes(Recorder &rec, const CatalogOptions &o)
{
    struct Case {
        const char *label;
        const char *P;
        const char *Q;
        double exact;
    };
    const Case cases[] = {
        {"P = -y, Q = x", "-y", "x", 2.0},
        {"P = x^2, Q = y^2", "x^2", "y^2", 0.0},
        {"P = -y^3, Q = x^3", "-y^3", "x^3", 2.0},
    };
    Json out = Json::array();
    for (const auto &k : cases) {
        const GreenResult g = green_check(E(k.P), E(k.Q), o.grid_n);
        rec.near(std::string(k.label) + ": circulation", g.circulation, k.exact, o.tolerance);
        rec.near(std::string(k.label) + ": area integral", g.area_integral, k.exact, o.tolerance);
        out.push_back(Json{{"P", k.P},
                           {"Q", k.Q},
                           {"grid_n", o.grid_n},
                           {"circulation", g.circulation},
                           {"area_integral", g.area_integral},
                           {"abs_diff", g.abs_diff}});
    }
    rec.data()["cases"] = out;
}

void bianchi_first(Recorder &rec, const CatalogOptions &o)
{
    const Chart c({"x", "y"});
    const Connection sphere = christoffel(Metric::diagonal(c, {Expr(1), E("sin(x)^2")}));
    rec.expect("Levi-Civita connection of the sphere is torsion-free", is_zero(torsion(sphere), o.zero).holds);
    const ExprArray r = riemann(sphere);
    rec.expect("R^x_{yxy} = sin(x)^2", is_zero(r.at({0, 1, 0, 1}) - E("sin(x)^2"), o.zero).holds,
               "got " + r.at({0, 1, 0, 1}).str());
    const Decision b = bianchi_first_check(sphere, o.zero);
    rec.expect("cyclic sum vanishes on the sphere", b.holds);

    const Chart c3({"x", "y", "z"});
    const Connection poly = Connection::from_entries(
        c3, {{"x", "x", "y", "y*z"}, {"x", "y", "x", "y*z"}, {"y", "z", "z", "x^2"}, {"z", "x", "z", "x - y"},
             {"z", "z", "x", "x - y"}, {"y", "y", "y", "z^3"}});
    rec.expect("cyclic sum vanishes for a symmetric polynomial connection", bianchi_first_check(poly, o.zero).holds);

    bool refused = false;
    try {
        bianchi_first_check(Connection::from_entries(c, {{"x", "y", "x", "x"}}), o.zero);
    } catch (const PreconditionError &) {
        refused = true;
    }
    rec.expect("torsion makes the first identity inapplicable", refused);
    rec.data()["sphere_connection"] = to_json(sphere);
}

void torsion_commutator(Recorder &rec, const CatalogOptions &o)
{
    const Chart c({"x", "y"});
    const Connection twisted = Connection::from_entries(c, {{"x", "y", "x", "x"}});
    const DiffForm a = parse_form("y*d[x]", c);
    const ExprMatrix k = evo_commutator(a, twisted);
    rec.equal("K_xy = -1 + x y", k(0, 1), E("-1 + x*y"));
    rec.equal("evolutionary differential (x y - 1) dx^dy", evo_d(a, twisted), parse_form("(x*y - 1)*d[x]^d[y]", c));
    rec.expect("evolutionary differential does not vanish", !is_zero(evo_d(a, twisted), o.zero).holds);
    const Connection sym = Connection::from_entries(c, {{"x", "y", "x", "x"}, {"x", "x", "y", "x"}});
    rec.expect("symmetric connection reduces to the ordinary commutator", evo_commutator(a, sym) == commutator1(a));
    rec.data()["commutator"] = to_json(k);
    rec.data()["torsion_connection"] = to_json(twisted);
}

void hodge_operators(Recorder &rec, const CatalogOptions &o)
{
    const Chart tx({"t", "x"});
    const Chart xy({"x", "y"});
    const Metric mink = Metric::minkowski(tx);
    const Metric eucl = Metric::euclidean(xy);
    const DiffForm wave = DiffForm::scalar(tx, E("t^2 - x^2"));
    const DiffForm bowl = DiffForm::scalar(xy, E("x^2 + y^2"));
    rec.equal("laplacian of t^2 - x^2 (Minkowski)", laplacian(wave, mink).value(), Expr(4));
    rec.equal("laplacian of x^2 + y^2 (Euclidean)", laplacian(bowl, eucl).value(), Expr(4));
    rec.equal("Hodge-sign laplacian of x^2 + y^2", laplacian(bowl, eucl, LaplacianConvention::Hodge).value(),
              Expr(-4));
    const DiffForm radial = parse_form("x*d[x] + y*d[y]", xy);
    rec.equal("δ(x dx + y dy) = -2", codifferential(radial, eucl).value(), Expr(-2));
    rec.equal("⋆(x dx + y dy) = x dy - y dx", hodge_star(radial, eucl), parse_form("x*d[y] - y*d[x]", xy));
    rec.expect("dual of the radial form is not closed", !dual_closure_check(radial, eucl, o.zero).holds);
    rec.equal("⋆dt = dx (Minkowski)", hodge_star(DiffForm::differential(tx, "t"), mink),
              DiffForm::differential(tx, "x"));
    rec.data()["laplacian_wave"] = laplacian(wave, mink).value().str();
    rec.data()["laplacian_bowl"] = laplacian(bowl, eucl).value().str();
}

struct EntryDef {
    const char *name;
    const char *title;
    const char *note;
    void (*run)(Recorder &, const CatalogOptions &);
};

const EntryDef kEntries[] = {
    {"poincare-invariant", "Poincare invariant and its trajectory",
     "ds = p dq - H dt with H = p^2/2 is nonidentical in phase space and becomes closed on the characteristic "
     "t = u, q = c u, p = c.",
     poincare_invariant},
    {"cauchy-riemann", "Cauchy-Riemann conditions",
     "Real and imaginary parts of z^2 dz are closed forms; conj(z)^2 dz is not.", cauchy_riemann},
    {"vital-force", "Vital force theorem",
     "Kinetic energy on the energy shell with a potential force is an identical relation; a rotational force "
     "breaks it.",
     vital_force},
    {"thermo-first-principle", "First principle of thermodynamics",
     "dE + p dV is not the differential of a state function.", thermo_first},
    {"thermo-second-principle", "Second principle of thermodynamics",
     "dS = (dE + p dV)/T holds identically on the ideal-gas state surface E = cv T, p V = R T.", thermo_second},
    {"legendre", "Lagrange to Hamilton", "Legendre transformation for regular Lagrangians.", legendre},
    {"legendre-degenerate", "Degenerate Legendre transformation",
     "L = qdot^3/3 has a Hessian vanishing at qdot = 0; L = qdot admits no Hamiltonian.", legendre_degenerate},
    {"canonical-transformations", "Canonical transformations",
     "p dq = P dQ + dW decides canonicity and recovers the generating function.", canonical_transformations},
    {"poisson-scan", "Poisson bracket degeneracy",
     "The bracket of q^2 + p^2 and q p vanishes on |q| = |p|.", poisson_scan},
    {"green-stokes", "Green's theorem on the unit square",
     "Boundary circulation against the area integral of the curl, composite Simpson.", green_stokes},
    {"bianchi-first", "First Bianchi identity", "Cyclic sum of the Riemann tensor for torsion-free connections.",
     bianchi_first},
    {"torsion-commutator", "Commutator with torsion",
     "The evolutionary commutator carries the torsion term and reduces to the ordinary one without it.",
     torsion_commutator},
    {"hodge-operators", "Star, codifferential and Laplacian",
     "Laplace and d'Alembert operators from d and the Hodge star.", hodge_operators},
};

} // namespace

std::vector<CatalogEntryInfo> catalog_entries()
{
    std::vector<CatalogEntryInfo> out;
    for (const auto &e : kEntries) {
        out.push_back({e.name, e.title});
    }
    return out;
}

EntryReport run_entry(const std::string &name, const CatalogOptions &opts)
{
    for (const auto &e : kEntries) {
        if (name != e.name) {
            continue;
        }
        EntryReport report{e.name, e.title, e.note, {}, Json::object()};
        Recorder rec(report);
        try {
            e.run(rec, opts);
        } catch (const Error &err) {
            rec.expect("entry completed", false, err.what());
        }
        return report;
    }
    throw UnknownEntryError("unknown catalog entry '" + name + "'");
}

std::vector<EntryReport> run_all(const CatalogOptions &opts)
{
    std::vector<std::future<EntryReport>> jobs;
    for (const auto &e : kEntries) {
        jobs.push_back(std::async(std::launch::async, [name = std::string(e.name), opts] { return run_entry(name, opts); }));
    }
    std::vector<EntryReport> out;
    for (auto &j : jobs) {
        out.push_back(j.get());
    }
    return out;
}

} // namespace skewform
