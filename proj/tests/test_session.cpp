#include "skewform/parser.hpp"
#include "skewform/session.hpp"
#include "support/generators.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace skewform;

namespace {

std::string slurp(const std::filesystem::path &p)
{
    std::ifstream in(p);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

SessionError error_of(const std::string &src)
{
    try {
        parse_session(src);
    } catch (const SessionError &e) {
        return e;
    }
    ADD_FAILURE() << "no error for:\n" << src;
    return SessionError("", 0, 0);
}

} // namespace

TEST(Session, GrammarDemo)
{
    const Session s = parse_session("chart t q p\nform omega = p*d[q] - (p^2/2)*d[t]\nclassify 0 => omega");
    ASSERT_EQ(s.statements.size(), 3U);
    EXPECT_EQ(s.command_count(), 1U);
    const auto &cmd = std::get<ClassifyCmd>(s.statements[2].statement);
    EXPECT_EQ(cmd.relation.relation.psi().degree(), 0);
    EXPECT_TRUE(cmd.relation.relation.psi().is_zero());
    EXPECT_EQ(cmd.relation.rhs.text, "omega");

    const SessionReport r = run_session(s);
    ASSERT_EQ(r.results.size(), 1U);
    EXPECT_TRUE(r.ok());
    EXPECT_EQ(to_json(r)["results"][0]["data"]["verdict"]["classification"], "NONIDENTICAL");
}

TEST(Session, UndeclaredReference)
{
    const SessionError e = error_of("chart t q p\n\nclassify 0 => omeg");
    EXPECT_EQ(e.line(), 3U);
    EXPECT_EQ(e.column(), 15U);
    EXPECT_NE(e.detail().find("omeg"), std::string::npos);

    EXPECT_EQ(error_of("form a = d[x]").detail(), "no chart declared yet");
    EXPECT_EQ(error_of("chart x y\nclassify r").line(), 2U);
    EXPECT_EQ(error_of("chart x y\nform a = d[x]\nform a = d[y]").column(), 6U);
    EXPECT_EQ(error_of("chart x y\nfrob").detail(), "unknown statement 'frob'");
    EXPECT_EQ(error_of("chart x on").detail(), "'on' is a reserved word");
    EXPECT_EQ(error_of("chart x y\nclassify 0 => d[x] expect MAYBE").column(), 27U);
    EXPECT_EQ(error_of("chart x y\ncatalog eikonal").column(), 9U);
}

TEST(Session, DimensionMismatchAtDeclaration)
{
    EXPECT_NE(error_of("chart x y\nmetric g = diag(1, 1, 1)").detail().find("2 entries"), std::string::npos);
    EXPECT_NE(error_of("chart x y\npseudo s(u): x = u").detail().find("'y'"), std::string::npos);
    EXPECT_NE(error_of("chart x y\npseudo s(u, v): x = u, y = v").detail().find("below ambient dimension"), std::string::npos);
    EXPECT_NE(error_of("chart x y\nrelation r: d[x] => d[y]").detail().find("deg ω"), std::string::npos);
    EXPECT_NE(error_of("chart x y\nconnection G: (z; x, y) = 1").detail().find("'z'"), std::string::npos);
}

TEST(Session, Pseudostructure)
{
    const Session s = parse_session("chart t q p\npseudo traj(u,c): t=u, q=c*u, p=c");
    const auto &d = std::get<PseudoDecl>(s.statements[1].statement);
    EXPECT_EQ(d.pseudo.params().dim(), 2U);
    EXPECT_EQ(d.pseudo.ambient().dim(), 3U);
    EXPECT_EQ(d.pseudo.map()[1], parse("c*u"));
}

TEST(Session, ExpectationsDriveTheOutcome)
{
    const Session s = parse_session("chart x y\n"
                                    "form w = -y*d[x] + x*d[y]\n"
                                    "classify 0 => w expect IDENTICAL\n"
                                    "check closed w expect false\n"
                                    "check closed w\n");
    const SessionReport r = run_session(s);
    ASSERT_EQ(r.results.size(), 3U);
    EXPECT_FALSE(r.results[0].ok);
    EXPECT_TRUE(r.results[1].ok);
    EXPECT_FALSE(r.results[2].ok);
    EXPECT_FALSE(r.ok());
}

TEST(Session, CommandErrorsAreReported)
{
    const Session s = parse_session("chart x y\nform w = -y*d[x] + x*d[y]\nchain 0 => w\ncheck closed w expect false");
    const SessionReport r = run_session(s);
    ASSERT_EQ(r.results.size(), 2U);
    EXPECT_FALSE(r.results[0].ok);
    EXPECT_NE(r.results[0].error.find("not closed"), std::string::npos);
    EXPECT_TRUE(r.results[1].ok);
}

TEST(Session, SeedDeterminism)
{
    const std::string src = "chart q p\nscan poisson q^2 + p^2, q*p pairs q:p\ncatalog all\n";
    RunOptions o;
    o.set_seed(7);
    const Session s = parse_session(src);
    EXPECT_EQ(to_json(run_session(s, o)).dump(), to_json(run_session(parse_session(src), o)).dump());
}

TEST(Session, SamplesRunClean)
{
    std::size_t seen = 0;
    for (const auto &entry : std::filesystem::directory_iterator(SKEWFORM_SAMPLES_DIR)) {
        if (entry.path().extension() != ".skf") {
            continue;
        }
        ++seen;
        const Session s = parse_session(slurp(entry.path()));
        const SessionReport r = run_session(s);
        EXPECT_TRUE(r.ok()) << entry.path() << "\n" << to_text(r);
        const std::string printed = print_session(s);
        EXPECT_EQ(print_session(parse_session(printed)), printed) << entry.path();
    }
    EXPECT_GE(seen, 3U);
}

// --- round trip on generated sessions ----------------------------------------------

TEST(SessionProperties, PrintParseRoundTrip)
{
    proptest::Gen gen(61);
    for (int i = 0; i < 60; ++i) {
        const std::size_t n = static_cast<std::size_t>(gen.uniform(2, 4));
        const Chart chart = proptest::chart_of_dim(n);
        std::ostringstream src;
        src << "chart";
        for (const auto &v : chart.vars()) {
            src << " " << v;
        }
        src << "\nparam k\n";
        const int p = static_cast<int>(gen.uniform(1, static_cast<long>(n) - 1));
        const DiffForm psi = gen.form(chart, p - 1, 2, 2);
        // A bare 0 always reads back as a 0-form, so keep the right side nonzero.
        DiffForm omega = gen.coin() ? ext_d(psi) : gen.form(chart, p, 2, 2);
        while (omega.is_zero()) {
            omega = gen.form(chart, p, 2, 2);
        }
        src << "form psi = " << psi.str() << "\n";
        src << "form omega = k*(" << omega.str() << ")\n";
        src << "relation r: psi => omega\n";
        src << "pseudo s(u): ";
        for (std::size_t j = 0; j < n; ++j) {
            src << (j ? ", " : "") << chart.var(j) << " = " << (j == 0 ? "u" : gen.poly({"u"}, 2, 2).str());
        }
        src << "\nclassify r on s\nclassify psi => omega expect " << (gen.coin() ? "IDENTICAL" : "NONIDENTICAL")
            << "\ncheck closed omega expect " << (gen.coin() ? "true" : "false") << "\n";
        src << "metric g = diag(";
        for (std::size_t j = 0; j < n; ++j) {
            src << (j ? ", " : "") << (gen.coin() ? "1" : "-1");
        }
        src << ")\ncheck dual omega under g\n";
        src << "connection G: (" << chart.var(0) << "; " << chart.var(1) << ", " << chart.var(0)
            << ") = " << gen.poly(chart.vars(), 2, 2).str() << "\n";
        src << "check torsion-free G\nscan jacobian ";
        for (std::size_t j = 0; j < n; ++j) {
            src << (j ? ", " : "") << gen.poly(chart.vars(), 2, 2).str();
        }
        src << "\n";

        const Session s = parse_session(src.str());
        const std::string printed = print_session(s);
        const Session again = parse_session(printed);
        EXPECT_EQ(print_session(again), printed) << src.str();
        ASSERT_EQ(again.statements.size(), s.statements.size());
        const auto &r1 = std::get<RelationDecl>(s.statements[4].statement).relation;
        const auto &r2 = std::get<RelationDecl>(again.statements[4].statement).relation;
        EXPECT_EQ(r1.psi(), r2.psi());
        EXPECT_EQ(r1.omega(), r2.omega());
    }
}
