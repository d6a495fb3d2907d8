#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>
#include <json.hpp>

#include <cstdlib>

#include "pfaffkit/commands.hpp"
#include "pfaffkit/parallel.hpp"
#include "pfaffkit/session.hpp"
#include "test_support.hpp"

using namespace pfk;
using json = nlohmann::json;

namespace {

const char* kDiag =
    "vars x, y;\n"
    "field X = [x, 2*y];\n"
    "foliation F = {X};\n"
    "system V = monomials(deg=1);\n"
    "poly f = x*y;\n"
    "poly g = x + y;\n";

const char* kRadial =
    "vars x, y;\n"
    "field R = [x, y];\n"
    "foliation F = {R};\n"
    "system V = {x, y};\n"
    "poly f = x;\n"
    "poly g = y;\n"
    "form w = y dx + x dy;\n"
    "poly h = x*y - 1;\n"
    "poly q = x + y;\n";

const char* kLog3 =
    "mode projective;\n"
    "vars x0..x2;\n"
    "form w = (x1*x2) dx0 + (x0*x2) dx1 - 2*x0*x1 dx2;\n"
    "poly f0 = x0;\n"
    "poly f1 = x1;\n"
    "poly f2 = x2;\n";

CommandRequest request(std::string cmd, const char* session) {
    CommandRequest r;
    r.command = std::move(cmd);
    r.session_text = session;
    r.input_path = "session.pfk";
    return r;
}

json payload_of(const Report& rep) { return json::parse(rep.text).at("payload"); }

const TypedSession<Rat>& rat_session(const Session& s) {
    return std::get<TypedSession<Rat>>(s);
}

Polynomial<Rat> qvar(std::size_t n, std::size_t i) {
    return Polynomial<Rat>::variable(n, i, Rat(1));
}

}  // namespace

TEST_CASE("session text lowers to the declared objects") {
    Session s = parse_input("vars x, y; poly f = x*y;");
    const auto& t = rat_session(s);
    CHECK(t.mode == Mode::affine);
    CHECK(t.prime == 0);
    CHECK(t.vars == std::vector<std::string>{"x", "y"});
    CHECK(t.polys.at("f") == qvar(2, 0) * qvar(2, 1));

    Session s2 = parse_input("vars x, y; field X = [x, 2*y];");
    const auto& t2 = rat_session(s2);
    std::vector<Polynomial<Rat>> comps{qvar(2, 0), qvar(2, 1).scaled(Rat(2))};
    CHECK(t2.fields.at("X") == VectorField<Rat>(comps));

    // ranges, comments, whitespace insensitivity, powers, rational literals
    Session s3 = parse_input(
        "vars x0..x3;  # four coordinates\n"
        "poly p =x0^2*x1   - 3/2*x3+ 1;\n");
    const auto& t3 = rat_session(s3);
    CHECK(t3.vars.size() == 4);
    Polynomial<Rat> expect = qvar(4, 0) * qvar(4, 0) * qvar(4, 1) -
                             qvar(4, 3).scaled(Rat(3, 2)) +
                             Polynomial<Rat>::constant(4, Rat(1));
    CHECK(t3.polys.at("p") == expect);

    // explicit and monomial linear systems, foliations, forms
    Session s4 = parse_input(kRadial);
    const auto& t4 = rat_session(s4);
    CHECK(t4.systems.at("V").dim() == 2);
    CHECK(t4.foliations.at("F").rank() == 1);
    CHECK(t4.forms.at("w").degree() == 1);
    Session s5 = parse_input(kDiag);
    CHECK(rat_session(s5).systems.at("V").dim() == 3);
}

TEST_CASE("malformed input reports the offending position") {
    try {
        parse_input("vars x0..x2;\nform w = (x1*x2) dx0 ^? ;\n");
        FAIL("expected parse_error");
    } catch (const parse_error& e) {
        CHECK(e.line() == 2);
        CHECK(e.col() == 23);
        CHECK(std::string(e.what()).find("unexpected character '?'") != std::string::npos);
    }

    auto fails_with = [](const char* text, const char* needle) {
        try {
            parse_input(text);
            return std::string("no error for: ") + text;
        } catch (const parse_error& e) {
            if (std::string(e.what()).find(needle) == std::string::npos)
                return std::string("wrong message: ") + e.what();
            return std::string();
        }
    };
    CHECK(fails_with("vars x; poly f = x + z;", "undeclared name 'z'") == "");
    CHECK(fails_with("vars x, y; field X = [x];", "variable count mismatch") == "");
    CHECK(fails_with("vars x; poly x = 1;", "already declared") == "");
    CHECK(fails_with("vars x; poly f = x; poly f = x;", "already declared") == "");
    CHECK(fails_with("vars x; poly mod = x;", "reserved word") == "");
    CHECK(fails_with("vars x; poly dx = x;", "collides with a differential") == "");
    CHECK(fails_with("vars x; poly f = x; foliation F = {f};", "'f' is not a field") == "");
    CHECK(fails_with("vars x; vars y;", "vars already declared") == "");
    CHECK(fails_with("vars x; poly f = x; vars y;", "must precede") == "");
    CHECK(fails_with("vars x; poly f = x; mode affine;", "must precede") == "");
    CHECK(fails_with("vars x, y; form w = x;", "expected a differential") == "");
    CHECK(fails_with("vars x, y; form w = dx - dx;", "identically zero") == "");
    CHECK(fails_with("vars x, y; form w = dx ^ dx;", "repeated differential") == "");
    CHECK(fails_with("vars x, y; form w = dx + dx ^ dy;", "must use 1 differentials") == "");
    CHECK(fails_with("vars x; poly f = 1/0;", "division by zero") == "");
    CHECK(fails_with("vars x; poly f = x; system V = {x, 2*x};", "linearly dependent") == "");
    CHECK(fails_with("mode projective; vars x, y; form w = x dx + dy;",
                     "homogeneous coefficients") == "");
    CHECK(fails_with("mode projective; vars x, y; field X = [1, y]; foliation F = {X};",
                     "homogeneous") == "");
    CHECK(fails_with("vars x, y; field X = [x, y]; foliation F = {X} projective;",
                     "conflicts with the session mode") == "");
    CHECK(fails_with("domain mod 4; vars x; poly f = x;", "prime") == "");
    CHECK(fails_with("domain mod 7; vars x; poly f = 1/7*x;", "denominator divisible") == "");
    CHECK(fails_with("vars x; poly f = ;", "expected a number, a name, or '('") == "");
    CHECK(fails_with("frobnicate;", "unknown statement") == "");
}

TEST_CASE("mod-p sessions reduce literals into the prime field") {
    Session s = parse_input("domain mod 7; vars x; poly f = 10*x + 1/3;");
    const auto& t = std::get<TypedSession<Fp>>(s);
    CHECK(t.prime == 7);
    Polynomial<Fp> expect =
        Polynomial<Fp>::variable(1, 0, Fp(3, 7)) + Polynomial<Fp>::constant(1, Fp(5, 7));
    CHECK(t.polys.at("f") == expect);
}

TEST_CASE("printing a session and reparsing it reproduces every object") {
    auto roundtrip = [](const char* text) {
        Session a = parse_input(text);
        std::visit(
            [&](const auto& ta) {
                Session b = parse_input(session_text(ta));
                const auto& tb = std::get<std::decay_t<decltype(ta)>>(b);
                CHECK(ta.vars == tb.vars);
                CHECK(ta.mode == tb.mode);
                CHECK(ta.prime == tb.prime);
                CHECK(ta.polys == tb.polys);
                CHECK(ta.fields == tb.fields);
                CHECK(ta.forms == tb.forms);
                REQUIRE(ta.systems.size() == tb.systems.size());
                for (const auto& [name, sys] : ta.systems)
                    CHECK(sys.basis() == tb.systems.at(name).basis());
                REQUIRE(ta.foliations.size() == tb.foliations.size());
                for (const auto& [name, fol] : ta.foliations)
                    CHECK(fol.generators() == tb.foliations.at(name).generators());
                // and the printed text itself is a fixed point
                CHECK(session_text(ta) == session_text(tb));
            },
            a);
    };
    roundtrip(kDiag);
    roundtrip(kRadial);
    roundtrip(kLog3);
    roundtrip("domain mod 5; vars x, y; poly f = 3*x^2 + 4*y; field X = [2*x, y];");

    // seeded random polynomials and forms survive the print/parse cycle
    Rng rng(0x636c6931ULL);
    for (int trial = 0; trial < 12; ++trial) {
        Polynomial<Rat> p = testing::random_rat_poly(rng, 3, 3, 5);
        Polynomial<Rat> q =
            testing::nonzero([&] { return testing::random_rat_poly(rng, 3, 2, 4); });
        DifferentialForm<Rat> w(3, 2);
        w.add_term({0, 1}, p);
        w.add_term({1, 2}, q);
        if (w.is_zero()) continue;
        std::string text = "vars y0..y2;\npoly a = " + p.str({"y0", "y1", "y2"}) +
                           ";\npoly b = " + q.str({"y0", "y1", "y2"}) +
                           ";\nform w = " + w.str({"y0", "y1", "y2"}) + ";\n";
        Session ses = parse_input(text);
        const auto& t = rat_session(ses);
        CHECK(t.polys.at("a") == p);
        CHECK(t.polys.at("b") == q);
        CHECK(t.forms.at("w") == w);
    }
    for (int trial = 0; trial < 6; ++trial) {
        Polynomial<Fp> p = testing::random_fp_poly(rng, 2, 3, 4, 11);
        std::string text =
            "domain mod 11; vars u, v; poly a = " + p.str({"u", "v"}) + ";";
        Session ses = parse_input(text);
        const auto& t = std::get<TypedSession<Fp>>(ses);
        CHECK(t.polys.at("a") == p);
    }
}

TEST_CASE("run_command reproduces the worked subcommand examples") {
    CommandRequest ex = request("extactic", kDiag);
    ex.foliation = "F";
    ex.system = "V";
    Report r1 = run_command(ex);
    CHECK(r1.status == "ok");
    CHECK(r1.exit_code == 0);
    CHECK(payload_of(r1).at("extactic") == "2*x*y");
    CHECK(payload_of(r1).at("degree") == "2");

    CommandRequest bd;
    bd.command = "bounds";
    bd.formula = "jpaa";
    bd.n = 2;
    bd.r = 1;
    bd.d = 2;
    Report r2 = run_command(bd);
    CHECK(r2.exit_code == 0);
    CHECK(payload_of(r2).at("value") == "5");

    CommandRequest fi = request("first-integral", kRadial);
    fi.foliation = "F";
    fi.system = "V";
    Report r3 = run_command(fi);
    CHECK(r3.status == "ok");
    CHECK(payload_of(r3).at("candidates").at(0).at("value") == "-y/x");
    CHECK(payload_of(r3).at("candidates").at(0).at("verified") == true);
    CHECK(payload_of(r3).at("rank") == "1");
}

TEST_CASE("check-invariant certifies, refuses, and errors with the right codes") {
    CommandRequest ok = request("check-invariant", kDiag);
    ok.poly = "f";
    ok.foliation = "F";
    Report r = run_command(ok);
    CHECK(r.exit_code == 0);
    CHECK(payload_of(r).at("kind") == "foliation_cofactors");
    CHECK(payload_of(r).at("cofactors") == json::array({"3"}));
    CHECK(payload_of(r).at("verified") == true);

    CommandRequest refused = ok;
    refused.poly = "g";
    Report r2 = run_command(refused);
    CHECK(r2.status == "refused");
    CHECK(r2.exit_code == 2);
    CHECK(std::string(payload_of(r2).at("reason")).find("generator") != std::string::npos);

    // pfaff target: x is invariant for y dx + x dy, w ^ dx = x * (-dx^dy)
    CommandRequest pf = request("check-invariant", kRadial);
    pf.poly = "f";
    pf.form = "w";
    Report r3 = run_command(pf);
    CHECK(r3.exit_code == 0);
    CHECK(payload_of(r3).at("kind") == "pfaff_quotient");
    CHECK(payload_of(r3).at("quotient") == "-dx^dy");

    CommandRequest both = ok;
    both.form = "w";
    Report r4 = run_command(both);
    CHECK(r4.exit_code == 1);
    CHECK(payload_of(r4).at("code") == "usage");

    CommandRequest missing = ok;
    missing.poly = "nope";
    Report r5 = run_command(missing);
    CHECK(r5.exit_code == 1);
    CHECK(payload_of(r5).at("code") == "usage");

    CommandRequest broken = ok;
    broken.session_text = "vars x; poly f = (x;";
    Report r6 = run_command(broken);
    CHECK(r6.exit_code == 1);
    CHECK(payload_of(r6).at("code") == "parse");
    CHECK(std::string(payload_of(r6).at("message")).find("line") != std::string::npos);

    CommandRequest unknown;
    unknown.command = "frobnicate";
    Report r7 = run_command(unknown);
    CHECK(r7.exit_code == 1);
    CHECK(payload_of(r7).at("code") == "usage");
}

TEST_CASE("full-rank systems are refused by first-integral") {
    CommandRequest fi = request("first-integral", kDiag);
    fi.foliation = "F";
    fi.system = "V";
    Report r = run_command(fi);
    CHECK(r.status == "refused");
    CHECK(r.exit_code == 2);
    CHECK(std::string(payload_of(r).at("reason")).find("full rank") != std::string::npos);
    CHECK(payload_of(r).at("rank") == "3");
}

TEST_CASE("log-certificate surfaces lambdas, candidates, and the ratio path") {
    CommandRequest lc = request("log-certificate", kRadial);
    lc.form = "w";
    lc.invariants = {"f", "g"};
    Report r = run_command(lc);
    CHECK(r.exit_code == 0);
    json p = payload_of(r);
    CHECK(p.at("lambdas") == json::array({json::array({"1", "1"})}));
    CHECK(p.at("candidates").at(0).at("value") == "x*y");
    CHECK(p.at("candidates").at(0).at("verified") == true);
    CHECK(p.at("first_integral_regime") == false);
    CHECK(p.count("ratio") == 0);

    // with xy - 1 added the lambda space gains a dimension and a ratio appears
    CommandRequest lc3 = lc;
    lc3.invariants = {"f", "g", "h"};
    Report r2 = run_command(lc3);
    CHECK(r2.exit_code == 0);
    json p2 = payload_of(r2);
    CHECK(p2.at("first_integral_regime") == true);
    CHECK(p2.at("lambdas").size() == 2);
    REQUIRE(p2.count("ratio") == 1);
    CHECK(p2.at("ratio").at("verified") == true);
    CHECK(p2.at("ratio").at("value") == "x*y/(x*y - 1)");

    // the projective logarithmic form pins lambda = (1, 1, -2)
    CommandRequest lg = request("log-certificate", kLog3);
    lg.form = "w";
    lg.invariants = {"f0", "f1", "f2"};
    json p3 = payload_of(run_command(lg));
    CHECK(p3.at("lambdas") == json::array({json::array({"1", "1", "-2"})}));
    CHECK(p3.at("candidates").at(0).at("value") == "x0*x1/x2^2");

    // a non-invariant member refuses the whole request
    CommandRequest bad = lc;
    bad.invariants = {"f", "q"};
    Report r3 = run_command(bad);
    CHECK(r3.exit_code == 2);
    CHECK(std::string(payload_of(r3).at("reason")).find("'q' is not invariant") !=
          std::string::npos);
}

TEST_CASE("census runs over mod-p sessions and reduced rational sessions") {
    const char* modp =
        "domain mod 5;\n"
        "vars x, y;\n"
        "field X = [x, 2*y];\n"
        "foliation F = {X};\n";
    CommandRequest ce = request("census", modp);
    ce.foliation = "F";
    ce.nu = 1;
    Report r = run_command(ce);
    CHECK(r.exit_code == 0);
    json p = payload_of(r);
    CHECK(p.at("prime") == "5");
    CHECK(p.at("candidates_scanned") == "30");
    REQUIRE(p.at("invariants").size() == 2);
    CHECK(p.at("invariants").at(0).at("polynomial") == "x");
    CHECK(p.at("invariants").at(0).at("cofactors") == json::array({"1"}));
    CHECK(p.at("invariants").at(1).at("polynomial") == "y");

    // rational sessions reduce through --prime
    CommandRequest cr = request("census", kDiag);
    cr.foliation = "F";
    cr.nu = 1;
    cr.prime = 5;
    json p2 = payload_of(run_command(cr));
    CHECK(p2.at("invariants").size() == 2);
    CHECK(p2.at("candidates_scanned") == "30");

    CommandRequest noprime = cr;
    noprime.prime.reset();
    Report r3 = run_command(noprime);
    CHECK(r3.exit_code == 1);
    CHECK(payload_of(r3).at("code") == "usage");

    CommandRequest conflict = request("census", modp);
    conflict.foliation = "F";
    conflict.nu = 1;
    conflict.prime = 7;
    Report r4 = run_command(conflict);
    CHECK(r4.exit_code == 1);
    CHECK(payload_of(r4).at("code") == "usage");

    CommandRequest tight = cr;
    tight.cap = 10;
    Report r5 = run_command(tight);
    CHECK(r5.exit_code == 1);
    CHECK(payload_of(r5).at("code") == "domain");
}

TEST_CASE("degree reports projective Pfaff degrees and generator degrees") {
    CommandRequest dg = request("degree", kLog3);
    dg.form = "w";
    dg.seed = 7;
    Report r = run_command(dg);
    CHECK(r.exit_code == 0);
    CHECK(payload_of(r).at("pfaff_degree") == "1");
    CHECK(payload_of(r).at("cross_checked") == true);
    CHECK(payload_of(r).at("coefficient_degree") == "2");

    CommandRequest df = request("degree", kDiag);
    df.foliation = "F";
    json p = payload_of(run_command(df));
    CHECK(p.at("generator_degrees") == json::array({"1"}));
    CHECK(p.at("involutive") == true);

    // an affine form has no projective degree; surfaced as a domain error
    CommandRequest da = request("degree", kRadial);
    da.form = "w";
    Report r2 = run_command(da);
    CHECK(r2.exit_code == 1);
    CHECK(payload_of(r2).at("code") == "domain");
}

TEST_CASE("verify accepts first integrals and refuses everything else") {
    CommandRequest vf = request("verify", kRadial);
    vf.foliation = "F";
    vf.candidate = "f/g";
    Report r = run_command(vf);
    CHECK(r.exit_code == 0);
    CHECK(payload_of(r).at("candidate") == "x/y");
    CHECK(payload_of(r).at("first_integral") == true);

    CommandRequest no = vf;
    no.candidate = "f";
    Report r2 = run_command(no);
    CHECK(r2.exit_code == 2);
    CHECK(payload_of(r2).at("first_integral") == false);

    // against the form y dx + x dy the ratio x/y is not constant on leaves
    CommandRequest vform = request("verify", kRadial);
    vform.form = "w";
    vform.candidate = "f/g";
    CHECK(run_command(vform).exit_code == 2);

    CommandRequest cst = request("verify", "vars x, y; field R = [x, y]; "
                                           "foliation F = {R}; poly c = 3;");
    cst.foliation = "F";
    cst.candidate = "c";
    Report r3 = run_command(cst);
    CHECK(r3.exit_code == 2);
    CHECK(std::string(payload_of(r3).at("reason")).find("constant") != std::string::npos);
}

TEST_CASE("bounds verdicts ride along when a count is supplied") {
    CommandRequest bd;
    bd.command = "bounds";
    bd.formula = "prop11";
    bd.n = 2;
    bd.r = 1;
    bd.nu_bound = 1;
    bd.split = {2};
    bd.count = 6;
    json p = payload_of(run_command(bd));
    CHECK(p.at("value") == "6");
    CHECK(p.at("verdict") == "below_bound");

    bd.count = 7;
    json p2 = payload_of(run_command(bd));
    CHECK(p2.at("verdict") == "first_integral_predicted");
    CHECK(std::string(p2.at("statement")).find("split factor") != std::string::npos);

    CommandRequest bad = bd;
    bad.formula = "nonsense";
    Report r = run_command(bad);
    CHECK(r.exit_code == 1);
    CHECK(payload_of(r).at("code") == "usage");

    CommandRequest thm;
    thm.command = "bounds";
    thm.formula = "thm11";
    thm.n = 2;
    thm.r = 1;
    thm.d = 1;
    json p3 = payload_of(run_command(thm));
    CHECK(p3.at("value") == "4");
    CHECK(p3.at("params").at("h1cl") == "1");
}

TEST_CASE("reports are byte-identical across reruns and thread budgets") {
    CommandRequest lc = request("log-certificate", kRadial);
    lc.form = "w";
    lc.invariants = {"f", "g", "h"};
    std::string once = run_command(lc).text;
    CHECK(run_command(lc).text == once);

    setenv("PFAFFKIT_THREADS", "3", 1);
    CHECK(run_command(lc).text == once);
    setenv("PFAFFKIT_THREADS", "1", 1);
    CHECK(run_command(lc).text == once);
    unsetenv("PFAFFKIT_THREADS");

    CommandRequest ce = request("census", kDiag);
    ce.foliation = "F";
    ce.nu = 2;
    ce.prime = 5;
    std::string census_once = run_command(ce).text;
    CHECK(run_command(ce).text == census_once);

    // the envelope always carries the seed record and schema version
    json root = json::parse(once);
    CHECK(root.at("schema") == 1);
    CHECK(root.at("seed") == "0");
    CHECK(root.at("tool") == kToolVersion);
    CHECK(std::string(root.at("command")).find("pfaffkit log-certificate") == 0);
}

TEST_CASE("parallel_for is index-deterministic for any worker count") {
    std::vector<std::size_t> expect(97);
    for (std::size_t i = 0; i < expect.size(); ++i) expect[i] = i * i;
    for (std::size_t workers : {1, 2, 5, 16}) {
        std::vector<std::size_t> got(expect.size(), 0);
        parallel_for(got.size(), [&](std::size_t i) { got[i] = i * i; }, workers);
        CHECK(got == expect);
    }
}
