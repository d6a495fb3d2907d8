#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>

#include "pfaffkit/commands.hpp"

namespace {

int emit(const pfk::Report& rep, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << rep.text;
        return rep.exit_code;
    }
    std::ofstream out(out_path, std::ios::binary);
    out << rep.text;
    if (!out) {
        std::cerr << "pfaffkit: cannot write '" << out_path << "'\n";
        return 1;
    }
    return rep.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact invariance, first-integral, and counting toolkit for "
                 "polynomial Pfaff systems and foliations"};
    app.require_subcommand(1);
    app.set_version_flag("--version", pfk::kToolVersion);

    pfk::CommandRequest req;
    std::string input_path, out_path;

    auto with_input = [&](CLI::App* sub) {
        sub->add_option("--input", input_path, "session file (.pfk)")
            ->required()
            ->type_name("FILE");
        sub->add_option("--out", out_path, "write the JSON report here instead of stdout")
            ->type_name("FILE");
        sub->add_option("--seed", req.seed, "seed for randomized cross-checks (default 0)");
    };

    CLI::App* ci = app.add_subcommand(
        "check-invariant", "certify {f = 0} invariant for a foliation or Pfaff form");
    with_input(ci);
    ci->add_option("--poly", req.poly, "candidate polynomial (declared name)")->required();
    ci->add_option("--foliation", req.foliation, "target foliation");
    ci->add_option("--form", req.form, "target Pfaff form");

    CLI::App* ex = app.add_subcommand(
        "extactic", "extactic section or jet-matrix minors of a linear system");
    with_input(ex);
    ex->add_option("--foliation", req.foliation, "foliation name")->required();
    ex->add_option("--system", req.system, "linear system name")->required();
    ex->add_option("--poly", req.poly, "also sieve this polynomial against the minors");

    CLI::App* fi = app.add_subcommand(
        "first-integral", "jet-matrix rank test with verified candidate extraction");
    with_input(fi);
    fi->add_option("--foliation", req.foliation, "foliation name")->required();
    fi->add_option("--system", req.system, "linear system name")->required();

    CLI::App* lc = app.add_subcommand(
        "log-certificate", "Darboux logarithmic certificates from invariant hypersurfaces");
    with_input(lc);
    lc->add_option("--form", req.form, "Pfaff form name")->required();
    lc->add_option("--invariants", req.invariants, "comma-separated declared polynomials")
        ->required()
        ->delimiter(',');

    CLI::App* bd = app.add_subcommand(
        "bounds", "invariant-hypersurface count bounds and verdicts");
    bd->add_option("--formula", req.formula,
                   "jouanolou | ghys | correa | jpaa | prop11 | thm11")
        ->required();
    bd->add_option("--n", req.n, "ambient projective dimension")->required();
    bd->add_option("--r", req.r, "system dimension / codimension");
    bd->add_option("--d", req.d, "system degree");
    bd->add_option("--nu", req.nu_bound, "hypersurface degree (split tangent bound)");
    bd->add_option("--split", req.split, "comma-separated split factor degrees")
        ->delimiter(',');
    bd->add_option("--h1cl", req.h1cl, "dim H^1 of closed 1-forms");
    bd->add_option("--h0cl", req.h0cl, "dim H^0 of closed 1-forms");
    bd->add_option("--picard", req.picard, "Picard number");
    bd->add_option("--count", req.count, "observed invariant count for a verdict");
    bd->add_option("--out", out_path, "write the JSON report here instead of stdout")
        ->type_name("FILE");
    bd->add_option("--seed", req.seed, "recorded in the report");

    CLI::App* ce = app.add_subcommand(
        "census", "exhaustive mod-p scan for invariant hypersurfaces");
    with_input(ce);
    ce->add_option("--foliation", req.foliation, "foliation name")->required();
    ce->add_option("--nu", req.nu, "hypersurface degree to scan")->required();
    ce->add_option("--prime", req.prime, "reduction prime (rational sessions)");
    ce->add_option("--cap", req.cap, "candidate-space cap (default 10^7)");

    CLI::App* dg = app.add_subcommand(
        "degree", "projective Pfaff degree or per-generator degrees");
    with_input(dg);
    dg->add_option("--foliation", req.foliation, "foliation name");
    dg->add_option("--form", req.form, "Pfaff form name");

    CLI::App* vf = app.add_subcommand(
        "verify", "check a rational function against a foliation or Pfaff form");
    with_input(vf);
    vf->add_option("--candidate", req.candidate, "declared poly, or f/g for a ratio")
        ->required();
    vf->add_option("--foliation", req.foliation, "foliation name");
    vf->add_option("--form", req.form, "Pfaff form name");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    req.command = app.get_subcommands().front()->get_name();
    if (!input_path.empty()) {
        req.input_path = input_path;
        std::ifstream in(input_path, std::ios::binary);
        if (!in) {
            return emit(pfk::error_report(req, "io", "cannot read '" + input_path + "'"),
                        out_path);
        }
        std::ostringstream buf;
        buf << in.rdbuf();
        req.session_text = buf.str();
    }
    return emit(pfk::run_command(req), out_path);
}
