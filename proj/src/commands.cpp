#include "pfaffkit/commands.hpp"

#include <json.hpp>

#include <map>
#include <set>

#include "pfaffkit/bounds.hpp"
#include "pfaffkit/census.hpp"
#include "pfaffkit/extactic.hpp"
#include "pfaffkit/integrability.hpp"
#include "pfaffkit/parallel.hpp"
#include "pfaffkit/projective.hpp"
#include "pfaffkit/session.hpp"

namespace pfk {
namespace {

using json = nlohmann::json;

struct usage_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string joined_commas(const std::vector<std::string>& parts) {
    std::string s;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) s += ",";
        s += parts[i];
    }
    return s;
}

std::string js(const mpz_class& z) { return z.get_str(); }
std::string js(std::uint64_t v) { return std::to_string(v); }
std::string js(std::int64_t v) { return std::to_string(v); }
std::string js(std::uint32_t v) { return std::to_string(v); }
std::string js(int v) { return std::to_string(v); }

std::string echo(const CommandRequest& req) {
    std::string s = "pfaffkit " + req.command;
    auto flag = [&](const char* name, const std::string& v) {
        if (!v.empty()) s += std::string(" --") + name + " " + v;
    };
    if (req.input_path) flag("input", *req.input_path);
    flag("poly", req.poly);
    flag("foliation", req.foliation);
    flag("form", req.form);
    flag("system", req.system);
    flag("invariants", joined_commas(req.invariants));
    flag("candidate", req.candidate);
    if (req.nu) flag("nu", js(*req.nu));
    if (req.prime) flag("prime", js(*req.prime));
    if (req.cap) flag("cap", js(*req.cap));
    flag("formula", req.formula);
    if (req.n) flag("n", js(*req.n));
    if (req.r) flag("r", js(*req.r));
    if (req.d) flag("d", js(*req.d));
    if (req.nu_bound) flag("nu", js(*req.nu_bound));
    if (!req.split.empty()) {
        std::string parts;
        for (std::size_t i = 0; i < req.split.size(); ++i)
            parts += (i ? "," : "") + js(req.split[i]);
        flag("split", parts);
    }
    if (req.h1cl) flag("h1cl", js(*req.h1cl));
    if (req.h0cl) flag("h0cl", js(*req.h0cl));
    if (req.picard) flag("picard", js(*req.picard));
    if (req.count) flag("count", std::to_string(*req.count));
    s += " --seed " + js(req.seed);
    return s;
}

std::string kind_hint(const std::string& name, const char* wanted, const char* actual) {
    return "'" + name + "' is a " + actual + "; " + wanted + " expected";
}

template <class K>
const Polynomial<K>& need_poly(const TypedSession<K>& s, const std::string& name,
                               const char* flag) {
    if (name.empty()) throw usage_error(std::string("missing --") + flag + " NAME");
    auto it = s.polys.find(name);
    if (it != s.polys.end()) return it->second;
    if (s.fields.count(name)) throw usage_error(kind_hint(name, "a poly", "field"));
    if (s.forms.count(name)) throw usage_error(kind_hint(name, "a poly", "form"));
    throw usage_error("no poly named '" + name + "' in the session");
}

template <class K>
const Foliation<K>& need_foliation(const TypedSession<K>& s, const std::string& name) {
    if (name.empty()) throw usage_error("missing --foliation NAME");
    auto it = s.foliations.find(name);
    if (it != s.foliations.end()) return it->second;
    if (s.fields.count(name))
        throw usage_error("'" + name + "' is a field; wrap it as: foliation F = {" + name + "};");
    throw usage_error("no foliation named '" + name + "' in the session");
}

template <class K>
const DifferentialForm<K>& need_form(const TypedSession<K>& s, const std::string& name) {
    if (name.empty()) throw usage_error("missing --form NAME");
    auto it = s.forms.find(name);
    if (it != s.forms.end()) return it->second;
    throw usage_error("no form named '" + name + "' in the session");
}

template <class K>
const LinearSystem<K>& need_system(const TypedSession<K>& s, const std::string& name) {
    if (name.empty()) throw usage_error("missing --system NAME");
    auto it = s.systems.find(name);
    if (it != s.systems.end()) return it->second;
    throw usage_error("no system named '" + name + "' in the session");
}

template <class K>
void require_one_target(const TypedSession<K>&, const CommandRequest& req) {
    if (req.foliation.empty() == req.form.empty())
        throw usage_error("pass exactly one of --foliation or --form");
}

template <class K>
json certificate_payload(const InvariantCertificate<K>& cert, const TypedSession<K>& s) {
    json p;
    p["invariant"] = cert.f.str(s.vars);
    p["verified"] = cert.verified;
    if (cert.kind == CertKind::foliation_cofactors) {
        p["kind"] = "foliation_cofactors";
        json cofs = json::array();
        for (const auto& c : cert.cofactors) cofs.push_back(c.str(s.vars));
        p["cofactors"] = cofs;
    } else {
        p["kind"] = "pfaff_quotient";
        p["quotient"] = cert.quotient->str(s.vars);
    }
    return p;
}

template <class K>
json cmd_check_invariant(const CommandRequest& req, const TypedSession<K>& s,
                         std::string& status) {
    require_one_target(s, req);
    const Polynomial<K>& f = need_poly(s, req.poly, "poly");
    CertifyResult<K> res = req.foliation.empty()
                               ? certify_invariant(
                                     PfaffSystem<K>(need_form(s, req.form), s.mode), f)
                               : certify_invariant(need_foliation(s, req.foliation), f);
    if (res.status == CertifyStatus::refused) {
        status = "refused";
        return json{{"invariant", f.str(s.vars)}, {"reason", res.reason}};
    }
    json p = certificate_payload(*res.certificate, s);
    p["mode"] = mode_string(s.mode);
    return p;
}

template <class K>
json cmd_extactic(const CommandRequest& req, const TypedSession<K>& s, std::string&) {
    const Foliation<K>& F = need_foliation(s, req.foliation);
    const LinearSystem<K>& V = need_system(s, req.system);
    json p;
    p["system_dimension"] = js(V.dim());
    bool want_sieve = !req.poly.empty();
    if (F.rank() == 1) {
        Polynomial<K> eps = extactic_single(F.generator(0), V);
        p["extactic"] = eps.str(s.vars);
        p["degree"] = js(eps.degree());
        p["zero"] = eps.is_zero();
    }
    if (F.rank() > 1 || want_sieve) {
        ExtacticSystem<K> E = extactic_minors(F, V);
        if (F.rank() > 1) {
            json minors = json::array();
            for (std::size_t i = 0; i < E.minors.size(); ++i) {
                json lab = json::array();
                for (std::size_t r : E.labels[i]) lab.push_back(js(r));
                minors.push_back(json{{"rows", lab}, {"value", E.minors[i].str(s.vars)}});
            }
            p["minors"] = minors;
            p["total_minors"] = js(E.total_minors);
            p["truncated"] = E.truncated;
            if (E.truncated) p["sample_seed"] = js(E.sample_seed);
        }
        if (want_sieve) {
            SieveResult sr = sieve_divisibility(need_poly(s, req.poly, "poly"), E);
            p["sieve"] = json{{"divides", sr.divides},
                              {"multiplicity", js(sr.multiplicity)},
                              {"all_minors_zero", sr.all_minors_zero}};
        }
    }
    return p;
}

template <class K>
json cmd_first_integral(const CommandRequest& req, const TypedSession<K>& s,
                        std::string& status) {
    const Foliation<K>& F = need_foliation(s, req.foliation);
    const LinearSystem<K>& V = need_system(s, req.system);
    RankTestResult<K> res = rank_first_integral(F, V);
    json p;
    p["rank"] = js(res.rank);
    p["order"] = js(res.order);
    p["system_dimension"] = js(V.dim());
    if (res.outcome == RankOutcome::full_rank) {
        status = "refused";
        p["reason"] = "the jet matrix has full rank; no first integral arises from this system";
        return p;
    }
    json cands = json::array();
    for (const auto& c : res.candidates)
        cands.push_back(json{{"value", c.value.str(s.vars)},
                             {"source", c.source},
                             {"verified", c.verified}});
    p["candidates"] = cands;
    return p;
}

template <class K>
json cmd_log_certificate(const CommandRequest& req, const TypedSession<K>& s,
                         std::string& status) {
    if (req.invariants.empty())
        throw usage_error("missing --invariants f,g,... (declared poly names)");
    PfaffSystem<K> S(need_form(s, req.form), s.mode);
    std::vector<const Polynomial<K>*> polys;
    polys.reserve(req.invariants.size());
    for (const auto& name : req.invariants) polys.push_back(&need_poly(s, name, "invariants"));

    std::vector<CertifyResult<K>> results(polys.size());
    std::vector<std::exception_ptr> errs(polys.size());
    parallel_for(polys.size(), [&](std::size_t i) {
        try {
            results[i] = certify_invariant(S, *polys[i]);
        } catch (...) {
            errs[i] = std::current_exception();
        }
    });
    for (auto& e : errs)
        if (e) std::rethrow_exception(e);

    std::vector<InvariantCertificate<K>> certs;
    for (std::size_t i = 0; i < results.size(); ++i) {
        if (results[i].status == CertifyStatus::refused) {
            status = "refused";
            return json{{"reason", "'" + req.invariants[i] +
                                       "' is not invariant: " + results[i].reason}};
        }
        certs.push_back(*results[i].certificate);
    }

    DarbouxResult<K> D = darboux_log_certificate(S, certs);
    json p;
    json invs = json::array();
    for (const auto& c : certs) invs.push_back(c.f.str(s.vars));
    p["invariants"] = invs;
    json lambdas = json::array();
    json cands = json::array();
    for (const auto& b : D.basis) {
        json lam = json::array();
        for (const auto& l : b.lambda) lam.push_back(l.str());
        lambdas.push_back(lam);
        if (b.candidate)
            cands.push_back(
                json{{"value", b.candidate->str(s.vars)}, {"verified", b.candidate_verified}});
    }
    p["lambdas"] = lambdas;
    p["candidates"] = cands;
    p["first_integral_regime"] = D.first_integral_regime;
    if (S.rank() == 1 && D.basis.size() >= 2) {
        RatioResult<K> rr = ratio_extraction(D.basis[0], D.basis[1], S);
        p["ratio"] = rr.status == CertifyStatus::certified
                         ? json{{"value", rr.candidate->value.str(s.vars)},
                                {"verified", rr.candidate->verified}}
                         : json{{"reason", rr.reason}};
    }
    return p;
}

json cmd_bounds(const CommandRequest& req) {
    static const std::map<std::string, BoundFormula> table = {
        {"jouanolou", BoundFormula::jouanolou}, {"ghys", BoundFormula::ghys},
        {"correa", BoundFormula::correa},       {"jpaa", BoundFormula::jpaa},
        {"prop11", BoundFormula::prop11},       {"thm11", BoundFormula::thm11}};
    auto it = table.find(req.formula);
    if (it == table.end())
        throw usage_error("unknown --formula '" + req.formula +
                          "' (jouanolou, ghys, correa, jpaa, prop11, thm11)");
    if (!req.n) throw usage_error("missing --n DIMENSION");
    BoundParams P;
    P.n = *req.n;
    P.r = req.r.value_or(0);
    P.d = req.d.value_or(-1);
    P.nu = req.nu_bound.value_or(0);
    P.split_degrees = req.split;
    P.h1cl = req.h1cl;
    P.h0cl = req.h0cl;
    P.picard = req.picard;
    BoundReport rep = compute_bound(it->second, P);

    json p;
    p["formula"] = bound_formula_name(rep.formula);
    p["value"] = js(rep.value);
    p["exact"] = rep.exact.str();
    p["notes"] = rep.notes;
    json params;
    params["n"] = js(rep.params.n);
    params["r"] = js(rep.params.r);
    if (rep.params.d >= 0) params["d"] = js(rep.params.d);
    if (rep.params.nu > 0) params["nu"] = js(rep.params.nu);
    if (!rep.params.split_degrees.empty()) {
        json sd = json::array();
        for (int x : rep.params.split_degrees) sd.push_back(js(x));
        params["split_degrees"] = sd;
    }
    if (rep.params.h1cl) params["h1cl"] = js(*rep.params.h1cl);
    if (rep.params.h0cl) params["h0cl"] = js(*rep.params.h0cl);
    if (rep.params.picard) params["picard"] = js(*rep.params.picard);
    p["params"] = params;

    if (req.count) {
        mpz_class c(std::to_string(*req.count));
        Verdict v = verdict(c, rep);
        p["count"] = js(c);
        p["verdict"] = v == Verdict::below_bound ? "below_bound" : "first_integral_predicted";
        p["statement"] = verdict_statement(v, c, rep);
    }
    return p;
}

template <class K>
json cmd_census(const CommandRequest& req, const TypedSession<K>& s, std::string&) {
    const Foliation<K>& F = need_foliation(s, req.foliation);
    if (!req.nu) throw usage_error("missing --nu DEGREE");
    std::uint64_t cap = req.cap.value_or(10'000'000);
    CensusResult res = [&] {
        if constexpr (std::is_same_v<K, Fp>) {
            if (req.prime && *req.prime != s.prime)
                throw usage_error("--prime " + js(*req.prime) +
                                  " conflicts with the session domain mod " + js(s.prime));
            return enumerate_invariants_modp(F, *req.nu, s.prime, cap);
        } else {
            if (!req.prime)
                throw usage_error("census over a rational session needs --prime P");
            return enumerate_invariants_modp(F, *req.nu, *req.prime, cap);
        }
    }();
    json p;
    p["prime"] = js(res.prime);
    p["degree"] = js(res.degree);
    p["ambient"] = js(res.ambient);
    p["mode"] = mode_string(res.mode);
    p["degenerate"] = res.degenerate;
    json zg = json::array();
    for (std::size_t i : res.zero_generators) zg.push_back(js(i));
    p["zero_generators"] = zg;
    p["candidates_scanned"] = js(res.candidate_count);
    json invs = json::array();
    for (const auto& e : res.invariants) {
        json cofs = json::array();
        for (const auto& c : e.cofactors) cofs.push_back(c.str(s.vars));
        invs.push_back(json{{"polynomial", e.f.str(s.vars)}, {"cofactors", cofs}});
    }
    p["invariants"] = invs;
    p["invariant_count"] = js(res.invariants.size());
    return p;
}

template <class K>
json cmd_degree(const CommandRequest& req, const TypedSession<K>& s, std::string&) {
    require_one_target(s, req);
    json p;
    if (!req.form.empty()) {
        const DifferentialForm<K>& w = need_form(s, req.form);
        PfaffDegree pd = pfaff_degree(w, req.seed);
        p["pfaff_degree"] = js(pd.degree);
        p["cross_checked"] = pd.cross_checked;
        p["rank"] = js(w.degree());
        p["coefficient_degree"] = js(*w.homogeneous_coefficient_degree());
    } else {
        const Foliation<K>& F = need_foliation(s, req.foliation);
        json degs = json::array();
        for (std::int64_t d : F.degrees()) degs.push_back(js(d));
        p["generator_degrees"] = degs;
        p["rank"] = js(F.rank());
        InvolutivityResult<K> inv = F.involutivity();
        p["involutive"] = inv.involutive;
        if (inv.witness)
            p["witness"] = json{{"i", js(inv.witness->i)}, {"j", js(inv.witness->j)}};
    }
    return p;
}

template <class K>
json cmd_verify(const CommandRequest& req, const TypedSession<K>& s, std::string& status) {
    require_one_target(s, req);
    if (req.candidate.empty()) throw usage_error("missing --candidate f or --candidate f/g");
    auto slash = req.candidate.find('/');
    const Polynomial<K>& num =
        need_poly(s, req.candidate.substr(0, slash), "candidate");
    RationalFunction<K> R =
        slash == std::string::npos
            ? RationalFunction<K>(num)
            : RationalFunction<K>(num, need_poly(s, req.candidate.substr(slash + 1),
                                                 "candidate"));
    json p;
    p["candidate"] = R.str(s.vars);
    if (R.is_constant()) {
        status = "refused";
        p["reason"] = "the candidate is constant";
        return p;
    }
    bool ok = req.form.empty()
                  ? verify_first_integral(need_foliation(s, req.foliation), R)
                  : verify_first_integral(PfaffSystem<K>(need_form(s, req.form), s.mode), R);
    p["first_integral"] = ok;
    if (!ok) {
        status = "refused";
        p["reason"] = "the candidate is not a first integral";
    }
    return p;
}

json err_payload(const char* code, const std::string& message) {
    return json{{"code", code}, {"message", message}};
}

json envelope(const CommandRequest& req) {
    json root;
    root["schema"] = 1;
    root["tool"] = kToolVersion;
    root["seed"] = std::to_string(req.seed);
    root["command"] = echo(req);
    return root;
}

}  // namespace

Report error_report(const CommandRequest& req, const std::string& code,
                    const std::string& message) {
    json root = envelope(req);
    root["status"] = "error";
    root["payload"] = json{{"code", code}, {"message", message}};
    return Report{"error", root.dump(2) + "\n", 1};
}

Report run_command(const CommandRequest& req) {
    json root = envelope(req);

    std::string status = "ok";
    json payload;
    try {
        if (req.command == "bounds") {
            payload = cmd_bounds(req);
        } else {
            static const std::set<std::string> session_cmds = {
                "check-invariant", "extactic",  "first-integral", "log-certificate",
                "census",          "degree",    "verify"};
            if (!session_cmds.count(req.command))
                throw usage_error("unknown subcommand '" + req.command + "'");
            if (!req.input_path && req.session_text.empty())
                throw usage_error("this subcommand needs --input FILE with a session");
            Session ses = parse_input(req.session_text);
            std::visit(
                [&](const auto& s) {
                    if (req.command == "check-invariant")
                        payload = cmd_check_invariant(req, s, status);
                    else if (req.command == "extactic")
                        payload = cmd_extactic(req, s, status);
                    else if (req.command == "first-integral")
                        payload = cmd_first_integral(req, s, status);
                    else if (req.command == "log-certificate")
                        payload = cmd_log_certificate(req, s, status);
                    else if (req.command == "census")
                        payload = cmd_census(req, s, status);
                    else if (req.command == "degree")
                        payload = cmd_degree(req, s, status);
                    else
                        payload = cmd_verify(req, s, status);
                },
                ses);
        }
    } catch (const parse_error& e) {
        status = "error";
        payload = err_payload("parse", e.what());
    } catch (const usage_error& e) {
        status = "error";
        payload = err_payload("usage", e.what());
    } catch (const bad_prime_error& e) {
        status = "error";
        payload = err_payload("bad_prime", e.what());
    } catch (const std::invalid_argument& e) {
        status = "error";
        payload = err_payload("invalid_argument", e.what());
    } catch (const std::domain_error& e) {
        status = "error";
        payload = err_payload("domain", e.what());
    } catch (const std::exception& e) {
        status = "error";
        payload = err_payload("internal", e.what());
    }

    root["status"] = status;
    root["payload"] = payload;
    int code = status == "ok" ? 0 : status == "refused" ? 2 : 1;
    return Report{status, root.dump(2) + "\n", code};
}

}  // namespace pfk
