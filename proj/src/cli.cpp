#include "padzeta/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <json.hpp>
#include <sstream>

#include "padzeta/bernoulli.hpp"
#include "padzeta/lfunctions.hpp"

namespace padzeta::cli {

namespace {

using nlohmann::json;

json padic_json(const PadicNumber& x) {
    json j;
    j["p"] = x.context().prime();
    j["abs_prec"] = x.abs_prec();
    if (x.is_zero()) {
        j["valuation"] = nullptr;
        j["digits"] = json::array();
        return j;
    }
    j["valuation"] = x.valuation();
    std::vector<long> digits;  // little-endian from the valuation
    Integer u = x.unit();
    const long p = x.context().prime();
    for (long k = x.valuation(); k < x.abs_prec(); ++k) {
        digits.push_back(Integer(u % p).get_si());
        u /= p;
    }
    j["digits"] = digits;
    return j;
}

json profile_json(const std::vector<std::optional<long>>& prof) {
    json a = json::array();
    for (const auto& v : prof) {
        if (v)
            a.push_back(*v);
        else
            a.push_back(nullptr);
    }
    return a;
}

// common state for one invocation
struct Request {
    long p = 5;
    long branch = 1;
    long twist = 1;
    std::string s_text = "0";
    long prec = 6;
    long level = 0;  // 0 = adaptive / per-command default
    long max_level = 5;
    long k = 1;
    long c = 2;
    long c_alt = 3;
    long jobs = 1;
    long long budget = 1000000;
    std::string family = "E";
    std::string ball_text = "0:0";
    bool json_mode = false;

    std::ostream* out = nullptr;

    json doc;

    Rational s() const { return rational_from_string(s_text); }

    void begin(const std::string& command) {
        doc = json::object();
        doc["command"] = command;
        doc["p"] = p;
        doc["inputs"] = json::object();
        doc["value"] = nullptr;
        doc["profile"] = json::array();
        doc["status"] = "PASS";
        doc["witness"] = nullptr;
    }

    int finish(int code) {
        if (json_mode) *out << doc.dump(2) << "\n";
        return code;
    }

    // text goes straight out unless in JSON mode
    template <typename... Ts>
    void say(Ts&&... parts) {
        if (json_mode) return;
        ((*out) << ... << parts) << "\n";
    }
};

json mismatch_json(const CheckReport& rep) {
    json w;
    w["checked"] = rep.balls_checked;
    w["failures"] = json::array();
    if (rep.counterexample) {
        const auto& ce = *rep.counterexample;
        w["failures"].push_back({{"ball", ball_to_string(ce.ball)},
                                 {"lhs", to_string(ce.expected)},
                                 {"rhs", to_string(ce.actual)}});
    }
    return w;
}

int report_check(Request& req, const CheckReport& rep) {
    req.doc["witness"] = mismatch_json(rep);
    if (rep.pass) {
        req.say("PASS (", rep.balls_checked, " balls)");
        return req.finish(0);
    }
    req.doc["status"] = "FAIL";
    const auto& ce = *rep.counterexample;
    req.say("FAIL at ball ", ball_to_string(ce.ball), ": expected ", to_string(ce.expected),
            ", got ", to_string(ce.actual));
    return req.finish(3);
}

BallMeasure measure_from_request(const Request& req) {
    if (req.family == "haar") return BallMeasure::haar(req.p);
    if (req.family == "E") return BallMeasure::bernoulli_family(req.p, req.k);
    if (req.family == "Ec") return BallMeasure::regularized(req.p, req.k, Integer(req.c));
    if (req.family == "mu") return BallMeasure::alternating(req.p);
    throw DomainError("unknown measure family: " + req.family);
}

int cmd_zeta(Request& req) {
    req.begin("zeta");
    Rational s = req.s();
    LSeriesResult r =
        req.level > 0
            ? lp_value_at_level(req.p, req.branch, s, req.level, req.prec, req.jobs, req.budget)
            : lp_value(req.p, req.branch, s, req.prec, req.jobs, req.budget);
    req.doc["inputs"] = {{"branch", req.branch},  {"s", req.s_text},
                         {"prec", req.prec},      {"level", r.level_used},
                         {"budget", req.budget}};
    req.doc["value"] = padic_json(r.value);
    req.doc["profile"] = profile_json(r.increments);
    req.say(render(r.value));
    return req.finish(0);
}

int cmd_lp(Request& req) {
    req.begin("lp");
    Rational s = req.s();
    long level = req.level > 0 ? req.level : req.prec + 1;
    PadicNumber v =
        mellin_lp(req.p, req.twist, s, Integer(req.c), level, req.prec, req.jobs, req.budget);
    req.doc["inputs"] = {{"twist", req.twist}, {"s", req.s_text}, {"c", req.c},
                         {"level", level},     {"prec", req.prec}};
    req.doc["value"] = padic_json(v);
    req.say(render(v));
    return req.finish(0);
}

int cmd_measure(Request& req) {
    req.begin("measure");
    BallMeasure m = measure_from_request(req);
    ClopenBall b = ball_from_string(req.ball_text);
    b = make_ball(req.p, b.rep, b.level);  // range-check against p
    Rational v = m(b);
    req.doc["inputs"] = {{"family", m.describe()}, {"ball", ball_to_string(b)}};
    req.doc["value"] = to_string(v);
    req.say(to_string(v));
    return req.finish(0);
}

int cmd_bernoulli(Request& req, bool twisted) {
    req.begin("bernoulli");
    if (!twisted) {
        Rational v = bernoulli_number(req.k);
        req.doc["inputs"] = {{"k", req.k}};
        req.doc["value"] = to_string(v);
        req.say(to_string(v));
        return req.finish(0);
    }
    PadicContext ctx(req.p, req.prec + 4);
    PadicNumber v = generalized_bernoulli(req.k, req.twist, ctx, req.prec);
    req.doc["inputs"] = {{"k", req.k}, {"twist", req.twist}, {"prec", req.prec}};
    req.doc["value"] = padic_json(v);
    req.say(render(v));
    return req.finish(0);
}

int cmd_verify_theorem1(Request& req) {
    req.begin("verify theorem1");
    req.doc["inputs"] = {{"max_level", req.max_level}};
    return report_check(req, theorem1_check(req.p, req.max_level, req.budget));
}

int cmd_verify_additivity(Request& req) {
    req.begin("verify additivity");
    BallMeasure m = measure_from_request(req);
    req.doc["inputs"] = {{"family", m.describe()}, {"max_level", req.max_level}};
    return report_check(req, additivity_check(m, req.max_level, req.budget));
}

int cmd_verify_boundedness(Request& req, bool regularized) {
    req.begin("verify boundedness");
    BallMeasure m = regularized ? BallMeasure::regularized(req.p, req.k, Integer(req.c))
                                : BallMeasure::bernoulli_family(req.p, req.k);
    req.doc["inputs"] = {{"family", m.describe()}, {"max_level", req.max_level}};
    auto bounds = boundedness_scan(m, req.max_level, req.budget);
    bool pass = true;
    json prof = json::array();
    for (const auto& lb : bounds) {
        if (!lb.sup_exponent) {
            req.say("level ", lb.level, ": all values vanish");
            prof.push_back(nullptr);
            continue;
        }
        req.say("level ", lb.level, ": sup |value|_p = p^", *lb.sup_exponent, " (witness ",
                lb.witness.get_str(), ")");
        prof.push_back(*lb.sup_exponent);
        if (regularized) {
            // a measure: bounded by 1
            if (*lb.sup_exponent > 0) pass = false;
        } else if (req.k == 1) {
            // the unbounded distribution grows exactly like p^n
            if (*lb.sup_exponent != lb.level) pass = false;
        }
    }
    req.doc["profile"] = prof;
    req.doc["status"] = pass ? "PASS" : "FAIL";
    req.say(pass ? "PASS" : "FAIL");
    return req.finish(pass ? 0 : 3);
}

int cmd_verify_interpolation(Request& req) {
    req.begin("verify interpolation");
    long level = req.level > 0 ? req.level : 5;
    InterpolationReport rep =
        verify_interpolation(req.p, req.branch, req.k, level, req.prec, req.jobs, req.budget);
    req.doc["inputs"] = {{"branch", req.branch}, {"k", req.k}, {"level", level},
                         {"prec", req.prec}};
    req.doc["value"] = padic_json(rep.lhs);
    req.doc["witness"] = {{"required", rep.required},
                          {"achieved", rep.achieved ? json(*rep.achieved) : json(nullptr)},
                          {"lhs", render(rep.lhs)},
                          {"rhs", render(rep.rhs)}};
    req.say("lhs = ", render(rep.lhs));
    req.say("rhs = ", render(rep.rhs));
    if (rep.pass) {
        req.say("PASS (agreement through p^", rep.required, ")");
        return req.finish(0);
    }
    req.doc["status"] = "FAIL";
    req.say("FAIL (required p^", rep.required, ", difference has valuation ",
            rep.achieved ? std::to_string(*rep.achieved) : std::string("unknown"), ")");
    return req.finish(3);
}

int cmd_verify_c_independence(Request& req) {
    req.begin("verify c-independence");
    Rational s = req.s();
    long level = req.level > 0 ? req.level : 5;
    long j = req.twist;
    PadicNumber base =
        mellin_lp(req.p, j, s, Integer(req.c), level, req.prec, req.jobs, req.budget);
    PadicNumber other =
        mellin_lp(req.p, j, s, Integer(req.c_alt), level, req.prec, req.jobs, req.budget);
    long required = std::min({req.prec, level - 1, base.abs_prec(), other.abs_prec()});
    if (required < 1) throw PrecisionExhausted("no digits left to compare at this level");
    bool pass = agrees_to_precision(base, other, required);
    req.doc["inputs"] = {{"twist", j},  {"s", req.s_text},    {"level", level},
                         {"c", req.c},  {"c_alt", req.c_alt}, {"prec", req.prec}};
    req.doc["value"] = padic_json(base);
    req.doc["witness"] = {{"required", required},
                          {"lhs", render(base)},
                          {"rhs", render(other)}};
    req.say("c=", req.c, ": ", render(base));
    req.say("c=", req.c_alt, ": ", render(other));
    if (pass) {
        req.say("PASS (agreement through p^", required, ")");
        return req.finish(0);
    }
    req.doc["status"] = "FAIL";
    req.say("FAIL (required agreement through p^", required, ")");
    return req.finish(3);
}

int cmd_verify_vanishing(Request& req) {
    req.begin("verify vanishing");
    Rational s = req.s();
    req.doc["inputs"] = {{"branch", req.branch}, {"s", req.s_text},
                         {"max_level", req.max_level}, {"prec", req.prec}};
    json prof = json::array();
    bool pass = true;
    long witness_level = 0;
    for (long n = 1; n <= req.max_level; ++n) {
        PadicNumber sn = partial_sum(req.p, req.branch, s, n, req.prec, req.jobs, req.budget);
        long vlb = sn.valuation_lower_bound();
        prof.push_back(vlb);
        req.say("level ", n, ": v_p(S_n) >= ", vlb);
        if (vlb < n - 1 && pass) {
            pass = false;
            witness_level = n;
        }
    }
    req.doc["profile"] = prof;
    req.doc["status"] = pass ? "PASS" : "FAIL";
    if (pass) {
        req.say("PASS");
        return req.finish(0);
    }
    req.doc["witness"] = {{"level", witness_level}};
    req.say("FAIL at level ", witness_level);
    return req.finish(3);
}

int cmd_residue(Request& req) {
    req.begin("residue");
    long level = req.level > 0 ? req.level : 6;
    PadicNumber v =
        residue_estimate_branch(req.p, req.branch, level, req.prec, req.jobs, req.budget);
    req.doc["inputs"] = {{"branch", req.branch}, {"level", level}, {"prec", req.prec}};
    req.doc["value"] = padic_json(v);
    req.say(render(v));
    return req.finish(0);
}

int cmd_profile(Request& req) {
    req.begin("profile");
    Rational s = req.s();
    long n_max = req.max_level >= 2 ? req.max_level : 6;
    auto prof = convergence_profile(req.p, req.branch, s, n_max, req.prec, req.jobs, req.budget);
    req.doc["inputs"] = {{"branch", req.branch}, {"s", req.s_text}, {"max_level", n_max},
                         {"prec", req.prec}};
    req.doc["profile"] = profile_json(prof);
    for (std::size_t m = 0; m < prof.size(); ++m) {
        long n = static_cast<long>(m) + 1;
        if (prof[m])
            req.say("v_p(S_", n + 1, " - S_", n, ") = ", *prof[m]);
        else
            req.say("S_", n + 1, " = S_", n, " to working precision");
    }
    return req.finish(0);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Request req;
    req.out = &out;

    CLI::App app{"p-adic measures and zeta branches"};
    app.require_subcommand(1);

    auto add_common = [&req](CLI::App* sub) {
        sub->add_flag("--json", req.json_mode, "emit a JSON report instead of text");
        sub->add_option("--jobs", req.jobs, "worker threads for the summation")
            ->check(CLI::Range(1L, 64L));
        sub->add_option("--budget", req.budget, "term/ball budget before giving up");
    };
    auto add_p = [&req](CLI::App* sub) {
        sub->add_option("--p", req.p, "odd prime")->required();
    };

    CLI::App* zeta = app.add_subcommand("zeta", "evaluate a zeta branch L_p(s, omega^(1-i))");
    add_p(zeta);
    zeta->add_option("--branch", req.branch, "branch index i in [0, p-2]")->required();
    zeta->add_option("--s", req.s_text, "evaluation point, integer or a/b")->required();
    zeta->add_option("--prec", req.prec, "requested digits");
    zeta->add_option("--level", req.level, "fixed summation level (default: adaptive)");
    add_common(zeta);

    CLI::App* lp = app.add_subcommand("lp", "Mellin transform of E_{1,c} against omega^j <a>^-s");
    add_p(lp);
    lp->add_option("--twist", req.twist, "character exponent j")->required();
    lp->add_option("--s", req.s_text, "evaluation point, integer or a/b")->required();
    lp->add_option("--c", req.c, "regularization constant");
    lp->add_option("--prec", req.prec, "requested digits");
    lp->add_option("--level", req.level, "summation level (default prec+1)");
    add_common(lp);

    CLI::App* measure = app.add_subcommand("measure", "evaluate a distribution on a clopen ball");
    add_p(measure);
    measure->add_option("--family", req.family, "haar, E, Ec, or mu");
    measure->add_option("--k", req.k, "Bernoulli index for E / Ec");
    measure->add_option("--c", req.c, "regularization constant for Ec");
    measure->add_option("--ball", req.ball_text, "ball as REP:LEVEL")->required();
    add_common(measure);

    CLI::App* bern = app.add_subcommand("bernoulli", "Bernoulli numbers, plain or twisted");
    bern->add_option("--k", req.k, "index")->required();
    CLI::Option* bern_p = bern->add_option("--p", req.p, "prime for a twisted value");
    bern->add_option("--twist", req.twist, "Teichmuller exponent")->needs(bern_p);
    bern->add_option("--prec", req.prec, "requested digits");
    add_common(bern);

    CLI::App* verify = app.add_subcommand("verify", "run a verification suite");
    verify->require_subcommand(1);

    CLI::App* vthm = verify->add_subcommand("theorem1", "E_{1,2} = (-1)^a/2 on every ball");
    add_p(vthm);
    vthm->add_option("--max-level", req.max_level, "deepest level to scan");
    add_common(vthm);

    CLI::App* vadd = verify->add_subcommand("additivity", "parent = sum of children");
    add_p(vadd);
    vadd->add_option("--family", req.family, "haar, E, Ec, or mu");
    vadd->add_option("--k", req.k, "Bernoulli index");
    vadd->add_option("--c", req.c, "regularization constant");
    vadd->add_option("--max-level", req.max_level, "children live at this level");
    add_common(vadd);

    CLI::App* vbound = verify->add_subcommand("boundedness", "sup |value|_p per level");
    add_p(vbound);
    vbound->add_option("--k", req.k, "Bernoulli index");
    CLI::Option* bc = vbound->add_option("--c", req.c, "check the regularized measure");
    vbound->add_option("--max-level", req.max_level, "deepest level to scan");
    add_common(vbound);

    CLI::App* vinterp = verify->add_subcommand("interpolation", "series vs Bernoulli target");
    add_p(vinterp);
    vinterp->add_option("--branch", req.branch, "branch index i")->required();
    vinterp->add_option("--k", req.k, "weight, evaluates at s = 1-k")->required();
    vinterp->add_option("--level", req.level, "summation level");
    vinterp->add_option("--prec", req.prec, "requested digits");
    add_common(vinterp);

    CLI::App* vc = verify->add_subcommand("c-independence", "two regularizations, one value");
    add_p(vc);
    vc->add_option("--twist", req.twist, "character exponent j")->required();
    vc->add_option("--s", req.s_text, "evaluation point")->required();
    vc->add_option("--c", req.c, "first regularization constant");
    vc->add_option("--c-alt", req.c_alt, "second regularization constant");
    vc->add_option("--level", req.level, "summation level");
    vc->add_option("--prec", req.prec, "requested digits");
    add_common(vc);

    CLI::App* vvan = verify->add_subcommand("vanishing", "odd-character partial sums shrink");
    add_p(vvan);
    vvan->add_option("--branch", req.branch, "branch index i (even for vanishing)")->required();
    vvan->add_option("--s", req.s_text, "evaluation point");
    vvan->add_option("--max-level", req.max_level, "deepest level");
    vvan->add_option("--prec", req.prec, "working digits");
    add_common(vvan);

    CLI::App* residue = app.add_subcommand("residue", "residue estimate at s=1 on a pole branch");
    add_p(residue);
    residue->add_option("--branch", req.branch, "pole branch index");
    residue->add_option("--level", req.level, "summation level");
    residue->add_option("--prec", req.prec, "requested digits");
    add_common(residue);

    CLI::App* profile = app.add_subcommand("profile", "increment valuations level by level");
    add_p(profile);
    profile->add_option("--branch", req.branch, "branch index i")->required();
    profile->add_option("--s", req.s_text, "evaluation point")->required();
    profile->add_option("--max-level", req.max_level, "deepest level");
    profile->add_option("--prec", req.prec, "working digits");
    add_common(profile);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? 0 : 1;
    }

    try {
        if (app.got_subcommand(zeta)) return cmd_zeta(req);
        if (app.got_subcommand(lp)) return cmd_lp(req);
        if (app.got_subcommand(measure)) return cmd_measure(req);
        if (app.got_subcommand(bern)) return cmd_bernoulli(req, !bern_p->empty());
        if (app.got_subcommand(verify)) {
            if (verify->got_subcommand(vthm)) return cmd_verify_theorem1(req);
            if (verify->got_subcommand(vadd)) return cmd_verify_additivity(req);
            if (verify->got_subcommand(vbound)) return cmd_verify_boundedness(req, !bc->empty());
            if (verify->got_subcommand(vinterp)) return cmd_verify_interpolation(req);
            if (verify->got_subcommand(vc)) return cmd_verify_c_independence(req);
            if (verify->got_subcommand(vvan)) return cmd_verify_vanishing(req);
        }
        if (app.got_subcommand(residue)) return cmd_residue(req);
        if (app.got_subcommand(profile)) return cmd_profile(req);
        err << "error: no subcommand\n";
        return 1;
    } catch (const ParseError& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const MathError& e) {
        err << "error: " << e.what() << "\n";
        if (req.json_mode) {
            req.doc["status"] = "ERROR";
            req.doc["witness"] = e.what();
            out << req.doc.dump(2) << "\n";
        }
        return 2;
    }
}

}  // namespace padzeta::cli
