#include "cli.hpp"

#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "sparseseries/algebraic.hpp"
#include "sparseseries/arith_sieve.hpp"
#include "sparseseries/criterion.hpp"
#include "sparseseries/errors.hpp"
#include "sparseseries/report.hpp"
#include "sparseseries/sequence.hpp"
#include "sparseseries/series_eval.hpp"

namespace sparseseries::cli {

namespace {

using nlohmann::json;

mpq_class parse_rational(const std::string& text) {
    if (text.empty()) throw InvalidInput("empty number");
    if (text.find('/') != std::string::npos) {
        mpq_class q(text);
        q.canonicalize();
        return q;
    }
    // [sign]digits[.digits][e[sign]digits]
    std::size_t epos = text.find_first_of("eE");
    std::string mant = text.substr(0, epos);
    long expo = 0;
    if (epos != std::string::npos) expo = std::stol(text.substr(epos + 1));
    std::size_t dot = mant.find('.');
    if (dot != std::string::npos) {
        expo -= static_cast<long>(mant.size() - dot - 1);
        mant.erase(dot, 1);
    }
    if (mant.empty() || mant == "-" || mant == "+")
        throw InvalidInput("bad number '" + text + "'");
    mpq_class q;
    try {
        q = mpq_class(mpz_class(mant));
    } catch (const std::invalid_argument&) {
        throw InvalidInput("bad number '" + text + "'");
    }
    for (long i = 0; i < expo; ++i) q *= 10;
    for (long i = 0; i > expo; --i) q /= 10;
    return q;
}

std::vector<mpq_class> parse_rational_list(const std::string& text) {
    std::vector<mpq_class> out;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(parse_rational(tok));
    return out;
}

std::uint64_t to_u64(const mpq_class& q, const char* what) {
    if (q.get_den() != 1 || q < 0) throw InvalidInput(std::string(what) + " must be a"
                                                      " non-negative integer");
    if (!q.get_num().fits_ulong_p()) throw InvalidInput(std::string(what) + " too large");
    return q.get_num().get_ui();
}

json interval_json(const Interval& v) {
    return json{{"lo", v.lo_string(30)}, {"hi", v.hi_string(30)}};
}

// One sieve per (function, horizon) within a single run.
struct TableCache {
    std::map<std::pair<ArithFunction, std::uint64_t>, std::shared_ptr<ArithTable>> tables;
    std::uint64_t max_horizon = ArithTable::kDefaultMaxHorizon;

    const ArithTable& get(ArithFunction f, std::uint64_t horizon) {
        auto key = std::make_pair(f, horizon);
        auto it = tables.find(key);
        if (it == tables.end()) {
            auto t = std::make_shared<ArithTable>(ArithTable::sieve(f, horizon, max_horizon));
            it = tables.emplace(key, std::move(t)).first;
        }
        return *it->second;
    }
};

struct BaseOptions {
    std::string minpoly;
    std::uint64_t t = 0;
    long precision = 128;
    bool assume_irreducible = false;

    FieldPtr build() const {
        if (!minpoly.empty() && t != 0)
            throw InvalidInput("give either --minpoly or --t, not both");
        if (!minpoly.empty()) {
            AlgebraicField::Options opt;
            opt.precision_bits = precision;
            opt.assume_irreducible = assume_irreducible;
            return AlgebraicField::build(parse_monic_polynomial(minpoly), opt);
        }
        if (t >= 2) return AlgebraicField::rational_base(mpz_class(static_cast<unsigned long>(t)));
        throw InvalidInput("a base is required: --minpoly <poly> or --t <int>");
    }
};

// Sequence specs: zero | cubes | power:<alpha> | list:<n1,n2,...> |
// fiber:<g>[:<f>] | file:<path>, where <f> is 1, const:<c> or table:<fn>.
CoefficientSequence build_sequence(const std::string& spec, const FieldPtr& field,
                                   std::uint64_t H, TableCache& cache) {
    if (spec.empty() || spec == "zero") return CoefficientSequence::zero(field, H);
    if (spec == "cubes")
        return CoefficientSequence::indicator(field, power_support(mpq_class(3), H), H,
                                              false);
    if (spec.rfind("power:", 0) == 0) {
        mpq_class alpha = parse_rational(spec.substr(6));
        return CoefficientSequence::indicator(field, power_support(alpha, H), H, false);
    }
    if (spec.rfind("list:", 0) == 0) {
        auto vals = parse_rational_list(spec.substr(5));
        std::vector<std::uint64_t> elems;
        for (const auto& v : vals) elems.push_back(to_u64(v, "support element"));
        return CoefficientSequence::indicator(
            field, SupportSet::explicit_set(std::move(elems), H), H, true);
    }
    if (spec.rfind("fiber:", 0) == 0) {
        std::string rest = spec.substr(6);
        std::string gname = rest, fname = "1";
        if (auto pos = rest.find(':'); pos != std::string::npos) {
            gname = rest.substr(0, pos);
            fname = rest.substr(pos + 1);
        }
        ArithFunction g = arith_function_from_string(gname);
        mpz_class need = required_value_set_horizon(g, H);
        if (!need.fits_ulong_p())
            throw HorizonInsufficient("preimage policy horizon does not fit memory", need);
        const ArithTable& gt = cache.get(g, need.get_ui() + 1);
        FiberWeight f;
        if (fname == "1") {
            f.constant = 1;
        } else if (fname.rfind("const:", 0) == 0) {
            f.constant = mpz_class(fname.substr(6));
        } else if (fname.rfind("table:", 0) == 0) {
            ArithFunction ff = arith_function_from_string(fname.substr(6));
            f.table = &cache.get(ff, gt.horizon());
        } else {
            throw InvalidInput("bad fiber weight '" + fname + "'");
        }
        return fiber_sequence(f, gt, field, H);
    }
    if (spec.rfind("file:", 0) == 0) {
        std::ifstream is(spec.substr(5));
        if (!is) throw InvalidInput("cannot open sequence file " + spec.substr(5));
        return CoefficientSequence::read_jsonl(is);
    }
    throw InvalidInput("unknown sequence spec '" + spec + "'");
}

CheckpointSchedule build_schedule(const std::string& sched, const std::string& y,
                                  const std::string& z, const std::string& eta,
                                  const std::string& delta, const std::string& L) {
    CheckpointSchedule s;
    if (sched.rfind("geometric:", 0) == 0) {
        std::vector<mpq_class> parts;
        std::stringstream ss(sched.substr(10));
        std::string tok;
        while (std::getline(ss, tok, ':')) parts.push_back(parse_rational(tok));
        if (parts.size() < 2 || parts.size() > 3)
            throw InvalidInput("geometric schedule needs first:last[:factor]");
        s = CheckpointSchedule::geometric(parts[0], parts[1],
                                          parts.size() == 3 ? parts[2] : mpq_class(10));
    } else if (sched.rfind("list:", 0) == 0) {
        s.x = parse_rational_list(sched.substr(5));
    } else {
        throw InvalidInput("unknown schedule spec '" + sched + "'");
    }
    if (!y.empty()) s.y = parse_rational_list(y);
    if (z == "theorem-a") {
        s.theorem_a_z = true;
    } else if (z.rfind("loglog:", 0) == 0) {
        s.z_loglog_delta = parse_rational(z.substr(7));
    } else if (z.rfind("list:", 0) == 0) {
        s.z = parse_rational_list(z.substr(5));
    } else if (!z.empty()) {
        throw InvalidInput("unknown z rule '" + z + "'");
    }
    if (!eta.empty()) s.eta = parse_rational(eta);
    if (!delta.empty()) s.interlace_delta = parse_rational(delta);
    if (!L.empty()) s.interlace_l = parse_rational(L);
    return s;
}

void write_output(const std::string& path, const std::string& content, std::ostream& out) {
    if (path.empty()) {
        out << content;
        return;
    }
    std::ofstream os(path, std::ios::binary);
    if (!os) throw InvalidInput("cannot open output file " + path);
    os << content;
}

void emit_report(const CriterionReport& report, const std::string& out_json,
                 const std::string& out_csv, const std::string& out_text,
                 std::ostream& out) {
    bool any = false;
    if (!out_json.empty()) {
        write_output(out_json, render_report_json(report), out);
        any = true;
    }
    if (!out_csv.empty()) {
        write_output(out_csv, render_report_csv(report), out);
        any = true;
    }
    if (!out_text.empty()) {
        write_output(out_text, render_report_text(report), out);
        any = true;
    }
    if (!any) out << render_report_json(report);
}

std::uint64_t default_horizon(const CheckpointSchedule& s) {
    mpz_class top;
    mpz_cdiv_q(top.get_mpz_t(), s.x.back().get_num_mpz_t(), s.x.back().get_den_mpz_t());
    if (!top.fits_ulong_p()) throw InvalidInput("schedule horizon too large");
    return top.get_ui() + 1;
}

struct CheckArgs {
    std::string theorem = "rational";
    BaseOptions base;
    std::string a_spec = "zero", b_spec = "zero";
    std::string schedule, y, z, eta, Delta, L;
    std::uint64_t horizon = 0;
    std::string out_json, out_csv, out_text;
    mpq_class big_o_cap = 10;
};

int do_check(const CheckArgs& args, std::ostream& out) {
    CheckpointSchedule sched =
        build_schedule(args.schedule, args.y, args.z, args.eta, args.Delta, args.L);
    if (args.theorem == "rational" && sched.z.empty() && !sched.z_loglog_delta)
        sched.theorem_a_z = true;
    FieldPtr field = args.base.build();
    std::uint64_t H = args.horizon ? args.horizon : default_horizon(sched);
    TableCache cache;
    CoefficientSequence a = build_sequence(args.a_spec, field, H, cache);
    CoefficientSequence b = build_sequence(args.b_spec, field, H, cache);
    TrendRule rule;
    rule.big_o_cap = args.big_o_cap;
    CriterionReport report;
    if (args.theorem == "main") {
        report = check_theorem_main(a, b, sched, rule);
    } else if (args.theorem == "prepared") {
        report = check_theorem_prepared(a, b, sched, rule);
    } else if (args.theorem == "rational") {
        if (!field->is_rational())
            throw NonRationalField("--theorem rational needs a degree-1 base (--t)");
        report = check_theorem_rational(field->rational_q(), a, b, sched, rule);
    } else {
        throw InvalidInput("unknown theorem '" + args.theorem + "'");
    }
    emit_report(report, args.out_json, args.out_csv, args.out_text, out);
    return 0;
}

// Injects options from a JSON config file as defaults; explicit flags win
// through the take-last policy.
std::vector<std::string> apply_config(std::vector<std::string> args) {
    std::string config_path;
    for (std::size_t i = 0; i + 1 < args.size(); ++i)
        if (args[i] == "--config") config_path = args[i + 1];
    if (config_path.empty()) return args;
    std::ifstream is(config_path);
    if (!is) throw InvalidInput("cannot open config file " + config_path);
    json cfg = json::parse(is, nullptr, /*allow_exceptions=*/false);
    if (cfg.is_discarded()) throw InvalidInput("config file is not valid JSON");
    std::vector<std::string> injected;
    for (auto it = cfg.begin(); it != cfg.end(); ++it) {
        if (it.value().is_boolean()) {
            if (it.value().get<bool>()) injected.push_back("--" + it.key());
        } else if (it.value().is_string()) {
            injected.push_back("--" + it.key());
            injected.push_back(it.value().get<std::string>());
        } else {
            injected.push_back("--" + it.key());
            injected.push_back(it.value().dump());
        }
    }
    // subcommand first, then config defaults, then user flags
    if (args.empty()) return injected;
    std::vector<std::string> out;
    out.push_back(args[0]);
    out.insert(out.end(), injected.begin(), injected.end());
    out.insert(out.end(), args.begin() + 1, args.end());
    return out;
}

}  // namespace

int run(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"sparse power series experiments: exact sequence statistics and "
                 "irrationality-criterion checkpoints"};
    app.name("sparse-series");
    app.require_subcommand(1);
    std::string config_dummy;
    app.add_option("--config", config_dummy, "JSON config file with default flag values");

    auto opt = [](CLI::Option* o) {
        o->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
        return o;
    };

    int exit_code = 0;
    std::function<void()> action;

    // classify
    {
        auto* cmd = app.add_subcommand("classify", "certified Pisot/Salem classification");
        auto base = std::make_shared<BaseOptions>();
        opt(cmd->add_option("--minpoly", base->minpoly, "monic minimal polynomial"));
        opt(cmd->add_option("--t", base->t, "rational integer base"));
        opt(cmd->add_option("--precision", base->precision, "construction precision bits"));
        cmd->add_flag("--assume-irreducible", base->assume_irreducible,
                      "acknowledge the advisory screen for degree > 4");
        auto out_path = std::make_shared<std::string>();
        opt(cmd->add_option("--out", *out_path, "output file (default stdout)"));
        cmd->callback([&, base, out_path] {
            action = [&, base, out_path] {
                FieldPtr f = base->build();
                json j;
                j["schema"] = "sparse-series-classify/1";
                j["minpoly"] = f->minpoly().to_coeff_string();
                j["degree"] = f->degree();
                j["kind"] = to_string(f->classification().kind);
                j["margin"] = interval_json(f->classification().margin);
                j["q"] = interval_json(f->principal_root(base->precision));
                json roots = json::array();
                for (const auto& r : f->roots())
                    roots.push_back(json{{"re", interval_json(r.real())},
                                         {"im", interval_json(r.imag())}});
                j["roots"] = roots;
                write_output(*out_path, j.dump(2) + "\n", out);
            };
        });
    }

    // sieve
    {
        auto* cmd = app.add_subcommand("sieve", "linear sieve of an arithmetic function");
        auto fn = std::make_shared<std::string>("phi");
        auto horizon = std::make_shared<std::uint64_t>(0);
        auto out_bin = std::make_shared<std::string>();
        auto out_csv = std::make_shared<std::string>();
        opt(cmd->add_option("--function", *fn,
                            "sigma|phi|divisor_count|omega_distinct|omega_with_multiplicity"));
        opt(cmd->add_option("--horizon", *horizon, "table horizon X"))->required();
        opt(cmd->add_option("--out", *out_bin, "binary table output"));
        opt(cmd->add_option("--csv", *out_csv, "CSV output"));
        cmd->callback([&, fn, horizon, out_bin, out_csv] {
            action = [&, fn, horizon, out_bin, out_csv] {
                ArithTable t = ArithTable::sieve(arith_function_from_string(*fn), *horizon);
                if (!out_bin->empty()) {
                    std::ofstream os(*out_bin, std::ios::binary);
                    if (!os) throw InvalidInput("cannot open " + *out_bin);
                    t.write_binary(os);
                }
                if (!out_csv->empty()) {
                    std::ofstream os(*out_csv);
                    if (!os) throw InvalidInput("cannot open " + *out_csv);
                    t.write_csv(os);
                }
                if (out_bin->empty() && out_csv->empty()) t.write_csv(out);
            };
        });
    }

    // build-seq
    {
        auto* cmd = app.add_subcommand("build-seq", "construct a coefficient sequence");
        auto base = std::make_shared<BaseOptions>();
        auto spec = std::make_shared<std::string>();
        auto horizon = std::make_shared<std::uint64_t>(0);
        auto conv = std::make_shared<unsigned>(1);
        auto out_path = std::make_shared<std::string>();
        opt(cmd->add_option("--minpoly", base->minpoly, "monic minimal polynomial"));
        opt(cmd->add_option("--t", base->t, "rational integer base"));
        cmd->add_flag("--assume-irreducible", base->assume_irreducible, "");
        opt(cmd->add_option("--seq", *spec, "sequence spec"))->required();
        opt(cmd->add_option("--horizon", *horizon, "sequence horizon"))->required();
        opt(cmd->add_option("--conv-power", *conv, "convolution power j (default 1)"));
        opt(cmd->add_option("--out", *out_path, "JSONL output (default stdout)"));
        cmd->callback([&, base, spec, horizon, conv, out_path] {
            action = [&, base, spec, horizon, conv, out_path] {
                FieldPtr f = base->build();
                TableCache cache;
                CoefficientSequence s = build_sequence(*spec, f, *horizon, cache);
                if (*conv > 1) s = convolution_power(s, *conv, *horizon);
                std::ostringstream buf;
                s.write_jsonl(buf);
                write_output(*out_path, buf.str(), out);
            };
        });
    }

    // stats
    {
        auto* cmd = app.add_subcommand("stats", "N/S/R statistics at one checkpoint");
        auto base = std::make_shared<BaseOptions>();
        auto spec = std::make_shared<std::string>();
        auto horizon = std::make_shared<std::uint64_t>(0);
        auto xs = std::make_shared<std::string>();
        auto zs = std::make_shared<std::string>("1");
        auto etas = std::make_shared<std::string>("1");
        auto out_path = std::make_shared<std::string>();
        opt(cmd->add_option("--minpoly", base->minpoly, ""));
        opt(cmd->add_option("--t", base->t, ""));
        cmd->add_flag("--assume-irreducible", base->assume_irreducible, "");
        opt(cmd->add_option("--seq", *spec, "sequence spec"))->required();
        opt(cmd->add_option("--horizon", *horizon, "sequence horizon"));
        opt(cmd->add_option("--x", *xs, "checkpoint x"))->required();
        opt(cmd->add_option("--z", *zs, "inner cutoff z"));
        opt(cmd->add_option("--eta", *etas, "window constant eta"));
        opt(cmd->add_option("--out", *out_path, ""));
        cmd->callback([&, base, spec, horizon, xs, zs, etas, out_path] {
            action = [&, base, spec, horizon, xs, zs, etas, out_path] {
                FieldPtr f = base->build();
                mpq_class x = parse_rational(*xs);
                mpz_class xc;
                mpz_cdiv_q(xc.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
                std::uint64_t H = *horizon ? *horizon : to_u64(mpq_class(xc), "x") + 1;
                TableCache cache;
                CoefficientSequence s = build_sequence(*spec, f, H, cache);
                TailStats st = stats(s, x, parse_rational(*zs), parse_rational(*etas));
                json j;
                j["schema"] = "sparse-series-stats/1";
                j["x"] = st.x.get_str();
                j["z"] = st.z.get_str();
                j["eta"] = st.eta.get_str();
                j["N_count"] = st.N_count;
                j["S"] = interval_json(st.S_value);
                j["R"] = interval_json(st.R_value);
                write_output(*out_path, j.dump(2) + "\n", out);
            };
        });
    }

    // check
    {
        auto* cmd = app.add_subcommand("check", "criterion checkpoints and verdicts");
        auto args = std::make_shared<CheckArgs>();
        opt(cmd->add_option("--theorem", args->theorem, "main|prepared|rational"));
        opt(cmd->add_option("--minpoly", args->base.minpoly, ""));
        opt(cmd->add_option("--t", args->base.t, ""));
        cmd->add_flag("--assume-irreducible", args->base.assume_irreducible, "");
        opt(cmd->add_option("--a", args->a_spec, "main sequence spec"))->required();
        opt(cmd->add_option("--b", args->b_spec, "perturbation sequence spec"));
        opt(cmd->add_option("--schedule", args->schedule,
                            "geometric:first:last[:factor] or list:v1,v2,..."))
            ->required();
        opt(cmd->add_option("--y", args->y, "y checkpoints (list:...)"));
        opt(cmd->add_option("--z", args->z, "list:v1,... | theorem-a | loglog:<delta>"));
        opt(cmd->add_option("--eta", args->eta, "eta in (0,1], default 1/2"));
        opt(cmd->add_option("--Delta", args->Delta, "interlacing Delta > 1"));
        opt(cmd->add_option("--L", args->L, "interlacing L > 0"));
        opt(cmd->add_option("--horizon", args->horizon,
                            "sequence horizon (default from the schedule)"));
        opt(cmd->add_option("--out", args->out_json, "JSON report path"));
        opt(cmd->add_option("--csv", args->out_csv, "CSV ratio series path"));
        opt(cmd->add_option("--text", args->out_text, "text report path"));
        cmd->callback([&, args] { action = [&, args] { exit_code = do_check(*args, out); }; });
    }

    // witness
    {
        auto* cmd = app.add_subcommand("witness", "norm-witness search per denominator u");
        auto base = std::make_shared<BaseOptions>();
        auto a_spec = std::make_shared<std::string>();
        auto b_spec = std::make_shared<std::string>("zero");
        auto horizon = std::make_shared<std::uint64_t>(0);
        auto umax = std::make_shared<unsigned long>(100);
        auto nmax = std::make_shared<std::uint64_t>(200);
        auto out_json = std::make_shared<std::string>();
        auto out_text = std::make_shared<std::string>();
        opt(cmd->add_option("--minpoly", base->minpoly, ""));
        opt(cmd->add_option("--t", base->t, ""));
        cmd->add_flag("--assume-irreducible", base->assume_irreducible, "");
        opt(cmd->add_option("--a", *a_spec, "sequence spec"))->required();
        opt(cmd->add_option("--b", *b_spec, ""));
        opt(cmd->add_option("--horizon", *horizon, "sequence horizon"))->required();
        opt(cmd->add_option("--u-max", *umax, "largest denominator"));
        opt(cmd->add_option("--n-max", *nmax, "largest cutoff N"));
        opt(cmd->add_option("--precision", base->precision, ""));
        opt(cmd->add_option("--out", *out_json, ""));
        opt(cmd->add_option("--text", *out_text, ""));
        cmd->callback([&, base, a_spec, b_spec, horizon, umax, nmax, out_json, out_text] {
            action = [&, base, a_spec, b_spec, horizon, umax, nmax, out_json, out_text] {
                FieldPtr f = base->build();
                TableCache cache;
                CoefficientSequence a = build_sequence(*a_spec, f, *horizon, cache);
                CoefficientSequence b = build_sequence(*b_spec, f, *horizon, cache);
                CriterionReport report;
                report.theorem = "witness-search";
                report.minpoly = f->minpoly().to_coeff_string();
                report.base_description = to_string(f->classification().kind);
                report.sequence_a = *a_spec;
                report.sequence_b = *b_spec;
                report.witnesses = witness_search(a, b, *umax, *nmax, base->precision);
                emit_report(report, *out_json, "", *out_text, out);
            };
        });
    }

    // eval
    {
        auto* cmd = app.add_subcommand("eval", "rigorous enclosure of the series value");
        auto base = std::make_shared<BaseOptions>();
        auto a_spec = std::make_shared<std::string>();
        auto b_spec = std::make_shared<std::string>("zero");
        auto horizon = std::make_shared<std::uint64_t>(0);
        auto out_path = std::make_shared<std::string>();
        opt(cmd->add_option("--minpoly", base->minpoly, ""));
        opt(cmd->add_option("--t", base->t, ""));
        cmd->add_flag("--assume-irreducible", base->assume_irreducible, "");
        opt(cmd->add_option("--a", *a_spec, "sequence spec"))->required();
        opt(cmd->add_option("--b", *b_spec, ""));
        opt(cmd->add_option("--horizon", *horizon, "sequence horizon"))->required();
        opt(cmd->add_option("--precision", base->precision, "target width 2^-precision"));
        opt(cmd->add_option("--out", *out_path, ""));
        cmd->callback([&, base, a_spec, b_spec, horizon, out_path] {
            action = [&, base, a_spec, b_spec, horizon, out_path] {
                FieldPtr f = base->build();
                TableCache cache;
                CoefficientSequence a = build_sequence(*a_spec, f, *horizon, cache);
                CoefficientSequence b = build_sequence(*b_spec, f, *horizon, cache);
                Interval v = evaluate_series(a, b, base->precision);
                json j;
                j["schema"] = "sparse-series-eval/1";
                j["value"] = interval_json(v);
                j["precision"] = base->precision;
                write_output(*out_path, j.dump(2) + "\n", out);
            };
        });
    }

    // digits
    {
        auto* cmd = app.add_subcommand("digits", "exact base-t digit stream of a fiber sum");
        auto t = std::make_shared<std::uint64_t>(2);
        auto g_spec = std::make_shared<std::string>();
        auto f_spec = std::make_shared<std::string>("1");
        auto P = std::make_shared<std::uint64_t>(100);
        auto ell = std::make_shared<unsigned>(0);
        auto out_path = std::make_shared<std::string>();
        opt(cmd->add_option("--t", *t, "digit base"));
        opt(cmd->add_option("--g", *g_spec, "sigma|phi|power:<k>"))->required();
        opt(cmd->add_option("--f", *f_spec, "1 | const:<c> | table:<fn>"));
        opt(cmd->add_option("--P", *P, "positions"));
        opt(cmd->add_option("--density-ell", *ell, "also emit the density rows for ell"));
        opt(cmd->add_option("--out", *out_path, ""));
        cmd->callback([&, t, g_spec, f_spec, P, ell, out_path] {
            action = [&, t, g_spec, f_spec, P, ell, out_path] {
                TableCache cache;
                FiberWeight f;
                if (*f_spec == "1") {
                    f.constant = 1;
                } else if (f_spec->rfind("const:", 0) == 0) {
                    f.constant = mpz_class(f_spec->substr(6));
                } else if (f_spec->rfind("table:", 0) == 0) {
                    throw InvalidInput("table weights need fiber preimage tables; use "
                                       "--g sigma/phi with --f table:<fn> via build-seq");
                } else {
                    throw InvalidInput("bad weight '" + *f_spec + "'");
                }
                DigitStream ds;
                if (g_spec->rfind("power:", 0) == 0) {
                    unsigned k = static_cast<unsigned>(std::stoul(g_spec->substr(6)));
                    ds = digit_stream_monomial(f, k, *t, *P);
                } else {
                    ArithFunction g = arith_function_from_string(*g_spec);
                    mpz_class need = required_value_set_horizon(g, *P + 1);
                    if (!need.fits_ulong_p())
                        throw HorizonInsufficient("preimage policy horizon too large", need);
                    ds = digit_stream(f, cache.get(g, need.get_ui() + 1), *t, *P);
                }
                std::ostringstream buf;
                ds.write_text(buf);
                if (*ell >= 1) {
                    for (const auto& row : nonzero_digit_density(ds, *ell)) {
                        buf << "density x=" << row.x << " count=" << row.count
                            << " normalized=" << row.normalized.to_string(12) << "\n";
                    }
                }
                write_output(*out_path, buf.str(), out);
            };
        });
    }

    for (CLI::App* sc : app.get_subcommands([](const CLI::App*) { return true; }))
        sc->fallthrough();

    try {
        std::vector<std::string> args = apply_config(argv);
        // CLI11 wants the vector reversed and without the program name.
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << "\n";
        return 1;
    } catch (const InvalidInput& e) {
        err << "usage error: " << e.what() << "\n";
        return 1;
    }

    try {
        if (action) action();
        return exit_code;
    } catch (const InvalidInput& e) {
        err << "usage error: " << e.what() << "\n";
        return 1;
    } catch (const Error& e) {
        err << "computational error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace sparseseries::cli
