// Batch front end. Every command writes diff-able artifacts: CSV with a single
// header line, JSON pretty-printed in insertion order. Exit codes: 0 success,
// 1 usage, 2 verification failure. AQEC_THREADS caps worker threads.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "aqec/channel.hpp"
#include "aqec/codes.hpp"
#include "aqec/fault_tolerance.hpp"
#include "aqec/linalg.hpp"
#include "aqec/optimize.hpp"
#include "aqec/petz.hpp"
#include "aqec/serialize.hpp"
#include "aqec/spin_chain.hpp"

namespace {

using namespace aqec;
using nlohmann::ordered_json;

constexpr const char* kGenerator = "aqec 0.1.0";
constexpr double kUnset = std::numeric_limits<double>::quiet_NaN();

int usage_error(const std::string& msg) {
    std::cerr << "error: " << msg << "\n";
    return 1;
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

void write_file(const std::string& path, const std::string& body) {
    std::ofstream out(path, std::ios::binary);
    out << body;
    if (!out) throw std::runtime_error("cannot write " + path);
}

// ---- shared channel flags ----------------------------------------------------

struct ChannelFlags {
    std::string type;
    double gamma = kUnset;  // --gamma / --p
    double theta = kUnset;
    double phi = 0.0;
    double alpha = kUnset;
    std::uint64_t seed = 0;
};

void add_channel_flags(CLI::App* cmd, ChannelFlags& f) {
    cmd->add_option("--channel", f.type, "ad|rad|random|bitflip|phaseflip|depolarizing")
        ->required()
        ->check(CLI::IsMember(
            {"ad", "rad", "random", "bitflip", "phaseflip", "depolarizing"}));
    cmd->add_option("--gamma,--p", f.gamma, "damping / error probability");
    cmd->add_option("--theta", f.theta, "damping axis polar angle (rad)");
    cmd->add_option("--phi", f.phi, "damping axis azimuth (rad)");
    cmd->add_option("--alpha", f.alpha, "random-channel non-identity weight");
}

// Strength parameter the command sweeps or fixes; -1 signals a missing flag.
double channel_param(const ChannelFlags& f, std::string& err) {
    if (f.type == "random") {
        if (std::isnan(f.alpha)) err = "missing --alpha for random";
        return f.alpha;
    }
    if (std::isnan(f.gamma)) {
        err = "missing --gamma for " + f.type;
        return 0.0;
    }
    if (f.type == "rad" && std::isnan(f.theta)) err = "missing --theta for rad";
    return f.gamma;
}

QuantumChannel qubit_channel(const ChannelFlags& f, double param) {
    if (f.type == "ad") return make_amplitude_damping(param);
    if (f.type == "rad")
        return make_rotated_amplitude_damping(param, {f.theta, f.phi});
    if (f.type == "random") return make_random_channel(param, f.seed);
    return make_named(f.type, param);
}

ordered_json channel_json(const ChannelFlags& f, double param) {
    ordered_json j;
    j["type"] = f.type;
    if (f.type == "random") {
        j["alpha"] = param;
        j["seed"] = f.seed;
    } else {
        j["gamma"] = param;
    }
    if (f.type == "rad") {
        j["theta"] = f.theta;
        j["phi"] = f.phi;
    }
    return j;
}

// Worst-case squared transmission fidelity of the bare qubit (no encoding).
double bare_qubit_f2(const QuantumChannel& q1) {
    Codespace full;
    full.phys_dim = 2;
    full.codewords = {basis_state(2, 0), basis_state(2, 1)};
    return worst_case_fidelity_sq(q1, identity_channel(2), full);
}

// ---- search ------------------------------------------------------------------

struct SearchFlags {
    ChannelFlags chan;
    int n = 4;
    std::string mode = "structured";
    int restarts = 20;
    std::uint64_t seed = 0;
    std::string out = "search";
};

int cmd_search(const SearchFlags& sf) {
    std::string err;
    const double param = channel_param(sf.chan, err);
    if (!err.empty()) return usage_error(err);

    ChannelFlags cf = sf.chan;
    cf.seed = sf.seed;  // --seed drives both the random channel and the search
    const QuantumChannel q1 = qubit_channel(cf, param);
    const QuantumChannel chan = tensor_power(q1, sf.n);

    SearchConfig cfg;
    cfg.n_qubits = sf.n;
    cfg.restarts = sf.restarts;
    cfg.seed = sf.seed;
    if (sf.mode == "structured") {
        cfg.mode = SearchMode::structured_trivial;
    } else if (sf.mode == "structured-local") {
        cfg.mode = SearchMode::structured_nontrivial;
        cfg.local = (Mat(2, 2) << 1, 1, 1, -1).finished() / std::sqrt(2.0);
    } else {
        cfg.mode = SearchMode::unstructured;
    }
    const SearchResult res = run_search(chan, cfg);

    const Codespace baseline = sf.n == 4 ? leung_code() : ad_3qubit_code();
    const double base_loss =
        fidelity_loss(chan, petz_recovery(chan, baseline), baseline);

    ordered_json j;
    j["generator"] = kGenerator;
    j["command"] = "search";
    j["channel"] = channel_json(cf, param);
    j["qubits"] = sf.n;
    j["mode"] = sf.mode;
    j["restarts"] = sf.restarts;
    j["seed"] = sf.seed;
    j["best_loss"] = res.best_loss;
    j["baseline_code"] = sf.n == 4 ? "leung" : "3q";
    j["baseline_loss"] = base_loss;
    j["iterations"] = res.iterations;
    j["winning_restart"] = res.winning_restart;
    j["best_x"] = res.best_x;
    nlohmann::json code_j = res.code;
    j["code"] = code_j;
    write_file(sf.out + ".json", j.dump(2) + "\n");

    std::string csv = "iteration,loss\n";
    for (std::size_t i = 0; i < res.trace.size(); ++i)
        csv += std::to_string(i + 1) + "," + fmt(res.trace[i]) + "\n";
    write_file(sf.out + "_trace.csv", csv);

    std::cout << "best_loss=" << fmt(res.best_loss)
              << " baseline_loss=" << fmt(base_loss) << " wrote " << sf.out
              << ".json " << sf.out << "_trace.csv\n";
    return 0;
}

// ---- fidelity_curve ----------------------------------------------------------

struct CurveFlags {
    ChannelFlags chan;
    std::string code = "leung";
    double pmin = 0.0, pmax = 0.2;
    int steps = 21;
    std::string out = "curve.csv";
};

Codespace parse_code(const std::string& s) {
    if (s == "leung") return leung_code();
    if (s == "3q") return ad_3qubit_code();
    if (s == "5q") return five_qubit_code();
    if (s.rfind("table:", 0) == 0) return load_table_code(s.substr(6));
    if (s.rfind("file:", 0) == 0) return load_code_file(s.substr(5));
    throw std::invalid_argument("unknown code " + s);
}

int cmd_curve(const CurveFlags& cf) {
    if (cf.steps < 1) return usage_error("--steps must be positive");
    if (cf.pmax < cf.pmin) return usage_error("--pmax below --pmin");
    if (cf.chan.type == "rad" && std::isnan(cf.chan.theta))
        return usage_error("missing --theta for rad");
    const Codespace code = parse_code(cf.code);
    const int n = static_cast<int>(std::lround(std::log2(code.phys_dim)));

    std::string csv = "p,f2_min,f2_bare\n";
    for (int k = 0; k < cf.steps; ++k) {
        const double p = cf.steps == 1
                             ? cf.pmin
                             : cf.pmin + (cf.pmax - cf.pmin) * k / (cf.steps - 1);
        const QuantumChannel q1 = qubit_channel(cf.chan, p);
        const QuantumChannel chan = tensor_power(q1, n);
        const double f2 =
            worst_case_fidelity_sq(chan, petz_recovery(chan, code), code);
        csv += fmt(p) + "," + fmt(f2) + "," + fmt(bare_qubit_f2(q1)) + "\n";
    }
    write_file(cf.out, csv);
    std::cout << "wrote " << cf.out << " (" << cf.steps << " rows)\n";
    return 0;
}

// ---- spin --------------------------------------------------------------------

struct SpinFlags {
    int N = 8, s = 1, r = 8;
    double tmax = 100.0, dt = 0.01;
    double t = 0.0;       // disorder/density; 0 = use the optimal transfer time
    double delta = 0.0;
    int samples = 10000;
    std::uint64_t seed = 0;
    int every = 0, reps = 10;  // every=0: one correction per chain transfer
    std::string component = "re";
    int points = 401;
    std::string out;
};

int check_sites(const SpinFlags& f) {
    if (f.N < 2) return usage_error("--N must be at least 2");
    if (f.s < 1 || f.s > f.N || f.r < 1 || f.r > f.N)
        return usage_error("--s/--r must lie in 1..N");
    if (f.dt <= 0 || f.tmax <= 0) return usage_error("--dt/--tmax must be positive");
    return 0;
}

double resolve_time(const ChainSpec& spec, const SpinFlags& f) {
    if (f.t > 0) return f.t;
    return optimal_transfer_time(spec, f.tmax, f.dt).t;
}

int cmd_spin_ideal(const SpinFlags& f) {
    if (int rc = check_sites(f)) return rc;
    const ChainSpec spec = xxx_chain(f.N, f.s, f.r);
    const std::string out = f.out.empty() ? "spin_ideal.csv" : f.out;

    std::string csv = "t,re_f,im_f,abs_f,f2_protocol,f2_bare\n";
    const int rows = static_cast<int>(std::lround(f.tmax / f.dt));
    for (int k = 1; k <= rows; ++k) {
        const double t = k * f.dt;
        const TransitionRecord rec = transition_amplitude(spec, t);
        const double p = 1.0 - rec.magnitude * rec.magnitude;
        const double f2 = std::max(0.0, 1.0 - 1.75 * p * p);
        csv += fmt(t) + "," + fmt(rec.f.real()) + "," + fmt(rec.f.imag()) + "," +
               fmt(rec.magnitude) + "," + fmt(f2) + "," +
               fmt(noqec_fidelity(rec)) + "\n";
    }
    write_file(out, csv);
    const TransitionRecord best = optimal_transfer_time(spec, f.tmax, f.dt);
    std::cout << "t_star=" << fmt(best.t) << " abs_f=" << fmt(best.magnitude)
              << " wrote " << out << "\n";
    return 0;
}

// Correction repeats every `every` sites: the walk is stitched from end-to-end
// segment chains of that length, each evolved for its own optimal time, with
// one correction round per segment. The baseline stitches the same segments
// uncorrected.
int cmd_spin_repeated(const SpinFlags& f) {
    if (int rc = check_sites(f)) return rc;
    if (f.every < 0 || f.reps < 1) return usage_error("--every/--reps must be positive");
    const int period = f.every == 0 ? f.N : f.every;
    const ChainSpec seg = period == f.N ? xxx_chain(f.N, f.s, f.r)
                                        : xxx_chain(period, 1, period);
    const TransitionRecord best = optimal_transfer_time(seg, f.tmax, f.dt);
    const double p = 1.0 - best.magnitude * best.magnitude;
    const std::string out = f.out.empty() ? "spin_repeated.csv" : f.out;

    std::string csv = "k,sites,f2_qec,f2_bare\n";
    for (int k = 1; k <= f.reps; ++k) {
        const double qec = repeated_qec(p, 1.75, k);
        const double bare = std::pow(1.0 - p, k);
        csv += std::to_string(k) + "," + std::to_string(k * period) + "," +
               fmt(qec) + "," + fmt(bare) + "\n";
    }
    write_file(out, csv);
    std::cout << "t_star=" << fmt(best.t) << " p_segment=" << fmt(p) << " wrote "
              << out << "\n";
    return 0;
}

int cmd_spin_disorder(const SpinFlags& f) {
    if (int rc = check_sites(f)) return rc;
    if (f.delta <= 0) return usage_error("--delta must be positive");
    if (f.samples < 2) return usage_error("--samples must be at least 2");
    const ChainSpec spec = xxx_chain(f.N, f.s, f.r);
    const double t = resolve_time(spec, f);
    const DisorderSpec dis{f.delta, f.samples, f.seed};

    const std::vector<cxd> fs = disorder_sample(spec, t, dis);
    const double n = static_cast<double>(fs.size());
    double mr = 0, mi = 0;
    for (cxd v : fs) {
        mr += v.real();
        mi += v.imag();
    }
    mr /= n;
    mi /= n;
    double vr = 0, vi = 0;
    for (cxd v : fs) {
        vr += (v.real() - mr) * (v.real() - mr);
        vi += (v.imag() - mi) * (v.imag() - mi);
    }
    vr /= n - 1;
    vi /= n - 1;

    const cxd ideal = transition_amplitude(spec, t).f;
    const double est = disorder_avg_fidelity_estimate(spec, t, dis, 1.75);
    const double rec = disorder_avg_recovery_fidelity(spec, t, dis, leung_code());
    const std::string out = f.out.empty() ? "spin_disorder.csv" : f.out;

    std::string csv =
        "delta,samples,seed,t,re_ideal,im_ideal,re_mean,im_mean,se_re,se_im,"
        "var_re,var_im,f2_avg_estimate,f2_avg_recovery\n";
    csv += fmt(f.delta) + "," + std::to_string(f.samples) + "," +
           std::to_string(f.seed) + "," + fmt(t) + "," + fmt(ideal.real()) + "," +
           fmt(ideal.imag()) + "," + fmt(mr) + "," + fmt(mi) + "," +
           fmt(std::sqrt(vr / n)) + "," + fmt(std::sqrt(vi / n)) + "," + fmt(vr) +
           "," + fmt(vi) + "," + fmt(est) + "," + fmt(rec) + "\n";
    write_file(out, csv);
    std::cout << "t=" << fmt(t) << " mean=(" << fmt(mr) << "," << fmt(mi)
              << ") ideal=(" << fmt(ideal.real()) << "," << fmt(ideal.imag())
              << ") wrote " << out << "\n";
    return 0;
}

int cmd_spin_density(const SpinFlags& f) {
    if (int rc = check_sites(f)) return rc;
    if (f.delta <= 0) return usage_error("--delta must be positive");
    if (f.points < 2) return usage_error("--points must be at least 2");
    if (f.component != "re" && f.component != "im")
        return usage_error("--component must be re or im");
    const ChainSpec spec = xxx_chain(f.N, f.s, f.r);
    const double t = resolve_time(spec, f);
    const PiecewiseDensity d = first_order_density(
        spec, t, f.delta,
        f.component == "re" ? DensityComponent::re : DensityComponent::im);
    const std::string out = f.out.empty() ? "spin_density.csv" : f.out;

    std::string csv = "x,pdf,cdf\n";
    if (d.point_mass) {
        csv += fmt(d.location) + ",inf,1\n";
    } else {
        const double lo = d.knots.front(), hi = d.knots.back();
        for (int k = 0; k < f.points; ++k) {
            const double x = lo + (hi - lo) * k / (f.points - 1);
            csv += fmt(x) + "," + fmt(d.pdf(x)) + "," + fmt(d.cdf(x)) + "\n";
        }
    }
    write_file(out, csv);
    std::cout << "wrote " << out << "\n";
    return 0;
}

// ---- ft ----------------------------------------------------------------------

int cmd_ft_ledger(const std::string& unit_arg, const std::string& out) {
    std::string unit;
    if (unit_arg == "memory") {
        unit = "memory";
    } else if (unit_arg == "exrec") {
        unit = "cz_exrec";
    } else {
        return usage_error("unknown ledger unit " + unit_arg +
                           " (expected memory or exrec)");
    }

    LedgerReport rep;
    try {
        rep = ledger(unit);
    } catch (const std::logic_error& e) {
        std::cerr << "ledger verification failed: " << e.what() << "\n";
        return 2;
    }

    std::printf("%-14s %8s  %-38s %s\n", "block pair", "count", "derivation",
                "in total");
    for (const LedgerEntry& e : rep.entries)
        std::printf("%-14s %8lld  %-38s %s\n", e.block_pair.c_str(), e.count,
                    e.derivation.c_str(), e.in_total ? "yes" : "no");
    std::printf("damping_pairs=%lld z_locations=%lld A=%lld p_th=%s\n",
                rep.damping_pairs, rep.z_locations, rep.A, fmt(rep.p_th).c_str());

    if (!out.empty()) {
        ordered_json j;
        j["generator"] = kGenerator;
        j["command"] = "ft ledger";
        j["unit"] = unit;
        j["entries"] = ordered_json::array();
        for (const LedgerEntry& e : rep.entries) {
            ordered_json ej;
            ej["block_pair"] = e.block_pair;
            ej["count"] = e.count;
            ej["derivation"] = e.derivation;
            ej["in_total"] = e.in_total;
            ej["note"] = e.note;
            j["entries"].push_back(ej);
        }
        j["damping_pairs"] = rep.damping_pairs;
        j["z_locations"] = rep.z_locations;
        j["A"] = rep.A;
        j["p_th"] = rep.p_th;
        write_file(out, j.dump(2) + "\n");
        std::cout << "wrote " << out << "\n";
    }
    return 0;
}

int cmd_ft_verify(const std::string& gadget, const std::string& prop,
                  const std::string& out) {
    const PropertyReport rep = verify_property(gadget, prop);

    std::cout << rep.gadget << " " << rep.property << " "
              << (rep.pass ? "pass" : "FAIL") << " cases=" << rep.cases
              << " branches=" << rep.branches << "\n";
    if (!rep.pass) {
        const CaseRecord& c = rep.first_counterexample;
        std::cout << "  counterexample: input=" << c.input_label << " faults=[";
        for (int loc : c.fault_locations) std::cout << loc << " ";
        std::cout << "] placement=" << c.placement << " detail=" << c.detail
                  << "\n";
    }

    if (!out.empty()) {
        ordered_json j;
        j["generator"] = kGenerator;
        j["command"] = "ft verify";
        j["gadget"] = rep.gadget;
        j["property"] = rep.property;
        j["pass"] = rep.pass;
        j["cases"] = rep.cases;
        j["branches"] = rep.branches;
        if (!rep.pass) {
            const CaseRecord& c = rep.first_counterexample;
            ordered_json cj;
            cj["input"] = c.input_label;
            cj["fault_locations"] = c.fault_locations;
            cj["placement"] = c.placement;
            cj["kind"] = c.kind;
            cj["input_damps"] = c.input_damps;
            cj["verdict"] = c.verdict;
            cj["detail"] = c.detail;
            j["counterexample"] = cj;
        }
        write_file(out, j.dump(2) + "\n");
        std::cout << "wrote " << out << "\n";
    }
    return rep.pass ? 0 : 2;
}

// ---- config file + argv plumbing ---------------------------------------------

// Flat key=value lines; '#' starts a comment. Each key k becomes --k=value
// appended to the command line unless --k was given explicitly.
std::vector<std::string> apply_config(std::vector<std::string> args,
                                      const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read config " + path);
    std::vector<std::string> extra;
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        auto trim = [](std::string s) {
            const auto a = s.find_first_not_of(" \t\r");
            const auto b = s.find_last_not_of(" \t\r");
            return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
        };
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) continue;
        const std::string flag = "--" + key;
        bool present = false;
        for (const std::string& a : args)
            if (a == flag || a.rfind(flag + "=", 0) == 0) present = true;
        if (!present) extra.push_back(flag + "=" + value);
    }
    args.insert(args.end(), extra.begin(), extra.end());
    return args;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"channel-adapted code toolkit"};
    app.require_subcommand(1);

    SearchFlags sf;
    CLI::App* search = app.add_subcommand("search", "optimize an encoding for a channel");
    add_channel_flags(search, sf.chan);
    search->add_option("--n", sf.n, "qubits")->check(CLI::IsMember({3, 4}));
    search->add_option("--mode", sf.mode)
        ->check(CLI::IsMember({"structured", "structured-local", "unstructured"}));
    search->add_option("--restarts", sf.restarts)->check(CLI::PositiveNumber);
    search->add_option("--seed", sf.seed);
    search->add_option("--out", sf.out, "output prefix");

    CurveFlags cvf;
    CLI::App* curve =
        app.add_subcommand("fidelity_curve", "worst-case fidelity against error rate");
    add_channel_flags(curve, cvf.chan);
    curve->add_option("--code", cvf.code, "leung|3q|5q|table:<name>|file:<path>");
    curve->add_option("--pmin", cvf.pmin);
    curve->add_option("--pmax", cvf.pmax);
    curve->add_option("--steps", cvf.steps, "number of sample points");
    curve->add_option("--seed", cvf.chan.seed);
    curve->add_option("--out", cvf.out);

    SpinFlags spf;
    CLI::App* spin = app.add_subcommand("spin", "spin-chain transfer data");
    spin->require_subcommand(1);
    CLI::App* sp_ideal = spin->add_subcommand("ideal", "clean-chain amplitude sweep");
    CLI::App* sp_rep = spin->add_subcommand("repeated", "corrected repeated transfer");
    CLI::App* sp_dis = spin->add_subcommand("disorder", "disordered-coupling statistics");
    CLI::App* sp_den = spin->add_subcommand("density", "first-order amplitude density");
    for (CLI::App* c : {sp_ideal, sp_rep, sp_dis, sp_den}) {
        c->add_option("--N", spf.N, "chain sites");
        c->add_option("--s", spf.s, "sender site");
        c->add_option("--r", spf.r, "receiver site");
        c->add_option("--tmax", spf.tmax);
        c->add_option("--dt", spf.dt);
        c->add_option("--out", spf.out);
    }
    sp_rep->add_option("--every", spf.every, "sites between corrections");
    sp_rep->add_option("--reps", spf.reps, "number of corrections");
    for (CLI::App* c : {sp_dis, sp_den}) {
        c->add_option("--t", spf.t, "evaluation time (default: optimal)");
        c->add_option("--delta", spf.delta, "disorder half-width");
    }
    sp_dis->add_option("--samples", spf.samples);
    sp_dis->add_option("--seed", spf.seed);
    sp_den->add_option("--component", spf.component, "re|im");
    sp_den->add_option("--points", spf.points);

    std::string ft_unit, ft_gadget, ft_prop, ft_out;
    CLI::App* ft = app.add_subcommand("ft", "fault-tolerance reports");
    ft->require_subcommand(1);
    CLI::App* ft_ledger = ft->add_subcommand("ledger", "malignant-pair tally");
    ft_ledger->add_option("unit", ft_unit, "memory|exrec")->required();
    ft_ledger->add_option("--out", ft_out, "also write JSON here");
    CLI::App* ft_verify = ft->add_subcommand("verify", "exhaustive fault injection");
    ft_verify->add_option("gadget", ft_gadget)->required();
    ft_verify->add_option("property", ft_prop, "P1..P5")->required();
    ft_verify->add_option("--out", ft_out, "also write JSON here");

    // --config is handled before CLI11 so its keys can land on any subcommand.
    std::vector<std::string> args(argv + 1, argv + argc);
    for (std::size_t i = 0; i < args.size(); ++i) {
        std::string path;
        if (args[i] == "--config" && i + 1 < args.size()) {
            path = args[i + 1];
            args.erase(args.begin() + i, args.begin() + i + 2);
        } else if (args[i].rfind("--config=", 0) == 0) {
            path = args[i].substr(9);
            args.erase(args.begin() + i);
        }
        if (!path.empty()) {
            try {
                args = apply_config(std::move(args), path);
            } catch (const std::exception& e) {
                return usage_error(e.what());
            }
            break;
        }
    }

    try {
        std::reverse(args.begin(), args.end());
        app.parse(args);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (*search) return cmd_search(sf);
        if (*curve) return cmd_curve(cvf);
        if (*sp_ideal) return cmd_spin_ideal(spf);
        if (*sp_rep) return cmd_spin_repeated(spf);
        if (*sp_dis) return cmd_spin_disorder(spf);
        if (*sp_den) return cmd_spin_density(spf);
        if (*ft_ledger) return cmd_ft_ledger(ft_unit, ft_out);
        if (*ft_verify) return cmd_ft_verify(ft_gadget, ft_prop, ft_out);
    } catch (const std::invalid_argument& e) {
        return usage_error(e.what());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return usage_error("no command given");
}
