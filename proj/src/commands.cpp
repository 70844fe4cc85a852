#include "dtn/commands.hpp"

#include <cmath>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "dtn/analyze.hpp"
#include "dtn/colouring.hpp"
#include "dtn/estimate.hpp"
#include "dtn/io.hpp"
#include "dtn/predict.hpp"
#include "dtn/rng.hpp"
#include "dtn/simulate.hpp"
#include "dtn/synth.hpp"

namespace dtn::cli {

namespace {

std::map<std::string, double> parse_kv(const std::string& body) {
    std::map<std::string, double> kv;
    std::stringstream ss(body);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto eq = item.find('=');
        if (eq == std::string::npos || eq == 0) {
            throw std::invalid_argument("gen spec: expected key=value, got '" + item + "'");
        }
        const std::string key = item.substr(0, eq);
        const std::string val = item.substr(eq + 1);
        std::size_t pos = 0;
        double v = 0.0;
        try {
            v = std::stod(val, &pos);
        } catch (const std::exception&) {
            pos = std::string::npos;
        }
        if (pos != val.size()) {
            throw std::invalid_argument("gen spec: bad value for '" + key + "'");
        }
        if (!kv.emplace(key, v).second) {
            throw std::invalid_argument("gen spec: duplicate key '" + key + "'");
        }
    }
    return kv;
}

void print_warnings(const std::vector<std::string>& warnings) {
    for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
}

// --trace FILE [--format csv|one] or --gen KIND:K=V,...
struct TraceOpts {
    std::string path;
    std::string format = "csv";
    std::string gen;
};

void add_trace_opts(CLI::App* cmd, TraceOpts& o) {
    auto* trace = cmd->add_option("--trace", o.path, "contact trace file");
    cmd->add_option("--format", o.format, "trace file format")
        ->check(CLI::IsMember({"csv", "one"}))
        ->capture_default_str();
    auto* gen = cmd->add_option(
        "--gen", o.gen, "synthesise the trace instead: kind:key=val,... "
                        "(kinds: homogeneous, cyclic, clustered)");
    trace->excludes(gen);
    gen->excludes(trace);
}

ContactTrace resolve_trace(const TraceOpts& o, std::uint64_t seed) {
    if (!o.gen.empty()) return trace_from_spec(o.gen, seed);
    if (o.path.empty()) throw std::invalid_argument("need --trace or --gen");
    if (o.format == "one") return parse_one_report_file(o.path);
    return parse_csv_file(o.path);
}

std::size_t grid_len(double horizon, double dt) {
    if (!(dt > 0.0) || !(horizon > 0.0)) {
        throw std::invalid_argument("dt and horizon must be positive");
    }
    const double bins = horizon / dt;
    auto len = static_cast<std::size_t>(std::llround(bins));
    if (len < 1 || std::abs(bins - static_cast<double>(len)) > 1e-9 * std::max(1.0, bins)) {
        len = static_cast<std::size_t>(std::ceil(bins));
    }
    return std::max<std::size_t>(len, 1);
}

DeltaModel fit_kind(const ContactTrace& trace, const std::string& kind, std::size_t runs,
                    double zero_eps, const std::string& residual, std::uint64_t seed) {
    const ModelKind k = model_kind_from_string(kind);
    if (k == ModelKind::homogeneous) {
        return fit_homogeneous(trace, residual_mode_from_string(residual));
    }
    const DeltaSamples s = sample_deltas(trace, runs, derive_seed(seed, 0xf17u));
    if (k == ModelKind::mixture) return fit_mixture(s, zero_eps);
    return fit_empirical(s);
}

void write_json_sidecar(const std::string& csv_path, const nlohmann::json& j) {
    atomic_write_file(csv_path + ".meta.json", j.dump(2) + "\n");
}

// ---- gen ----------------------------------------------------------------

struct GenArgs {
    std::string spec;
    std::string out;
    std::uint64_t seed = 1;
};

int run_gen(const GenArgs& a) {
    const ContactTrace trace = trace_from_spec(a.spec, a.seed);
    atomic_write_file(a.out, serialize_csv(trace));
    std::cout << "nodes " << trace.node_count() << " events " << trace.events().size()
              << " horizon " << fmt_g12(trace.t_min()) << ".." << fmt_g12(trace.t_max()) << "\n";
    return 0;
}

// ---- fit ----------------------------------------------------------------

struct FitArgs {
    TraceOpts trace;
    std::string kind = "mixture";
    std::string out;
    std::string ccdf_out;
    std::string residual = "empirical";
    std::size_t runs = 700;
    double dt = 1.0;
    double zero_eps = -1.0;
    std::uint64_t seed = 1;
};

int run_fit(const FitArgs& a) {
    const ContactTrace trace = resolve_trace(a.trace, a.seed);
    const double zero_eps = a.zero_eps < 0.0 ? a.dt : a.zero_eps;
    const ModelKind kind = model_kind_from_string(a.kind);

    std::optional<DeltaSamples> samples;
    if (kind != ModelKind::homogeneous || !a.ccdf_out.empty()) {
        samples = sample_deltas(trace, a.runs, derive_seed(a.seed, 0xf17u));
    }
    DeltaModel model;
    switch (kind) {
    case ModelKind::homogeneous:
        model = fit_homogeneous(trace, residual_mode_from_string(a.residual));
        break;
    case ModelKind::mixture:
        model = fit_mixture(*samples, zero_eps);
        break;
    case ModelKind::empirical:
        model = fit_empirical(*samples);
        break;
    }
    print_warnings(model.warnings);
    atomic_write_file(a.out, model_to_json(model));
    if (!a.ccdf_out.empty()) {
        std::ostringstream ss;
        write_delta_ccdf_csv(ss, *samples);
        atomic_write_file(a.ccdf_out, ss.str());
        write_json_sidecar(a.ccdf_out, {{"runs", samples->runs}, {"n", trace.node_count()}});
    }
    std::cout << "kind " << to_string(model.kind) << " n " << model.n << "\n";
    return 0;
}

// ---- predict ------------------------------------------------------------

struct PredictArgs {
    std::string model_path;
    std::string out;
    double dt = 1.0;
    double horizon = 0.0;
    std::size_t refine = 0;
    bool no_extend = false;
    bool multicopy = false;
    std::uint64_t copies = 8;
    int solitary = -1;
    std::vector<double> ttl;
};

int run_predict(const PredictArgs& a) {
    const DeltaModel model = model_from_json(read_file(a.model_path));
    const std::size_t len = grid_len(a.horizon, a.dt);
    PredictOptions opts;
    opts.refine = a.refine;
    opts.auto_extend = !a.no_extend;

    LatencyCurve curve;
    if (a.multicopy) {
        MultiCopyParams p;
        p.copies = a.copies;
        if (a.solitary >= 0) p.solitary_override = static_cast<std::uint32_t>(a.solitary);
        curve = multicopy_latency(model, p, a.dt, len, opts);
    } else {
        curve = epidemic_latency(model, a.dt, len, opts);
    }
    print_warnings(curve.warnings);
    if (!a.out.empty()) {
        std::ostringstream ss;
        write_curve_csv(ss, curve);
        atomic_write_file(a.out, ss.str());
    }
    for (const double ttl : a.ttl) {
        std::cout << "delivery_ratio " << fmt_g12(ttl) << " "
                  << fmt_g12(delivery_ratio(curve, ttl)) << "\n";
    }
    return 0;
}

// ---- simulate -----------------------------------------------------------

struct SimArgs {
    TraceOpts trace;
    std::string protocol = "epidemic";
    std::string out;
    std::uint64_t copies = 8;
    std::size_t runs = 1;
    double window_start = std::numeric_limits<double>::quiet_NaN();
    double window_length = 40000.0;
    double min_gap = 50.0;
    double max_gap = 100.0;
    std::uint64_t seed = 1;
};

int run_simulate(const SimArgs& a) {
    const ContactTrace trace = resolve_trace(a.trace, a.seed);
    MessageSchedule sched;
    sched.window_start = std::isnan(a.window_start) ? trace.t_min() : a.window_start;
    sched.window_length = a.window_length;
    sched.min_gap = a.min_gap;
    sched.max_gap = a.max_gap;
    const auto records = run_batch(trace, sched, a.runs, protocol_from_string(a.protocol),
                                   a.copies, a.seed);
    if (!a.out.empty()) {
        std::ostringstream ss;
        write_records_csv(ss, records);
        atomic_write_file(a.out, ss.str());
    }
    const auto lat = delivered_latencies(records);
    double mean_lat = 0.0;
    for (const double v : lat) mean_lat += v;
    if (!lat.empty()) mean_lat /= static_cast<double>(lat.size());
    std::cout << "messages " << records.size() << " delivered " << lat.size() << " ratio "
              << fmt_g12(records.empty()
                             ? 0.0
                             : static_cast<double>(lat.size()) / static_cast<double>(records.size()))
              << " mean_latency " << fmt_g12(mean_lat) << "\n";
    return 0;
}

// ---- validate -----------------------------------------------------------

struct ValidateArgs {
    TraceOpts trace;
    std::string kind = "mixture";
    std::string residual = "empirical";
    std::string out_dir;
    std::size_t fit_runs = 700;
    std::size_t sim_runs = 4;
    double window_start = std::numeric_limits<double>::quiet_NaN();
    double window_length = 40000.0;
    double min_gap = 50.0;
    double max_gap = 100.0;
    double dt = 1.0;
    double horizon = 0.0;
    double zero_eps = -1.0;
    double threshold = 0.1;
    std::uint64_t seed = 1;
};

// Fit the chosen model plus the homogeneous baseline, predict both latency
// curves, replay messages over the trace, and score each curve against the
// replayed latencies. Pass/fail applies to the chosen model only.
int run_validate(const ValidateArgs& a) {
    const ContactTrace trace = resolve_trace(a.trace, a.seed);
    const double zero_eps = a.zero_eps < 0.0 ? a.dt : a.zero_eps;
    const DeltaModel model = fit_kind(trace, a.kind, a.fit_runs, zero_eps, a.residual, a.seed);
    print_warnings(model.warnings);
    const DeltaModel baseline =
        model.kind == ModelKind::homogeneous
            ? model
            : fit_homogeneous(trace, residual_mode_from_string(a.residual));

    const std::size_t len = grid_len(a.horizon, a.dt);
    const LatencyCurve curve = epidemic_latency(model, a.dt, len);
    print_warnings(curve.warnings);
    const LatencyCurve base_curve = epidemic_latency(baseline, a.dt, len);

    // Replayed messages, seeded apart from the fitting stream.
    MessageSchedule sched;
    sched.window_start = std::isnan(a.window_start) ? trace.t_min() : a.window_start;
    sched.window_length = a.window_length;
    sched.min_gap = a.min_gap;
    sched.max_gap = a.max_gap;
    const auto records = run_batch(trace, sched, a.sim_runs, Protocol::epidemic, 1,
                                   derive_seed(a.seed, 0x0b5u));
    const auto latencies = delivered_latencies(records);
    if (latencies.empty()) throw std::runtime_error("validate: no delivered messages to compare");

    const FitComparison cmp = compare_to_samples(curve, latencies);
    const FitComparison base_cmp = compare_to_samples(base_curve, latencies);
    const bool pass = cmp.ks <= a.threshold;

    std::cout << "kind " << to_string(model.kind) << "\n";
    std::cout << "messages " << records.size() << " delivered " << latencies.size() << "\n";
    std::cout << "ks " << fmt_g12(cmp.ks) << "\n";
    std::cout << "ks_homogeneous " << fmt_g12(base_cmp.ks) << "\n";
    std::cout << "mean_abs_gap " << fmt_g12(cmp.mean_abs_gap) << "\n";
    std::cout << "result " << (pass ? "pass" : "fail") << "\n";

    if (!a.out_dir.empty()) {
        const std::filesystem::path dir(a.out_dir);
        std::filesystem::create_directories(dir);
        {
            std::ostringstream ss;
            write_curve_csv(ss, curve);
            atomic_write_file((dir / "model_curve.csv").string(), ss.str());
        }
        {
            std::ostringstream ss;
            write_curve_csv(ss, base_curve);
            atomic_write_file((dir / "homogeneous_curve.csv").string(), ss.str());
        }
        {
            std::ostringstream ss;
            write_records_csv(ss, records);
            atomic_write_file((dir / "latencies.csv").string(), ss.str());
        }
        nlohmann::json j;
        j["kind"] = to_string(model.kind);
        j["residual"] = a.residual;
        j["messages"] = records.size();
        j["delivered"] = latencies.size();
        j["ks"] = cmp.ks;
        j["ks_homogeneous"] = base_cmp.ks;
        j["mean_abs_gap"] = cmp.mean_abs_gap;
        j["mean_abs_gap_homogeneous"] = base_cmp.mean_abs_gap;
        j["threshold"] = a.threshold;
        j["pass"] = pass;
        atomic_write_file((dir / "report.json").string(), j.dump(2) + "\n");
    }
    return pass ? 0 : 1;
}

// ---- analyze ------------------------------------------------------------

struct AnalyzeArgs {
    TraceOpts trace;
    std::size_t runs = 700;
    std::uint64_t seed = 1;
    std::string deltas_out;
    std::string ccdf_out;
    std::string t2_out;
    std::string means_out;
    std::string corr_out;
    std::string corr_method = "pearson";
    double t2_dt = 1.0;
    std::size_t t2_bins = 1000;
    double window = 20000.0;
    std::size_t grid_points = 200;
    double corr_threshold = 0.2;
    int independence = 0;
};

int run_analyze(const AnalyzeArgs& a) {
    const ContactTrace trace = resolve_trace(a.trace, a.seed);
    const bool need_runs = !a.deltas_out.empty() || !a.ccdf_out.empty() || !a.t2_out.empty() ||
                           !a.means_out.empty() || a.independence > 0;
    if (need_runs) {
        const auto runs = sample_runs(trace, a.runs, derive_seed(a.seed, 0xa7au));
        const DeltaSamples s = collect_deltas(runs, trace.node_count());
        std::size_t censored = 0;
        for (const auto c : s.censored_at) censored += c;
        std::cout << "runs " << s.runs << " censored " << censored << "\n";
        const nlohmann::json run_meta = {
            {"runs", s.runs}, {"n", trace.node_count()}, {"censored", censored}};
        if (!a.deltas_out.empty()) {
            std::ostringstream ss;
            write_delta_samples_csv(ss, s);
            atomic_write_file(a.deltas_out, ss.str());
            write_json_sidecar(a.deltas_out, run_meta);
        }
        if (!a.ccdf_out.empty()) {
            std::ostringstream ss;
            write_delta_ccdf_csv(ss, s);
            atomic_write_file(a.ccdf_out, ss.str());
            write_json_sidecar(a.ccdf_out, run_meta);
        }
        if (!a.t2_out.empty()) {
            if (s.per_i.empty() || s.per_i[0].empty()) {
                throw std::runtime_error("analyze: no first-step samples for --t2");
            }
            const DiscreteDist d = from_samples(s.per_i[0], a.t2_dt, a.t2_bins);
            std::cout << "t2_zero_fraction " << fmt_g12(d.atom0) << "\n";
            std::ostringstream ss;
            write_dist_csv(ss, d);
            atomic_write_file(a.t2_out, ss.str());
            nlohmann::json meta = run_meta;
            meta["dt"] = a.t2_dt;
            meta["bins"] = a.t2_bins;
            meta["zero_fraction"] = d.atom0;
            write_json_sidecar(a.t2_out, meta);
        }
        if (!a.means_out.empty()) {
            const auto means = mean_colour_times(runs, trace.node_count());
            std::ostringstream ss;
            ss << "i,mean_t\n";
            for (std::size_t i = 0; i < means.size(); ++i) {
                ss << i + 1 << ',';
                if (std::isnan(means[i])) {
                    ss << "\n";
                } else {
                    ss << fmt_g12(means[i]) << "\n";
                }
            }
            atomic_write_file(a.means_out, ss.str());
            write_json_sidecar(a.means_out, run_meta);
        }
        if (a.independence > 0) {
            const auto res = t_delta_correlation(runs, static_cast<std::uint32_t>(a.independence));
            std::cout << "t_delta_rho " << a.independence << " " << fmt_g12(res.rho) << " pairs "
                      << res.pairs << " degenerate " << (res.degenerate ? 1 : 0) << "\n";
        }
    }
    if (!a.corr_out.empty()) {
        const CorrelationReport rep = contact_correlation(
            trace, a.window, a.grid_points, std::nullopt, corr_method_from_string(a.corr_method));
        std::ostringstream ss;
        write_correlation_csv(ss, rep);
        atomic_write_file(a.corr_out, ss.str());
        std::size_t included = 0, above = 0;
        for (const double v : rep.node_avg) {
            if (std::isnan(v)) continue;
            ++included;
            if (v > a.corr_threshold) ++above;
        }
        write_json_sidecar(a.corr_out, {{"window_start", rep.window_start},
                                        {"window", rep.window},
                                        {"grid_points", rep.grid_points},
                                        {"method", to_string(rep.method)},
                                        {"nodes", rep.node_avg.size()},
                                        {"included", included},
                                        {"excluded", rep.excluded},
                                        {"threshold", a.corr_threshold},
                                        {"above_threshold", above}});
        std::cout << "corr_nodes " << included << " above_threshold " << above << " fraction "
                  << fmt_g12(included == 0 ? 0.0
                                           : static_cast<double>(above) /
                                                 static_cast<double>(included))
                  << "\n";
    }
    return 0;
}

} // namespace

ContactTrace trace_from_spec(const std::string& spec, std::uint64_t seed) {
    const auto colon = spec.find(':');
    const std::string kind = spec.substr(0, colon);
    auto kv = colon == std::string::npos ? std::map<std::string, double>{}
                                         : parse_kv(spec.substr(colon + 1));
    const auto take = [&kv](const char* key, double dflt) {
        const auto it = kv.find(key);
        if (it == kv.end()) return dflt;
        const double v = it->second;
        kv.erase(it);
        return v;
    };
    const auto finish = [&kv] {
        if (!kv.empty()) {
            throw std::invalid_argument("gen spec: unknown key '" + kv.begin()->first + "'");
        }
    };

    if (kind == "homogeneous") {
        HomogeneousSpec s;
        s.n = static_cast<std::uint32_t>(take("n", s.n));
        if (kv.count("rate") && kv.count("lambda")) {
            throw std::invalid_argument("gen spec: give rate or lambda, not both");
        }
        s.rate = take("rate", take("lambda", s.rate));
        s.contact_duration = take("contact_duration", s.contact_duration);
        s.horizon = take("horizon", s.horizon);
        s.seed = static_cast<std::uint64_t>(take("seed", static_cast<double>(seed)));
        finish();
        return gen_homogeneous(s);
    }
    if (kind == "cyclic") {
        CyclicSpec s;
        s.gap_rate = take("gap_rate", s.gap_rate);
        s.horizon = take("horizon", s.horizon);
        s.seed = static_cast<std::uint64_t>(take("seed", static_cast<double>(seed)));
        finish();
        return gen_cyclic(s);
    }
    if (kind == "clustered") {
        ClusterSpec s;
        s.n = static_cast<std::uint32_t>(take("n", s.n));
        s.cluster_count = static_cast<std::uint32_t>(take("clusters", s.cluster_count));
        s.intra_rate = take("intra_rate", s.intra_rate);
        s.intra_duration = take("intra_duration", s.intra_duration);
        s.burst_period = take("burst_period", s.burst_period);
        s.burst_length = take("burst_length", s.burst_length);
        s.burst_rate = take("burst_rate", s.burst_rate);
        s.inter_duration = take("inter_duration", s.inter_duration);
        s.burst_participation = take("participation", s.burst_participation);
        s.loner_count = static_cast<std::uint32_t>(take("loners", s.loner_count));
        s.loner_rate = take("loner_rate", s.loner_rate);
        s.loner_duration = take("loner_duration", s.loner_duration);
        s.horizon = take("horizon", s.horizon);
        s.seed = static_cast<std::uint64_t>(take("seed", static_cast<double>(seed)));
        finish();
        return gen_clustered(s);
    }
    throw std::invalid_argument("gen spec: unknown kind '" + kind + "'");
}

int dispatch(int argc, const char* const* argv) {
    CLI::App app{"Contact-trace latency toolkit for store-carry-forward networks"};
    app.require_subcommand(1);
    app.set_config("--config", "", "read option defaults from a key=value file; flags win");
    int rc = 0;

    GenArgs gen;
    auto* cgen = app.add_subcommand("gen", "synthesise a contact trace and write it as CSV");
    cgen->configurable();
    cgen->add_option("--spec", gen.spec, "kind:key=val,... (homogeneous, cyclic, clustered)")
        ->required();
    cgen->add_option("--out", gen.out, "output trace CSV")->required();
    cgen->add_option("--seed", gen.seed, "root seed")->capture_default_str();
    cgen->callback([&] { rc = run_gen(gen); });

    FitArgs fit;
    auto* cfit = app.add_subcommand("fit", "fit a spread-step model to a trace");
    cfit->configurable();
    add_trace_opts(cfit, fit.trace);
    cfit->add_option("--kind", fit.kind, "model kind: mixture, homogeneous, empirical")
        ->check(CLI::IsMember({"mixture", "homogeneous", "empirical"}))
        ->capture_default_str();
    cfit->add_option("--out", fit.out, "output model JSON")->required();
    cfit->add_option("--ccdf", fit.ccdf_out, "also write observed step CCDFs (i,delta_seconds,ccdf)");
    cfit->add_option("--residual", fit.residual,
                     "homogeneous residual: empirical or exponential")
        ->check(CLI::IsMember({"empirical", "exponential"}))
        ->capture_default_str();
    cfit->add_option("--runs", fit.runs, "spread observations to sample")->capture_default_str();
    cfit->add_option("--dt", fit.dt, "time resolution, seconds")->capture_default_str();
    cfit->add_option("--zero-eps", fit.zero_eps, "steps at most this count as zero (default: dt)");
    cfit->add_option("--seed", fit.seed, "root seed")->capture_default_str();
    cfit->callback([&] { rc = run_fit(fit); });

    PredictArgs pred;
    auto* cpred = app.add_subcommand("predict", "latency CDF from a fitted model");
    cpred->configurable();
    cpred->add_option("--model", pred.model_path, "model JSON from `fit`")->required();
    cpred->add_option("--out", pred.out, "output curve CSV (t,F_R)");
    cpred->add_option("--dt", pred.dt, "grid step, seconds")->required();
    cpred->add_option("--horizon", pred.horizon, "grid end, seconds")->required();
    cpred->add_option("--refine", pred.refine, "internal grid refinement (0 = auto)")
        ->capture_default_str();
    cpred->add_flag("--no-extend", pred.no_extend, "do not extend the grid to cover the tail");
    cpred->add_flag("--multicopy", pred.multicopy, "limit replication to --copies");
    cpred->add_option("--copies", pred.copies, "replication budget")->capture_default_str();
    cpred->add_option("--solitary", pred.solitary, "straggler count (-1 = detect from means)")
        ->capture_default_str();
    cpred->add_option("--ttl", pred.ttl,
                      "print the delivery ratio at each of these deadlines");
    cpred->callback([&] { rc = run_predict(pred); });

    SimArgs sim;
    auto* csim = app.add_subcommand("simulate", "replay message passing over a trace");
    csim->configurable();
    add_trace_opts(csim, sim.trace);
    csim->add_option("--protocol", sim.protocol, "epidemic, spray, spray-source")
        ->check(CLI::IsMember({"epidemic", "spray", "spray-binary", "spray-source"}))
        ->capture_default_str();
    csim->add_option("--copies", sim.copies, "token budget for spray")->capture_default_str();
    csim->add_option("--runs", sim.runs, "independent workloads to pool")->capture_default_str();
    csim->add_option("--out", sim.out, "output records CSV (msg,delivered,latency)");
    csim->add_option("--window-start", sim.window_start, "first creation time (default: trace start)");
    csim->add_option("--window-length", sim.window_length, "creation window, seconds")
        ->capture_default_str();
    csim->add_option("--min-gap", sim.min_gap, "min creation gap")->capture_default_str();
    csim->add_option("--max-gap", sim.max_gap, "max creation gap")->capture_default_str();
    csim->add_option("--seed", sim.seed, "root seed")->capture_default_str();
    csim->callback([&] { rc = run_simulate(sim); });

    ValidateArgs val;
    auto* cval = app.add_subcommand("validate",
                                    "fit, predict, and test the prediction against fresh runs");
    cval->configurable();
    add_trace_opts(cval, val.trace);
    cval->add_option("--kind", val.kind, "model kind to fit")
        ->check(CLI::IsMember({"mixture", "homogeneous", "empirical"}))
        ->capture_default_str();
    cval->add_option("--residual", val.residual,
                     "homogeneous residual: empirical or exponential")
        ->check(CLI::IsMember({"empirical", "exponential"}))
        ->capture_default_str();
    cval->add_option("--fit-runs", val.fit_runs, "runs used for fitting")->capture_default_str();
    cval->add_option("--sim-runs", val.sim_runs, "replay workloads to pool")->capture_default_str();
    cval->add_option("--window-start", val.window_start,
                     "first creation time (default: trace start)");
    cval->add_option("--window-length", val.window_length, "creation window, seconds")
        ->capture_default_str();
    cval->add_option("--min-gap", val.min_gap, "min creation gap")->capture_default_str();
    cval->add_option("--max-gap", val.max_gap, "max creation gap")->capture_default_str();
    cval->add_option("--dt", val.dt, "grid step, seconds")->required();
    cval->add_option("--horizon", val.horizon, "grid end, seconds")->required();
    cval->add_option("--zero-eps", val.zero_eps, "steps at most this count as zero (default: dt)");
    cval->add_option("--threshold", val.threshold, "max acceptable KS distance")
        ->capture_default_str();
    cval->add_option("--out", val.out_dir,
                     "directory for curves, replayed latencies, and report.json");
    cval->add_option("--seed", val.seed, "root seed")->capture_default_str();
    cval->callback([&] { rc = run_validate(val); });

    AnalyzeArgs ana;
    auto* cana = app.add_subcommand("analyze", "trace statistics and spread diagnostics");
    cana->configurable();
    add_trace_opts(cana, ana.trace);
    cana->add_option("--runs", ana.runs, "spread observations to sample")->capture_default_str();
    cana->add_option("--seed", ana.seed, "root seed")->capture_default_str();
    cana->add_option("--deltas", ana.deltas_out, "write step samples CSV (i,delta_seconds)");
    cana->add_option("--ccdf", ana.ccdf_out, "write step CCDFs CSV (i,delta_seconds,ccdf)");
    cana->add_option("--t2", ana.t2_out, "write the first-step distribution CSV (t,pdf,cdf)");
    cana->add_option("--t2-dt", ana.t2_dt, "first-step grid step")->capture_default_str();
    cana->add_option("--t2-bins", ana.t2_bins, "first-step grid length")->capture_default_str();
    cana->add_option("--means", ana.means_out, "write mean reach times CSV (i,mean_t)");
    cana->add_option("--correlation", ana.corr_out, "write per-node correlation CSV");
    cana->add_option("--corr-method", ana.corr_method, "pearson or spearman (rank)")
        ->check(CLI::IsMember({"pearson", "spearman"}))
        ->capture_default_str();
    cana->add_option("--window", ana.window, "correlation window, seconds")->capture_default_str();
    cana->add_option("--grid-points", ana.grid_points, "correlation sampling points")
        ->capture_default_str();
    cana->add_option("--corr-threshold", ana.corr_threshold, "threshold for the summary line")
        ->capture_default_str();
    cana->add_option("--independence", ana.independence,
                     "report corr(T_i, step i) for this i (0 = off)")
        ->capture_default_str();
    cana->callback([&] { rc = run_analyze(ana); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return rc;
}

} // namespace dtn::cli
