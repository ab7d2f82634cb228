#include "twinphoton/cli.hpp"

#include "twinphoton/coincidence.hpp"
#include "twinphoton/errors.hpp"
#include "twinphoton/estimator.hpp"
#include "twinphoton/event_stream.hpp"
#include "twinphoton/keyvalue.hpp"
#include "twinphoton/qpm.hpp"
#include "twinphoton/sellmeier.hpp"
#include "twinphoton/source.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <thread>

#ifndef TWINPHOTON_VERSION
#define TWINPHOTON_VERSION "0.0.0"
#endif
#ifndef TWINPHOTON_DATA_DIR
#define TWINPHOTON_DATA_DIR "data"
#endif

namespace twinphoton::cli
{

namespace fs = std::filesystem;

namespace
{

class UsageError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

// Writes to a file when a path is given, else to the fallback stream.
class Sink
{
public:
    Sink(const std::optional<fs::path> &path, std::ostream &fallback) : stream_(&fallback)
    {
        if (path)
        {
            file_.open(*path, std::ios::binary);
            if (!file_)
                throw ParseError(path->string(), 0, "cannot open for writing");
            stream_ = &file_;
        }
    }

    std::ostream &stream() { return *stream_; }

private:
    std::ofstream file_;
    std::ostream *stream_;
};

struct CommonOutput
{
    std::optional<fs::path> out;
    std::optional<fs::path> manifest;
};

void add_common(CLI::App *cmd, CommonOutput &o)
{
    cmd->add_option("--out", o.out, "Write the result to this file instead of stdout");
    cmd->add_option("--manifest", o.manifest,
                    "Manifest path (default <out>.manifest, or stderr when writing to stdout)");
}

KeyValueFile base_manifest(const std::string &command)
{
    KeyValueFile kv;
    kv.set("command", command);
    kv.set("version", version());
    return kv;
}

// Records the resolved argument list for `replay`.
void record_args(KeyValueFile &kv, const std::vector<std::string> &args)
{
    kv.set("arg_count", std::to_string(args.size()));
    for (std::size_t i = 0; i < args.size(); ++i)
        kv.set("arg." + std::to_string(i), args[i]);
}

void emit_manifest(const KeyValueFile &kv, const CommonOutput &o, std::ostream &err)
{
    std::optional<fs::path> target = o.manifest;
    if (!target && o.out)
        target = fs::path(o.out->string() + ".manifest");
    if (target)
    {
        std::ofstream file(*target, std::ios::binary);
        if (!file)
            throw ParseError(target->string(), 0, "cannot open manifest for writing");
        kv.write(file);
        return;
    }
    err << "# manifest\n";
    kv.write(err);
}

std::string fmt(double v)
{
    return format_double(v);
}

fs::path data_file(const std::optional<fs::path> &given, const char *name)
{
    return given ? *given : default_data_dir() / name;
}

// ---------------------------------------------------------------- qpm

struct QpmOptions
{
    std::optional<double> pump_m;
    std::optional<double> signal_m;
    std::optional<double> temp_c;
    std::optional<double> period_m;
    int order = 1;
    std::optional<fs::path> sellmeier;
    bool curve = false;
    double t_min = 20.0;
    double t_max = 200.0;
    double t_step = 5.0;
    CommonOutput io;
};

int cmd_qpm(const QpmOptions &o, std::ostream &out, std::ostream &err)
{
    if (!o.pump_m)
        throw UsageError("qpm: --pump is required");
    const auto model_path = data_file(o.sellmeier, "ln_congruent_ne_edwards_lawrence.txt");
    const auto model = SellmeierModel::load(model_path);
    const auto pump = Wavelength::from_meters(*o.pump_m);
    const QpmOrder order(o.order);

    std::vector<std::string> args{"qpm", "--pump", fmt(*o.pump_m), "--order", std::to_string(o.order),
                                  "--sellmeier", model_path.string()};
    auto add_arg = [&](const char *flag, const std::optional<double> &v) {
        if (v)
        {
            args.emplace_back(flag);
            args.push_back(fmt(*v));
        }
    };
    add_arg("--signal", o.signal_m);
    add_arg("--temp", o.temp_c);
    add_arg("--period", o.period_m);

    KeyValueFile result;
    Sink sink(o.io.out, out);

    if (o.curve)
    {
        double period_um = 0.0;
        if (o.period_m)
            period_um = *o.period_m * 1e6;
        else if (o.signal_m && o.temp_c)
            period_um = solve_poling_period(pump, Wavelength::from_meters(*o.signal_m), *o.temp_c, model, order)
                            .poling_period_um;
        else
            throw UsageError("qpm --curve: give --period, or --signal with --temp to derive it");

        args.insert(args.end(), {"--curve", "--t-min", fmt(o.t_min), "--t-max", fmt(o.t_max), "--t-step",
                                 fmt(o.t_step)});
        const auto curve = temperature_tuning_curve(pump, period_um, o.t_min, o.t_max, o.t_step, model, order);
        auto &s = sink.stream();
        s << "temperature_c,signal_m,idler_m\n";
        for (const auto &p : curve)
        {
            s << fmt(p.temperature_c) << ',' << (p.signal ? fmt(p.signal->meters()) : "nan") << ','
              << (p.idler ? fmt(p.idler->meters()) : "nan") << '\n';
        }
    }
    else
    {
        const bool has_period = o.period_m.has_value();
        const bool has_temp = o.temp_c.has_value();
        const bool has_signal = o.signal_m.has_value();
        if (!has_period && !has_temp && !has_signal)
            throw UsageError("qpm: give two of --period, --temp, --signal (or --period alone for degeneracy)");
        if (has_period && has_temp && has_signal)
            throw UsageError("qpm: over-determined; leave one of --period, --temp, --signal unset");

        QpmPoint point = [&]() -> QpmPoint {
            if (!has_period)
            {
                if (!(has_signal && has_temp))
                    throw UsageError("qpm: under-determined; solving the period needs --signal and --temp");
                return solve_poling_period(pump, Wavelength::from_meters(*o.signal_m), *o.temp_c, model, order);
            }
            const double period_um = *o.period_m * 1e6;
            if (!has_temp)
            {
                // Signal defaults to degeneracy.
                const Wavelength signal =
                    has_signal ? Wavelength::from_meters(*o.signal_m) : Wavelength(2.0 * pump.nanometers());
                const double t = solve_temperature(pump, signal, period_um, model, order);
                return make_qpm_point(pump, signal, t, period_um, order);
            }
            const auto signal = solve_signal_wavelength(pump, period_um, *o.temp_c, model, order);
            if (!signal)
                throw SolverError("no phase-matched signal wavelength at " + fmt(*o.temp_c) + " C for period " +
                                  fmt(period_um) + " um");
            return make_qpm_point(pump, *signal, *o.temp_c, period_um, order);
        }();

        result.set("pump_m", point.pump.meters());
        result.set("signal_m", point.signal.meters());
        result.set("idler_m", point.idler.meters());
        result.set("temperature_c", point.temperature_c);
        result.set("poling_period_m", point.poling_period_um * 1e-6);
        result.set("poling_period_um", point.poling_period_um);
        result.set("qpm_order", std::to_string(point.order.value()));
        result.set("phase_mismatch_rad_per_m", phase_mismatch(point, model));
        result.set("sellmeier_model", model.name());
        result.write(sink.stream());
    }

    if (o.io.out)
        args.insert(args.end(), {"--out", o.io.out->string()});
    auto manifest = base_manifest("qpm");
    manifest.set("sellmeier_model", model.name());
    manifest.set("sellmeier_version", model.version());
    record_args(manifest, args);
    emit_manifest(manifest, o.io, err);
    return kOk;
}

// ---------------------------------------------------------------- simulate

struct SimulateOptions
{
    std::optional<fs::path> config;
    std::optional<double> duration_s;
    std::vector<std::uint64_t> seeds;
    double resolution_s = 1e-12;
    std::uint64_t max_events = RunConfig{}.max_events;
    unsigned jobs = 1;
    std::optional<fs::path> from_manifest;
    CommonOutput io;
};

fs::path seeded_path(const fs::path &base, std::uint64_t seed, bool multiple)
{
    if (!multiple)
        return base;
    auto p = base;
    const auto ext = base.extension();
    p.replace_extension();
    return fs::path(p.string() + ".seed" + std::to_string(seed) + ext.string());
}

int cmd_simulate(const SimulateOptions &o, std::ostream &out, std::ostream &err)
{
    SourceConfig source;
    DetectionChainConfig chain;
    RunConfig run_template;
    std::vector<std::uint64_t> seeds = o.seeds;
    std::optional<fs::path> out_path = o.io.out;
    std::string config_origin;

    if (o.from_manifest)
    {
        const auto m = KeyValueFile::load(*o.from_manifest);
        if (m.get_string("command") != "simulate")
            throw UsageError("manifest " + o.from_manifest->string() + " is not a simulate manifest");
        KeyValueFile cfg;
        for (const auto &key : m.keys())
            if (key.rfind("config.", 0) == 0)
                cfg.set(key.substr(7), m.get_string(key));
        load_configs(cfg, source, chain);
        run_template.duration_s = m.get_double("duration_s");
        run_template.resolution_ps = static_cast<std::int64_t>(m.get_uint("resolution_ps"));
        run_template.max_events = m.get_uint("max_events");
        if (seeds.empty())
            seeds = {m.get_uint("seed")};
        if (!out_path)
            out_path = fs::path(m.get_string("output"));
        config_origin = o.from_manifest->string();
    }
    else
    {
        if (!o.config)
            throw UsageError("simulate: --config is required");
        if (!o.duration_s)
            throw UsageError("simulate: --duration is required");
        if (!out_path)
            throw UsageError("simulate: --out is required");
        load_configs(KeyValueFile::load(*o.config), source, chain);
        run_template.duration_s = *o.duration_s;
        const double res_ps = o.resolution_s * 1e12;
        if (!(std::isfinite(res_ps) && res_ps >= 1.0 && std::abs(res_ps - std::round(res_ps)) < 1e-6))
            throw UsageError("simulate: --resolution must be a whole number of picoseconds >= 1e-12 s");
        run_template.resolution_ps = static_cast<std::int64_t>(std::llround(res_ps));
        run_template.max_events = o.max_events;
        if (seeds.empty())
            seeds = {0};
        config_origin = o.config->string();
    }
    run_template.validate();

    const bool multiple = seeds.size() > 1;
    struct Outcome
    {
        TrueCounts truth;
        std::size_t events = 0;
        std::string digest;
        fs::path path;
        std::exception_ptr error;
    };
    std::vector<Outcome> outcomes(seeds.size());

    auto work = [&](std::size_t i) {
        try
        {
            RunConfig run = run_template;
            run.seed = seeds[i];
            auto result = simulate_run(source, chain, run);
            auto &res = outcomes[i];
            res.path = seeded_path(*out_path, run.seed, multiple);
            write_event_file(res.path, result.stream);
            res.truth = result.truth;
            res.events = result.stream.events.size();
            res.digest = result.stream.metadata.config_digest;

            auto manifest = base_manifest("simulate");
            manifest.set("seed", std::to_string(run.seed));
            manifest.set("duration_s", run.duration_s);
            manifest.set("resolution_ps", std::to_string(run.resolution_ps));
            manifest.set("max_events", std::to_string(run.max_events));
            manifest.set("config_source", config_origin);
            manifest.set("config_digest", res.digest);
            manifest.set("output", res.path.string());
            const auto cfg = config_key_values(source, chain);
            for (const auto &key : cfg.keys())
                manifest.set("config." + key, cfg.get_string(key));
            CommonOutput io{res.path, std::nullopt};
            if (o.io.manifest && !multiple)
                io.manifest = o.io.manifest;
            emit_manifest(manifest, io, err);
        }
        catch (...)
        {
            outcomes[i].error = std::current_exception();
        }
    };

    const unsigned jobs = std::max(1U, std::min<unsigned>(o.jobs, static_cast<unsigned>(seeds.size())));
    if (jobs == 1)
    {
        for (std::size_t i = 0; i < seeds.size(); ++i)
            work(i);
    }
    else
    {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        for (unsigned j = 0; j < jobs; ++j)
            pool.emplace_back([&]() {
                for (std::size_t i = next++; i < seeds.size(); i = next++)
                    work(i);
            });
        for (auto &t : pool)
            t.join();
    }

    for (std::size_t i = 0; i < seeds.size(); ++i)
    {
        const auto &res = outcomes[i];
        if (res.error)
            std::rethrow_exception(res.error);
        KeyValueFile report;
        report.set("event_file", res.path.string());
        report.set("seed", std::to_string(seeds[i]));
        report.set("pair_rate_hz", pair_rate(source).hertz());
        report.set("pairs_emitted", std::to_string(res.truth.pairs_emitted));
        report.set("pairs_detected_coincident", std::to_string(res.truth.pairs_detected_coincident));
        report.set("darks_emitted_1", std::to_string(res.truth.darks_emitted[0]));
        report.set("darks_emitted_2", std::to_string(res.truth.darks_emitted[1]));
        report.set("events", std::to_string(res.events));
        report.set("config_digest", res.digest);
        if (i)
            out << '\n';
        report.write(out);
    }
    return kOk;
}

// ---------------------------------------------------------------- count

struct CountOptions
{
    fs::path event_file;
    double window_s = 1e-9;
    double delay_s = 100e-9;
    double dark1_hz = 0.0;
    double dark2_hz = 0.0;
    bool csv = false;
    CommonOutput io;
};

int cmd_count(const CountOptions &o, std::ostream &out, std::ostream &err)
{
    const auto stream = read_event_file(o.event_file);
    const WindowConfig window{o.window_s * 1e9, o.delay_s * 1e9};
    const auto summary = net_summary(stream, window, Rate(o.dark1_hz), Rate(o.dark2_hz));

    Sink sink(o.io.out, out);
    if (o.csv)
        write_summary_csv(sink.stream(), summary);
    else
        write_summary_kv(sink.stream(), summary);

    std::vector<std::string> args{"count", o.event_file.string(), "--window", fmt(o.window_s), "--delay",
                                  fmt(o.delay_s), "--dark1", fmt(o.dark1_hz), "--dark2", fmt(o.dark2_hz)};
    if (o.csv)
        args.emplace_back("--csv");
    if (o.io.out)
        args.insert(args.end(), {"--out", o.io.out->string()});
    auto manifest = base_manifest("count");
    manifest.set("input", o.event_file.string());
    manifest.set("input_seed", std::to_string(stream.metadata.seed));
    manifest.set("input_config_digest", stream.metadata.config_digest);
    record_args(manifest, args);
    emit_manifest(manifest, o.io, err);
    return kOk;
}

// ---------------------------------------------------------------- estimate

struct EstimateOptions
{
    std::optional<fs::path> summary;
    std::optional<double> s1;
    std::optional<double> s2;
    std::optional<double> rc;
    std::optional<double> duration_s;
    bool splitter = false;
    std::optional<double> power_w;
    std::optional<double> pump_m;
    CommonOutput io;
};

int cmd_estimate(const EstimateOptions &o, std::ostream &out, std::ostream &err)
{
    const bool direct = o.s1 || o.s2 || o.rc;
    if (o.summary && direct)
        throw UsageError("estimate: give either --summary or --s1/--s2/--rc, not both");
    if (!o.power_w || !o.pump_m)
        throw UsageError("estimate: --power and --pump are required");

    EstimateInput input;
    input.splitter_correction = o.splitter;
    input.pump_power_guided = OpticalPower(*o.power_w);
    input.pump_wavelength = Wavelength::from_meters(*o.pump_m);
    if (o.summary)
    {
        std::ifstream in(*o.summary);
        if (!in)
            throw ParseError(o.summary->string(), 0, "cannot open file");
        const auto s = read_summary_csv(in, o.summary->string());
        input.s1_net = s.s1_net;
        input.s2_net = s.s2_net;
        input.rc_net = s.rc_net;
        input.duration_s = o.duration_s ? o.duration_s : std::optional<double>(s.duration_s);
    }
    else
    {
        if (!(o.s1 && o.s2 && o.rc))
            throw UsageError("estimate: --s1, --s2 and --rc are all required without --summary");
        input.s1_net = Rate(*o.s1);
        input.s2_net = Rate(*o.s2);
        input.rc_net = Rate(*o.rc);
        input.duration_s = o.duration_s;
    }

    const auto result = estimate(input);
    Sink sink(o.io.out, out);
    write_estimate_kv(sink.stream(), result);

    std::vector<std::string> args{"estimate"};
    if (o.summary)
        args.insert(args.end(), {"--summary", o.summary->string()});
    else
        args.insert(args.end(), {"--s1", fmt(*o.s1), "--s2", fmt(*o.s2), "--rc", fmt(*o.rc)});
    if (o.duration_s)
        args.insert(args.end(), {"--duration", fmt(*o.duration_s)});
    if (o.splitter)
        args.emplace_back("--splitter");
    args.insert(args.end(), {"--power", fmt(*o.power_w), "--pump", fmt(*o.pump_m)});
    if (o.io.out)
        args.insert(args.end(), {"--out", o.io.out->string()});
    auto manifest = base_manifest("estimate");
    record_args(manifest, args);
    emit_manifest(manifest, o.io, err);
    return kOk;
}

// ---------------------------------------------------------------- table1

struct Table1Options
{
    std::optional<fs::path> data;
    double max_dev = 2.0;
    bool csv = false;
    CommonOutput io;
};

int cmd_table1(const Table1Options &o, std::ostream &out, std::ostream &err)
{
    const auto path = data_file(o.data, "table1_sources.txt");
    if (!fs::exists(path))
        throw ParseError(path.string(), 0, "comparison data file not found");
    if (!(o.max_dev >= 1.0))
        throw UsageError("table1: --max-dev must be >= 1");
    const auto rows = reproduce_table1(load_published_sources(path), o.max_dev);

    Sink sink(o.io.out, out);
    if (o.csv)
        write_table1_csv(sink.stream(), rows);
    else
        write_table1_text(sink.stream(), rows);

    std::vector<std::string> args{"table1", "--data", path.string(), "--max-dev", fmt(o.max_dev)};
    if (o.csv)
        args.emplace_back("--csv");
    if (o.io.out)
        args.insert(args.end(), {"--out", o.io.out->string()});
    auto manifest = base_manifest("table1");
    record_args(manifest, args);
    emit_manifest(manifest, o.io, err);
    return kOk;
}

// ---------------------------------------------------------------- replay

int cmd_replay(const fs::path &manifest_path, const std::optional<fs::path> &out_override, std::ostream &out,
               std::ostream &err)
{
    const auto m = KeyValueFile::load(manifest_path);
    const auto &command = m.get_string("command");
    if (command == "simulate")
    {
        SimulateOptions o;
        o.from_manifest = manifest_path;
        o.io.out = out_override;
        return cmd_simulate(o, out, err);
    }
    const auto count = m.get_uint("arg_count");
    std::vector<std::string> args;
    for (std::uint64_t i = 0; i < count; ++i)
        args.push_back(m.get_string("arg." + std::to_string(i)));
    if (out_override)
    {
        const auto it = std::find(args.begin(), args.end(), "--out");
        if (it != args.end() && it + 1 != args.end())
            *(it + 1) = out_override->string();
        else
            args.insert(args.end(), {"--out", out_override->string()});
    }
    return run(args, out, err);
}

} // namespace

std::string version()
{
    return TWINPHOTON_VERSION;
}

fs::path default_data_dir()
{
    if (const char *env = std::getenv("TWINPHOTON_DATA_DIR"); env && *env)
        return fs::path(env);
    return fs::path(TWINPHOTON_DATA_DIR);
}

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err)
{
    CLI::App app{"Photon-pair source simulation, coincidence counting and figure-of-merit estimation",
                 "twinphoton"};
    app.set_version_flag("--version", version());
    app.require_subcommand(1);

    QpmOptions qpm;
    auto *qpm_cmd = app.add_subcommand("qpm", "Quasi-phase-matching operating point or temperature tuning curve");
    qpm_cmd->add_option("--pump", qpm.pump_m, "Pump wavelength (m)");
    qpm_cmd->add_option("--signal", qpm.signal_m, "Signal wavelength (m)");
    qpm_cmd->add_option("--temp", qpm.temp_c, "Crystal temperature (degC)");
    qpm_cmd->add_option("--period", qpm.period_m, "Poling period (m)");
    qpm_cmd->add_option("--order", qpm.order, "Odd QPM order")->capture_default_str();
    qpm_cmd->add_option("--sellmeier", qpm.sellmeier, "Sellmeier coefficient file");
    qpm_cmd->add_flag("--curve", qpm.curve, "Sweep temperature and emit CSV (T, signal, idler)");
    qpm_cmd->add_option("--t-min", qpm.t_min, "Sweep start (degC)")->capture_default_str();
    qpm_cmd->add_option("--t-max", qpm.t_max, "Sweep end (degC)")->capture_default_str();
    qpm_cmd->add_option("--t-step", qpm.t_step, "Sweep step (degC)")->capture_default_str();
    add_common(qpm_cmd, qpm.io);

    SimulateOptions sim;
    auto *sim_cmd = app.add_subcommand("simulate", "Monte Carlo detection-event stream");
    sim_cmd->add_option("--config", sim.config, "Source and detection-chain config file");
    sim_cmd->add_option("--duration", sim.duration_s, "Run duration (s)");
    sim_cmd->add_option("--seed", sim.seeds, "Seed(s); several seeds write one file per seed");
    sim_cmd->add_option("--resolution", sim.resolution_s, "Timestamp resolution (s)")->capture_default_str();
    sim_cmd->add_option("--max-events", sim.max_events, "Detection budget")->capture_default_str();
    sim_cmd->add_option("--jobs", sim.jobs, "Seeds simulated in parallel")->capture_default_str();
    sim_cmd->add_option("--from-manifest", sim.from_manifest, "Re-run from a simulate manifest");
    add_common(sim_cmd, sim.io);

    CountOptions cnt;
    auto *count_cmd = app.add_subcommand("count", "Singles, coincidences and accidentals from an event file");
    count_cmd->add_option("event_file", cnt.event_file, "Event file")->required();
    count_cmd->add_option("--window", cnt.window_s, "Coincidence window, full width (s)")->capture_default_str();
    count_cmd->add_option("--delay", cnt.delay_s, "Delay for the accidental estimate (s)")->capture_default_str();
    count_cmd->add_option("--dark1", cnt.dark1_hz, "Assumed dark rate, detector 1 (Hz)")->capture_default_str();
    count_cmd->add_option("--dark2", cnt.dark2_hz, "Assumed dark rate, detector 2 (Hz)")->capture_default_str();
    count_cmd->add_flag("--csv", cnt.csv, "CSV instead of key-value output");
    add_common(count_cmd, cnt.io);

    EstimateOptions est;
    auto *est_cmd = app.add_subcommand("estimate", "Pair rate, conversion efficiency and figures of merit");
    est_cmd->add_option("--summary", est.summary, "CountSummary CSV written by `count --csv`");
    est_cmd->add_option("--s1", est.s1, "Net singles, detector 1 (Hz)");
    est_cmd->add_option("--s2", est.s2, "Net singles, detector 2 (Hz)");
    est_cmd->add_option("--rc", est.rc, "Net coincidence rate (Hz)");
    est_cmd->add_option("--duration", est.duration_s, "Run duration for uncertainties (s)");
    est_cmd->add_flag("--splitter", est.splitter, "Apply the 50/50 coupler factor of 2");
    est_cmd->add_option("--power", est.power_w, "Guided pump power (W)");
    est_cmd->add_option("--pump", est.pump_m, "Pump wavelength (m)");
    add_common(est_cmd, est.io);

    Table1Options tab;
    auto *tab_cmd = app.add_subcommand("table1", "Recompute the published source comparison");
    tab_cmd->add_option("--data", tab.data, "Comparison data file");
    tab_cmd->add_option("--max-dev", tab.max_dev, "Flag factor between computed and published")
        ->capture_default_str();
    tab_cmd->add_flag("--csv", tab.csv, "CSV instead of an aligned table");
    add_common(tab_cmd, tab.io);

    fs::path replay_manifest;
    std::optional<fs::path> replay_out;
    auto *replay_cmd = app.add_subcommand("replay", "Re-run a command from its manifest");
    replay_cmd->add_option("manifest", replay_manifest, "Manifest file")->required();
    replay_cmd->add_option("--out", replay_out, "Override the output path");

    try
    {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    }
    catch (const CLI::ParseError &e)
    {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsageError;
    }

    try
    {
        if (qpm_cmd->parsed())
            return cmd_qpm(qpm, out, err);
        if (sim_cmd->parsed())
            return cmd_simulate(sim, out, err);
        if (count_cmd->parsed())
            return cmd_count(cnt, out, err);
        if (est_cmd->parsed())
            return cmd_estimate(est, out, err);
        if (tab_cmd->parsed())
            return cmd_table1(tab, out, err);
        if (replay_cmd->parsed())
            return cmd_replay(replay_manifest, replay_out, out, err);
    }
    catch (const UsageError &e)
    {
        err << "usage error: " << e.what() << '\n';
        return kUsageError;
    }
    catch (const ConfigError &e)
    {
        err << "config error: " << e.what() << '\n';
        return kUsageError;
    }
    catch (const SizingError &e)
    {
        err << "sizing error: " << e.what() << '\n';
        return kUsageError;
    }
    catch (const DomainError &e)
    {
        err << "invalid value: " << e.what() << '\n';
        return kUsageError;
    }
    catch (const ParseError &e)
    {
        err << "data error: " << e.what() << '\n';
        return kDataError;
    }
    catch (const InferenceError &e)
    {
        err << "inference error: " << e.what() << '\n';
        return kSolverError;
    }
    catch (const SolverError &e)
    {
        err << "solver error: " << e.what() << '\n';
        return kSolverError;
    }
    catch (const RangeError &e)
    {
        err << "model range error: " << e.what() << '\n';
        return kSolverError;
    }
    err << "no command given\n";
    return kUsageError;
}

} // namespace twinphoton::cli
