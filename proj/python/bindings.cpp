#include "twinphoton/cli.hpp"
#include "twinphoton/coincidence.hpp"
#include "twinphoton/errors.hpp"
#include "twinphoton/estimator.hpp"
#include "twinphoton/keyvalue.hpp"
#include "twinphoton/qpm.hpp"
#include "twinphoton/sellmeier.hpp"
#include "twinphoton/source.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

namespace py = pybind11;
using namespace twinphoton;

namespace
{

py::dict to_dict(const KeyValueFile &kv)
{
    py::dict d;
    for (const auto &key : kv.keys())
    {
        const auto &v = kv.get_string(key);
        if (v == "true" || v == "false")
            d[py::str(key)] = v == "true";
        else if (const auto x = kv.find_double(key))
            d[py::str(key)] = *x;
        else
            d[py::str(key)] = v;
    }
    return d;
}

KeyValueFile from_dict(const py::dict &d)
{
    KeyValueFile kv;
    for (const auto &[k, v] : d)
    {
        const auto key = py::cast<std::string>(k);
        if (py::isinstance<py::bool_>(v))
            kv.set(key, std::string(py::cast<bool>(v) ? "true" : "false"));
        else if (py::isinstance<py::int_>(v) || py::isinstance<py::float_>(v))
            kv.set(key, py::cast<double>(v));
        else
            kv.set(key, py::cast<std::string>(py::str(v)));
    }
    return kv;
}

EventStream stream_from(const std::vector<int> &detectors, const std::vector<std::int64_t> &timestamps_ps,
                        double duration_s)
{
    if (detectors.size() != timestamps_ps.size())
        throw DomainError("detectors and timestamps differ in length");
    EventStream s;
    s.metadata.duration_s = duration_s;
    s.events.reserve(detectors.size());
    for (std::size_t i = 0; i < detectors.size(); ++i)
    {
        if (detectors[i] != 1 && detectors[i] != 2)
            throw DomainError("detector index must be 1 or 2");
        s.events.push_back({static_cast<std::uint8_t>(detectors[i]), timestamps_ps[i]});
    }
    return s;
}

py::dict summary_dict(const CountSummary &s)
{
    return to_dict(summary_key_values(s));
}

} // namespace

PYBIND11_MODULE(_core, m)
{
    m.doc() = "Photon-pair source simulation, coincidence counting and figure-of-merit estimation";

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
    py::register_exception<RangeError>(m, "RangeError", PyExc_ValueError);
    py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
    py::register_exception<InferenceError>(m, "InferenceError", PyExc_ArithmeticError);
    py::register_exception<SolverError>(m, "SolverError", PyExc_ArithmeticError);
    py::register_exception<SizingError>(m, "SizingError", PyExc_MemoryError);

    m.def("version", &cli::version);
    m.def("default_data_dir", &cli::default_data_dir);

    // photonics core, wavelengths in nm
    m.def(
        "photon_flux", [](double watts, double nm) { return photon_flux(OpticalPower(watts), Wavelength(nm)).hertz(); },
        py::arg("power_w"), py::arg("wavelength_nm"));
    m.def(
        "idler_wavelength",
        [](double pump_nm, double signal_nm) {
            return idler_wavelength(Wavelength(pump_nm), Wavelength(signal_nm)).nanometers();
        },
        py::arg("pump_nm"), py::arg("signal_nm"));

    // QPM
    py::class_<SellmeierModel>(m, "SellmeierModel")
        .def_static("load", &SellmeierModel::load, py::arg("path"))
        .def_property_readonly("name", &SellmeierModel::name)
        .def_property_readonly("version", &SellmeierModel::version)
        .def(
            "index", [](const SellmeierModel &s, double nm, double t) { return s.index(Wavelength(nm), t); },
            py::arg("wavelength_nm"), py::arg("temperature_c"));

    m.def(
        "solve_poling_period",
        [](double pump_nm, double signal_nm, double t, const SellmeierModel &model, int order) {
            return solve_poling_period(Wavelength(pump_nm), Wavelength(signal_nm), t, model, QpmOrder(order))
                .poling_period_um;
        },
        py::arg("pump_nm"), py::arg("signal_nm"), py::arg("temperature_c"), py::arg("model"), py::arg("order") = 1);
    m.def(
        "phase_mismatch",
        [](double pump_nm, double signal_nm, double t, double period_um, const SellmeierModel &model, int order) {
            return phase_mismatch(
                make_qpm_point(Wavelength(pump_nm), Wavelength(signal_nm), t, period_um, QpmOrder(order)), model);
        },
        py::arg("pump_nm"), py::arg("signal_nm"), py::arg("temperature_c"), py::arg("period_um"), py::arg("model"),
        py::arg("order") = 1);
    m.def(
        "solve_degeneracy_temperature",
        [](double pump_nm, double period_um, const SellmeierModel &model, int order) {
            return solve_degeneracy_temperature(Wavelength(pump_nm), period_um, model, QpmOrder(order));
        },
        py::arg("pump_nm"), py::arg("period_um"), py::arg("model"), py::arg("order") = 1);

    // simulation
    m.def(
        "expected_rates",
        [](const py::dict &config) {
            SourceConfig src;
            DetectionChainConfig chain;
            load_configs(from_dict(config), src, chain);
            const auto r = expected_rates(src, chain);
            return py::make_tuple(r.s1_net.hertz(), r.s2_net.hertz(), r.rc_net.hertz());
        },
        py::arg("config"));
    m.def(
        "load_config", [](const std::filesystem::path &p) { return to_dict(KeyValueFile::load(p)); },
        py::arg("path"));
    m.def(
        "simulate",
        [](const py::dict &config, double duration_s, std::uint64_t seed, std::int64_t resolution_ps) {
            SourceConfig src;
            DetectionChainConfig chain;
            load_configs(from_dict(config), src, chain);
            RunConfig run;
            run.duration_s = duration_s;
            run.seed = seed;
            run.resolution_ps = resolution_ps;
            SimulationResult r;
            {
                py::gil_scoped_release release;
                r = simulate_run(src, chain, run);
            }
            std::vector<int> det;
            std::vector<std::int64_t> ts;
            det.reserve(r.stream.events.size());
            ts.reserve(r.stream.events.size());
            for (const auto &e : r.stream.events)
            {
                det.push_back(e.detector);
                ts.push_back(e.timestamp_ps);
            }
            py::dict truth;
            truth["pairs_emitted"] = r.truth.pairs_emitted;
            truth["pairs_detected_coincident"] = r.truth.pairs_detected_coincident;
            truth["darks_emitted_1"] = r.truth.darks_emitted[0];
            truth["darks_emitted_2"] = r.truth.darks_emitted[1];
            py::dict out;
            out["detectors"] = det;
            out["timestamps_ps"] = ts;
            out["duration_s"] = duration_s;
            out["truth"] = truth;
            return out;
        },
        py::arg("config"), py::arg("duration_s"), py::arg("seed") = 0, py::arg("resolution_ps") = 1);

    // counting
    m.def(
        "count",
        [](const std::vector<int> &det, const std::vector<std::int64_t> &ts, double duration_s, double window_ns,
           double delay_ns, double dark1_hz, double dark2_hz) {
            const auto s = stream_from(det, ts, duration_s);
            return summary_dict(net_summary(s, WindowConfig{window_ns, delay_ns}, Rate(dark1_hz), Rate(dark2_hz)));
        },
        py::arg("detectors"), py::arg("timestamps_ps"), py::arg("duration_s"), py::arg("window_ns") = 1.0,
        py::arg("delay_ns") = 100.0, py::arg("dark1_hz") = 0.0, py::arg("dark2_hz") = 0.0);

    // estimation
    m.def(
        "infer_pair_rate",
        [](double s1, double s2, double rc, bool splitter) {
            return infer_pair_rate(Rate(s1), Rate(s2), Rate(rc), splitter).hertz();
        },
        py::arg("s1"), py::arg("s2"), py::arg("rc"), py::arg("splitter") = true);
    m.def(
        "estimate",
        [](double s1, double s2, double rc, bool splitter, double power_w, double pump_nm,
           std::optional<double> duration_s) {
            EstimateInput in;
            in.s1_net = Rate(s1);
            in.s2_net = Rate(s2);
            in.rc_net = Rate(rc);
            in.splitter_correction = splitter;
            in.pump_power_guided = OpticalPower(power_w);
            in.pump_wavelength = Wavelength(pump_nm);
            in.duration_s = duration_s;
            std::ostringstream os;
            write_estimate_kv(os, estimate(in));
            return to_dict(KeyValueFile::parse_string(os.str()));
        },
        py::arg("s1"), py::arg("s2"), py::arg("rc"), py::arg("splitter"), py::arg("power_w"), py::arg("pump_nm"),
        py::arg("duration_s") = py::none());
    m.def(
        "table1",
        [](const std::filesystem::path &path, double max_dev) {
            py::list rows;
            for (const auto &r : reproduce_table1(load_published_sources(path), max_dev))
            {
                py::dict d;
                d["key"] = r.source.key;
                d["label"] = r.source.label;
                d["pair_rate_hz"] = r.pair_rate.hertz();
                d["rc_per_watt"] = r.rc_per_watt;
                d["conversion_efficiency"] = r.conversion_efficiency;
                d["published_rc_per_watt"] = r.source.published_rc_per_watt;
                d["published_conversion_efficiency"] = r.source.published_conversion_efficiency;
                d["flagged"] = r.flagged;
                rows.append(d);
            }
            return rows;
        },
        py::arg("path"), py::arg("max_dev") = 2.0);

    m.def(
        "run_cli",
        [](const std::vector<std::string> &args) {
            std::ostringstream out;
            std::ostringstream err;
            int code = 0;
            {
                py::gil_scoped_release release;
                code = cli::run(args, out, err);
            }
            return py::make_tuple(code, out.str(), err.str());
        },
        py::arg("args"));
}
