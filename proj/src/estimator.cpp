#include "twinphoton/estimator.hpp"

#include "twinphoton/errors.hpp"
#include "twinphoton/keyvalue.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <tuple>
#include <ostream>
#include <sstream>

namespace twinphoton
{

namespace
{

double ratio_factor(double computed, double published)
{
    if (!(computed > 0.0) || !(published > 0.0))
        return std::numeric_limits<double>::infinity();
    return std::max(computed / published, published / computed);
}

std::string sig6(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

} // namespace

Rate infer_pair_rate(Rate s1_net, Rate s2_net, Rate rc_net, bool splitter_correction)
{
    const double rc = rc_net.hertz();
    if (!(rc > 0.0))
        throw InferenceError("net coincidence rate must be > 0 to infer the pair rate");
    if (rc > std::min(s1_net.hertz(), s2_net.hertz()))
        throw InferenceError("net coincidence rate " + format_double(rc) + " Hz exceeds a net singles rate (" +
                             format_double(s1_net.hertz()) + ", " + format_double(s2_net.hertz()) + " Hz)");
    const double n = s1_net.hertz() * s2_net.hertz() / rc;
    return Rate(splitter_correction ? 0.5 * n : n);
}

Rate infer_pair_rate(const EstimateInput &input)
{
    return infer_pair_rate(input.s1_net, input.s2_net, input.rc_net, input.splitter_correction);
}

double conversion_efficiency(Rate pair_rate, OpticalPower pump_power_guided, Wavelength pump_wavelength)
{
    if (!(pump_power_guided.watts() > 0.0))
        throw InferenceError("guided pump power must be > 0 to compute a conversion efficiency");
    return pair_rate.hertz() / photon_flux(pump_power_guided, pump_wavelength).hertz();
}

std::pair<Efficiency, Efficiency> efficiency_products(const EstimateInput &input)
{
    const double n = infer_pair_rate(input).hertz();
    const double p1 = input.s1_net.hertz() / n;
    const double p2 = input.s2_net.hertz() / n;
    if (p1 > 1.0 || p2 > 1.0)
        throw InferenceError("inferred efficiency product exceeds 1 (" + format_double(p1) + ", " +
                             format_double(p2) + "); rates are inconsistent with the coupler setting");
    return {Efficiency(p1), Efficiency(p2)};
}

double relative_pair_rate_uncertainty(Rate s1_net, Rate s2_net, Rate rc_net, double duration_s)
{
    if (!(duration_s > 0.0))
        throw InferenceError("duration must be > 0 for uncertainties");
    const double c1 = s1_net.hertz() * duration_s;
    const double c2 = s2_net.hertz() * duration_s;
    const double cc = rc_net.hertz() * duration_s;
    return std::sqrt(1.0 / c1 + 1.0 / c2 + 1.0 / cc);
}

EstimateResult estimate(const EstimateInput &input)
{
    EstimateResult r;
    r.pair_rate = infer_pair_rate(input);
    r.conversion_efficiency = conversion_efficiency(r.pair_rate, input.pump_power_guided, input.pump_wavelength);
    r.rc_per_watt = input.rc_net.hertz() / input.pump_power_guided.watts();
    std::tie(r.mu_eta1, r.mu_eta2) = efficiency_products(input);
    if (input.duration_s)
    {
        const double rel = relative_pair_rate_uncertainty(input.s1_net, input.s2_net, input.rc_net, *input.duration_s);
        r.pair_rate_sigma = rel * r.pair_rate.hertz();
        r.conversion_efficiency_sigma = rel * r.conversion_efficiency;
    }
    return r;
}

void write_estimate_kv(std::ostream &out, const EstimateResult &r)
{
    KeyValueFile kv;
    kv.set("pair_rate_hz", r.pair_rate.hertz());
    kv.set("conversion_efficiency", r.conversion_efficiency);
    kv.set("rc_per_watt", r.rc_per_watt);
    kv.set("mu_eta1", r.mu_eta1.value());
    kv.set("mu_eta2", r.mu_eta2.value());
    if (r.pair_rate_sigma)
        kv.set("pair_rate_sigma_hz", *r.pair_rate_sigma);
    if (r.conversion_efficiency_sigma)
        kv.set("conversion_efficiency_sigma", *r.conversion_efficiency_sigma);
    kv.write(out);
}

std::vector<PublishedSource> published_sources_from_key_values(const KeyValueFile &kv)
{
    std::vector<PublishedSource> sources;
    std::stringstream list(kv.get_string("rows"));
    std::string key;
    while (std::getline(list, key, ','))
    {
        key = std::string(trim(key));
        if (key.empty())
            continue;
        auto quantity = [&](const std::string &name, auto make) {
            const std::string full = key + "." + name;
            try
            {
                return make(kv.get_double(full));
            }
            catch (const DomainError &err)
            {
                throw ConfigError(full, err.what());
            }
        };
        PublishedSource s;
        s.key = key;
        s.label = kv.get_string(key + ".label");
        s.pump_power = quantity("pump_power_w", [](double v) { return OpticalPower(v); });
        s.pump_wavelength = quantity("pump_wavelength_nm", [](double v) { return Wavelength(v); });
        s.signal_wavelength = quantity("signal_wavelength_nm", [](double v) { return Wavelength(v); });
        s.detector = kv.get_string(key + ".detector");
        s.singles = quantity("singles_hz", [](double v) { return Rate(v); });
        s.rc_net = quantity("rc_net_hz", [](double v) { return Rate(v); });
        s.splitter_correction = kv.get_bool(key + ".splitter_correction");
        s.published_rc_per_watt = kv.get_double(key + ".published_rc_per_w");
        s.published_conversion_efficiency = kv.get_double(key + ".published_conversion_efficiency");
        sources.push_back(std::move(s));
    }
    if (sources.empty())
        throw ConfigError("rows", "no rows listed");
    return sources;
}

std::vector<PublishedSource> load_published_sources(const std::filesystem::path &path)
{
    return published_sources_from_key_values(KeyValueFile::load(path));
}

std::vector<SourceComparisonRow> reproduce_table1(const std::vector<PublishedSource> &sources,
                                                  double max_deviation_factor)
{
    std::vector<SourceComparisonRow> rows;
    rows.reserve(sources.size());
    for (const auto &s : sources)
    {
        SourceComparisonRow row;
        row.source = s;
        row.pair_rate = infer_pair_rate(s.singles, s.singles, s.rc_net, s.splitter_correction);
        row.rc_per_watt = s.rc_net.hertz() / s.pump_power.watts();
        row.conversion_efficiency = conversion_efficiency(row.pair_rate, s.pump_power, s.pump_wavelength);
        row.rc_per_watt_deviation = row.rc_per_watt / s.published_rc_per_watt - 1.0;
        row.conversion_efficiency_deviation = row.conversion_efficiency / s.published_conversion_efficiency - 1.0;
        row.flagged = ratio_factor(row.rc_per_watt, s.published_rc_per_watt) > max_deviation_factor ||
                      ratio_factor(row.conversion_efficiency, s.published_conversion_efficiency) >
                          max_deviation_factor;
        rows.push_back(std::move(row));
    }
    return rows;
}

void write_table1_csv(std::ostream &out, const std::vector<SourceComparisonRow> &rows)
{
    out << "source,pump_power_w,pump_wavelength_nm,signal_wavelength_nm,detector,singles_hz,rc_net_hz,"
           "splitter_correction,pair_rate_hz,rc_per_w,published_rc_per_w,rc_per_w_deviation,"
           "conversion_efficiency,published_conversion_efficiency,conversion_efficiency_deviation,flagged\n";
    for (const auto &r : rows)
    {
        const auto &s = r.source;
        out << '"' << s.label << "\"," << format_double(s.pump_power.watts()) << ','
            << format_double(s.pump_wavelength.nanometers()) << ',' << format_double(s.signal_wavelength.nanometers())
            << ",\"" << s.detector << "\"," << format_double(s.singles.hertz()) << ','
            << format_double(s.rc_net.hertz()) << ',' << (s.splitter_correction ? "true" : "false") << ','
            << format_double(r.pair_rate.hertz()) << ',' << format_double(r.rc_per_watt) << ','
            << format_double(s.published_rc_per_watt) << ',' << format_double(r.rc_per_watt_deviation) << ','
            << format_double(r.conversion_efficiency) << ',' << format_double(s.published_conversion_efficiency)
            << ',' << format_double(r.conversion_efficiency_deviation) << ',' << (r.flagged ? "true" : "false")
            << '\n';
    }
}

void write_table1_text(std::ostream &out, const std::vector<SourceComparisonRow> &rows)
{
    char line[512];
    std::snprintf(line, sizeof(line), "%-24s %10s %13s %-14s %10s %10s %3s %12s %12s %12s %8s %12s %12s %8s %s\n",
                  "source", "P_P (mW)", "pump-sig (nm)", "detector", "S_i (Hz)", "R_C (c/s)", "/2", "N (Hz)",
                  "R_C/P_P", "published", "dev", "eta", "published", "dev", "flag");
    out << line;
    for (const auto &r : rows)
    {
        const auto &s = r.source;
        const std::string wavelengths =
            sig6(s.pump_wavelength.nanometers()) + "-" + sig6(s.signal_wavelength.nanometers());
        std::snprintf(line, sizeof(line),
                      "%-24s %10s %13s %-14s %10s %10s %3s %12s %12s %12s %+7.1f%% %12s %12s %+7.1f%% %s\n",
                      s.label.c_str(), sig6(s.pump_power.watts() * 1e3).c_str(), wavelengths.c_str(),
                      s.detector.c_str(), sig6(s.singles.hertz()).c_str(), sig6(s.rc_net.hertz()).c_str(),
                      s.splitter_correction ? "yes" : "no", sig6(r.pair_rate.hertz()).c_str(),
                      sig6(r.rc_per_watt).c_str(), sig6(s.published_rc_per_watt).c_str(),
                      100.0 * r.rc_per_watt_deviation, sig6(r.conversion_efficiency).c_str(),
                      sig6(s.published_conversion_efficiency).c_str(), 100.0 * r.conversion_efficiency_deviation,
                      r.flagged ? "FLAGGED" : "ok");
        out << line;
    }
    out << "R_C/P_P in coincidences per second per watt of pump; eta in pairs per pump photon.\n";
}

} // namespace twinphoton
