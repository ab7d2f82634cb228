#include "twinphoton/source.hpp"

#include "twinphoton/errors.hpp"
#include "twinphoton/keyvalue.hpp"
#include "twinphoton/random.hpp"

#include <algorithm>
#include <cmath>
#include <array>
#include <cstdio>
#include <limits>
#include <random>
#include <sstream>

namespace twinphoton
{

namespace
{

constexpr std::uint64_t kDarkPair = std::numeric_limits<std::uint64_t>::max();

struct RawDetection
{
    double time_s;
    std::uint64_t pair; // kDarkPair for dark counts
    std::uint8_t detector;
};

bool finite_nonneg(double v)
{
    return std::isfinite(v) && v >= 0.0;
}

// Rethrows quantity constructor errors as ConfigError on the named key.
template <typename T>
T field(const std::string &key, double value)
{
    try
    {
        return T(value);
    }
    catch (const DomainError &err)
    {
        throw ConfigError(key, err.what());
    }
}

} // namespace

void SourceConfig::validate() const
{
    if (!(std::isfinite(conversion_efficiency) && conversion_efficiency >= 0.0 && conversion_efficiency <= 1.0))
        throw ConfigError("conversion_efficiency", "must lie in [0, 1], got " + format_double(conversion_efficiency));
    if (!(std::isfinite(spectral_fwhm_nm) && spectral_fwhm_nm > 0.0))
        throw ConfigError("spectral_fwhm_nm", "must be finite and > 0, got " + format_double(spectral_fwhm_nm) + " nm");
    const double degenerate = 2.0 * pump_wavelength.nanometers();
    if (std::abs(spectral_center.nanometers() - degenerate) > 0.01 * degenerate)
        throw ConfigError("spectral_center_nm", "must be within 1% of twice the pump wavelength (" +
                                                 format_double(degenerate) + " nm), got " +
                                                 format_double(spectral_center.nanometers()) + " nm");
}

void DetectionChainConfig::validate() const
{
    if (!finite_nonneg(dead_time_ns))
        throw ConfigError("dead_time_ns", "must be finite and >= 0, got " + format_double(dead_time_ns) + " ns");
    if (!finite_nonneg(jitter_ps))
        throw ConfigError("jitter_ps", "must be finite and >= 0, got " + format_double(jitter_ps) + " ps");
}

void RunConfig::validate() const
{
    if (!(std::isfinite(duration_s) && duration_s > 0.0))
        throw ConfigError("duration", "must be finite and > 0 s, got " + format_double(duration_s));
    if (duration_s * 1e12 >= 9.0e18)
        throw ConfigError("duration", "exceeds the 64-bit picosecond timestamp range");
    if (resolution_ps <= 0)
        throw ConfigError("resolution", "must be > 0 ps, got " + std::to_string(resolution_ps));
}

Rate pair_rate(const SourceConfig &source)
{
    return Rate(source.conversion_efficiency * photon_flux(source.guided_power(), source.pump_wavelength).hertz());
}

double conversion_efficiency_for_rate(const SourceConfig &source, Rate n)
{
    const double flux = photon_flux(source.guided_power(), source.pump_wavelength).hertz();
    if (!(flux > 0.0))
        throw ConfigError("pair_rate_hz", "guided pump power is zero; cannot resolve a conversion efficiency");
    return n.hertz() / flux;
}

PredictedRates expected_rates(const SourceConfig &source, const DetectionChainConfig &chain)
{
    const double n = pair_rate(source).hertz();
    const double p1 = chain.mu1.value() * chain.eta1.value();
    const double p2 = chain.mu2.value() * chain.eta2.value();
    const double split = chain.splitter_present ? 0.5 : 1.0;
    return PredictedRates{Rate(p1 * n), Rate(p2 * n), Rate(split * p1 * p2 * n)};
}

SimulationResult simulate_run(const SourceConfig &source, const DetectionChainConfig &chain, const RunConfig &run)
{
    source.validate();
    chain.validate();
    run.validate();

    const double duration = run.duration_s;
    const double n = pair_rate(source).hertz();
    const auto predicted = expected_rates(source, chain);
    const double mean_events =
        duration * (predicted.s1_net.hertz() + predicted.s2_net.hertz() + chain.dark1.hertz() + chain.dark2.hertz());
    const double sized = mean_events + 6.0 * std::sqrt(mean_events) + 16.0;
    if (sized > static_cast<double>(run.max_events))
        throw SizingError("run would produce about " + format_double(std::round(mean_events)) +
                          " detections, above the budget of " + std::to_string(run.max_events) +
                          "; shorten the duration or raise max_events");

    std::vector<RawDetection> raw;
    raw.reserve(static_cast<std::size_t>(sized));

    const std::array<double, 2> survival{chain.mu1.value() * chain.eta1.value(),
                                         chain.mu2.value() * chain.eta2.value()};
    const double jitter_s = chain.jitter_ps * 1e-12;
    auto jitter_rng = substream(run.seed, RandomProcess::jitter);
    std::normal_distribution<double> jitter(0.0, 1.0);

    auto record = [&](double t, std::uint64_t pair, std::uint8_t detector) {
        if (jitter_s > 0.0)
        {
            t += jitter_s * jitter(jitter_rng);
            if (t < 0.0 || t >= duration)
                return;
        }
        raw.push_back({t, pair, detector});
    };

    SimulationResult result;
    auto &truth = result.truth;

    // Pairs that leave at least one detection form a thinned Poisson process;
    // the remaining emissions only contribute to the emitted total.
    struct Outcome
    {
        std::uint8_t arm_a;
        std::uint8_t arm_b;
        bool keep_a;
        bool keep_b;
    };
    std::vector<Outcome> outcomes;
    std::vector<double> weights;
    double visible = 0.0;
    for (std::uint8_t a = 1; a <= 2; ++a)
        for (std::uint8_t b = 1; b <= 2; ++b)
        {
            const double route = chain.splitter_present ? 0.25 : (a == 1 && b == 2 ? 1.0 : 0.0);
            if (route == 0.0)
                continue;
            const double pa = survival[a - 1];
            const double pb = survival[b - 1];
            const std::array<std::pair<std::array<bool, 2>, double>, 3> cases{
                {{{true, true}, pa * pb}, {{true, false}, pa * (1.0 - pb)}, {{false, true}, (1.0 - pa) * pb}}};
            for (const auto &[keep, p] : cases)
            {
                if (!(route * p > 0.0))
                    continue;
                outcomes.push_back({a, b, keep[0], keep[1]});
                weights.push_back(route * p);
                visible += route * p;
            }
        }

    if (n > 0.0)
    {
        auto emission = substream(run.seed, RandomProcess::pair_emission);
        auto routing = substream(run.seed, RandomProcess::routing);
        if (visible > 0.0)
        {
            std::exponential_distribution<double> gap(n * visible);
            std::discrete_distribution<std::size_t> pick(weights.begin(), weights.end());
            double t = 0.0;
            for (std::uint64_t id = 0;; ++id)
            {
                t += gap(emission);
                if (t >= duration)
                    break;
                ++truth.pairs_emitted;
                const auto &o = outcomes[pick(routing)];
                if (o.keep_a)
                    record(t, id, o.arm_a);
                if (o.keep_b)
                    record(t, id, o.arm_b);
            }
        }
        const double hidden = n * duration * (1.0 - visible);
        if (hidden > 0.0)
        {
            auto survive = substream(run.seed, RandomProcess::survival);
            truth.pairs_emitted += std::poisson_distribution<std::uint64_t>(hidden)(survive);
        }
    }

    const std::array<double, 2> dark{chain.dark1.hertz(), chain.dark2.hertz()};
    const std::array<RandomProcess, 2> dark_process{RandomProcess::dark1, RandomProcess::dark2};
    for (std::size_t d = 0; d < 2; ++d)
    {
        if (!(dark[d] > 0.0))
            continue;
        auto rng = substream(run.seed, dark_process[d]);
        std::exponential_distribution<double> gap(dark[d]);
        for (double t = gap(rng); t < duration; t += gap(rng))
        {
            ++truth.darks_emitted[d];
            record(t, kDarkPair, static_cast<std::uint8_t>(d + 1));
        }
    }

    std::sort(raw.begin(), raw.end(), [](const RawDetection &a, const RawDetection &b) {
        return a.time_s < b.time_s || (a.time_s == b.time_s && a.detector < b.detector);
    });

    // Non-paralyzable dead time: a detection is dropped when it falls inside
    // the dead interval of the last recorded detection on the same detector.
    const double dead_s = chain.dead_time_ns * 1e-9;
    std::array<double, 2> last_fire{-std::numeric_limits<double>::infinity(),
                                    -std::numeric_limits<double>::infinity()};
    std::vector<std::pair<std::uint64_t, std::uint8_t>> detected_pairs;
    auto &events = result.stream.events;
    events.reserve(raw.size());

    const std::int64_t end_ps = static_cast<std::int64_t>(std::llround(duration * 1e12));
    const std::int64_t res = run.resolution_ps;
    const std::int64_t last_slot = ((end_ps - 1) / res) * res;

    for (const auto &r : raw)
    {
        auto &last = last_fire[r.detector - 1];
        if (r.time_s - last < dead_s)
            continue;
        last = r.time_s;
        auto ps = static_cast<std::int64_t>(std::floor(r.time_s * 1e12));
        ps = std::min((ps / res) * res, last_slot);
        events.push_back({r.detector, ps});
        if (r.pair != kDarkPair)
            detected_pairs.emplace_back(r.pair, r.detector);
    }

    std::sort(events.begin(), events.end(), [](const DetectionEvent &a, const DetectionEvent &b) {
        return a.timestamp_ps < b.timestamp_ps || (a.timestamp_ps == b.timestamp_ps && a.detector < b.detector);
    });

    std::sort(detected_pairs.begin(), detected_pairs.end());
    for (std::size_t i = 0; i + 1 < detected_pairs.size(); ++i)
    {
        if (detected_pairs[i].first == detected_pairs[i + 1].first &&
            detected_pairs[i].second != detected_pairs[i + 1].second)
        {
            ++truth.pairs_detected_coincident;
            ++i;
        }
    }

    result.stream.metadata = StreamMetadata{duration, run.seed, res, config_digest(source, chain)};
    return result;
}

std::vector<SpectralPair> sample_pair_spectrum(const SourceConfig &source, std::size_t count, std::uint64_t seed)
{
    source.validate();
    const double sigma = source.spectral_fwhm_nm / (2.0 * std::sqrt(2.0 * std::log(2.0)));
    auto rng = substream(seed, RandomProcess::spectrum);
    std::normal_distribution<double> shape(source.spectral_center.nanometers(), sigma);
    const double pump = source.pump_wavelength.nanometers();

    std::vector<SpectralPair> pairs;
    pairs.reserve(count);
    while (pairs.size() < count)
    {
        const double signal_nm = shape(rng);
        if (!(signal_nm > pump))
            continue;
        const Wavelength signal(signal_nm);
        pairs.push_back({signal, idler_wavelength(source.pump_wavelength, signal)});
    }
    return pairs;
}

void load_configs(const KeyValueFile &kv, SourceConfig &source, DetectionChainConfig &chain)
{
    source.pump_power = field<OpticalPower>("pump_power_w", kv.get_double("pump_power_w"));
    source.coupling_efficiency = field<Efficiency>("coupling_efficiency", kv.get_double_or("coupling_efficiency", 1.0));
    source.pump_wavelength = field<Wavelength>("pump_wavelength_nm", kv.get_double("pump_wavelength_nm"));
    source.spectral_center = field<Wavelength>(
        "spectral_center_nm", kv.get_double_or("spectral_center_nm", 2.0 * source.pump_wavelength.nanometers()));
    source.spectral_fwhm_nm = kv.get_double_or("spectral_fwhm_nm", 30.0);

    const bool has_eff = kv.contains("conversion_efficiency");
    const bool has_rate = kv.contains("pair_rate_hz");
    if (has_eff == has_rate)
        throw ConfigError("conversion_efficiency", "exactly one of conversion_efficiency / pair_rate_hz is required");
    if (has_eff)
        source.conversion_efficiency = kv.get_double("conversion_efficiency");
    else
        source.conversion_efficiency =
            conversion_efficiency_for_rate(source, field<Rate>("pair_rate_hz", kv.get_double("pair_rate_hz")));

    chain.mu1 = field<Efficiency>("mu1", kv.get_double("mu1"));
    chain.mu2 = field<Efficiency>("mu2", kv.get_double("mu2"));
    chain.eta1 = field<Efficiency>("eta1", kv.get_double("eta1"));
    chain.eta2 = field<Efficiency>("eta2", kv.get_double("eta2"));
    chain.dark1 = field<Rate>("dark1_hz", kv.get_double_or("dark1_hz", 0.0));
    chain.dark2 = field<Rate>("dark2_hz", kv.get_double_or("dark2_hz", 0.0));
    chain.dead_time_ns = kv.get_double_or("dead_time_ns", 0.0);
    chain.jitter_ps = kv.get_double_or("jitter_ps", 0.0);
    chain.splitter_present = kv.get_bool_or("splitter_present", true);

    source.validate();
    chain.validate();
}

KeyValueFile config_key_values(const SourceConfig &source, const DetectionChainConfig &chain)
{
    KeyValueFile kv;
    kv.set("pump_power_w", source.pump_power.watts());
    kv.set("coupling_efficiency", source.coupling_efficiency.value());
    kv.set("pump_wavelength_nm", source.pump_wavelength.nanometers());
    kv.set("conversion_efficiency", source.conversion_efficiency);
    kv.set("spectral_center_nm", source.spectral_center.nanometers());
    kv.set("spectral_fwhm_nm", source.spectral_fwhm_nm);
    kv.set("mu1", chain.mu1.value());
    kv.set("mu2", chain.mu2.value());
    kv.set("eta1", chain.eta1.value());
    kv.set("eta2", chain.eta2.value());
    kv.set("dark1_hz", chain.dark1.hertz());
    kv.set("dark2_hz", chain.dark2.hertz());
    kv.set("dead_time_ns", chain.dead_time_ns);
    kv.set("jitter_ps", chain.jitter_ps);
    kv.set("splitter_present", std::string(chain.splitter_present ? "true" : "false"));
    return kv;
}

std::string config_digest(const SourceConfig &source, const DetectionChainConfig &chain)
{
    std::ostringstream text;
    config_key_values(source, chain).write(text);
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    for (const unsigned char c : text.str())
    {
        hash ^= c;
        hash *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(hash));
    return buf;
}

} // namespace twinphoton
