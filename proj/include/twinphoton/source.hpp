#ifndef TWINPHOTON_SOURCE_HPP
#define TWINPHOTON_SOURCE_HPP

// Statistical model of a down-conversion source feeding an optional 50/50
// coupler and two Geiger-mode detectors.

#include "twinphoton/event_stream.hpp"
#include "twinphoton/units.hpp"

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace twinphoton
{

class KeyValueFile;

struct SourceConfig
{
    OpticalPower pump_power{0.0};       // in front of the coupling objective
    Efficiency coupling_efficiency{1.0}; // pump into the guide
    Wavelength pump_wavelength{657.0};
    double conversion_efficiency = 0.0; // pairs per guided pump photon
    Wavelength spectral_center{1314.0};
    double spectral_fwhm_nm = 30.0;

    OpticalPower guided_power() const { return OpticalPower(pump_power.watts() * coupling_efficiency.value()); }

    // Throws ConfigError naming the field.
    void validate() const;
};

struct DetectionChainConfig
{
    Efficiency mu1{1.0};
    Efficiency mu2{1.0};
    Efficiency eta1{1.0};
    Efficiency eta2{1.0};
    Rate dark1{0.0};
    Rate dark2{0.0};
    double dead_time_ns = 0.0; // non-paralyzable, per detector
    double jitter_ps = 0.0;    // Gaussian sigma, per detection
    bool splitter_present = true;

    void validate() const;
};

struct RunConfig
{
    double duration_s = 1.0;
    std::uint64_t seed = 0;
    std::int64_t resolution_ps = 1;
    // Upper bound on expected detections; exceeding it is a SizingError.
    std::uint64_t max_events = 200'000'000;

    void validate() const;
};

struct TrueCounts
{
    std::uint64_t pairs_emitted = 0;
    std::uint64_t pairs_detected_coincident = 0; // both photons recorded, on different detectors
    std::array<std::uint64_t, 2> darks_emitted{0, 0};
};

struct SimulationResult
{
    EventStream stream;
    TrueCounts truth;
};

struct PredictedRates
{
    Rate s1_net{0.0};
    Rate s2_net{0.0};
    Rate rc_net{0.0};
};

struct SpectralPair
{
    Wavelength signal;
    Wavelength idler;
};

// N = conversion_efficiency * photon_flux(guided power).
Rate pair_rate(const SourceConfig &source);

// Conversion efficiency giving pair rate `n` for the configured guided power.
double conversion_efficiency_for_rate(const SourceConfig &source, Rate n);

// S_i = mu_i eta_i N; Rc = f mu1 eta1 mu2 eta2 N with f = 1/2 behind the coupler.
PredictedRates expected_rates(const SourceConfig &source, const DetectionChainConfig &chain);

// Monte Carlo run. Deterministic for a given seed; each physical process
// (emission, routing, survival, dark counts per detector, jitter) draws from
// its own sub-stream. Jittered detections falling outside [0, duration) are lost.
SimulationResult simulate_run(const SourceConfig &source, const DetectionChainConfig &chain, const RunConfig &run);

// Gaussian signal spectrum, idler from energy conservation. Draws at or below
// the pump wavelength are redrawn.
std::vector<SpectralPair> sample_pair_spectrum(const SourceConfig &source, std::size_t count, std::uint64_t seed);

// Flat `key = value` config I/O. Keys carry the unit they are stored in
// (pump_power_w, pump_wavelength_nm, dark1_hz, dead_time_ns, ...). `pair_rate_hz` may replace
// `conversion_efficiency`; it is resolved against the guided power.
void load_configs(const KeyValueFile &kv, SourceConfig &source, DetectionChainConfig &chain);
// Fully materialized form, conversion efficiency resolved.
KeyValueFile config_key_values(const SourceConfig &source, const DetectionChainConfig &chain);
// FNV-1a 64 of the materialized form, as 16 hex digits.
std::string config_digest(const SourceConfig &source, const DetectionChainConfig &chain);

} // namespace twinphoton

#endif // TWINPHOTON_SOURCE_HPP
