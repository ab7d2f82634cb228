#ifndef TWINPHOTON_ESTIMATOR_HPP
#define TWINPHOTON_ESTIMATOR_HPP

// Inversion of net singles and coincidence rates into the pair production
// rate, conversion efficiency and per-arm efficiency products.

#include "twinphoton/units.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace twinphoton
{

class KeyValueFile;

struct EstimateInput
{
    Rate s1_net{0.0};
    Rate s2_net{0.0};
    Rate rc_net{0.0};
    bool splitter_correction = true;
    OpticalPower pump_power_guided{0.0};
    Wavelength pump_wavelength{657.0};
    // Run duration; enables Poisson uncertainties when set.
    std::optional<double> duration_s;
};

struct EstimateResult
{
    Rate pair_rate{0.0};
    double conversion_efficiency = 0.0; // pairs per guided pump photon
    double rc_per_watt = 0.0;           // coincidences / s / W of guided pump
    Efficiency mu_eta1{0.0};
    Efficiency mu_eta2{0.0};
    std::optional<double> pair_rate_sigma;
    std::optional<double> conversion_efficiency_sigma;
};

// N = s1 s2 / rc, halved when the coupler correction applies. Throws
// InferenceError when rc is zero or exceeds either singles rate.
Rate infer_pair_rate(Rate s1_net, Rate s2_net, Rate rc_net, bool splitter_correction);
Rate infer_pair_rate(const EstimateInput &input);

// N / photon_flux(P, lambda). Throws InferenceError for zero power.
double conversion_efficiency(Rate pair_rate, OpticalPower pump_power_guided, Wavelength pump_wavelength);

// (s1 / N, s2 / N). Throws InferenceError if either exceeds 1.
std::pair<Efficiency, Efficiency> efficiency_products(const EstimateInput &input);

// Relative 1-sigma on N from Poisson counts over `duration_s`:
// sqrt(1/C1 + 1/C2 + 1/Cc).
double relative_pair_rate_uncertainty(Rate s1_net, Rate s2_net, Rate rc_net, double duration_s);

EstimateResult estimate(const EstimateInput &input);

void write_estimate_kv(std::ostream &out, const EstimateResult &result);

// One published source of the comparison table.
struct PublishedSource
{
    std::string key;
    std::string label;
    OpticalPower pump_power{0.0}; // guided, where the source quotes it so
    Wavelength pump_wavelength{1.0};
    Wavelength signal_wavelength{2.0};
    std::string detector;
    Rate singles{0.0};
    Rate rc_net{0.0};
    bool splitter_correction = false;
    double published_rc_per_watt = 0.0;
    double published_conversion_efficiency = 0.0;
};

struct SourceComparisonRow
{
    PublishedSource source;
    Rate pair_rate{0.0};
    double rc_per_watt = 0.0;
    double conversion_efficiency = 0.0;
    // computed / published - 1
    double rc_per_watt_deviation = 0.0;
    double conversion_efficiency_deviation = 0.0;
    bool flagged = false;
};

// Rows listed by the `rows` key, each row's fields under `<row>.`.
std::vector<PublishedSource> published_sources_from_key_values(const KeyValueFile &kv);
std::vector<PublishedSource> load_published_sources(const std::filesystem::path &path);

// A row is flagged when computed and published values differ by more than
// `max_deviation_factor` in either direction, on either quantity.
std::vector<SourceComparisonRow> reproduce_table1(const std::vector<PublishedSource> &sources,
                                                  double max_deviation_factor = 2.0);

void write_table1_csv(std::ostream &out, const std::vector<SourceComparisonRow> &rows);
void write_table1_text(std::ostream &out, const std::vector<SourceComparisonRow> &rows);

} // namespace twinphoton

#endif // TWINPHOTON_ESTIMATOR_HPP
