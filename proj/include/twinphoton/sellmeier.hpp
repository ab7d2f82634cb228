#ifndef TWINPHOTON_SELLMEIER_HPP
#define TWINPHOTON_SELLMEIER_HPP

#include "twinphoton/units.hpp"

#include <filesystem>
#include <string>

namespace twinphoton
{

class KeyValueFile;

// Temperature-dependent Sellmeier fit for an extraordinary index,
//
//   n^2 = a1 + b1 f + (a2 + b2 f) / (L^2 - (a3 + b3 f)^2)
//            + (a4 + b4 f) / (L^2 - a5^2) - a6 L^2,
//   f   = (T - t_ref) (T + t_offset),
//
// with L in micrometers and T in degrees Celsius. Both the Edwards-Lawrence
// and Jundt congruent lithium niobate fits are instances of this form.
struct SellmeierCoefficients
{
    double a1 = 0.0, a2 = 0.0, a3 = 0.0, a4 = 0.0, a5 = 0.0, a6 = 0.0;
    double b1 = 0.0, b2 = 0.0, b3 = 0.0, b4 = 0.0;
    double t_ref_c = 24.5;
    double t_offset_c = 570.82;
};

struct ValidityRange
{
    double lambda_min_um = 0.4;
    double lambda_max_um = 2.0;
    double t_min_c = 20.0;
    double t_max_c = 200.0;
};

class SellmeierModel
{
public:
    SellmeierModel(std::string name, std::string version, SellmeierCoefficients coefficients,
                   ValidityRange range);

    static SellmeierModel from_key_values(const KeyValueFile &kv);
    static SellmeierModel load(const std::filesystem::path &path);

    // Throws RangeError naming the violated bound.
    double index(Wavelength wavelength, double temperature_c) const;

    const std::string &name() const noexcept { return name_; }
    const std::string &version() const noexcept { return version_; }
    const SellmeierCoefficients &coefficients() const noexcept { return coeffs_; }
    const ValidityRange &range() const noexcept { return range_; }

    bool in_range(Wavelength wavelength, double temperature_c) const noexcept;

private:
    std::string name_;
    std::string version_;
    SellmeierCoefficients coeffs_;
    ValidityRange range_;
};

inline double refractive_index(const SellmeierModel &model, Wavelength wavelength, double temperature_c)
{
    return model.index(wavelength, temperature_c);
}

} // namespace twinphoton

#endif // TWINPHOTON_SELLMEIER_HPP
