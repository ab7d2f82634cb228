#include "twinphoton/sellmeier.hpp"

#include "twinphoton/errors.hpp"
#include "twinphoton/keyvalue.hpp"

#include <cmath>
#include <utility>

namespace twinphoton
{

SellmeierModel::SellmeierModel(std::string name, std::string version, SellmeierCoefficients coefficients,
                               ValidityRange range)
    : name_(std::move(name)), version_(std::move(version)), coeffs_(coefficients), range_(range)
{
    if (!(range_.lambda_min_um > 0.0 && range_.lambda_min_um < range_.lambda_max_um))
        throw ConfigError("lambda_min_um", "validity range must satisfy 0 < lambda_min_um < lambda_max_um");
    if (!(range_.t_min_c < range_.t_max_c))
        throw ConfigError("t_min_c", "validity range must satisfy t_min_c < t_max_c");
}

SellmeierModel SellmeierModel::from_key_values(const KeyValueFile &kv)
{
    if (kv.get_string("form") != "extended_sellmeier_v1")
        throw ConfigError("form", "unsupported Sellmeier form `" + kv.get_string("form") + "`");

    SellmeierCoefficients c;
    c.a1 = kv.get_double("a1");
    c.a2 = kv.get_double("a2");
    c.a3 = kv.get_double("a3");
    c.a4 = kv.get_double_or("a4", 0.0);
    c.a5 = kv.get_double_or("a5", 0.0);
    c.a6 = kv.get_double("a6");
    c.b1 = kv.get_double("b1");
    c.b2 = kv.get_double("b2");
    c.b3 = kv.get_double("b3");
    c.b4 = kv.get_double_or("b4", 0.0);
    c.t_ref_c = kv.get_double("t_ref_c");
    c.t_offset_c = kv.get_double("t_offset_c");

    ValidityRange r;
    r.lambda_min_um = kv.get_double("lambda_min_um");
    r.lambda_max_um = kv.get_double("lambda_max_um");
    r.t_min_c = kv.get_double("t_min_c");
    r.t_max_c = kv.get_double("t_max_c");

    return SellmeierModel(kv.get_string("name"), kv.get_string("version"), c, r);
}

SellmeierModel SellmeierModel::load(const std::filesystem::path &path)
{
    return from_key_values(KeyValueFile::load(path));
}

bool SellmeierModel::in_range(Wavelength wavelength, double temperature_c) const noexcept
{
    const double um = wavelength.micrometers();
    return um >= range_.lambda_min_um && um <= range_.lambda_max_um && temperature_c >= range_.t_min_c &&
           temperature_c <= range_.t_max_c;
}

double SellmeierModel::index(Wavelength wavelength, double temperature_c) const
{
    const double um = wavelength.micrometers();
    if (um < range_.lambda_min_um)
        throw RangeError(name_ + ": wavelength " + format_double(um) + " um below lambda_min_um = " +
                         format_double(range_.lambda_min_um));
    if (um > range_.lambda_max_um)
        throw RangeError(name_ + ": wavelength " + format_double(um) + " um above lambda_max_um = " +
                         format_double(range_.lambda_max_um));
    if (!(temperature_c >= range_.t_min_c))
        throw RangeError(name_ + ": temperature " + format_double(temperature_c) + " C below t_min_c = " +
                         format_double(range_.t_min_c));
    if (!(temperature_c <= range_.t_max_c))
        throw RangeError(name_ + ": temperature " + format_double(temperature_c) + " C above t_max_c = " +
                         format_double(range_.t_max_c));

    const auto &c = coeffs_;
    const double f = (temperature_c - c.t_ref_c) * (temperature_c + c.t_offset_c);
    const double l2 = um * um;
    const double uv_pole = c.a3 + c.b3 * f;
    const double n2 = c.a1 + c.b1 * f + (c.a2 + c.b2 * f) / (l2 - uv_pole * uv_pole) +
                      (c.a4 + c.b4 * f) / (l2 - c.a5 * c.a5) - c.a6 * l2;
    return std::sqrt(n2);
}

} // namespace twinphoton
