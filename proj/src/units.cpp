#include "twinphoton/units.hpp"

#include "twinphoton/errors.hpp"

#include <cmath>
#include <string>

namespace twinphoton
{

namespace
{
std::string describe(double v)
{
    return std::to_string(v);
}
} // namespace

Wavelength::Wavelength(double nanometers) : nm_(nanometers)
{
    if (!std::isfinite(nanometers) || nanometers <= 0.0)
        throw DomainError("wavelength must be finite and > 0 nm, got " + describe(nanometers));
}

OpticalPower::OpticalPower(double watts) : w_(watts)
{
    if (!std::isfinite(watts) || watts < 0.0)
        throw DomainError("optical power must be finite and >= 0 W, got " + describe(watts));
}

Rate::Rate(double hertz) : hz_(hertz)
{
    if (!std::isfinite(hertz) || hertz < 0.0)
        throw DomainError("rate must be finite and >= 0 Hz, got " + describe(hertz));
}

Efficiency::Efficiency(double value) : v_(value)
{
    if (!(value >= 0.0 && value <= 1.0))
        throw DomainError("efficiency must lie in [0, 1], got " + describe(value));
}

Rate photon_flux(OpticalPower power, Wavelength wavelength)
{
    return Rate(power.watts() * wavelength.meters() / (constants::planck * constants::speed_of_light));
}

Wavelength idler_wavelength(Wavelength pump, Wavelength signal)
{
    if (!(signal > pump))
        throw DomainError("signal wavelength " + describe(signal.nanometers()) + " nm must exceed pump " +
                          describe(pump.nanometers()) + " nm for a physical idler");
    // Degenerate case returned exactly; the reciprocal form is not exact there.
    if (signal.nanometers() == 2.0 * pump.nanometers())
        return signal;
    const double lp = pump.nanometers();
    const double ls = signal.nanometers();
    return Wavelength(lp * ls / (ls - lp));
}

} // namespace twinphoton
