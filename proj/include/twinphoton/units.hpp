#ifndef TWINPHOTON_UNITS_HPP
#define TWINPHOTON_UNITS_HPP

// Canonical units: wavelengths in nm, powers in W, rates in Hz, event times in ps.
// Conversions happen at construction / accessor boundaries only.

#include <cstdint>

namespace twinphoton
{

namespace constants
{
// CODATA 2018 (exact SI definitions).
inline constexpr double planck = 6.62607015e-34;      // J s
inline constexpr double speed_of_light = 299792458.0; // m / s
inline constexpr double pi = 3.14159265358979323846;
} // namespace constants

inline constexpr std::int64_t ps_per_second = 1'000'000'000'000;

class Wavelength
{
public:
    // Throws DomainError unless finite and > 0.
    explicit Wavelength(double nanometers);

    static Wavelength from_meters(double m) { return Wavelength(m * 1e9); }
    static Wavelength from_micrometers(double um) { return Wavelength(um * 1e3); }

    double nanometers() const noexcept { return nm_; }
    double micrometers() const noexcept { return nm_ * 1e-3; }
    double meters() const noexcept { return nm_ * 1e-9; }

    friend bool operator==(const Wavelength &, const Wavelength &) = default;
    friend auto operator<=>(const Wavelength &, const Wavelength &) = default;

private:
    double nm_;
};

class OpticalPower
{
public:
    // Throws DomainError unless finite and >= 0.
    explicit OpticalPower(double watts);

    double watts() const noexcept { return w_; }

    friend bool operator==(const OpticalPower &, const OpticalPower &) = default;
    friend auto operator<=>(const OpticalPower &, const OpticalPower &) = default;

private:
    double w_;
};

class Rate
{
public:
    // Throws DomainError unless finite and >= 0.
    explicit Rate(double hertz);

    double hertz() const noexcept { return hz_; }

    friend bool operator==(const Rate &, const Rate &) = default;
    friend auto operator<=>(const Rate &, const Rate &) = default;

private:
    double hz_;
};

class Efficiency
{
public:
    // Throws DomainError unless 0 <= value <= 1.
    explicit Efficiency(double value);

    double value() const noexcept { return v_; }

    friend bool operator==(const Efficiency &, const Efficiency &) = default;
    friend auto operator<=>(const Efficiency &, const Efficiency &) = default;

private:
    double v_;
};

// Photons per second carried by a monochromatic beam: P * lambda / (h c).
Rate photon_flux(OpticalPower power, Wavelength wavelength);

// Energy conservation, 1/idler = 1/pump - 1/signal. Throws DomainError when signal <= pump.
Wavelength idler_wavelength(Wavelength pump, Wavelength signal);

} // namespace twinphoton

#endif // TWINPHOTON_UNITS_HPP
