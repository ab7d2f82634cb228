#include "twinphoton/qpm.hpp"

#include "twinphoton/errors.hpp"
#include "twinphoton/keyvalue.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>

namespace twinphoton
{

namespace
{

constexpr double kEnergyTolerance = 1e-9;
constexpr double kMismatchTarget = 1e-6; // rad/m

// n/L in 1/m.
double wavenumber_over_2pi(const SellmeierModel &model, Wavelength w, double temperature_c)
{
    return model.index(w, temperature_c) / w.meters();
}

double material_mismatch_over_2pi(const SellmeierModel &model, Wavelength pump, Wavelength signal,
                                  Wavelength idler, double temperature_c)
{
    return wavenumber_over_2pi(model, pump, temperature_c) - wavenumber_over_2pi(model, signal, temperature_c) -
           wavenumber_over_2pi(model, idler, temperature_c);
}

void check_energy(Wavelength pump, Wavelength signal, Wavelength idler)
{
    const double lp = pump.nanometers();
    const double residual = lp / signal.nanometers() + lp / idler.nanometers() - 1.0;
    if (!(std::abs(residual) <= kEnergyTolerance))
        throw DomainError("wavelength triple violates energy conservation (relative residual " +
                          format_double(residual) + ")");
}

void check_period(double poling_period_um)
{
    if (!(poling_period_um > 0.0))
        throw DomainError("poling period must be > 0 um, got " + format_double(poling_period_um));
}

// Bisection on a sign-changing bracket. Stops when the bracket is narrower than
// `tolerance` and |f| is below `target`, or when the bracket cannot shrink.
double bisect(const std::function<double(double)> &f, double lo, double hi, double f_lo, double tolerance,
              double target)
{
    double best = lo;
    double f_best = f_lo;
    for (int iter = 0; iter < 200; ++iter)
    {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi)
            break;
        const double f_mid = f(mid);
        if (std::abs(f_mid) < std::abs(f_best))
        {
            best = mid;
            f_best = f_mid;
        }
        if (f_mid == 0.0)
            return mid;
        if ((f_mid < 0.0) == (f_lo < 0.0))
        {
            lo = mid;
            f_lo = f_mid;
        }
        else
        {
            hi = mid;
        }
        if (hi - lo < tolerance && std::abs(f_best) < target)
            break;
    }
    return best;
}

} // namespace

QpmOrder::QpmOrder(int order) : m_(order)
{
    if (order <= 0 || order % 2 == 0)
        throw DomainError("QPM order must be an odd positive integer, got " + std::to_string(order));
}

QpmPoint make_qpm_point(Wavelength pump, Wavelength signal, double temperature_c, double poling_period_um,
                        QpmOrder order)
{
    check_period(poling_period_um);
    return QpmPoint{poling_period_um, temperature_c, pump, signal, idler_wavelength(pump, signal), order};
}

double phase_mismatch(const QpmPoint &point, const SellmeierModel &model)
{
    check_energy(point.pump, point.signal, point.idler);
    check_period(point.poling_period_um);
    const double material =
        material_mismatch_over_2pi(model, point.pump, point.signal, point.idler, point.temperature_c);
    const double grating = point.order.value() / (point.poling_period_um * 1e-6);
    return 2.0 * constants::pi * (material - grating);
}

QpmPoint solve_poling_period(Wavelength pump, Wavelength signal, double temperature_c,
                             const SellmeierModel &model, QpmOrder order)
{
    const Wavelength idler = idler_wavelength(pump, signal);
    const double material = material_mismatch_over_2pi(model, pump, signal, idler, temperature_c);
    if (!(material > 0.0))
        throw SolverError("no QPM solution: material phase mismatch is not positive at " +
                          format_double(temperature_c) + " C");
    const double period_um = order.value() / material * 1e6;
    return QpmPoint{period_um, temperature_c, pump, signal, idler, order};
}

double solve_temperature(Wavelength pump, Wavelength signal, double poling_period_um,
                         const SellmeierModel &model, QpmOrder order, double tolerance_c)
{
    const Wavelength idler = idler_wavelength(pump, signal);
    check_period(poling_period_um);
    auto mismatch = [&](double t) {
        return phase_mismatch(QpmPoint{poling_period_um, t, pump, signal, idler, order}, model);
    };

    const double lo = model.range().t_min_c;
    const double hi = model.range().t_max_c;
    const double f_lo = mismatch(lo);
    const double f_hi = mismatch(hi);
    if (f_lo == 0.0)
        return lo;
    if (f_hi == 0.0)
        return hi;
    if ((f_lo < 0.0) == (f_hi < 0.0))
        throw SolverError("no phase-matching temperature in range [" + format_double(lo) + ", " + format_double(hi) +
                          "] C for period " + format_double(poling_period_um) + " um");
    return bisect(mismatch, lo, hi, f_lo, tolerance_c, kMismatchTarget);
}

double solve_degeneracy_temperature(Wavelength pump, double poling_period_um, const SellmeierModel &model,
                                    QpmOrder order, double tolerance_c)
{
    const Wavelength degenerate(2.0 * pump.nanometers());
    try
    {
        return solve_temperature(pump, degenerate, poling_period_um, model, order, tolerance_c);
    }
    catch (const SolverError &)
    {
        throw SolverError("no degeneracy temperature in range [" + format_double(model.range().t_min_c) + ", " +
                          format_double(model.range().t_max_c) + "] C for period " +
                          format_double(poling_period_um) + " um");
    }
}

std::optional<Wavelength> solve_signal_wavelength(Wavelength pump, double poling_period_um,
                                                  double temperature_c, const SellmeierModel &model,
                                                  QpmOrder order)
{
    check_period(poling_period_um);
    const auto &range = model.range();
    const double lp = pump.nanometers();
    const double degenerate_nm = 2.0 * lp;
    const double max_nm = range.lambda_max_um * 1e3;
    if (degenerate_nm > max_nm)
        return std::nullopt;

    // Idler must stay below the model's upper wavelength bound.
    const double lo_nm = std::max({lp * max_nm / (max_nm - lp), range.lambda_min_um * 1e3,
                                   std::nextafter(lp, std::numeric_limits<double>::infinity())});
    if (!(lo_nm < degenerate_nm))
        return std::nullopt;

    auto mismatch = [&](double signal_nm) {
        const Wavelength signal(signal_nm);
        Wavelength idler = idler_wavelength(pump, signal);
        // Clamp rounding at the range edge.
        if (idler.micrometers() > range.lambda_max_um)
            idler = Wavelength(max_nm);
        return phase_mismatch(QpmPoint{poling_period_um, temperature_c, pump, signal, idler, order}, model);
    };

    const double f_deg = mismatch(degenerate_nm);
    if (std::abs(f_deg) < kMismatchTarget)
        return Wavelength(degenerate_nm);
    const double f_lo = mismatch(lo_nm);
    if ((f_lo < 0.0) == (f_deg < 0.0))
        return std::nullopt;
    return Wavelength(bisect(mismatch, lo_nm, degenerate_nm, f_lo, 1e-9, kMismatchTarget));
}

std::vector<TuningPoint> temperature_tuning_curve(Wavelength pump, double poling_period_um, double t_min_c,
                                                  double t_max_c, double t_step_c, const SellmeierModel &model,
                                                  QpmOrder order)
{
    if (!(t_step_c > 0.0))
        throw DomainError("temperature step must be > 0");
    if (!(t_min_c <= t_max_c))
        throw DomainError("temperature sweep requires t_min <= t_max");

    std::vector<TuningPoint> curve;
    const auto steps = static_cast<long>(std::floor((t_max_c - t_min_c) / t_step_c + 1e-9));
    for (long i = 0; i <= steps; ++i)
    {
        const double t = t_min_c + static_cast<double>(i) * t_step_c;
        TuningPoint p{t, std::nullopt, std::nullopt};
        if (auto signal = solve_signal_wavelength(pump, poling_period_um, t, model, order))
        {
            p.signal = *signal;
            p.idler = idler_wavelength(pump, *signal);
        }
        curve.push_back(p);
    }
    return curve;
}

} // namespace twinphoton
