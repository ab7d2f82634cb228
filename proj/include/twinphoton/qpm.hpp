#ifndef TWINPHOTON_QPM_HPP
#define TWINPHOTON_QPM_HPP

// Type-0 (eee) quasi-phase-matching for collinear down-conversion in a
// periodically poled crystal, with bulk dispersion from a SellmeierModel.

#include "twinphoton/sellmeier.hpp"
#include "twinphoton/units.hpp"

#include <optional>
#include <vector>

namespace twinphoton
{

// Odd positive QPM order.
class QpmOrder
{
public:
    explicit QpmOrder(int order = 1);
    int value() const noexcept { return m_; }

private:
    int m_;
};

struct QpmPoint
{
    double poling_period_um;
    double temperature_c;
    Wavelength pump;
    Wavelength signal;
    Wavelength idler;
    QpmOrder order{1};
};

// Builds a point with the idler from energy conservation.
QpmPoint make_qpm_point(Wavelength pump, Wavelength signal, double temperature_c, double poling_period_um,
                        QpmOrder order = QpmOrder(1));

// 2 pi [n_p/L_p - n_s/L_s - n_i/L_i - m/period] in rad/m. An infinite period
// drops the grating term.
double phase_mismatch(const QpmPoint &point, const SellmeierModel &model);

// Closed-form period that zeroes the mismatch. Throws SolverError when the
// material mismatch is not positive.
QpmPoint solve_poling_period(Wavelength pump, Wavelength signal, double temperature_c,
                             const SellmeierModel &model, QpmOrder order = QpmOrder(1));

// Bisection over the model's temperature range; the result is refined past
// `tolerance_c` until |mismatch| < 1e-6 rad/m or the bracket stops shrinking.
// Throws SolverError when the mismatch does not change sign over the range.
double solve_temperature(Wavelength pump, Wavelength signal, double poling_period_um,
                         const SellmeierModel &model, QpmOrder order = QpmOrder(1),
                         double tolerance_c = 0.01);

double solve_degeneracy_temperature(Wavelength pump, double poling_period_um, const SellmeierModel &model,
                                    QpmOrder order = QpmOrder(1), double tolerance_c = 0.01);

// Short-wavelength member of the phase-matched pair at fixed period and
// temperature, or nullopt when nothing phase-matches inside the model range.
std::optional<Wavelength> solve_signal_wavelength(Wavelength pump, double poling_period_um,
                                                  double temperature_c, const SellmeierModel &model,
                                                  QpmOrder order = QpmOrder(1));

struct TuningPoint
{
    double temperature_c;
    std::optional<Wavelength> signal;
    std::optional<Wavelength> idler;
};

std::vector<TuningPoint> temperature_tuning_curve(Wavelength pump, double poling_period_um, double t_min_c,
                                                  double t_max_c, double t_step_c, const SellmeierModel &model,
                                                  QpmOrder order = QpmOrder(1));

} // namespace twinphoton

#endif // TWINPHOTON_QPM_HPP
