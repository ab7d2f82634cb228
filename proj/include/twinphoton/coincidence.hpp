#ifndef TWINPHOTON_COINCIDENCE_HPP
#define TWINPHOTON_COINCIDENCE_HPP

#include "twinphoton/event_stream.hpp"
#include "twinphoton/units.hpp"

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>

namespace twinphoton
{

class KeyValueFile;

struct WindowConfig
{
    double coincidence_window_ns = 1.0; // full width, centred on zero delay
    double accidental_delay_ns = 100.0; // shift applied to detector 2

    std::int64_t window_ps() const;
    std::int64_t delay_ps() const;

    // Requires window > 0 and delay > 10 x window.
    void validate() const;
};

struct CountSummary
{
    double duration_s = 0.0;
    Rate s1_raw{0.0};
    Rate s2_raw{0.0};
    Rate dark1_assumed{0.0};
    Rate dark2_assumed{0.0};
    Rate s1_net{0.0};
    Rate s2_net{0.0};
    Rate rc_raw{0.0};
    Rate rc_accidental{0.0};
    Rate rc_net{0.0};
    double rc_net_unfloored = 0.0; // rc_raw - rc_accidental, may be negative
    bool s1_floored = false;
    bool s2_floored = false;
    bool rc_floored = false;

    std::uint64_t s1_count = 0;
    std::uint64_t s2_count = 0;
    std::uint64_t rc_raw_count = 0;
    std::uint64_t rc_accidental_count = 0;
    // rc_raw_count - rc_accidental_count
    std::int64_t rc_net_count_unfloored = 0;
};

std::pair<Rate, Rate> count_singles(const EventStream &stream);

// Start/stop matching in stream order: each event pairs with the earliest
// still-unmatched event of the other detector at most half a window earlier.
// Every event takes part in at most one coincidence. Throws DomainError on an
// unsorted span.
std::uint64_t count_coincidence_events(std::span<const DetectionEvent> events, std::int64_t window_ps);

Rate count_coincidences(const EventStream &stream, const WindowConfig &window);

// Detector-2 events shifted by the accidental delay modulo the duration, then
// recounted.
Rate estimate_accidentals(const EventStream &stream, const WindowConfig &window);

CountSummary net_summary(const EventStream &stream, const WindowConfig &window, Rate dark1, Rate dark2);

// `name = value` report and one-row CSV with header, built from the same
// record so both carry identical shortest round-trip decimals.
KeyValueFile summary_key_values(const CountSummary &summary);
CountSummary summary_from_key_values(const KeyValueFile &kv);
void write_summary_kv(std::ostream &out, const CountSummary &summary);
void write_summary_csv(std::ostream &out, const CountSummary &summary);
// Reads the CSV written above. Throws ParseError.
CountSummary read_summary_csv(std::istream &in, const std::string &source_name = "<summary>");

} // namespace twinphoton

#endif // TWINPHOTON_COINCIDENCE_HPP
