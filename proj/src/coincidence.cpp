#include "twinphoton/coincidence.hpp"

#include "twinphoton/errors.hpp"
#include "twinphoton/keyvalue.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

namespace twinphoton
{

namespace
{

// Pending unmatched timestamps for one detector, oldest first.
struct Pending
{
    std::vector<std::int64_t> times;
    std::size_t head = 0;

    bool empty() const { return head == times.size(); }
    std::int64_t front() const { return times[head]; }
    void pop() { ++head; }
    void push(std::int64_t t) { times.push_back(t); }
};

Rate per_second(std::uint64_t count, double duration_s)
{
    return Rate(static_cast<double>(count) / duration_s);
}

Rate floored(double value, bool &flag)
{
    flag = value < 0.0;
    return Rate(flag ? 0.0 : value);
}

} // namespace

std::int64_t WindowConfig::window_ps() const
{
    return static_cast<std::int64_t>(std::llround(coincidence_window_ns * 1e3));
}

std::int64_t WindowConfig::delay_ps() const
{
    return static_cast<std::int64_t>(std::llround(accidental_delay_ns * 1e3));
}

void WindowConfig::validate() const
{
    if (!(std::isfinite(coincidence_window_ns) && coincidence_window_ns > 0.0) || window_ps() <= 0)
        throw ConfigError("window", "coincidence window must be > 0 (at least 1 ps), got " +
                                        format_double(coincidence_window_ns) + " ns");
    if (!(std::isfinite(accidental_delay_ns) && accidental_delay_ns > 10.0 * coincidence_window_ns))
        throw ConfigError("delay", "accidental delay must exceed 10 x the window (" +
                                       format_double(10.0 * coincidence_window_ns) + " ns), got " +
                                       format_double(accidental_delay_ns) + " ns");
}

std::pair<Rate, Rate> count_singles(const EventStream &stream)
{
    stream.validate();
    std::array<std::uint64_t, 2> counts{0, 0};
    for (const auto &e : stream.events)
        ++counts[e.detector - 1];
    return {per_second(counts[0], stream.metadata.duration_s), per_second(counts[1], stream.metadata.duration_s)};
}

std::uint64_t count_coincidence_events(std::span<const DetectionEvent> events, std::int64_t window_ps)
{
    if (window_ps <= 0)
        throw DomainError("coincidence window must be > 0 ps");
    std::array<Pending, 2> pending;
    std::uint64_t matches = 0;
    std::int64_t previous = std::numeric_limits<std::int64_t>::min();
    for (const auto &e : events)
    {
        if (e.timestamp_ps < previous)
            throw DomainError("event stream is not sorted by timestamp");
        previous = e.timestamp_ps;
        if (e.detector != 1 && e.detector != 2)
            throw DomainError("detector index must be 1 or 2");

        auto &other = pending[e.detector == 1 ? 1 : 0];
        // |dt| <= window / 2, kept in integers.
        while (!other.empty() && 2 * (e.timestamp_ps - other.front()) > window_ps)
            other.pop();
        if (!other.empty())
        {
            other.pop();
            ++matches;
        }
        else
        {
            pending[e.detector - 1].push(e.timestamp_ps);
        }
    }
    return matches;
}

Rate count_coincidences(const EventStream &stream, const WindowConfig &window)
{
    window.validate();
    if (!stream.is_sorted())
        throw DomainError("event stream is not sorted by timestamp");
    stream.validate();
    return per_second(count_coincidence_events(stream.events, window.window_ps()), stream.metadata.duration_s);
}

static std::vector<DetectionEvent> delayed_stream(const EventStream &stream, const WindowConfig &window)
{
    const std::int64_t end = stream.duration_ps();
    const std::int64_t delay = window.delay_ps() % end;

    std::vector<DetectionEvent> first;
    std::vector<DetectionEvent> wrapped;
    std::vector<DetectionEvent> unwrapped;
    for (const auto &e : stream.events)
    {
        if (e.detector == 1)
        {
            first.push_back(e);
            continue;
        }
        const std::int64_t t = e.timestamp_ps + delay;
        if (t >= end)
            wrapped.push_back({2, t - end});
        else
            unwrapped.push_back({2, t});
    }
    // Wrapped events precede the unwrapped ones and both halves stay sorted.
    wrapped.insert(wrapped.end(), unwrapped.begin(), unwrapped.end());

    std::vector<DetectionEvent> merged(first.size() + wrapped.size());
    std::merge(first.begin(), first.end(), wrapped.begin(), wrapped.end(), merged.begin(),
               [](const DetectionEvent &a, const DetectionEvent &b) {
                   return a.timestamp_ps < b.timestamp_ps ||
                          (a.timestamp_ps == b.timestamp_ps && a.detector < b.detector);
               });
    return merged;
}

Rate estimate_accidentals(const EventStream &stream, const WindowConfig &window)
{
    window.validate();
    if (!stream.is_sorted())
        throw DomainError("event stream is not sorted by timestamp");
    stream.validate();
    return per_second(count_coincidence_events(delayed_stream(stream, window), window.window_ps()),
                      stream.metadata.duration_s);
}

CountSummary net_summary(const EventStream &stream, const WindowConfig &window, Rate dark1, Rate dark2)
{
    CountSummary s;
    s.duration_s = stream.metadata.duration_s;
    stream.validate();
    window.validate();
    for (const auto &e : stream.events)
        ++(e.detector == 1 ? s.s1_count : s.s2_count);
    s.s1_raw = per_second(s.s1_count, s.duration_s);
    s.s2_raw = per_second(s.s2_count, s.duration_s);
    s.dark1_assumed = dark1;
    s.dark2_assumed = dark2;
    s.s1_net = floored(s.s1_raw.hertz() - dark1.hertz(), s.s1_floored);
    s.s2_net = floored(s.s2_raw.hertz() - dark2.hertz(), s.s2_floored);
    s.rc_raw_count = count_coincidence_events(stream.events, window.window_ps());
    s.rc_accidental_count = count_coincidence_events(delayed_stream(stream, window), window.window_ps());
    s.rc_raw = per_second(s.rc_raw_count, s.duration_s);
    s.rc_accidental = per_second(s.rc_accidental_count, s.duration_s);
    s.rc_net_count_unfloored =
        static_cast<std::int64_t>(s.rc_raw_count) - static_cast<std::int64_t>(s.rc_accidental_count);
    s.rc_net_unfloored = static_cast<double>(s.rc_net_count_unfloored) / s.duration_s;
    s.rc_net = floored(s.rc_net_unfloored, s.rc_floored);
    return s;
}

KeyValueFile summary_key_values(const CountSummary &s)
{
    auto flag = [](bool v) { return std::string(v ? "true" : "false"); };
    KeyValueFile kv;
    kv.set("duration_s", s.duration_s);
    kv.set("s1_raw_hz", s.s1_raw.hertz());
    kv.set("s2_raw_hz", s.s2_raw.hertz());
    kv.set("dark1_hz", s.dark1_assumed.hertz());
    kv.set("dark2_hz", s.dark2_assumed.hertz());
    kv.set("s1_net_hz", s.s1_net.hertz());
    kv.set("s2_net_hz", s.s2_net.hertz());
    kv.set("rc_raw_hz", s.rc_raw.hertz());
    kv.set("rc_accidental_hz", s.rc_accidental.hertz());
    kv.set("rc_net_hz", s.rc_net.hertz());
    kv.set("rc_net_unfloored_hz", s.rc_net_unfloored);
    kv.set("s1_floored", flag(s.s1_floored));
    kv.set("s2_floored", flag(s.s2_floored));
    kv.set("rc_floored", flag(s.rc_floored));
    kv.set("s1_count", std::to_string(s.s1_count));
    kv.set("s2_count", std::to_string(s.s2_count));
    kv.set("rc_raw_count", std::to_string(s.rc_raw_count));
    kv.set("rc_accidental_count", std::to_string(s.rc_accidental_count));
    kv.set("rc_net_count_unfloored", std::to_string(s.rc_net_count_unfloored));
    return kv;
}

CountSummary summary_from_key_values(const KeyValueFile &kv)
{
    CountSummary s;
    s.duration_s = kv.get_double("duration_s");
    if (!(std::isfinite(s.duration_s) && s.duration_s > 0.0))
        throw ConfigError("duration_s", "must be finite and > 0");
    auto rate = [&](const std::string &key) {
        try
        {
            return Rate(kv.get_double(key));
        }
        catch (const DomainError &err)
        {
            throw ConfigError(key, err.what());
        }
    };
    s.s1_raw = rate("s1_raw_hz");
    s.s2_raw = rate("s2_raw_hz");
    s.dark1_assumed = rate("dark1_hz");
    s.dark2_assumed = rate("dark2_hz");
    s.s1_net = rate("s1_net_hz");
    s.s2_net = rate("s2_net_hz");
    s.rc_raw = rate("rc_raw_hz");
    s.rc_accidental = rate("rc_accidental_hz");
    s.rc_net = rate("rc_net_hz");
    s.rc_net_unfloored = kv.get_double("rc_net_unfloored_hz");
    s.s1_floored = kv.get_bool("s1_floored");
    s.s2_floored = kv.get_bool("s2_floored");
    s.rc_floored = kv.get_bool("rc_floored");
    s.s1_count = kv.get_uint("s1_count");
    s.s2_count = kv.get_uint("s2_count");
    s.rc_raw_count = kv.get_uint("rc_raw_count");
    s.rc_accidental_count = kv.get_uint("rc_accidental_count");
    s.rc_net_count_unfloored = static_cast<std::int64_t>(s.rc_raw_count) -
                               static_cast<std::int64_t>(s.rc_accidental_count);
    return s;
}

void write_summary_kv(std::ostream &out, const CountSummary &summary)
{
    summary_key_values(summary).write(out);
}

void write_summary_csv(std::ostream &out, const CountSummary &summary)
{
    const auto kv = summary_key_values(summary);
    const auto &keys = kv.keys();
    for (std::size_t i = 0; i < keys.size(); ++i)
        out << (i ? "," : "") << keys[i];
    out << '\n';
    for (std::size_t i = 0; i < keys.size(); ++i)
        out << (i ? "," : "") << kv.get_string(keys[i]);
    out << '\n';
}

CountSummary read_summary_csv(std::istream &in, const std::string &source_name)
{
    auto split = [](std::string_view line) {
        std::vector<std::string> cells;
        line = trim(line);
        while (true)
        {
            const auto comma = line.find(',');
            cells.emplace_back(trim(line.substr(0, comma)));
            if (comma == std::string_view::npos)
                break;
            line.remove_prefix(comma + 1);
        }
        return cells;
    };

    std::string header_line;
    std::string row_line;
    if (!std::getline(in, header_line))
        throw ParseError(source_name, 1, "missing CountSummary CSV header");
    if (!std::getline(in, row_line))
        throw ParseError(source_name, 2, "missing CountSummary CSV row");
    const auto header = split(header_line);
    const auto row = split(row_line);
    if (header.size() != row.size())
        throw ParseError(source_name, 2,
                         "row has " + std::to_string(row.size()) + " columns, header " + std::to_string(header.size()));

    KeyValueFile kv;
    for (std::size_t i = 0; i < header.size(); ++i)
        kv.set(header[i], row[i]);
    try
    {
        return summary_from_key_values(kv);
    }
    catch (const ConfigError &err)
    {
        throw ParseError(source_name, 2, err.what());
    }
}

} // namespace twinphoton
