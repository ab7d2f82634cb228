#include "twinphoton/event_stream.hpp"

#include "twinphoton/errors.hpp"
#include "twinphoton/keyvalue.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>

namespace twinphoton
{

std::int64_t EventStream::duration_ps() const
{
    return static_cast<std::int64_t>(std::llround(metadata.duration_s * 1e12));
}

bool EventStream::is_sorted() const
{
    return std::is_sorted(events.begin(), events.end(),
                          [](const DetectionEvent &a, const DetectionEvent &b) { return a.timestamp_ps < b.timestamp_ps; });
}

void EventStream::validate() const
{
    if (!(metadata.duration_s > 0.0) || !std::isfinite(metadata.duration_s))
        throw DomainError("event stream duration must be finite and > 0 s");
    if (metadata.resolution_ps <= 0)
        throw DomainError("event stream resolution must be > 0 ps");
    const auto end = duration_ps();
    std::int64_t previous = 0;
    for (std::size_t i = 0; i < events.size(); ++i)
    {
        const auto &e = events[i];
        if (e.detector != 1 && e.detector != 2)
            throw DomainError("event " + std::to_string(i) + ": detector index must be 1 or 2");
        if (e.timestamp_ps < 0 || e.timestamp_ps >= end)
            throw DomainError("event " + std::to_string(i) + ": timestamp outside [0, duration)");
        if (e.timestamp_ps < previous)
            throw DomainError("event " + std::to_string(i) + ": timestamps not in ascending order");
        previous = e.timestamp_ps;
    }
}

void write_event_file(std::ostream &out, const EventStream &stream)
{
    out << "# duration_s = " << format_double(stream.metadata.duration_s) << '\n';
    out << "# seed = " << stream.metadata.seed << '\n';
    out << "# resolution_ps = " << stream.metadata.resolution_ps << '\n';
    out << "# config_digest = " << stream.metadata.config_digest << '\n';
    std::string line;
    for (const auto &e : stream.events)
    {
        line.clear();
        line += static_cast<char>('0' + e.detector);
        line += '\t';
        line += std::to_string(e.timestamp_ps);
        line += '\n';
        out << line;
    }
}

void write_event_file(const std::filesystem::path &path, const EventStream &stream)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw ParseError(path.string(), 0, "cannot open for writing");
    write_event_file(out, stream);
    if (!out)
        throw ParseError(path.string(), 0, "write failed");
}

EventStream read_event_file(std::istream &in, const std::string &source_name)
{
    EventStream stream;
    KeyValueFile header;
    bool header_done = false;
    std::string raw;
    std::size_t line_no = 0;
    std::int64_t end_ps = 0;
    std::int64_t previous = 0;

    auto finish_header = [&]() {
        try
        {
            stream.metadata.duration_s = header.get_double("duration_s");
            stream.metadata.seed = header.get_uint("seed");
            stream.metadata.resolution_ps = static_cast<std::int64_t>(header.get_uint("resolution_ps"));
            stream.metadata.config_digest = header.contains("config_digest") ? header.get_string("config_digest") : "";
        }
        catch (const ConfigError &err)
        {
            throw ParseError(source_name, line_no, std::string("header: ") + err.what());
        }
        if (!(stream.metadata.duration_s > 0.0) || !std::isfinite(stream.metadata.duration_s))
            throw ParseError(source_name, line_no, "header: duration_s must be finite and > 0");
        if (stream.metadata.resolution_ps <= 0)
            throw ParseError(source_name, line_no, "header: resolution_ps must be > 0");
        end_ps = stream.duration_ps();
        header_done = true;
    };

    while (std::getline(in, raw))
    {
        ++line_no;
        std::string_view line = raw;
        if (!line.empty() && line.back() == '\r')
            line.remove_suffix(1);
        if (line.empty())
            continue;
        if (line.front() == '#')
        {
            if (header_done)
                throw ParseError(source_name, line_no, "header line after first event");
            const auto body = trim(line.substr(1));
            const auto eq = body.find('=');
            if (eq == std::string_view::npos)
                continue; // free-form comment
            header.set(std::string(trim(body.substr(0, eq))), std::string(trim(body.substr(eq + 1))));
            continue;
        }
        if (!header_done)
            finish_header();

        const auto tab = line.find('\t');
        if (tab == std::string_view::npos)
            throw ParseError(source_name, line_no, "expected `<detector>\\t<timestamp_ps>`");
        const auto det_text = line.substr(0, tab);
        const auto ts_text = line.substr(tab + 1);
        if (det_text != "1" && det_text != "2")
            throw ParseError(source_name, line_no, "detector index must be 1 or 2, got `" + std::string(det_text) + "`");
        std::int64_t ts = 0;
        const auto res = std::from_chars(ts_text.data(), ts_text.data() + ts_text.size(), ts);
        if (res.ec != std::errc() || res.ptr != ts_text.data() + ts_text.size())
            throw ParseError(source_name, line_no, "malformed timestamp `" + std::string(ts_text) + "`");
        if (ts < 0 || ts >= end_ps)
            throw ParseError(source_name, line_no, "timestamp " + std::to_string(ts) + " outside [0, duration)");
        if (ts < previous)
            throw ParseError(source_name, line_no, "timestamps not in ascending order");
        previous = ts;
        stream.events.push_back({static_cast<std::uint8_t>(det_text[0] - '0'), ts});
    }
    if (!header_done)
        finish_header();
    return stream;
}

EventStream read_event_file(const std::filesystem::path &path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ParseError(path.string(), 0, "cannot open file");
    return read_event_file(in, path.string());
}

} // namespace twinphoton
