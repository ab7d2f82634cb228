#ifndef TWINPHOTON_EVENT_STREAM_HPP
#define TWINPHOTON_EVENT_STREAM_HPP

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace twinphoton
{

struct DetectionEvent
{
    std::uint8_t detector;     // 1 or 2
    std::int64_t timestamp_ps; // [0, duration)

    friend bool operator==(const DetectionEvent &, const DetectionEvent &) = default;
};

struct StreamMetadata
{
    double duration_s = 0.0;
    std::uint64_t seed = 0;
    std::int64_t resolution_ps = 1;
    std::string config_digest;

    friend bool operator==(const StreamMetadata &, const StreamMetadata &) = default;
};

// Time-ordered detections from the two detectors of one run.
struct EventStream
{
    StreamMetadata metadata;
    std::vector<DetectionEvent> events;

    // Duration rounded to whole picoseconds.
    std::int64_t duration_ps() const;

    bool is_sorted() const;

    // Throws DomainError naming the first violated invariant.
    void validate() const;

    friend bool operator==(const EventStream &, const EventStream &) = default;
};

// Text event file:
//
//   # duration_s = <seconds>
//   # seed = <uint64>
//   # resolution_ps = <int>
//   # config_digest = <hex>
//   <detector>\t<timestamp_ps>
//   ...
//
// Writing then reading reproduces the stream exactly.
void write_event_file(std::ostream &out, const EventStream &stream);
void write_event_file(const std::filesystem::path &path, const EventStream &stream);

// Throws ParseError with the offending line number on malformed input, a bad
// detector index, an out-of-range timestamp, or descending timestamps.
EventStream read_event_file(std::istream &in, const std::string &source_name = "<stream>");
EventStream read_event_file(const std::filesystem::path &path);

} // namespace twinphoton

#endif // TWINPHOTON_EVENT_STREAM_HPP
