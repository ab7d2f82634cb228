#include "twinphoton/errors.hpp"
#include "twinphoton/event_stream.hpp"

#include <doctest.h>

#include <algorithm>
#include <random>
#include <sstream>

using namespace twinphoton;

namespace
{

EventStream random_stream(std::uint64_t seed, std::size_t n)
{
    std::mt19937_64 rng(seed);
    EventStream s;
    s.metadata = {0.001, seed, 1, "00000000deadbeef"};
    std::uniform_int_distribution<std::int64_t> t(0, s.duration_ps() - 1);
    std::uniform_int_distribution<int> d(1, 2);
    for (std::size_t i = 0; i < n; ++i)
        s.events.push_back({static_cast<std::uint8_t>(d(rng)), t(rng)});
    std::sort(s.events.begin(), s.events.end(), [](const auto &a, const auto &b) {
        return a.timestamp_ps < b.timestamp_ps || (a.timestamp_ps == b.timestamp_ps && a.detector < b.detector);
    });
    return s;
}

int error_line(const std::string &text)
{
    std::istringstream in(text);
    try
    {
        read_event_file(in, "events");
    }
    catch (const ParseError &e)
    {
        return e.line();
    }
    return -1;
}

const std::string header = "# duration_s = 1\n# seed = 7\n# resolution_ps = 1\n# config_digest = abc\n";

} // namespace

TEST_CASE("write then read is exact")
{
    for (std::uint64_t seed = 0; seed < 20; ++seed)
    {
        const auto s = random_stream(seed, 500);
        std::stringstream io;
        write_event_file(io, s);
        const auto back = read_event_file(io, "mem");
        CHECK(back == s);
    }
}

TEST_CASE("odd durations survive the round trip")
{
    auto s = random_stream(1, 10);
    s.metadata.duration_s = 0.1 + 0.2;
    std::stringstream io;
    write_event_file(io, s);
    CHECK(read_event_file(io, "mem").metadata.duration_s == 0.1 + 0.2);
}

TEST_CASE("malformed input names the line")
{
    CHECK(error_line(header + "1\t10\n3\t20\n") == 6);
    CHECK(error_line(header + "1\t10\n2\tabc\n") == 6);
    CHECK(error_line(header + "1\t30\n2\t20\n") == 6);
    CHECK(error_line(header + "1\t-5\n") == 5);
    CHECK(error_line(header + "1\t1000000000000\n") == 5);
    CHECK(error_line(header + "1\t10\n# seed = 3\n") == 6);
    CHECK(error_line("# seed = 7\n1\t10\n") > 0);
    CHECK(error_line(header + "1\t10\n2\t10\n") == -1);
}

TEST_CASE("empty stream with positive duration")
{
    std::istringstream in(header);
    const auto s = read_event_file(in, "empty");
    CHECK(s.events.empty());
    CHECK(s.metadata.duration_s == 1.0);
    CHECK(s.metadata.seed == 7);
    CHECK(s.metadata.config_digest == "abc");
}

TEST_CASE("validation catches broken invariants")
{
    auto s = random_stream(4, 50);
    CHECK_NOTHROW(s.validate());
    CHECK(s.is_sorted());
    std::swap(s.events.front(), s.events.back());
    CHECK_FALSE(s.is_sorted());
    CHECK_THROWS_AS(s.validate(), DomainError);

    auto t = random_stream(5, 5);
    t.events.back().detector = 0;
    CHECK_THROWS_AS(t.validate(), DomainError);

    auto u = random_stream(6, 5);
    u.events.back().timestamp_ps = u.duration_ps();
    CHECK_THROWS_AS(u.validate(), DomainError);
}
