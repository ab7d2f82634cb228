#include "twinphoton/coincidence.hpp"
#include "twinphoton/errors.hpp"
#include "twinphoton/keyvalue.hpp"
#include "twinphoton/source.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <random>
#include <sstream>

using namespace twinphoton;

namespace
{

const std::filesystem::path data_dir = TWINPHOTON_TEST_DATA_DIR;

bool by_time(const DetectionEvent &a, const DetectionEvent &b)
{
    return a.timestamp_ps < b.timestamp_ps || (a.timestamp_ps == b.timestamp_ps && a.detector < b.detector);
}

// Quadratic reference: every event looks back over the whole history for the
// earliest unmatched partner on the other detector within half a window.
std::uint64_t brute_force_coincidences(const std::vector<DetectionEvent> &ev, std::int64_t window_ps)
{
    std::vector<bool> matched(ev.size(), false);
    std::uint64_t count = 0;
    for (std::size_t i = 0; i < ev.size(); ++i)
    {
        for (std::size_t j = 0; j < i; ++j)
        {
            if (matched[j] || ev[j].detector == ev[i].detector)
                continue;
            const double dt = static_cast<double>(ev[i].timestamp_ps - ev[j].timestamp_ps);
            if (std::abs(dt) <= 0.5 * static_cast<double>(window_ps))
            {
                matched[i] = matched[j] = true;
                ++count;
                break;
            }
        }
    }
    return count;
}

EventStream make_stream(double duration_s, std::vector<DetectionEvent> events)
{
    EventStream s;
    s.metadata.duration_s = duration_s;
    std::sort(events.begin(), events.end(), by_time);
    s.events = std::move(events);
    return s;
}

EventStream poisson_streams(double r1, double r2, double duration_s, std::uint64_t seed)
{
    SourceConfig source;
    source.pump_power = OpticalPower(1e-6);
    DetectionChainConfig chain;
    chain.dark1 = Rate(r1);
    chain.dark2 = Rate(r2);
    RunConfig run;
    run.duration_s = duration_s;
    run.seed = seed;
    return simulate_run(source, chain, run).stream;
}

struct Canonical
{
    SourceConfig source;
    DetectionChainConfig chain;
};

Canonical canonical()
{
    Canonical c;
    load_configs(KeyValueFile::load(data_dir / "canonical_source.conf"), c.source, c.chain);
    return c;
}

} // namespace

TEST_CASE("window config validation")
{
    CHECK_NOTHROW(WindowConfig{1.0, 100.0}.validate());
    CHECK_THROWS_AS((WindowConfig{0.0, 100.0}.validate()), ConfigError);
    CHECK_THROWS_AS((WindowConfig{1.0, 10.0}.validate()), ConfigError);
    CHECK_THROWS_AS((WindowConfig{-1.0, 100.0}.validate()), ConfigError);
    CHECK(WindowConfig{1.0, 100.0}.window_ps() == 1000);
    CHECK(WindowConfig{1.0, 100.0}.delay_ps() == 100000);
}

TEST_CASE("single pair gives exactly one coincidence for any window")
{
    const auto s = make_stream(1e-6, {{1, 5000}, {2, 5000}});
    for (double w : {0.001, 0.01, 1.0, 50.0})
        CHECK(count_coincidences(s, WindowConfig{w, 20.0 * w + 1.0}).hertz() * 1e-6 ==
              doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("empty stream")
{
    const auto s = make_stream(1.0, {});
    const auto [a, b] = count_singles(s);
    CHECK(a.hertz() == 0.0);
    CHECK(b.hertz() == 0.0);
    CHECK(count_coincidences(s, WindowConfig{}).hertz() == 0.0);
    CHECK(estimate_accidentals(s, WindowConfig{}).hertz() == 0.0);
    const auto sum = net_summary(s, WindowConfig{}, Rate(0.0), Rate(0.0));
    CHECK(sum.rc_net.hertz() == 0.0);
    CHECK(sum.s1_net.hertz() == 0.0);
}

TEST_CASE("zero duration is an error")
{
    EventStream s;
    CHECK_THROWS_AS(count_singles(s), DomainError);
}

TEST_CASE("unsorted input is rejected")
{
    EventStream s;
    s.metadata.duration_s = 1.0;
    s.events = {{1, 500}, {2, 100}};
    CHECK_THROWS_AS(count_coincidences(s, WindowConfig{}), DomainError);
    CHECK_THROWS_AS(count_coincidence_events(s.events, 1000), DomainError);
}

TEST_CASE("window edges are inclusive at half width")
{
    CHECK(count_coincidences(make_stream(1.0, {{1, 0}, {2, 500}}), WindowConfig{1.0, 100.0}).hertz() == 1.0);
    CHECK(count_coincidences(make_stream(1.0, {{1, 0}, {2, 501}}), WindowConfig{1.0, 100.0}).hertz() == 0.0);
    CHECK(count_coincidences(make_stream(1.0, {{2, 0}, {1, 500}}), WindowConfig{1.0, 100.0}).hertz() == 1.0);
}

TEST_CASE("each event joins at most one coincidence")
{
    const auto s = make_stream(1.0, {{1, 0}, {1, 10}, {2, 20}, {2, 30}, {2, 40}});
    CHECK(count_coincidence_events(s.events, 1000) == 2);
}

TEST_CASE("greedy counter equals the quadratic reference")
{
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 100; ++trial)
    {
        std::uniform_int_distribution<std::size_t> size(0, 1000);
        std::uniform_int_distribution<std::int64_t> span(1000, 2'000'000);
        const std::size_t n = size(rng);
        std::uniform_int_distribution<std::int64_t> t(0, span(rng));
        std::uniform_int_distribution<int> d(1, 2);
        std::vector<DetectionEvent> ev;
        for (std::size_t i = 0; i < n; ++i)
            ev.push_back({static_cast<std::uint8_t>(d(rng)), t(rng)});
        std::sort(ev.begin(), ev.end(), by_time);
        for (std::int64_t w : {1LL, 100LL, 1000LL, 7777LL, 50000LL})
            CHECK(count_coincidence_events(ev, w) == brute_force_coincidences(ev, w));
    }
}

TEST_CASE("independent Poisson streams: coincidences follow S1 S2 w")
{
    const WindowConfig window{10.0, 200.0};
    for (std::uint64_t seed = 0; seed < 20; ++seed)
    {
        const auto s = poisson_streams(50e3, 50e3, 1.0, 500 + seed);
        const auto [a, b] = count_singles(s);
        const double expect = a.hertz() * b.hertz() * 10e-9;
        const double counted = count_coincidences(s, window).hertz();
        CHECK(std::abs(counted - expect) <= 4.0 * std::sqrt(expect));
        const double acc = estimate_accidentals(s, window).hertz();
        CHECK(std::abs(acc - expect) <= 4.0 * std::sqrt(expect));
    }
}

TEST_CASE("uncorrelated streams: accidental estimate matches the direct count")
{
    const WindowConfig window{20.0, 500.0};
    const auto s = poisson_streams(80e3, 60e3, 2.0, 4242);
    const double direct = count_coincidences(s, window).hertz() * 2.0;
    const double acc = estimate_accidentals(s, window).hertz() * 2.0;
    CHECK(std::abs(direct - acc) <= 3.0 * std::sqrt(direct + acc));
}

TEST_CASE("correlated pairs only: accidentals are the small overlap term")
{
    auto c = canonical();
    c.chain.dark1 = Rate(0.0);
    c.chain.dark2 = Rate(0.0);
    RunConfig run;
    run.duration_s = 2.0;
    run.seed = 17;
    const auto s = simulate_run(c.source, c.chain, run).stream;
    const WindowConfig window{1.0, 100.0};
    const auto [a, b] = count_singles(s);
    const double expect = a.hertz() * b.hertz() * 1e-9 * run.duration_s;
    const double acc = estimate_accidentals(s, window).hertz() * run.duration_s;
    CHECK(std::abs(acc - expect) <= 4.0 * std::sqrt(expect));
    CHECK(acc < 0.05 * count_coincidences(s, window).hertz() * run.duration_s);
}

TEST_CASE("canonical run: net rates")
{
    const auto c = canonical();
    RunConfig run;
    run.duration_s = 10.0;
    run.seed = 42;
    const auto s = simulate_run(c.source, c.chain, run).stream;
    const auto sum = net_summary(s, WindowConfig{1.0, 100.0}, Rate(22e3), Rate(22e3));
    const double d = run.duration_s;
    CHECK(std::abs(sum.s1_raw.hertz() * d - 177e4) <= 3.0 * std::sqrt(177e4));
    CHECK(std::abs(sum.s1_net.hertz() * d - 155e4) <= 3.0 * std::sqrt(177e4));
    CHECK(std::abs(sum.s2_net.hertz() * d - 155e4) <= 3.0 * std::sqrt(177e4));
    const double acc_expect = 177e3 * 177e3 * 1e-9 * d;
    CHECK(std::abs(sum.rc_raw.hertz() * d - (15500.0 + acc_expect)) <= 3.0 * std::sqrt(15500.0 + acc_expect));
    const double net_var = 15500.0 + 2.0 * acc_expect;
    CHECK(std::abs(sum.rc_net.hertz() * d - 15500.0) <= 3.0 * std::sqrt(net_var));
}

TEST_CASE("net summary floors and flags")
{
    const auto s = make_stream(1.0, {{1, 0}, {2, 0}, {1, 1'000'000}});
    const auto sum = net_summary(s, WindowConfig{1.0, 100.0}, Rate(5.0), Rate(0.5));
    CHECK(sum.s1_net.hertz() == 0.0);
    CHECK(sum.s1_floored);
    CHECK(sum.s2_net.hertz() == 0.5);
    CHECK_FALSE(sum.s2_floored);
    CHECK(sum.rc_net.hertz() <= sum.rc_raw.hertz());
}

TEST_CASE("zero dark and zero accidentals: net equals raw")
{
    const auto s = make_stream(1.0, {{1, 0}, {2, 0}, {1, 5'000'000}, {2, 5'000'100}});
    const auto sum = net_summary(s, WindowConfig{1.0, 100.0}, Rate(0.0), Rate(0.0));
    CHECK(sum.rc_accidental_count == 0);
    CHECK(sum.rc_net.hertz() == sum.rc_raw.hertz());
    CHECK(sum.s1_net.hertz() == sum.s1_raw.hertz());
    CHECK(sum.s2_net.hertz() == sum.s2_raw.hertz());
}

TEST_CASE("net plus accidental equals raw on counts")
{
    for (std::uint64_t seed = 0; seed < 10; ++seed)
    {
        const auto s = poisson_streams(300e3, 200e3, 0.05, seed);
        const auto sum = net_summary(s, WindowConfig{5.0, 100.0}, Rate(1e3), Rate(1e3));
        CHECK(sum.rc_net_count_unfloored + static_cast<std::int64_t>(sum.rc_accidental_count) ==
              static_cast<std::int64_t>(sum.rc_raw_count));
        CHECK(sum.rc_net_unfloored == doctest::Approx(sum.rc_raw.hertz() - sum.rc_accidental.hertz()));
        if (!sum.rc_floored)
            CHECK(sum.rc_net.hertz() == sum.rc_net_unfloored);
    }
}

TEST_CASE("counting is invariant under a time translation")
{
    std::mt19937_64 rng(1234);
    const std::int64_t window = 1000;
    for (int trial = 0; trial < 30; ++trial)
    {
        auto s = poisson_streams(200e3, 200e3, 0.01, 900 + trial);
        // Add correlated pairs so matching is exercised.
        std::uniform_int_distribution<std::int64_t> t(0, s.duration_ps() - 1);
        for (int i = 0; i < 200; ++i)
        {
            const auto at = t(rng);
            s.events.push_back({1, at});
            s.events.push_back({2, at});
        }
        std::sort(s.events.begin(), s.events.end(), by_time);

        // Cut the circle in the middle of a gap wider than the window.
        std::int64_t cut = -1;
        for (std::size_t i = 0; i + 1 < s.events.size(); ++i)
            if (s.events[i + 1].timestamp_ps - s.events[i].timestamp_ps > 4 * window &&
                s.events[i].timestamp_ps > s.duration_ps() / 3)
            {
                cut = (s.events[i].timestamp_ps + s.events[i + 1].timestamp_ps) / 2;
                break;
            }
        REQUIRE(cut > 0);
        const std::int64_t end = s.duration_ps();
        const bool edge_gap = s.events.front().timestamp_ps + end - s.events.back().timestamp_ps > 2 * window;
        if (!edge_gap)
            continue;
        EventStream shifted = s;
        for (auto &e : shifted.events)
            e.timestamp_ps = (e.timestamp_ps - cut + end) % end;
        std::sort(shifted.events.begin(), shifted.events.end(), by_time);

        CHECK(count_coincidence_events(s.events, window) == count_coincidence_events(shifted.events, window));
        CHECK(count_singles(s) == count_singles(shifted));
    }
}

TEST_CASE("summary CSV and key-value forms carry identical numbers")
{
    const auto s = poisson_streams(30e3, 40e3, 0.5, 8);
    const auto sum = net_summary(s, WindowConfig{3.0, 100.0}, Rate(123.4), Rate(567.8));
    std::stringstream kv_text;
    write_summary_kv(kv_text, sum);
    const auto kv = KeyValueFile::parse(kv_text, "kv");
    std::stringstream csv_text;
    write_summary_csv(csv_text, sum);
    const auto back = read_summary_csv(csv_text, "csv");
    const auto kv2 = summary_key_values(back);
    for (const auto &key : kv.keys())
        CHECK(kv.get_string(key) == kv2.get_string(key));
    CHECK(back.rc_net.hertz() == sum.rc_net.hertz());
    CHECK(back.s1_net.hertz() == sum.s1_net.hertz());

    std::istringstream broken("duration_s,s1_raw_hz\n1\n");
    CHECK_THROWS_AS(read_summary_csv(broken, "broken"), ParseError);
}
