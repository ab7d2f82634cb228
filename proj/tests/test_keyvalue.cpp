#include "twinphoton/errors.hpp"
#include "twinphoton/keyvalue.hpp"

#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

using namespace twinphoton;

TEST_CASE("parse comments, blanks and whitespace")
{
    const auto kv = KeyValueFile::parse_string("# header\n\n  alpha = 1.5  \nname=hello world\nflag = yes\n");
    CHECK(kv.get_double("alpha") == 1.5);
    CHECK(kv.get_string("name") == "hello world");
    CHECK(kv.get_bool("flag"));
    CHECK(kv.keys().size() == 3);
    CHECK(kv.keys()[0] == "alpha");
}

TEST_CASE("parse errors carry line numbers")
{
    try
    {
        KeyValueFile::parse_string("a = 1\n\nbroken line\n", "cfg");
        FAIL("expected ParseError");
    }
    catch (const ParseError &e)
    {
        CHECK(e.line() == 3);
    }
    CHECK_THROWS_AS(KeyValueFile::parse_string("a = 1\na = 2\n"), ParseError);
    CHECK_THROWS_AS(KeyValueFile::load("/nonexistent/path/file.txt"), ParseError);
}

TEST_CASE("typed getters report the field")
{
    const auto kv = KeyValueFile::parse_string("x = abc\nn = -3\nb = maybe\nu = 17\n");
    try
    {
        kv.get_double("x");
        FAIL("expected ConfigError");
    }
    catch (const ConfigError &e)
    {
        CHECK(e.field() == "x");
    }
    CHECK_THROWS_AS(kv.get_double("missing"), ConfigError);
    CHECK_THROWS_AS(kv.get_uint("n"), ConfigError);
    CHECK_THROWS_AS(kv.get_bool("b"), ConfigError);
    CHECK(kv.get_uint("u") == 17);
    CHECK(kv.get_double_or("missing", 4.0) == 4.0);
    CHECK(kv.get_bool_or("missing", true));
    CHECK_FALSE(kv.find_double("missing").has_value());
}

TEST_CASE("format_double round-trips exactly")
{
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> mant(-10.0, 10.0);
    std::uniform_int_distribution<int> expo(-300, 300);
    for (int i = 0; i < 2000; ++i)
    {
        const double v = std::ldexp(mant(rng), expo(rng));
        CHECK(std::stod(format_double(v)) == v);
    }
    CHECK(format_double(0.1) == "0.1");
    CHECK(format_double(1550.0) == "1550");
}

TEST_CASE("write then parse reproduces values")
{
    KeyValueFile kv;
    kv.set("a", 1.0 / 3.0);
    kv.set("b", std::string("text"));
    kv.set("c", 6.62607015e-34);
    std::stringstream ss;
    kv.write(ss);
    const auto back = KeyValueFile::parse(ss, "roundtrip");
    CHECK(back.get_double("a") == 1.0 / 3.0);
    CHECK(back.get_string("b") == "text");
    CHECK(back.get_double("c") == 6.62607015e-34);
    CHECK(back.keys() == kv.keys());
}
