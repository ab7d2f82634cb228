#include "twinphoton/keyvalue.hpp"

#include "twinphoton/errors.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <system_error>

namespace twinphoton
{

std::string_view trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos)
        return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

std::string format_double(double value)
{
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, res.ptr);
}

KeyValueFile KeyValueFile::parse(std::istream &in, const std::string &source_name)
{
    KeyValueFile kv;
    kv.source_ = source_name;
    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(in, raw))
    {
        ++line_no;
        const auto line = trim(raw);
        if (line.empty() || line.front() == '#')
            continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos)
            throw ParseError(source_name, line_no, "expected `name = value`");
        const std::string key(trim(line.substr(0, eq)));
        const std::string value(trim(line.substr(eq + 1)));
        if (key.empty())
            throw ParseError(source_name, line_no, "empty key");
        if (kv.values_.count(key))
            throw ParseError(source_name, line_no, "duplicate key `" + key + "`");
        kv.values_[key] = value;
        kv.order_.push_back(key);
    }
    return kv;
}

KeyValueFile KeyValueFile::parse_string(std::string_view text, const std::string &source_name)
{
    std::istringstream in{std::string(text)};
    return parse(in, source_name);
}

KeyValueFile KeyValueFile::load(const std::filesystem::path &path)
{
    std::ifstream in(path);
    if (!in)
        throw ParseError(path.string(), 0, "cannot open file");
    return parse(in, path.string());
}

const std::string &KeyValueFile::get_string(const std::string &key) const
{
    const auto it = values_.find(key);
    if (it == values_.end())
        throw ConfigError(key, "missing required key in " + (source_.empty() ? "<memory>" : source_));
    return it->second;
}

double KeyValueFile::get_double(const std::string &key) const
{
    const auto &s = get_string(key);
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size())
        throw ConfigError(key, "not a number: `" + s + "`");
    return v;
}

std::uint64_t KeyValueFile::get_uint(const std::string &key) const
{
    const auto &s = get_string(key);
    std::uint64_t v = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size())
        throw ConfigError(key, "not an unsigned integer: `" + s + "`");
    return v;
}

bool KeyValueFile::get_bool(const std::string &key) const
{
    const auto &s = get_string(key);
    if (s == "true" || s == "1" || s == "yes")
        return true;
    if (s == "false" || s == "0" || s == "no")
        return false;
    throw ConfigError(key, "not a boolean: `" + s + "`");
}

std::optional<double> KeyValueFile::find_double(const std::string &key) const
{
    if (!contains(key))
        return std::nullopt;
    return get_double(key);
}

double KeyValueFile::get_double_or(const std::string &key, double fallback) const
{
    return contains(key) ? get_double(key) : fallback;
}

bool KeyValueFile::get_bool_or(const std::string &key, bool fallback) const
{
    return contains(key) ? get_bool(key) : fallback;
}

void KeyValueFile::set(const std::string &key, const std::string &value)
{
    if (!values_.count(key))
        order_.push_back(key);
    values_[key] = value;
}

void KeyValueFile::set(const std::string &key, double value)
{
    set(key, format_double(value));
}

void KeyValueFile::write(std::ostream &out) const
{
    for (const auto &key : order_)
        out << key << " = " << values_.at(key) << '\n';
}

} // namespace twinphoton
