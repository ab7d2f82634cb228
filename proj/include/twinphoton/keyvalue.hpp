#ifndef TWINPHOTON_KEYVALUE_HPP
#define TWINPHOTON_KEYVALUE_HPP

// Flat `name = value` text format shared by config, coefficient, table and
// manifest files. Blank lines and lines starting with `#` are ignored.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace twinphoton
{

class KeyValueFile
{
public:
    KeyValueFile() = default;

    static KeyValueFile parse(std::istream &in, const std::string &source_name);
    static KeyValueFile parse_string(std::string_view text, const std::string &source_name = "<string>");
    // Throws ParseError if the file cannot be opened.
    static KeyValueFile load(const std::filesystem::path &path);

    bool contains(const std::string &key) const { return values_.count(key) != 0; }
    const std::string &source() const noexcept { return source_; }

    // Throws ConfigError when the key is missing or not parseable.
    const std::string &get_string(const std::string &key) const;
    double get_double(const std::string &key) const;
    std::uint64_t get_uint(const std::string &key) const;
    bool get_bool(const std::string &key) const;

    std::optional<double> find_double(const std::string &key) const;
    double get_double_or(const std::string &key, double fallback) const;
    bool get_bool_or(const std::string &key, bool fallback) const;

    void set(const std::string &key, const std::string &value);
    void set(const std::string &key, double value);

    // Keys in first-insertion order.
    const std::vector<std::string> &keys() const noexcept { return order_; }

    void write(std::ostream &out) const;

private:
    std::string source_;
    std::map<std::string, std::string> values_;
    std::vector<std::string> order_;
};

// Shortest decimal that round-trips to the same double.
std::string format_double(double value);

// Whitespace trim.
std::string_view trim(std::string_view s);

} // namespace twinphoton

#endif // TWINPHOTON_KEYVALUE_HPP
