#ifndef TWINPHOTON_CLI_HPP
#define TWINPHOTON_CLI_HPP

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace twinphoton::cli
{

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kUsageError = 1;
inline constexpr int kDataError = 2;
inline constexpr int kSolverError = 3;

// Runs `twinphoton <args...>` (args excludes the program name). Results go to
// `out`, diagnostics and manifests without a destination to `err`.
int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

// $TWINPHOTON_DATA_DIR, else the data directory of the source tree.
std::filesystem::path default_data_dir();

std::string version();

} // namespace twinphoton::cli

#endif // TWINPHOTON_CLI_HPP
