#pragma once

#include <boost/program_options.hpp>
#include <nlohmann/json.hpp>

#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace holo::cli {

// Conventional scriptable exit classes.
inline constexpr int kExitOk = 0;        // full success
inline constexpr int kExitPartial = 2;   // some work items failed
inline constexpr int kExitUsage = 64;    // bad flags / config keys / values
inline constexpr int kExitData = 65;     // input exists but is malformed
inline constexpr int kExitNoInput = 66;  // missing input file or directory
inline constexpr int kExitIo = 74;       // output I/O failure

struct CliError : std::runtime_error {
    int code;
    CliError(int exit_code, const std::string& message) : std::runtime_error(message), code(exit_code) {}
};

/// Layered option lookup. Precedence, weakest first: config-file values,
/// the HOLO_SEED environment variable (key "seed" only), command-line flags.
/// Defaults stay in the caller, passed to get().
///
/// The config file is one flat JSON object. A bare key ("steps") must name an
/// option of the running subcommand; a dotted key ("optimize.steps") applies
/// only when its prefix matches the running subcommand and must name a known
/// subcommand otherwise. A "command" key, when present, must match.
///
/// Convention: declare every value option as po::value<std::string>() and
/// every boolean as po::bool_switch(); typed parsing happens in get().
class Options {
  public:
    Options(std::string command, const boost::program_options::options_description& desc,
            const std::vector<std::string>& args);

    bool has(const std::string& key) const { return values_.count(key) != 0; }

    std::string get(const std::string& key, const std::string& def) const;
    int get(const std::string& key, int def) const;
    double get(const std::string& key, double def) const;
    uint64_t get(const std::string& key, uint64_t def) const;
    std::vector<double> get(const std::string& key, const std::vector<double>& def) const;
    std::vector<int> get(const std::string& key, const std::vector<int>& def) const;
    bool get_flag(const std::string& key) const;
    std::string require(const std::string& key) const;

    const std::string& command() const { return command_; }

    /// Fully resolved settings; each command fills this and calls write_echo.
    nlohmann::json echo;
    void write_echo(const std::filesystem::path& out_dir) const;

  private:
    std::string raw(const std::string& key) const;

    std::string command_;
    std::map<std::string, std::string> values_;
};

// Shared plumbing -----------------------------------------------------------

void require_exists(const std::filesystem::path& path, const std::string& what);
void ensure_out_dir(const std::filesystem::path& dir);
std::string hex64(uint64_t value);

/// Applies --jobs (worker-thread cap) if present.
void apply_jobs(const Options& options);

}  // namespace holo::cli
