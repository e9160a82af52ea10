#include "options.hpp"

#include "holo/parallel.hpp"
#include "holo/serialize.hpp"

#include <algorithm>
#include <cinttypes>
#include <climits>
#include <cstdio>
#include <cstdlib>
#include <sstream>

namespace holo::cli {

namespace po = boost::program_options;
using nlohmann::json;

namespace {

const std::vector<std::string>& known_commands() {
    static const std::vector<std::string> names = {"dataset-gen", "train",  "optimize",
                                                   "estimate",    "eval",   "render"};
    return names;
}

std::string json_scalar_to_string(const json& v, const std::string& key) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    if (v.is_number()) return v.dump();
    throw CliError(kExitUsage, "config key '" + key + "' must be a scalar or array of scalars");
}

std::string json_value_to_string(const json& v, const std::string& key) {
    if (!v.is_array()) return json_scalar_to_string(v, key);
    std::string out;
    for (size_t i = 0; i < v.size(); ++i) {
        if (i) out += ',';
        out += json_scalar_to_string(v[i], key);
    }
    return out;
}

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> parts;
    size_t start = 0;
    while (start <= text.size()) {
        const size_t comma = text.find(',', start);
        if (comma == std::string::npos) {
            parts.push_back(text.substr(start));
            break;
        }
        parts.push_back(text.substr(start, comma - start));
        start = comma + 1;
    }
    return parts;
}

}  // namespace

Options::Options(std::string command, const po::options_description& desc,
                 const std::vector<std::string>& args)
    : command_(std::move(command)) {
    po::options_description all;
    all.add(desc);
    all.add_options()("help", po::bool_switch(), "show this command's options");

    po::variables_map vm;
    try {
        po::store(po::command_line_parser(args).options(all).run(), vm);
        po::notify(vm);
    } catch (const po::error& e) {
        throw CliError(kExitUsage, command_ + ": " + e.what());
    }

    if (vm["help"].as<bool>()) {
        std::ostringstream os;
        os << all;
        std::fputs(os.str().c_str(), stdout);
        throw CliError(kExitOk, "");
    }

    for (const auto& opt : all.options()) {
        const std::string& name = opt->long_name();
        if (name == "help" || !vm.count(name) || vm[name].defaulted()) continue;
        const auto& value = vm[name].value();
        if (value.type() == typeid(bool))
            values_[name] = vm[name].as<bool>() ? "true" : "false";
        else
            values_[name] = vm[name].as<std::string>();
    }

    if (const char* env_seed = std::getenv("HOLO_SEED"); env_seed && !values_.count("seed")) {
        if (desc.find_nothrow("seed", false)) {
            values_["seed"] = env_seed;
            get("seed", uint64_t{0});  // validate eagerly
        }
    }

    if (const auto it = values_.find("config"); it != values_.end()) {
        const std::filesystem::path path = it->second;
        require_exists(path, "config file");
        json file;
        try {
            file = json::parse(read_text_file(path));
        } catch (const std::exception& e) {
            throw CliError(kExitData, path.string() + ": " + e.what());
        }
        if (!file.is_object()) throw CliError(kExitData, path.string() + ": config must be a JSON object");
        for (const auto& [raw_key, value] : file.items()) {
            std::string key = raw_key;
            if (key == "command") {
                if (value.get<std::string>() != command_)
                    throw CliError(kExitUsage, path.string() + ": config is for command '" +
                                                   value.get<std::string>() + "', not '" + command_ + "'");
                continue;
            }
            if (const size_t dot = key.find('.'); dot != std::string::npos) {
                const std::string prefix = key.substr(0, dot);
                const auto& names = known_commands();
                if (std::find(names.begin(), names.end(), prefix) == names.end())
                    throw CliError(kExitUsage, path.string() + ": unknown subcommand prefix in key '" +
                                                   raw_key + "'");
                if (prefix != command_) continue;
                key = key.substr(dot + 1);
            }
            if (!desc.find_nothrow(key, false))
                throw CliError(kExitUsage,
                               path.string() + ": unknown config key '" + raw_key + "' for " + command_);
            values_.emplace(key, json_value_to_string(value, raw_key));  // flags/env win
        }
    }
}

std::string Options::raw(const std::string& key) const {
    const auto it = values_.find(key);
    if (it == values_.end()) throw std::logic_error("Options::raw: missing key " + key);
    return it->second;
}

std::string Options::get(const std::string& key, const std::string& def) const {
    return has(key) ? raw(key) : def;
}

int Options::get(const std::string& key, int def) const {
    if (!has(key)) return def;
    const std::string& text = raw(key);
    char* end = nullptr;
    const long v = std::strtol(text.c_str(), &end, 10);
    if (text.empty() || end != text.c_str() + text.size() || v < INT_MIN || v > INT_MAX)
        throw CliError(kExitUsage, "--" + key + ": '" + text + "' is not an integer");
    return static_cast<int>(v);
}

double Options::get(const std::string& key, double def) const {
    if (!has(key)) return def;
    const std::string& text = raw(key);
    char* end = nullptr;
    const double v = std::strtod(text.c_str(), &end);
    if (text.empty() || end != text.c_str() + text.size())
        throw CliError(kExitUsage, "--" + key + ": '" + text + "' is not a number");
    return v;
}

uint64_t Options::get(const std::string& key, uint64_t def) const {
    if (!has(key)) return def;
    const std::string& text = raw(key);
    char* end = nullptr;
    const unsigned long long v = std::strtoull(text.c_str(), &end, 10);
    if (text.empty() || end != text.c_str() + text.size() || text[0] == '-')
        throw CliError(kExitUsage, "--" + key + ": '" + text + "' is not an unsigned integer");
    return static_cast<uint64_t>(v);
}

std::vector<double> Options::get(const std::string& key, const std::vector<double>& def) const {
    if (!has(key)) return def;
    std::vector<double> out;
    for (const std::string& part : split_list(raw(key))) {
        char* end = nullptr;
        const double v = std::strtod(part.c_str(), &end);
        if (part.empty() || end != part.c_str() + part.size())
            throw CliError(kExitUsage, "--" + key + ": '" + part + "' is not a number");
        out.push_back(v);
    }
    return out;
}

std::vector<int> Options::get(const std::string& key, const std::vector<int>& def) const {
    if (!has(key)) return def;
    std::vector<int> out;
    for (const std::string& part : split_list(raw(key))) {
        char* end = nullptr;
        const long v = std::strtol(part.c_str(), &end, 10);
        if (part.empty() || end != part.c_str() + part.size())
            throw CliError(kExitUsage, "--" + key + ": '" + part + "' is not an integer");
        out.push_back(static_cast<int>(v));
    }
    return out;
}

bool Options::get_flag(const std::string& key) const { return has(key) && raw(key) == "true"; }

std::string Options::require(const std::string& key) const {
    if (!has(key)) throw CliError(kExitUsage, command_ + ": missing required --" + key);
    return raw(key);
}

void Options::write_echo(const std::filesystem::path& out_dir) const {
    json resolved = echo;
    resolved["command"] = command_;
    try {
        write_text_file(out_dir / "run_config.json", resolved.dump(2) + "\n");
    } catch (const std::exception& e) {
        throw CliError(kExitIo, e.what());
    }
}

void require_exists(const std::filesystem::path& path, const std::string& what) {
    std::error_code ec;
    if (!std::filesystem::exists(path, ec))
        throw CliError(kExitNoInput, what + " not found: " + path.string());
}

void ensure_out_dir(const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw CliError(kExitIo, "cannot create output directory " + dir.string() + ": " + ec.message());
}

std::string hex64(uint64_t value) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016" PRIx64, value);
    return buf;
}

void apply_jobs(const Options& options) {
    if (!options.has("jobs")) return;
    const int jobs = options.get("jobs", 0);
    if (jobs < 1) throw CliError(kExitUsage, "--jobs must be >= 1");
    set_max_threads(jobs);
}

}  // namespace holo::cli
