#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace wqed {

// Flat "key = value" text. '#' starts a comment; blank lines are ignored. Keys are unique.
using ConfigMap = std::map<std::string, std::string>;

ConfigMap parse_config_text(std::string_view text, std::string_view source = "<config>");
ConfigMap read_config_file(const std::filesystem::path& path);

// Real number in C locale, or a multiple of pi written as "pi", "2*pi", "pi/2", "3*pi/4",
// "-pi/8". Throws ConfigError naming `field`.
double parse_real(std::string_view text, std::string_view field);

struct ParamSpec {
    std::string key;
    std::string default_value;
    std::string help;
};

struct CommandSpec {
    std::string name;
    std::string description;
    std::vector<ParamSpec> params;
};

// Parameters shared by every command.
const std::vector<ParamSpec>& common_params();
const std::vector<CommandSpec>& command_specs();
const CommandSpec& command_spec(std::string_view name);

// Fully resolved parameters of one run: defaults, then the config file, then overrides.
// Unknown keys are rejected.
class RunConfig {
public:
    static RunConfig resolve(std::string_view command, const ConfigMap& file_values,
                             const ConfigMap& overrides);

    const std::string& command() const { return command_; }
    const ConfigMap& values() const { return values_; }

    const std::string& get_string(std::string_view key) const;
    double get_real(std::string_view key) const;
    std::int64_t get_int(std::string_view key) const;
    std::size_t get_count(std::string_view key, std::size_t min_value = 0) const;
    std::uint64_t get_u64(std::string_view key) const;
    bool get_bool(std::string_view key) const;
    std::vector<double> get_real_list(std::string_view key) const;
    std::vector<std::size_t> get_count_list(std::string_view key) const;
    // Value must be one of `choices`.
    const std::string& get_choice(std::string_view key, const std::vector<std::string>& choices) const;

private:
    std::string command_;
    ConfigMap values_;
};

}  // namespace wqed
