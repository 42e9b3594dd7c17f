#include "wqed/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "wqed/errors.hpp"
#include "wqed/numeric.hpp"

namespace wqed {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

bool parse_plain_real(std::string_view text, double& out) {
    if (!text.empty() && text.front() == '+') text.remove_prefix(1);
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
    return ec == std::errc() && ptr == text.data() + text.size();
}

[[noreturn]] void bad_value(std::string_view field, std::string_view text, std::string_view want) {
    throw ConfigError("invalid value '" + std::string(text) + "' for '" + std::string(field) +
                      "': expected " + std::string(want));
}

const std::string kPi_s = "3.141592653589793";

std::vector<std::string_view> split_list(std::string_view text) {
    std::vector<std::string_view> out;
    while (true) {
        const auto comma = text.find(',');
        out.push_back(trim(text.substr(0, comma)));
        if (comma == std::string_view::npos) break;
        text.remove_prefix(comma + 1);
    }
    return out;
}

}  // namespace

ConfigMap parse_config_text(std::string_view text, std::string_view source) {
    ConfigMap out;
    std::size_t line_no = 0;
    while (!text.empty()) {
        const auto eol = text.find('\n');
        std::string_view line = text.substr(0, eol);
        text.remove_prefix(eol == std::string_view::npos ? text.size() : eol + 1);
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        const std::string where = std::string(source) + ":" + std::to_string(line_no);
        if (eq == std::string_view::npos) throw ConfigError(where + ": expected 'key = value'");
        const std::string key(trim(line.substr(0, eq)));
        const std::string value(trim(line.substr(eq + 1)));
        if (key.empty()) throw ConfigError(where + ": empty key");
        if (!out.emplace(key, value).second) throw ConfigError(where + ": duplicate key '" + key + "'");
    }
    return out;
}

ConfigMap read_config_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str(), path.string());
}

double parse_real(std::string_view text, std::string_view field) {
    text = trim(text);
    double value = 0.0;
    if (parse_plain_real(text, value)) {
        if (!std::isfinite(value)) bad_value(field, text, "a finite number");
        return value;
    }
    // [-][k*]pi[/m]
    std::string_view rest = text;
    double sign = 1.0;
    if (!rest.empty() && (rest.front() == '-' || rest.front() == '+')) {
        if (rest.front() == '-') sign = -1.0;
        rest.remove_prefix(1);
    }
    const auto pi_pos = rest.find("pi");
    if (pi_pos == std::string_view::npos) bad_value(field, text, "a number or a multiple of pi");
    double factor = 1.0, divisor = 1.0;
    std::string_view head = trim(rest.substr(0, pi_pos));
    std::string_view tail = trim(rest.substr(pi_pos + 2));
    if (!head.empty()) {
        if (head.back() != '*' || !parse_plain_real(trim(head.substr(0, head.size() - 1)), factor))
            bad_value(field, text, "a number or a multiple of pi");
    }
    if (!tail.empty()) {
        if (tail.front() != '/' || !parse_plain_real(trim(tail.substr(1)), divisor) || divisor == 0.0)
            bad_value(field, text, "a number or a multiple of pi");
    }
    return sign * factor * kPi / divisor;
}

const std::vector<ParamSpec>& common_params() {
    static const std::vector<ParamSpec> params = {
        {"command", "", "command this config belongs to (optional; must match)"},
        {"out", "out.csv", "output CSV path; the manifest goes to <out>.manifest"},
        {"seed", "0", "64-bit seed for Monte Carlo streams"},
        {"threads", "0", "worker threads, 0 = automatic"},
    };
    return params;
}

const std::vector<CommandSpec>& command_specs() {
    static const std::vector<CommandSpec> specs = {
        {"sweep",
         "transmission probability and phase shift of a periodic array over (D/Gamma, phi)",
         {{"n_emitters", "30", "number of emitters"},
          {"gamma", "0", "non-waveguide loss rate gamma/Gamma"},
          {"delta_min", "-20", "lowest detuning D/Gamma"},
          {"delta_max", "20", "highest detuning D/Gamma"},
          {"n_delta", "400", "detuning nodes"},
          {"phi_min", "0", "lowest propagation phase"},
          {"phi_max", "pi", "highest propagation phase"},
          {"n_phi", "400", "phase nodes"}}},
        {"design-gate",
         "operating points on the deterministic-transmission curve for a target phase shift",
         {{"n_emitters", "10", "even number of emitters"},
          {"target_shift", "pi/2", "target phase shift in (-pi, pi]"},
          {"delta_max", "20", "largest |D|/Gamma allowed for a full-coverage branch"}}},
        {"disorder",
         "Monte Carlo averages over position or frequency disorder",
         {{"kind", "position", "position | frequency"},
          {"n_emitters", "100", "number of emitters"},
          {"gamma", "0", "non-waveguide loss rate gamma/Gamma"},
          {"sigma", "pi/2", "disorder strength (radians for position, Gamma for frequency)"},
          {"n_realizations", "1000", "realizations per node"},
          {"weighting", "uniform", "phase-average weights: uniform | transmission"},
          {"delta_min", "-20", "lowest (mean) detuning"},
          {"delta_max", "20", "highest (mean) detuning"},
          {"n_delta", "41", "detuning nodes"},
          {"phi_min", "0", "lowest (mean) propagation phase"},
          {"phi_max", "pi", "highest (mean) propagation phase"},
          {"n_phi", "41", "phase nodes"}}},
        {"pulse",
         "Gaussian-pulse transmission and phase shift versus the monochromatic response",
         {{"n_emitters", "4", "number of emitters"},
          {"gamma", "0", "non-waveguide loss rate gamma/Gamma"},
          {"omega_e", "100", "emitter transition frequency in units of Gamma"},
          {"bandwidth", "0.1", "pulse bandwidth in units of Gamma"},
          {"delta_min", "-5", "lowest central detuning"},
          {"delta_max", "5", "highest central detuning"},
          {"n_delta", "100", "detuning nodes"},
          {"phi_min", "0", "lowest phase omega_c tau"},
          {"phi_max", "pi", "highest phase omega_c tau"},
          {"n_phi", "100", "phase nodes"},
          {"scheme", "adaptive", "quadrature: adaptive | gauss-hermite"},
          {"reference", "true", "measure the pulse phase against free propagation"},
          {"phase_weighting", "cubic", "phase integrand weight: cubic (T|T|^2) | plain (T)"}}},
        {"two-photon",
         "normalized inelastic two-photon density on the energy shell of one emitter",
         {{"omega_e", "100", "emitter transition frequency in units of Gamma"},
          {"gamma", "0", "non-waveguide loss rate gamma/Gamma"},
          {"omega_c_offset", "2", "conserved central frequency minus omega_e"},
          {"delta_in", "0", "input photon-photon detuning"},
          {"delta_out_half_width", "300", "output grid spans [-w, w]"},
          {"n_delta_out", "2401", "output grid nodes"}}},
        {"loss-scaling",
         "loss-area ratio A_gamma(N) over the loss window and its power-law fits",
         {{"n_values", "10,20,40,80,160", "emitter counts for the N series"},
          {"gamma", "0.18", "loss rate of the N series"},
          {"n_fixed", "10", "emitter count of the gamma series"},
          {"gamma_values", "0.02,0.04,0.08,0.12,0.16,0.2", "loss rates for the gamma series"},
          {"threshold", "0.1", "transmission-loss threshold"},
          {"delta_min", "0", "lowest detuning"},
          {"delta_max", "20", "highest detuning"},
          {"n_delta", "400", "detuning nodes"},
          {"phi_min", "0", "lowest phase"},
          {"phi_max", "pi/2", "highest phase"},
          {"n_phi", "400", "phase nodes"}}},
    };
    return specs;
}

const CommandSpec& command_spec(std::string_view name) {
    for (const auto& spec : command_specs())
        if (spec.name == name) return spec;
    throw ConfigError("unknown command '" + std::string(name) + "'");
}

RunConfig RunConfig::resolve(std::string_view command, const ConfigMap& file_values,
                             const ConfigMap& overrides) {
    const CommandSpec& spec = command_spec(command);
    RunConfig cfg;
    cfg.command_ = spec.name;
    for (const auto& p : common_params()) cfg.values_[p.key] = p.default_value;
    for (const auto& p : spec.params) cfg.values_[p.key] = p.default_value;
    for (const ConfigMap* layer : {&file_values, &overrides}) {
        for (const auto& [key, value] : *layer) {
            if (!cfg.values_.contains(key))
                throw ConfigError("unknown key '" + key + "' for command '" + spec.name + "'");
            cfg.values_[key] = value;
        }
    }
    if (const auto& c = cfg.values_["command"]; !c.empty() && c != spec.name)
        throw ConfigError("config is for command '" + c + "', not '" + spec.name + "'");
    cfg.values_["command"] = spec.name;
    return cfg;
}

const std::string& RunConfig::get_string(std::string_view key) const {
    const auto it = values_.find(std::string(key));
    if (it == values_.end()) throw ConfigError("missing key '" + std::string(key) + "'");
    return it->second;
}

double RunConfig::get_real(std::string_view key) const { return parse_real(get_string(key), key); }

std::int64_t RunConfig::get_int(std::string_view key) const {
    const std::string_view text = trim(get_string(key));
    std::int64_t value = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size()) bad_value(key, text, "an integer");
    return value;
}

std::size_t RunConfig::get_count(std::string_view key, std::size_t min_value) const {
    const std::int64_t v = get_int(key);
    if (v < 0 || static_cast<std::size_t>(v) < min_value)
        bad_value(key, get_string(key), "an integer >= " + std::to_string(min_value));
    return static_cast<std::size_t>(v);
}

std::uint64_t RunConfig::get_u64(std::string_view key) const {
    const std::string_view text = trim(get_string(key));
    std::uint64_t value = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size())
        bad_value(key, text, "an unsigned 64-bit integer");
    return value;
}

bool RunConfig::get_bool(std::string_view key) const {
    const std::string& v = get_string(key);
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    bad_value(key, v, "true or false");
}

std::vector<double> RunConfig::get_real_list(std::string_view key) const {
    std::vector<double> out;
    for (auto item : split_list(get_string(key))) out.push_back(parse_real(item, key));
    return out;
}

std::vector<std::size_t> RunConfig::get_count_list(std::string_view key) const {
    std::vector<std::size_t> out;
    for (auto item : split_list(get_string(key))) {
        std::size_t v = 0;
        const auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
        if (ec != std::errc() || ptr != item.data() + item.size() || v == 0)
            bad_value(key, item, "a comma-separated list of positive integers");
        out.push_back(v);
    }
    return out;
}

const std::string& RunConfig::get_choice(std::string_view key,
                                         const std::vector<std::string>& choices) const {
    const std::string& v = get_string(key);
    if (std::find(choices.begin(), choices.end(), v) == choices.end()) {
        std::string want = "one of";
        for (const auto& c : choices) want += " " + c;
        bad_value(key, v, want);
    }
    return v;
}

}  // namespace wqed
