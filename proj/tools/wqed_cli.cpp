#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "wqed/commands.hpp"
#include "wqed/config.hpp"
#include "wqed/errors.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

struct SubcommandState {
    CLI::App* app = nullptr;
    std::string config_path;
    std::map<std::string, std::string> overrides;
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Transfer-matrix simulations of emitter arrays coupled to a 1D waveguide"};
    app.set_version_flag("--version", std::string(wqed::kVersion));
    app.require_subcommand(1);

    std::vector<SubcommandState> states(wqed::command_specs().size());
    for (std::size_t k = 0; k < states.size(); ++k) {
        const auto& spec = wqed::command_specs()[k];
        auto& st = states[k];
        st.app = app.add_subcommand(spec.name, spec.description);
        st.app->add_option("--config", st.config_path, "key = value config file (a manifest works)");
        auto add = [&](const wqed::ParamSpec& p) {
            if (p.key == "command") return;
            st.app->add_option("--" + p.key, st.overrides[p.key],
                               p.help + " [default: " + p.default_value + "]");
        };
        for (const auto& p : wqed::common_params()) add(p);
        for (const auto& p : spec.params) add(p);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    for (auto& st : states) {
        if (!st.app->parsed()) continue;
        try {
            wqed::ConfigMap given;
            for (const auto& [key, value] : st.overrides)
                if (st.app->count("--" + key) > 0) given[key] = value;
            const wqed::ConfigMap file =
                st.config_path.empty() ? wqed::ConfigMap{} : wqed::read_config_file(st.config_path);
            const auto cfg = wqed::RunConfig::resolve(st.app->get_name(), file, given);
            const auto output = wqed::run_command(cfg);
            for (const auto& path : wqed::write_outputs(cfg, output)) std::cout << path << '\n';
            return kExitOk;
        } catch (const wqed::ConfigError& e) {
            std::cerr << "config error: " << e.what() << '\n';
            return kExitConfig;
        } catch (const wqed::NumericalError& e) {
            std::cerr << "numerical error: " << e.what() << '\n';
            return kExitNumerical;
        }
    }
    return kExitConfig;
}
