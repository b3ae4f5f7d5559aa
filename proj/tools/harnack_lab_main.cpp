#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "harnack_lab/experiments.hpp"
#include "harnack_lab/io.hpp"
#include "json.hpp"

namespace {

using nlohmann::json;

json load_config(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw CLI::ValidationError("--config", "cannot open " + path);
    return json::parse(is);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"harnack_lab: boundary-value experiments on cones, sectors and "
                 "Lipschitz graph domains"};
    app.set_help_flag("--help", "print help");  // frees -h for the grid width
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = "out";
    double h = 0.0;
    long long seed = -1;
    bool quiet = false;
    bool emit_schema = false;
    app.add_option("--config", config_path, "JSON experiment config")->required(false);
    app.add_option("--out", out_dir, "output directory");
    app.add_option("--h", h, "grid width override");
    app.add_option("--seed", seed, "sampling seed override");
    app.add_flag("--quiet", quiet, "suppress progress output");
    app.add_flag("--emit-schema", emit_schema, "write config.schema.json into --out and exit");

    const std::vector<std::string> experiments = {"alpha",    "pair",   "ratio",
                                                  "growth",   "weiss",  "fredholm",
                                                  "holder",   "sumdiv", "heleshaw"};
    for (const auto& name : experiments)
        app.add_subcommand(name, name + " experiment")->fallthrough();
    auto* sweep = app.add_subcommand("sweep", "parameter sweep over a base config");
    sweep->fallthrough();
    std::string sweep_param;
    std::string sweep_values;
    sweep->add_option("--param", sweep_param,
                      "config key to vary, JSON-pointer style (e.g. gamma or grid/h)");
    sweep->add_option("--values", sweep_values, "JSON array of values");

    CLI11_PARSE(app, argc, argv);

    try {
        if (emit_schema) {
            std::filesystem::create_directories(out_dir);
            harnack::io::write_json(std::filesystem::path(out_dir) / "config.schema.json",
                                    harnack::experiments::config_schema());
            if (!quiet) std::cout << "wrote " << out_dir << "/config.schema.json\n";
            return 0;
        }

        json cfg = config_path.empty() ? json::object() : load_config(config_path);
        for (const auto& name : experiments) {
            if (app.got_subcommand(name)) {
                cfg["experiment"] = name;
                break;
            }
        }
        if (h > 0.0) cfg["grid"]["h"] = h;
        if (seed >= 0) cfg["analysis"]["seed"] = seed;
        if (cfg.contains("out_dir") && out_dir == "out")
            out_dir = cfg.at("out_dir").get<std::string>();
        cfg.erase("out_dir");

        if (app.got_subcommand("sweep")) {
            if (cfg.value("experiment", "") == "threshold-sweep" ||
                (cfg.contains("apertures") && sweep_param.empty())) {
                cfg["experiment"] = "threshold-sweep";
                return harnack::experiments::run_experiment(cfg, out_dir, std::cerr, quiet);
            }
            if (sweep_param.empty() || sweep_values.empty()) {
                std::cerr << "config error: sweep requires --param and --values or an "
                             "apertures config\n";
                return harnack::experiments::kExitBadConfig;
            }
            const json vals = json::parse(sweep_values);
            std::vector<json> list(vals.begin(), vals.end());
            return harnack::experiments::run_sweep(cfg, sweep_param, list, out_dir,
                                                   std::cerr, quiet);
        }
        return harnack::experiments::run_experiment(cfg, out_dir, std::cerr, quiet);
    } catch (const json::parse_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return harnack::experiments::kExitBadConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
