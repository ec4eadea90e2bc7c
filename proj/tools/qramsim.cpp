// qramsim command line: sweeps, presets and oracle validation.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "qramsim/sweep.hpp"
#include "qramsim/validation_report.hpp"

#ifndef QRAMSIM_PRESET_DIR
#define QRAMSIM_PRESET_DIR "presets"
#endif

namespace {

struct Overrides {
    std::optional<std::uint64_t> seed;
    std::optional<int> n_sims;
    std::string out;
    int workers = 1;
    bool json = false;
    std::size_t grid_cap = qramsim::default_grid_cap;
};

std::string json_path_for(const std::string& csv_path) {
    std::filesystem::path p(csv_path);
    p.replace_extension(".json");
    return p.string();
}

qramsim::SweepConfig apply(qramsim::SweepConfig c, const Overrides& o) {
    if (o.seed) c.base_seed = *o.seed;
    if (o.n_sims) c.n_sims = *o.n_sims;
    if (!o.out.empty()) c.output_path = o.out;
    qramsim::validate(c);
    return c;
}

void print_summary(const qramsim::SweepResult& r) {
    std::printf("%-3s %6s %5s %6s %8s %8s %9s %9s %7s %12s %10s %12s %10s\n", "", "layers", "eta", "p_link", "T1_e",
                "T2_e", "p_e", "p_n", "param", "fidelity", "+-", "query_s", "+-");
    for (const auto& row : r.rows) {
        const auto& g = row.point;
        const auto& s = row.summary;
        std::printf("%-3s %6d %5.2f %6.2f %8.3g %8.3g %9.2g %9.2g %7.3g %12.6g %10.2g %12.6g %10.2g\n",
                    qramsim::to_string(r.config.protocol).c_str(), g.layers, g.eta, g.p_link, g.T1_e, g.T2_e, g.p_e,
                    g.p_n, g.placement_param, s.mean_fidelity, s.stderr_fidelity, s.mean_query_time,
                    s.stderr_query_time);
    }
}

int do_sweep(const qramsim::SweepConfig& cfg, const Overrides& o) {
    const auto c = apply(cfg, o);
    const auto r = qramsim::run_sweep(c, o.workers, o.grid_cap);
    const std::string csv = qramsim::to_csv(r);
    if (c.output_path.empty()) {
        std::cout << csv;
        if (o.json) std::cout << qramsim::to_json(r).dump(2) << '\n';
        return 0;
    }
    qramsim::write_text(c.output_path, csv);
    std::cerr << "wrote " << r.rows.size() << " rows to " << c.output_path << '\n';
    if (o.json) {
        const auto jp = json_path_for(c.output_path);
        qramsim::write_text(jp, qramsim::to_json(r).dump(2) + "\n");
        std::cerr << "wrote " << jp << '\n';
    }
    return 0;
}

int do_run(const qramsim::SweepConfig& cfg, const Overrides& o) {
    const auto c = apply(cfg, o);
    const auto r = qramsim::run_sweep(c, o.workers, o.grid_cap);
    print_summary(r);
    if (!c.output_path.empty()) {
        qramsim::write_text(c.output_path, qramsim::to_csv(r));
        if (o.json) qramsim::write_text(json_path_for(c.output_path), qramsim::to_json(r).dump(2) + "\n");
    }
    return 0;
}

void add_common(CLI::App* sub, Overrides& o) {
    sub->add_option("--seed", o.seed, "base seed override");
    sub->add_option("--n-sims", o.n_sims, "simulations per grid point")->check(CLI::Range(2, 1000000));
    sub->add_option("--out", o.out, "output CSV path");
    sub->add_option("--workers", o.workers, "worker threads")->check(CLI::Range(1, 256));
    sub->add_flag("--json", o.json, "also write a JSON mirror");
    sub->add_option("--grid-cap", o.grid_cap, "maximum grid points");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Noisy GHZ distribution and query-time simulator for network QRAM"};
    app.require_subcommand(1);

    Overrides o;
    std::string config_path, preset_name, preset_dir = QRAMSIM_PRESET_DIR;
    double eps_max = 0.05;

    auto* run = app.add_subcommand("run", "run a config and print a summary table");
    run->add_option("config", config_path, "config file")->required();
    add_common(run, o);

    auto* sweep = app.add_subcommand("sweep", "run a config and write CSV (and JSON)");
    sweep->add_option("config", config_path, "config file")->required();
    add_common(sweep, o);

    auto* preset = app.add_subcommand("preset", "run a bundled figure preset");
    preset->add_option("name", preset_name, "preset name, e.g. fig8")->required();
    preset->add_option("--preset-dir", preset_dir, "directory holding <name>.json");
    add_common(preset, o);

    auto* oracle = app.add_subcommand("oracle-validate", "compare closed forms against the density-matrix oracle");
    oracle->add_option("--eps-max", eps_max, "largest decay probability in the linking suite");
    oracle->add_option("--out", o.out, "write the report here instead of stdout");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run) return do_run(qramsim::load_sweep_config(config_path), o);
        if (*sweep) return do_sweep(qramsim::load_sweep_config(config_path), o);
        if (*preset) {
            const auto path = (std::filesystem::path(preset_dir) / (preset_name + ".json")).string();
            if (!std::filesystem::exists(path)) throw qramsim::ConfigError("no preset named '" + preset_name + "' in " + preset_dir);
            return do_sweep(qramsim::load_sweep_config(path), o);
        }
        if (*oracle) {
            const auto report = qramsim::oracle_validate(eps_max).dump(2) + "\n";
            if (o.out.empty()) {
                std::cout << report;
            } else {
                qramsim::write_text(o.out, report);
            }
            return 0;
        }
    } catch (const qramsim::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const qramsim::OutputError& e) {
        std::cerr << "output error: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
