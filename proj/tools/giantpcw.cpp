#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#ifdef _OPENMP
#include <omp.h>
#endif

#include "giantpcw/experiments.hpp"
#include "giantpcw/svg.hpp"

namespace fs = std::filesystem;
using namespace giantpcw;

namespace {

std::string utc_timestamp() {
    const std::time_t t = std::time(nullptr);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
    return buf;
}

void set_threads(std::optional<int> n) {
    if (!n) {
        if (const char* e = std::getenv("GIANTPCW_THREADS")) n = std::atoi(e);
    }
#ifdef _OPENMP
    if (n && *n > 0) omp_set_num_threads(*n);
#else
    (void)n;
#endif
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"giant atoms in a flux-modulated photonic-crystal waveguide"};
    app.require_subcommand(1);
    std::string config_path, out_dir = ".";
    bool plot = false;
    std::optional<double> dk;
    std::optional<int> harmonics, threads;
    for (const auto& name : command_names()) {
        auto* sub = app.add_subcommand(name);
        sub->add_option("--config", config_path, "configuration file")->required();
        sub->add_option("--out", out_dir, "output directory");
        sub->add_flag("--plot", plot, "also write an SVG plot");
        sub->add_option("--dk", dk, "k-grid spacing in units of km");
        sub->add_option("--harmonics", harmonics, "plane-wave harmonics Nh");
        sub->add_option("--threads", threads, "worker threads (default GIANTPCW_THREADS)");
    }
    CLI11_PARSE(app, argc, argv);
    const std::string cmd = app.get_subcommands().front()->get_name();
    set_threads(threads);

    try {
        const auto cfg = load_config(config_path, command_schema(cmd));
        const auto table = run_command(cmd, cfg, {dk, harmonics});
        for (const auto& w : table.warnings) std::cerr << "warning: " << w << "\n";
        fs::create_directories(out_dir);
        const fs::path csv = fs::path(out_dir) / (table.name + ".csv");
        write_file(csv.string(), csv_text(table, &cfg, cmd, utc_timestamp()));
        std::cout << csv.string() << "\n";
        if (plot) {
            const fs::path svg = fs::path(out_dir) / (table.name + ".svg");
            write_file(svg.string(), svg_plot(table, cmd));
            std::cout << svg.string() << "\n";
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const DomainError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
