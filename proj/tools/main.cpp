#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "cli/run.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Quantum-light observables behind fluctuating-loss channels"};
    std::string config;
    std::string out_dir;
    std::uint64_t seed = 0;
    app.add_option("--config", config, "JSON run configuration")->required()->check(CLI::ExistingFile);
    auto* out_opt = app.add_option("--out-dir", out_dir, "Directory for CSV/JSON artifacts");
    auto* seed_opt = app.add_option("--seed-override", seed, "Replace the seed from the config");
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : atmq::cli::kExitConfig;
    }

    std::optional<std::filesystem::path> out;
    if (*out_opt) out = out_dir;
    std::optional<std::uint64_t> seed_override;
    if (*seed_opt) seed_override = seed;
    return atmq::cli::run_command(config, out, seed_override, std::cerr);
}
