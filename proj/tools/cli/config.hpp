#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "atmq/atmq.hpp"

namespace atmq::cli {

/// Schema violations and unreadable config files.
class ConfigError : public Error {
  public:
    using Error::Error;
    [[nodiscard]] const char* category() const noexcept override { return "config"; }
};

enum class Scenario { bell, mandel, squeeze, dgcz, pdt_info };

std::string to_string(Scenario s);

/// Report kept for every empirical PDT file loaded by the config.
struct IngestReport {
    std::string file;
    std::size_t bin_count = 0;
    double renormalization_factor = 1.0;
};

struct BellConfig {
    BellSettings settings;
    BellSweepKind kind = BellSweepKind::squeeze;
    std::vector<double> grid;
};

struct MandelInput {
    std::string label;
    bool coherent = false;
    double intensity = 0.0;              // |alpha|^2 for coherent inputs
    std::vector<double> photon_numbers;  // rho_m for Fock-basis inputs
};

struct MandelConfig {
    TransmittanceDistribution pdt;
    DetectorModel detector;
    std::vector<MandelInput> inputs;
};

struct SqueezeConfig {
    SingleModeGaussian state;
    double input_db = 0.0;
    TransmittanceDistribution pdt;
    double phi = 0.0;
    std::vector<double> thresholds;
    std::optional<HomodyneModel> homodyne;
};

enum class DgczMode { domain, certify };

struct DgczConfig {
    DgczMode mode = DgczMode::domain;
    std::vector<double> xis;
    // domain mode
    double lo = -1.0;
    double hi = 1.0;
    std::size_t count = 41;
    // certify mode
    Complex d_a{};
    Complex d_b{};
    std::optional<JointTransmittanceDistribution> channel;
};

struct PdtInfoConfig {
    TransmittanceDistribution pdt;
    std::size_t samples = 100000;
};

struct RunConfig {
    Scenario scenario = Scenario::bell;
    std::uint64_t seed = 0;
    unsigned threads = 1;
    std::filesystem::path out_dir = ".";
    QuadratureSpec quadrature{};
    nlohmann::json source;
    std::vector<IngestReport> ingested;
    std::variant<BellConfig, MandelConfig, SqueezeConfig, DgczConfig, PdtInfoConfig> body;
};

/// Validates `doc` against the schema and builds library objects. Relative
/// file paths are resolved against `base_dir`.
RunConfig parse_config(const nlohmann::json& doc, const std::filesystem::path& base_dir);

RunConfig load_config(const std::filesystem::path& path);

}  // namespace atmq::cli
