#include "cli/run.hpp"

#include <chrono>
#include <fstream>
#include <sstream>

namespace atmq::cli {

using nlohmann::json;

namespace {

class CsvWriter {
  public:
    CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header) : out_(path) {
        if (!out_) throw Error("cannot write '" + path.string() + "'");
        row(header);
        rows_ = 0;
    }

    template <class... Cells>
    void write(const Cells&... cells) {
        std::vector<std::string> fields;
        (fields.push_back(cell(cells)), ...);
        row(fields);
    }

    [[nodiscard]] std::size_t rows() const { return rows_; }

  private:
    static std::string cell(double v) { return format_number(v); }
    static std::string cell(bool v) { return v ? "true" : "false"; }
    static std::string cell(std::size_t v) { return std::to_string(v); }
    static std::string cell(const std::string& v) {
        if (v.find_first_of(",\"\n") == std::string::npos) return v;
        std::string quoted = "\"";
        for (char c : v) {
            if (c == '"') quoted += '"';
            quoted += c;
        }
        return quoted + "\"";
    }

    void row(const std::vector<std::string>& fields) {
        for (std::size_t i = 0; i < fields.size(); ++i) out_ << (i ? "," : "") << fields[i];
        out_ << "\r\n";
        ++rows_;
    }

    std::ofstream out_;
    std::size_t rows_ = 0;
};

RunOutcome run_bell(const RunConfig& cfg, const BellConfig& c) {
    const auto rows = bell_sweep(c.settings, c.kind, c.grid, cfg.threads);
    CsvWriter csv(cfg.out_dir / "bell.csv", {"param", "B", "valid"});
    bool any_valid = false;
    for (const auto& r : rows) {
        csv.write(r.param, r.value, r.valid);
        any_valid = any_valid || r.valid;
    }
    return {{{"bell.csv", csv.rows()}}, !any_valid};
}

RunOutcome run_mandel(const RunConfig& cfg, const MandelConfig& c) {
    CsvWriter summary(cfg.out_dir / "mandel.csv",
                      {"input", "n_in", "q_in", "q_out_closed", "q_out_direct", "sub_poisson_bound"});
    CsvWriter counts(cfg.out_dir / "counts.csv", {"input", "n", "probability"});
    const QuadratureSpec quad = count_quadrature();
    for (const auto& in : c.inputs) {
        PhotonNumberDist p;
        double n_in = 0.0;
        double q_in = 0.0;
        if (in.coherent) {
            p = count_distribution_coherent(std::sqrt(in.intensity), c.pdt, c.detector, quad);
            n_in = in.intensity;
        } else {
            p = count_distribution_fock(std::span<const double>(in.photon_numbers), c.pdt, c.detector, quad);
            const PhotonNumberDist rho{in.photon_numbers};
            for (std::size_t m = 0; m < rho.p.size(); ++m) n_in += static_cast<double>(m) * rho.p[m];
            q_in = mandel_q(rho);
        }
        const double closed = mandel_out(q_in, n_in, c.pdt, c.detector);
        const double direct = mandel_q(p);
        const double bound = q_in < 0.0 ? sub_poisson_bound(q_in, c.pdt) : std::numeric_limits<double>::quiet_NaN();
        summary.write(in.label, n_in, q_in, closed, direct, bound);
        for (std::size_t n = 0; n < p.p.size(); ++n) counts.write(in.label, n, p.p[n]);
    }
    return {{{"mandel.csv", summary.rows()}, {"counts.csv", counts.rows()}}, false};
}

RunOutcome run_squeeze(const RunConfig& cfg, const SqueezeConfig& c) {
    std::vector<SweepRow> rows;
    if (c.homodyne) {
        rows.resize(c.thresholds.size());
        detail::parallel_for(
            rows.size(),
            [&](std::size_t i) {
                rows[i].param = c.thresholds[i];
                try {
                    const auto selected = truncate(c.pdt, {c.thresholds[i], SelectionKind::postselection});
                    rows[i].value =
                        squeezing_db(noisy_variance(c.state, selected, *c.homodyne, c.phi, cfg.quadrature));
                    rows[i].valid = true;
                } catch (const EmptySelectionError&) {
                    rows[i].valid = false;
                }
            },
            cfg.threads);
    } else {
        rows = postselect_sweep(c.state, c.pdt, c.thresholds, c.phi, cfg.threads);
    }
    CsvWriter csv(cfg.out_dir / "squeeze.csv", {"eta_ps", "squeezing_db", "valid"});
    bool any_valid = false;
    for (const auto& r : rows) {
        csv.write(r.param, r.value, r.valid);
        any_valid = any_valid || r.valid;
    }
    return {{{"squeeze.csv", csv.rows()}}, !any_valid};
}

RunOutcome run_dgcz(const RunConfig& cfg, const DgczConfig& c) {
    if (c.mode == DgczMode::domain) {
        CsvWriter csv(cfg.out_dir / "domain.csv", {"da", "db", "xi", "preserved"});
        for (const auto& p : domain_scan(c.xis, c.lo, c.hi, c.count)) csv.write(p.d_a, p.d_b, p.xi, p.preserved);
        return {{{"domain.csv", csv.rows()}}, false};
    }
    CsvWriter csv(cfg.out_dir / "dgcz.csv", {"xi", "w_in", "w_out", "entangled", "simon_out"});
    std::vector<std::vector<double>> values(c.xis.size());
    std::vector<bool> entangled(c.xis.size());
    detail::parallel_for(
        c.xis.size(),
        [&](std::size_t i) {
            const TwoModeMoments state = tmsv(SqueezeParameter(c.xis[i]), c.d_a, c.d_b);
            const CertifierResult out = dgcz_out_closed(state, *c.channel, cfg.quadrature);
            const TwoModeMoments received = transform_two_mode(state, *c.channel, cfg.quadrature);
            values[i] = {c.xis[i], dgcz_certifier(state).value, out.value, simon_certifier(received).value};
            entangled[i] = out.entangled;
        },
        cfg.threads);
    for (std::size_t i = 0; i < values.size(); ++i) {
        csv.write(values[i][0], values[i][1], values[i][2], static_cast<bool>(entangled[i]), values[i][3]);
    }
    return {{{"dgcz.csv", csv.rows()}}, false};
}

RunOutcome run_pdt_info(const RunConfig& cfg, const PdtInfoConfig& c) {
    json moments = json::object();
    moments["0.5"] = moment(c.pdt, 0.5);
    moments["1"] = moment(c.pdt, 1.0);
    moments["2"] = moment(c.pdt, 2.0);
    const auto draws = sample(c.pdt, c.samples, RandomSource{cfg.seed, 0});
    std::vector<double> sq(draws.size());
    std::vector<double> root(draws.size());
    for (std::size_t i = 0; i < draws.size(); ++i) {
        sq[i] = draws[i] * draws[i];
        root[i] = std::sqrt(draws[i]);
    }
    json mc = json::object();
    auto stats_json = [](const SampleStats& s) { return json{{"mean", s.mean}, {"std_error", s.std_error}}; };
    mc["samples"] = c.samples;
    mc["0.5"] = stats_json(sample_stats(root));
    mc["1"] = stats_json(sample_stats(draws));
    mc["2"] = stats_json(sample_stats(sq));

    json doc = json::object();
    doc["moments"] = moments;
    doc["mean"] = mean(c.pdt);
    doc["variance"] = variance(c.pdt);
    doc["support"] = {c.pdt.support_lower(), c.pdt.support_upper()};
    doc["monte_carlo"] = mc;
    std::ofstream out(cfg.out_dir / "pdt_info.json");
    if (!out) throw Error("cannot write pdt_info.json");
    out << doc.dump(2) << "\n";
    return {{{"pdt_info.json", 1}}, false};
}

void write_manifest(const RunConfig& cfg, const RunOutcome& outcome) {
    json manifest = json::object();
    manifest["tool"] = "atmq";
    manifest["version"] = kVersion;
    manifest["scenario"] = to_string(cfg.scenario);
    manifest["seed"] = cfg.seed;
    manifest["config"] = cfg.source;
    json files = json::array();
    for (const auto& a : outcome.artifacts) files.push_back({{"file", a.file}, {"rows", a.rows}});
    manifest["outputs"] = files;
    json ingest = json::array();
    for (const auto& r : cfg.ingested) {
        ingest.push_back({{"file", r.file},
                          {"bin_count", r.bin_count},
                          {"renormalization_factor", r.renormalization_factor}});
    }
    manifest["ingestion"] = ingest;
    std::ofstream out(cfg.out_dir / "manifest.json");
    if (!out) throw Error("cannot write manifest.json");
    out << manifest.dump(2) << "\n";
}

void report(std::ostream& err, const char* category, const std::string& message) {
    err << json{{"error", {{"category", category}, {"message", message}}}}.dump() << "\n";
}

}  // namespace

RunOutcome run(const RunConfig& cfg) {
    std::filesystem::create_directories(cfg.out_dir);
    const RunOutcome outcome = std::visit(
        [&](const auto& body) -> RunOutcome {
            using B = std::decay_t<decltype(body)>;
            if constexpr (std::is_same_v<B, BellConfig>) return run_bell(cfg, body);
            else if constexpr (std::is_same_v<B, MandelConfig>) return run_mandel(cfg, body);
            else if constexpr (std::is_same_v<B, SqueezeConfig>) return run_squeeze(cfg, body);
            else if constexpr (std::is_same_v<B, DgczConfig>) return run_dgcz(cfg, body);
            else return run_pdt_info(cfg, body);
        },
        cfg.body);
    write_manifest(cfg, outcome);
    return outcome;
}

int run_command(const std::filesystem::path& config_path, const std::optional<std::filesystem::path>& out_dir,
                const std::optional<std::uint64_t>& seed_override, std::ostream& err) {
    const auto start = std::chrono::steady_clock::now();
    try {
        RunConfig cfg = load_config(config_path);
        if (out_dir) cfg.out_dir = *out_dir;
        if (seed_override) {
            cfg.seed = *seed_override;
            cfg.source["seed"] = *seed_override;
        }
        const RunOutcome outcome = run(cfg);
        const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        // Wall time stays out of the artifacts so reruns are byte-identical.
        err << json{{"status", "ok"}, {"wall_time_s", seconds}}.dump() << "\n";
        if (outcome.all_selections_empty) {
            report(err, "empty-selection", "every sweep point has an empty selection");
            return kExitEmptySelection;
        }
        return kExitOk;
    } catch (const ConfigError& e) {
        report(err, e.category(), e.what());
        return kExitConfig;
    } catch (const EmptySelectionError& e) {
        report(err, e.category(), e.what());
        return kExitEmptySelection;
    } catch (const InvalidArgument& e) {
        report(err, "config", e.what());
        return kExitConfig;
    } catch (const AccuracyError& e) {
        report(err, e.category(), e.what());
        return kExitNumerical;
    } catch (const SingularityError& e) {
        report(err, e.category(), e.what());
        return kExitNumerical;
    } catch (const std::exception& e) {
        report(err, "error", e.what());
        return kExitOther;
    }
}

}  // namespace atmq::cli
