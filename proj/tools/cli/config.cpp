#include "cli/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <utility>

namespace atmq::cli {

using nlohmann::json;

std::string to_string(Scenario s) {
    switch (s) {
        case Scenario::bell: return "bell";
        case Scenario::mandel: return "mandel";
        case Scenario::squeeze: return "squeeze";
        case Scenario::dgcz: return "dgcz";
        case Scenario::pdt_info: return "pdt-info";
    }
    return "unknown";
}

namespace {

// Typed access to one JSON object. Every key must be consumed; finish()
// rejects the rest.
class Object {
  public:
    Object(const json& j, std::string path) : j_(j), path_(std::move(path)) {
        if (!j_.is_object()) fail("expected an object");
    }

    [[nodiscard]] bool has(const std::string& key) const { return j_.contains(key); }

    const json& raw(const std::string& key) {
        if (!j_.contains(key)) fail("missing required key '" + key + "'");
        used_.insert(key);
        return j_.at(key);
    }

    double number(const std::string& key) {
        const json& v = raw(key);
        if (!v.is_number()) fail("'" + key + "' must be a number");
        const double x = v.get<double>();
        if (!std::isfinite(x)) fail("'" + key + "' must be finite");
        return x;
    }

    double number_or(const std::string& key, double fallback) { return has(key) ? number(key) : fallback; }

    std::uint64_t unsigned_integer(const std::string& key) {
        const json& v = raw(key);
        if (!v.is_number_unsigned()) fail("'" + key + "' must be a non-negative integer");
        return v.get<std::uint64_t>();
    }

    std::uint64_t unsigned_or(const std::string& key, std::uint64_t fallback) {
        return has(key) ? unsigned_integer(key) : fallback;
    }

    std::string string(const std::string& key) {
        const json& v = raw(key);
        if (!v.is_string()) fail("'" + key + "' must be a string");
        return v.get<std::string>();
    }

    Object object(const std::string& key) { return Object(raw(key), path_ + "." + key); }

    Complex complex_or(const std::string& key, Complex fallback) {
        if (!has(key)) return fallback;
        const json& v = raw(key);
        if (v.is_number()) return {v.get<double>(), 0.0};
        if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
            fail("'" + key + "' must be a number or a [re, im] pair");
        }
        return {v[0].get<double>(), v[1].get<double>()};
    }

    std::vector<double> numbers(const std::string& key) {
        const json& v = raw(key);
        if (!v.is_array()) fail("'" + key + "' must be an array of numbers");
        std::vector<double> out;
        for (const auto& x : v) {
            if (!x.is_number()) fail("'" + key + "' must be an array of numbers");
            out.push_back(x.get<double>());
        }
        return out;
    }

    /// Either an explicit array or {"start", "stop", "count"} (inclusive).
    std::vector<double> grid(const std::string& key) {
        const json& v = raw(key);
        if (v.is_array()) {
            used_.erase(key);
            auto out = numbers(key);
            if (out.empty()) fail("'" + key + "' must not be empty");
            return out;
        }
        Object g(v, path_ + "." + key);
        const double start = g.number("start");
        const double stop = g.number("stop");
        const std::uint64_t count = g.unsigned_integer("count");
        g.finish();
        if (count < 1) g.fail("count must be >= 1");
        if (count == 1) return {start};
        std::vector<double> out(count);
        for (std::uint64_t i = 0; i < count; ++i) {
            out[i] = start + (stop - start) * static_cast<double>(i) / static_cast<double>(count - 1);
        }
        out.back() = stop;
        return out;
    }

    void finish() const {
        for (const auto& item : j_.items()) {
            if (!used_.count(item.key())) fail("unknown key '" + item.key() + "'");
        }
    }

    [[noreturn]] void fail(const std::string& message) const { throw ConfigError(path_ + ": " + message); }

    [[nodiscard]] const std::string& path() const { return path_; }

  private:
    const json& j_;
    std::string path_;
    std::set<std::string> used_;
};

struct Context {
    std::filesystem::path base_dir;
    std::vector<IngestReport>* ingested;
};

TransmittanceDistribution parse_pdt(Object o, Context& ctx) {
    const std::string type = o.string("type");
    std::optional<TransmittanceDistribution> dist;
    if (type == "dirac") {
        dist = TransmittanceDistribution::dirac(o.number("eta"));
    } else if (type == "lognormal") {
        dist = TransmittanceDistribution::lognormal(o.number("mu"), o.number("sigma"));
    } else if (type == "beta") {
        dist = TransmittanceDistribution::beta(o.number("p"), o.number("q"));
    } else if (type == "empirical") {
        if (o.has("file") == o.has("bins")) o.fail("empirical PDT needs exactly one of 'file' or 'bins'");
        if (o.has("file")) {
            std::filesystem::path file = o.string("file");
            if (file.is_relative()) file = ctx.base_dir / file;
            IngestResult r = ingest_pdt_file(file.string());
            ctx.ingested->push_back({file.lexically_normal().string(), r.bin_count, r.renormalization_factor});
            dist = std::move(r.dist);
        } else {
            const json& bins = o.raw("bins");
            if (!bins.is_array() || bins.empty()) o.fail("'bins' must be a non-empty array of [eta, weight]");
            std::vector<EmpiricalBin> out;
            for (const auto& b : bins) {
                if (!b.is_array() || b.size() != 2 || !b[0].is_number() || !b[1].is_number()) {
                    o.fail("'bins' must be a non-empty array of [eta, weight]");
                }
                out.push_back({b[0].get<double>(), b[1].get<double>()});
            }
            dist = TransmittanceDistribution::empirical(std::move(out));
        }
    } else {
        o.fail("unknown PDT type '" + type + "' (dirac, lognormal, beta, empirical)");
    }
    if (o.has("eta_det")) dist = scale(*dist, o.number("eta_det"));
    if (o.has("threshold")) dist = truncate(*dist, {o.number("threshold"), SelectionKind::preselection});
    o.finish();
    return *dist;
}

JointTransmittanceDistribution parse_channel(Object o, Context& ctx) {
    const std::string kind = o.string("kind");
    std::optional<JointTransmittanceDistribution> joint;
    if (kind == "correlated") {
        joint = JointTransmittanceDistribution::perfectly_correlated(parse_pdt(o.object("pdt"), ctx));
    } else if (kind == "product" || kind == "adaptive") {
        auto a = parse_pdt(o.object("a"), ctx);
        auto b = parse_pdt(o.object("b"), ctx);
        joint = kind == "product" ? JointTransmittanceDistribution::product(std::move(a), std::move(b))
                                  : adaptive_correlate(a, b);
    } else {
        o.fail("unknown channel kind '" + kind + "' (correlated, product, adaptive)");
    }
    o.finish();
    return *joint;
}

DetectorModel parse_detector(Object o) {
    DetectorModel d;
    d.efficiency = o.number_or("efficiency", 1.0);
    d.noise = o.number_or("noise", 0.0);
    o.finish();
    d.validate();
    return d;
}

QuadratureSpec parse_quadrature(Object o) {
    QuadratureSpec q;
    q.rel_tol = o.number_or("rel_tol", q.rel_tol);
    q.abs_tol = o.number_or("abs_tol", q.abs_tol);
    q.max_depth = static_cast<int>(o.unsigned_or("max_depth", static_cast<std::uint64_t>(q.max_depth)));
    o.finish();
    q.validate();
    return q;
}

BellConfig parse_bell(Object& root, Context& ctx, const QuadratureSpec& quad) {
    BellConfig c;
    c.settings.quadrature = quad;
    c.settings.xi = SqueezeParameter(root.number_or("xi", 0.0));
    if (root.has("detector")) c.settings.detector = parse_detector(root.object("detector"));
    c.settings.joint = parse_channel(root.object("channel"), ctx);
    if (root.has("angles")) {
        Object a = root.object("angles");
        const auto ta = a.numbers("a");
        const auto tb = a.numbers("b");
        a.finish();
        if (ta.size() != 2 || tb.size() != 2) a.fail("'a' and 'b' need exactly two angles each");
        c.settings.theta_a = {ta[0], ta[1]};
        c.settings.theta_b = {tb[0], tb[1]};
    }
    Object sweep = root.object("sweep");
    const std::string kind = sweep.string("kind");
    if (kind == "squeeze") {
        c.kind = BellSweepKind::squeeze;
    } else if (kind == "preselection") {
        c.kind = BellSweepKind::preselection;
    } else {
        sweep.fail("unknown sweep kind '" + kind + "' (squeeze, preselection)");
    }
    c.grid = sweep.grid("grid");
    sweep.finish();
    for (double g : c.grid) {
        if (c.kind == BellSweepKind::squeeze && !(g >= 0.0)) sweep.fail("squeeze grid values must be >= 0");
        if (c.kind == BellSweepKind::preselection && !(g >= 0.0 && g < 1.0)) {
            sweep.fail("preselection thresholds must lie in [0, 1)");
        }
    }
    return c;
}

MandelConfig parse_mandel(Object& root, Context& ctx) {
    MandelConfig c{parse_pdt(root.object("pdt"), ctx), {}, {}};
    if (root.has("detector")) c.detector = parse_detector(root.object("detector"));
    const json& inputs = root.raw("inputs");
    if (!inputs.is_array() || inputs.empty()) root.fail("'inputs' must be a non-empty array");
    for (std::size_t i = 0; i < inputs.size(); ++i) {
        Object in(inputs[i], root.path() + ".inputs[" + std::to_string(i) + "]");
        const std::string type = in.string("type");
        MandelInput m;
        if (type == "fock") {
            const auto n = in.unsigned_integer("n");
            if (n > 10000) in.fail("'n' is too large");
            m.photon_numbers.assign(n + 1, 0.0);
            m.photon_numbers[n] = 1.0;
            m.label = "fock:" + std::to_string(n);
        } else if (type == "photon_numbers") {
            m.photon_numbers = in.numbers("p");
            if (m.photon_numbers.empty()) in.fail("'p' must not be empty");
            m.label = "photon_numbers:" + std::to_string(i);
        } else if (type == "coherent") {
            m.coherent = true;
            m.intensity = in.number("intensity");
            if (!(m.intensity >= 0.0)) in.fail("'intensity' must be >= 0");
            m.label = "coherent:" + format_number(m.intensity);
        } else {
            in.fail("unknown input type '" + type + "' (fock, photon_numbers, coherent)");
        }
        in.finish();
        c.inputs.push_back(std::move(m));
    }
    return c;
}

SqueezeConfig parse_squeeze(Object& root, Context& ctx) {
    Object st = root.object("state");
    const double db = st.number("squeezing_db");
    const double phase = st.number_or("phase", 0.0);
    const Complex displacement = st.complex_or("displacement", {});
    st.finish();
    SqueezeConfig c{squeezed_vacuum(squeeze_from_db(db), phase, displacement), db,
                    parse_pdt(root.object("pdt"), ctx), root.number_or("phi", 0.0), {}, std::nullopt};
    c.thresholds = root.has("thresholds") ? root.grid("thresholds") : std::vector<double>{0.0};
    for (double t : c.thresholds) {
        if (!(t >= 0.0 && t < 1.0)) root.fail("thresholds must lie in [0, 1)");
    }
    if (root.has("homodyne")) {
        Object h = root.object("homodyne");
        HomodyneModel model;
        model.lo_amplitude = h.number_or("lo_amplitude", model.lo_amplitude);
        model.noise = h.number_or("noise", model.noise);
        model.eta_min = h.number_or("eta_min", model.eta_min);
        h.finish();
        model.validate();
        c.homodyne = model;
    }
    return c;
}

DgczConfig parse_dgcz(Object& root, Context& ctx) {
    DgczConfig c;
    const std::string mode = root.string("mode");
    c.xis = root.numbers("xi");
    if (c.xis.empty()) root.fail("'xi' must not be empty");
    for (double xi : c.xis) {
        if (!(xi > 0.0)) root.fail("'xi' values must be > 0");
    }
    if (mode == "domain") {
        c.mode = DgczMode::domain;
        Object g = root.object("grid");
        c.lo = g.number("lo");
        c.hi = g.number("hi");
        c.count = g.unsigned_integer("count");
        g.finish();
        if (!(c.lo < c.hi) || c.count < 2) g.fail("need lo < hi and count >= 2");
    } else if (mode == "certify") {
        c.mode = DgczMode::certify;
        c.channel = parse_channel(root.object("channel"), ctx);
        if (root.has("displacement")) {
            Object d = root.object("displacement");
            c.d_a = d.complex_or("a", {});
            c.d_b = d.complex_or("b", {});
            d.finish();
        }
    } else {
        root.fail("unknown dgcz mode '" + mode + "' (domain, certify)");
    }
    return c;
}

PdtInfoConfig parse_pdt_info(Object& root, Context& ctx) {
    PdtInfoConfig c{parse_pdt(root.object("pdt"), ctx), 100000};
    c.samples = root.unsigned_or("samples", c.samples);
    if (c.samples < 2) root.fail("'samples' must be >= 2");
    return c;
}

}  // namespace

RunConfig parse_config(const json& doc, const std::filesystem::path& base_dir) {
    RunConfig cfg;
    cfg.source = doc;
    Context ctx{base_dir, &cfg.ingested};
    Object root(doc, "config");
    try {
        const std::string scenario = root.string("scenario");
        cfg.seed = root.unsigned_or("seed", 0);
        cfg.threads = static_cast<unsigned>(root.unsigned_or("threads", 1));
        if (cfg.threads < 1 || cfg.threads > 256) root.fail("'threads' must lie in [1, 256]");
        if (root.has("output")) {
            Object out = root.object("output");
            cfg.out_dir = out.string("dir");
            out.finish();
        }
        if (root.has("quadrature")) cfg.quadrature = parse_quadrature(root.object("quadrature"));

        if (scenario == "bell") {
            cfg.scenario = Scenario::bell;
            cfg.body = parse_bell(root, ctx, cfg.quadrature);
        } else if (scenario == "mandel") {
            cfg.scenario = Scenario::mandel;
            cfg.body = parse_mandel(root, ctx);
        } else if (scenario == "squeeze") {
            cfg.scenario = Scenario::squeeze;
            cfg.body = parse_squeeze(root, ctx);
        } else if (scenario == "dgcz") {
            cfg.scenario = Scenario::dgcz;
            cfg.body = parse_dgcz(root, ctx);
        } else if (scenario == "pdt-info") {
            cfg.scenario = Scenario::pdt_info;
            cfg.body = parse_pdt_info(root, ctx);
        } else {
            root.fail("unknown scenario '" + scenario + "' (bell, mandel, squeeze, dgcz, pdt-info)");
        }
        root.finish();
    } catch (const InvalidArgument& e) {
        throw ConfigError(std::string("config: ") + e.what());
    } catch (const ParseError& e) {
        throw ConfigError(std::string("config: PDT file ") + e.what());
    }
    return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("config is not valid JSON: " + std::string(e.what()));
    }
    return parse_config(doc, path.parent_path());
}

}  // namespace atmq::cli
