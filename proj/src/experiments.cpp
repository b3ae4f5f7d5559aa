#include "harnack_lab/experiments.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <ostream>
#include <sstream>
#include <thread>

#include "harnack_lab/analysis.hpp"
#include "harnack_lab/elliptic.hpp"
#include "harnack_lab/geometry.hpp"
#include "harnack_lab/heleshaw.hpp"
#include "harnack_lab/io.hpp"
#include "harnack_lab/spectral.hpp"

namespace harnack::experiments {

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

namespace {

ordered_json schema_number() { return ordered_json{{"type", "number"}}; }
ordered_json schema_integer() { return ordered_json{{"type", "integer"}}; }
ordered_json schema_bool() { return ordered_json{{"type", "boolean"}}; }
ordered_json schema_string() { return ordered_json{{"type", "string"}}; }

ordered_json schema_object(ordered_json properties, std::vector<std::string> required = {}) {
    ordered_json s{{"type", "object"},
                   {"properties", std::move(properties)},
                   {"additionalProperties", false}};
    if (!required.empty()) s["required"] = required;
    return s;
}

}  // namespace

ordered_json config_schema() {
    ordered_json domain = schema_object(
        {{"kind", ordered_json{{"type", "string"},
                               {"enum", {"sector", "cone", "lipschitz_graph", "disk",
                                         "polygon"}}}},
         {"dim", schema_integer()},
         {"aperture", schema_number()},
         {"slope", schema_number()},
         {"vertices",
          ordered_json{{"type", "array"},
                       {"items", ordered_json{{"type", "array"},
                                              {"items", schema_number()}}}}},
         {"radius", schema_number()}},
        {"kind"});
    ordered_json coefficients = schema_object(
        {{"kind", ordered_json{{"type", "string"}, {"enum", {"identity", "checkerboard"}}}},
         {"lambda", schema_number()},
         {"lo", schema_number()},
         {"hi", schema_number()},
         {"period", schema_integer()},
         {"b", ordered_json{{"type", "array"}, {"items", schema_number()}}},
         {"c", schema_number()}});
    ordered_json grid = schema_object({{"h", schema_number()}, {"levels", schema_integer()}});
    ordered_json solver =
        schema_object({{"tol", schema_number()}, {"max_iter", schema_integer()}});
    ordered_json analysis = schema_object({{"levels", schema_integer()},
                                           {"margin", schema_number()},
                                           {"pair_budget", schema_integer()},
                                           {"seed", schema_integer()},
                                           {"beta", schema_number()}});
    ordered_json heleshaw = schema_object(
        {{"source", ordered_json{{"type", "array"}, {"items", schema_number()}}},
         {"corner", ordered_json{{"type", "array"}, {"items", schema_number()}}},
         {"t", schema_number()},
         {"t_max", schema_number()},
         {"steps", schema_integer()}});
    ordered_json sumdiv = schema_object(
        {{"family",
          ordered_json{{"type", "string"}, {"enum", {"harmonic", "constant", "squares"}}}},
         {"horizon", schema_integer()},
         {"input", schema_string()},
         {"j_max", schema_integer()}});

    return schema_object(
        {{"experiment",
          ordered_json{{"type", "string"},
                       {"enum", {"alpha", "pair", "ratio", "growth", "weiss", "fredholm",
                                 "holder", "sumdiv", "heleshaw", "threshold-sweep"}}}},
         {"domain", domain},
         {"gamma", schema_number()},
         {"coefficients", coefficients},
         {"grid", grid},
         {"solver", solver},
         {"analysis", analysis},
         {"heleshaw", heleshaw},
         {"sumdiv", sumdiv},
         {"apertures", ordered_json{{"type", "array"}, {"items", schema_number()}}},
         {"dim", schema_integer()},
         {"nodes", schema_integer()},
         {"svg", schema_bool()},
         {"out_dir", schema_string()}},
        {"experiment"});
}

namespace {

void validate_against(const ordered_json& schema, const json& value, const std::string& path,
                      std::vector<std::string>& out) {
    const std::string type = schema.at("type").get<std::string>();
    auto fail = [&](const std::string& msg) { out.push_back(path + ": " + msg); };

    if (type == "object") {
        if (!value.is_object()) return fail("expected object");
        const auto& props = schema.at("properties");
        for (auto it = value.begin(); it != value.end(); ++it) {
            if (!props.contains(it.key())) {
                fail("unknown key '" + it.key() + "'");
                continue;
            }
            validate_against(props.at(it.key()), it.value(), path + "." + it.key(), out);
        }
        if (schema.contains("required"))
            for (const auto& req : schema.at("required"))
                if (!value.contains(req.get<std::string>()))
                    fail("missing required key '" + req.get<std::string>() + "'");
    } else if (type == "array") {
        if (!value.is_array()) return fail("expected array");
        if (schema.contains("items"))
            for (std::size_t i = 0; i < value.size(); ++i)
                validate_against(schema.at("items"), value[i],
                                 path + "[" + std::to_string(i) + "]", out);
    } else if (type == "number") {
        if (!value.is_number()) fail("expected number");
    } else if (type == "integer") {
        if (!value.is_number_integer()) fail("expected integer");
    } else if (type == "boolean") {
        if (!value.is_boolean()) fail("expected boolean");
    } else if (type == "string") {
        if (!value.is_string()) return fail("expected string");
        if (schema.contains("enum")) {
            bool ok = false;
            for (const auto& e : schema.at("enum"))
                ok = ok || e.get<std::string>() == value.get<std::string>();
            if (!ok) fail("value '" + value.get<std::string>() + "' not in enum");
        }
    }
}

struct Common {
    DomainSpec domain;
    bool has_domain = false;
    double gamma = 0.0;
    double h = 1.0 / 64.0;
    double tol = 1e-10;
    int max_iter = 100000;
    int levels = 6;
    double margin = 2.0;
    int pair_budget = 100000;
    std::uint64_t seed = 42;
    double beta = 0.5;
    bool svg = false;
    elliptic::CoefficientField coeffs;
};

Common parse_common(const json& cfg) {
    Common c;
    if (cfg.contains("domain")) {
        c.domain = cfg.at("domain").get<DomainSpec>();
        c.has_domain = true;
    }
    c.gamma = cfg.value("gamma", 0.0);
    if (cfg.contains("grid")) {
        const auto& g = cfg.at("grid");
        if (g.contains("h"))
            c.h = g.at("h").get<double>();
        else if (g.contains("levels"))
            c.h = std::pow(2.0, -g.at("levels").get<int>());
    }
    if (cfg.contains("solver")) {
        c.tol = cfg.at("solver").value("tol", 1e-10);
        c.max_iter = cfg.at("solver").value("max_iter", 100000);
    }
    if (cfg.contains("analysis")) {
        const auto& a = cfg.at("analysis");
        c.levels = a.value("levels", 6);
        c.margin = a.value("margin", 2.0);
        c.pair_budget = a.value("pair_budget", 100000);
        c.seed = std::uint64_t(a.value("seed", 42));
        c.beta = a.value("beta", 0.5);
    }
    c.svg = cfg.value("svg", false);
    if (cfg.contains("coefficients")) {
        const auto& co = cfg.at("coefficients");
        const std::string kind = co.value("kind", "identity");
        if (kind == "checkerboard") {
            c.coeffs.kind = elliptic::CoefficientKind::Checkerboard;
            c.coeffs.checker_lo = co.value("lo", 0.5);
            c.coeffs.checker_hi = co.value("hi", 2.0);
            c.coeffs.checker_period = co.value("period", 1);
        }
        c.coeffs.lambda = co.value("lambda", kind == "checkerboard" ? 2.0 : 1.0);
        if (co.contains("b")) {
            const auto b = co.at("b").get<std::vector<double>>();
            for (std::size_t d = 0; d < b.size() && d < 3; ++d) c.coeffs.b[d] = b[d];
        }
        c.coeffs.c = co.value("c", 0.0);
        if (c.coeffs.c != 0.0 || c.coeffs.b[0] != 0.0 || c.coeffs.b[1] != 0.0 ||
            c.coeffs.b[2] != 0.0)
            c.coeffs.lambda = std::max(c.coeffs.lambda,
                                       1.0 + std::abs(c.coeffs.c) + std::abs(c.coeffs.b[0]) +
                                           std::abs(c.coeffs.b[1]) + std::abs(c.coeffs.b[2]));
    }
    return c;
}

Point default_anchor(const DomainSpec& spec) {
    Point a{0.0, 0.0, 0.0};
    a[std::size_t(spec.dim) - 1] = 0.4 * spec.radius;
    return a;
}

double domain_alpha1(const DomainSpec& spec) {
    switch (spec.kind) {
        case DomainKind::Sector:
            return spectral::alpha_sector(spec.aperture, 1);
        case DomainKind::Cone:
            if (spec.dim == 2)
                return spectral::alpha_sector(2.0 * spec.aperture, 1);
            return spectral::alpha_axisymmetric(spec.dim, spec.aperture, 1).alpha1;
        case DomainKind::LipschitzGraph: {
            // Exponent of the matching cone C_L (the comparison barrier).
            const double opening = std::numbers::pi - 2.0 * std::atan(spec.slope);
            return spectral::alpha_sector(opening, 1);
        }
        default:
            throw std::invalid_argument("alpha: unsupported domain kind");
    }
}

struct RunContext {
    fs::path out_dir;
    std::vector<std::string> artifacts;
    bool svg = false;

    fs::path file(const std::string& name) {
        artifacts.push_back(name);
        return out_dir / name;
    }
};

void maybe_plot(RunContext& ctx, const std::string& stem, const std::string& title,
                const std::vector<double>& x, const std::vector<double>& y) {
    if (!ctx.svg || x.empty()) return;
    io::write_svg_plot(ctx.file(stem + ".svg"), title, {stem}, {x}, {y});
}

ordered_json exp_alpha(const Common& c, RunContext& ctx) {
    if (!c.has_domain) throw std::invalid_argument("alpha: config requires a domain");
    ordered_json rep;
    rep["experiment"] = "alpha";
    if (c.domain.kind == DomainKind::Cone && c.domain.dim >= 3) {
        const auto hr = spectral::alpha_axisymmetric(c.domain.dim, c.domain.aperture, 1);
        ordered_json jr;
        spectral::to_json(jr, hr);
        rep.update(jr);
        io::CsvSeries f1{"alpha f1 profile dim=" + std::to_string(hr.dim),
                         {"theta", "f1"},
                         {}};
        for (std::size_t i = 0; i < hr.theta.size(); ++i)
            f1.rows.push_back({hr.theta[i], hr.f1_samples[i]});
        io::write_csv(ctx.file("f1.csv"), f1);
    } else {
        const double alpha1 = domain_alpha1(c.domain);
        rep["alpha1"] = alpha1;
        if (c.domain.kind != DomainKind::LipschitzGraph) {
            const double opening = c.domain.kind == DomainKind::Sector
                                       ? c.domain.aperture
                                       : 2.0 * c.domain.aperture;
            rep["alpha2"] = spectral::alpha_sector(opening, 2);
        }
        rep["lambda1"] = alpha1 * (alpha1 + c.domain.dim - 2);
    }
    rep["gamma"] = c.gamma;
    rep["verdict"] = analysis::to_string(
        analysis::threshold_verdict(rep.at("alpha1").get<double>(), c.gamma));
    return rep;
}

ordered_json exp_pair(const Common& c, RunContext& ctx) {
    if (!c.has_domain) throw std::invalid_argument("pair: config requires a domain");
    const auto pair = elliptic::solve_pair(c.domain, c.gamma, c.h, c.tol, &c.coeffs, c.max_iter);
    io::write_field_csv(ctx.file("u.csv"), pair.u, "pair u");
    io::write_field_csv(ctx.file("v.csv"), pair.v, "pair v");
    io::write_field_binary(ctx.file("u.bin"), pair.u);
    io::write_field_binary(ctx.file("v.bin"), pair.v);

    ordered_json rep;
    rep["experiment"] = "pair";
    rep["h"] = c.h;
    rep["gamma"] = c.gamma;
    rep["cells"] = pair.u.grid->interior_count();
    if (c.domain.kind == DomainKind::Disk) {
        const double v0 = pair.v.value({0.0, 0.0, 0.0});
        rep["v_at_origin"] = v0;
        rep["disk_poisson_error"] =
            std::abs(v0 - c.domain.radius * c.domain.radius / 4.0);
    }
    return rep;
}

ordered_json exp_ratio(const Common& c, RunContext& ctx) {
    if (!c.has_domain) throw std::invalid_argument("ratio: config requires a domain");
    const auto pair = elliptic::solve_pair(c.domain, c.gamma, c.h, c.tol, &c.coeffs, c.max_iter);
    const Point anchor = default_anchor(c.domain);
    const auto prof = analysis::ratio_profile(pair.u, pair.v, anchor, c.levels, c.margin);
    const double alpha1 = domain_alpha1(c.domain);
    const auto incr =
        analysis::dyadic_increments(pair.u, pair.v, anchor, alpha1, c.levels, c.margin);

    io::CsvSeries rc{"ratio profile h=" + io::format_double(c.h), {"r", "sup_ratio"}, {}};
    for (std::size_t i = 0; i < prof.radii.size(); ++i)
        rc.rows.push_back({prof.radii[i], prof.sup_ratio[i]});
    io::write_csv(ctx.file("ratio.csv"), rc);
    maybe_plot(ctx, "ratio", "sup ratio vs r", prof.radii, prof.sup_ratio);

    io::CsvSeries ic{"dyadic increments alpha1=" + io::format_double(alpha1),
                     {"k", "a_k"},
                     {}};
    for (std::size_t i = 0; i < incr.k.size(); ++i)
        ic.rows.push_back({double(incr.k[i]), incr.a[i]});
    io::write_csv(ctx.file("increments.csv"), ic);

    ordered_json rep;
    rep["experiment"] = "ratio";
    rep["h"] = c.h;
    rep["gamma"] = c.gamma;
    rep["alpha1"] = alpha1;
    rep["verdict"] = analysis::to_string(analysis::threshold_verdict(alpha1, c.gamma));
    ordered_json jp;
    analysis::to_json(jp, prof);
    rep["profile"] = jp;
    return rep;
}

ordered_json exp_growth(const Common& c, RunContext& ctx) {
    if (!c.has_domain) throw std::invalid_argument("growth: config requires a domain");
    const auto pair = elliptic::solve_pair(c.domain, c.gamma, c.h, c.tol, &c.coeffs, c.max_iter);
    const auto fit = analysis::growth_exponent(pair.u, {0.0, 0.0, 0.0});

    io::CsvSeries gc{"growth sups", {"r", "sup_u"}, {}};
    for (std::size_t i = 0; i < fit.radii.size(); ++i)
        gc.rows.push_back({fit.radii[i], fit.sups[i]});
    io::write_csv(ctx.file("growth.csv"), gc);
    maybe_plot(ctx, "growth", "sup u vs r", fit.radii, fit.sups);

    ordered_json rep;
    rep["experiment"] = "growth";
    rep["h"] = c.h;
    ordered_json jf;
    analysis::to_json(jf, fit);
    rep.update(jf);
    rep["alpha1_reference"] = domain_alpha1(c.domain);
    return rep;
}

ordered_json exp_weiss(const Common& c, RunContext& ctx) {
    if (!c.has_domain) throw std::invalid_argument("weiss: config requires a domain");
    const auto pair = elliptic::solve_pair(c.domain, c.gamma, c.h, c.tol, &c.coeffs, c.max_iter);
    analysis::GridFieldView view(pair.v);
    std::vector<double> radii;
    const double R = c.domain.radius;
    for (int i = 0; i < c.levels + 4; ++i) {
        const double r = R / 2.0 * std::pow(2.0, -0.5 * i);
        if (r <= 8.0 * c.h) break;
        radii.push_back(r * 0.98);
    }
    const auto tr = analysis::weiss_trace(view, radii);
    io::CsvSeries wc{"weiss trace h=" + io::format_double(c.h), {"r", "W"}, {}};
    for (std::size_t i = 0; i < tr.radii.size(); ++i)
        wc.rows.push_back({tr.radii[i], tr.W[i]});
    io::write_csv(ctx.file("weiss.csv"), wc);
    maybe_plot(ctx, "weiss", "W(r, v)", tr.radii, tr.W);

    ordered_json rep;
    rep["experiment"] = "weiss";
    rep["h"] = c.h;
    ordered_json jt;
    analysis::to_json(jt, tr);
    rep.update(jt);
    return rep;
}

ordered_json exp_fredholm(const json& cfg, RunContext&) {
    const int dim = cfg.value("dim", 2);
    const int nodes = cfg.value("nodes", 2048);
    ordered_json rep;
    rep["experiment"] = "fredholm";
    rep["dim"] = dim;
    rep["nodes"] = nodes;
    rep["residual"] = spectral::fredholm_residual(dim, nodes);
    rep["residual_coarse"] = spectral::fredholm_residual(dim, nodes / 2);
    rep["critical_aperture"] = spectral::critical_aperture(dim);
    return rep;
}

ordered_json exp_holder(const Common& c, RunContext&) {
    if (!c.has_domain) throw std::invalid_argument("holder: config requires a domain");
    const auto pair = elliptic::solve_pair(c.domain, c.gamma, c.h, c.tol, &c.coeffs, c.max_iter);
    const auto est =
        analysis::holder_quotient(pair.u, pair.v, c.beta, c.pair_budget, c.seed, c.margin);
    ordered_json rep;
    rep["experiment"] = "holder";
    rep["h"] = c.h;
    rep["beta"] = est.beta;
    rep["seminorm"] = est.seminorm;
    rep["pairs"] = est.pairs;
    rep["seed"] = est.seed;
    rep["pair_budget"] = c.pair_budget;
    return rep;
}

ordered_json exp_sumdiv(const json& cfg, RunContext& ctx) {
    std::vector<double> a;
    int j_max = 5;
    if (cfg.contains("sumdiv")) {
        const auto& sd = cfg.at("sumdiv");
        j_max = sd.value("j_max", 5);
        const int horizon = sd.value("horizon", 100000);
        const std::string family = sd.value("family", "");
        if (!family.empty()) {
            a.resize(std::size_t(horizon));
            for (int k = 1; k <= horizon; ++k) {
                double v = 0.0;
                if (family == "harmonic")
                    v = 1.0 / k;
                else if (family == "constant")
                    v = 1.0;
                else if (family == "squares") {
                    const int r = int(std::lround(std::sqrt(double(k))));
                    v = (r * r == k) ? 1.0 : 0.0;
                }
                a[std::size_t(k) - 1] = v;
            }
        } else if (sd.contains("input")) {
            std::ifstream is(sd.at("input").get<std::string>());
            if (!is) throw std::invalid_argument("sumdiv: cannot open input file");
            double v;
            while (is >> v) a.push_back(v);
        }
    }
    if (a.empty()) throw std::invalid_argument("sumdiv: no input sequence");
    const auto res = analysis::sumdiv_subsequence(a, j_max);

    io::CsvSeries rt{"sumdiv ratio table", {"k_l"}, {}};
    for (int j = 1; j <= j_max; ++j) rt.columns.push_back("ratio_j" + std::to_string(j));
    for (std::size_t l = 0; l < res.indices.size(); ++l) {
        std::vector<double> row{double(res.indices[l])};
        for (int j = 1; j <= j_max; ++j)
            row.push_back(res.ratio_table[std::size_t(j) - 1][l]);
        rt.rows.push_back(row);
    }
    io::write_csv(ctx.file("ratio_table.csv"), rt);

    ordered_json rep;
    rep["experiment"] = "sumdiv";
    ordered_json js;
    analysis::to_json(js, res);
    rep["selected_count"] = res.indices.size();
    rep["branch"] = js.at("branch");
    io::write_json(ctx.file("subsequence.json"), js);
    return rep;
}

ordered_json exp_heleshaw(const json& cfg, const Common& c, RunContext& ctx) {
    if (!c.has_domain) throw std::invalid_argument("heleshaw: config requires a domain");
    if (!cfg.contains("heleshaw"))
        throw std::invalid_argument("heleshaw: config requires a heleshaw block");
    const auto& hs = cfg.at("heleshaw");
    Point source{0.0, 0.0, 0.0};
    if (hs.contains("source")) {
        const auto s = hs.at("source").get<std::vector<double>>();
        for (std::size_t d = 0; d < s.size() && d < 3; ++d) source[d] = s[d];
    }
    heleshaw::Options opts;
    opts.tol = c.tol;

    ordered_json rep;
    rep["experiment"] = "heleshaw";
    rep["h"] = c.h;
    if (hs.contains("corner")) {
        Point corner{0.0, 0.0, 0.0};
        const auto cc = hs.at("corner").get<std::vector<double>>();
        for (std::size_t d = 0; d < cc.size() && d < 3; ++d) corner[d] = cc[d];
        const double t_max = hs.value("t_max", 1.0);
        const int steps = hs.value("steps", 12);
        const auto wr = heleshaw::wets_corner(c.domain, corner, source, t_max, steps, c.h, opts);
        ordered_json jw;
        heleshaw::to_json(jw, wr);
        io::write_json(ctx.file("wetting.json"), jw);
        rep["wet"] = wr.wet;
        if (wr.first_t) rep["first_wet_t"] = *wr.first_t;
        rep["corner_angle"] = wr.corner_angle;
        rep["volume_balance_error"] = wr.volume_balance_error;
    } else {
        const double t = hs.value("t", 0.0);
        const auto st = heleshaw::heleshaw_solve(c.domain, source, t, c.h, opts);
        io::write_mask_csv(ctx.file("wet_mask.csv"), *st.grid(), st.wet);
        io::write_field_binary(ctx.file("u.bin"), st.u);
        rep["t"] = t;
        rep["wet_volume"] = st.wet_volume;
        rep["initial_volume"] = st.initial_volume;
        rep["volume_balance_error"] = st.volume_balance_error;
    }
    return rep;
}

ordered_json exp_threshold_sweep(const json& cfg, const Common& c, RunContext& ctx) {
    if (!cfg.contains("apertures"))
        throw std::invalid_argument("threshold-sweep: config requires apertures");
    const auto apertures = cfg.at("apertures").get<std::vector<double>>();
    std::string csv = "# threshold sweep gamma=" + io::format_double(c.gamma) + "\n";
    csv += "omega,alpha1,verdict\n";
    ordered_json rows = ordered_json::array();
    for (const double omega : apertures) {
        const double alpha1 = spectral::alpha_sector(omega, 1);
        const auto v = analysis::threshold_verdict(alpha1, c.gamma);
        csv += io::format_double(omega) + "," + io::format_double(alpha1) + "," +
               analysis::to_string(v) + "\n";
        rows.push_back(ordered_json{
            {"omega", omega}, {"alpha1", alpha1}, {"verdict", analysis::to_string(v)}});
    }
    io::write_text(ctx.file("threshold_sweep.csv"), csv);
    ordered_json rep;
    rep["experiment"] = "threshold-sweep";
    rep["gamma"] = c.gamma;
    rep["rows"] = rows;
    return rep;
}

void write_manifest(const json& cfg, const Common& c, RunContext& ctx) {
    ordered_json manifest;
    manifest["tool"] = ordered_json{{"name", "harnack_lab"}, {"version", io::kVersion}};
    manifest["config_hash"] = io::hash_hex(json(cfg).dump());
    manifest["config"] = cfg;
    manifest["grid"] = ordered_json{{"h", c.h}};
    manifest["tolerances"] =
        ordered_json{{"solver_tol", c.tol}, {"margin_cells", c.margin}};
    manifest["artifacts"] = ctx.artifacts;
    io::write_json(ctx.out_dir / "manifest.json", manifest);
}

}  // namespace

std::vector<std::string> validate_config(const json& config) {
    std::vector<std::string> out;
    if (!config.is_object()) {
        out.push_back("config: expected a JSON object");
        return out;
    }
    validate_against(config_schema(), config, "config", out);
    return out;
}

int run_experiment(json config, const fs::path& out_dir, std::ostream& log, bool quiet) {
    const auto diagnostics = validate_config(config);
    if (!diagnostics.empty()) {
        for (const auto& d : diagnostics) log << "config error: " << d << "\n";
        return kExitBadConfig;
    }
    try {
        fs::create_directories(out_dir);
        RunContext ctx;
        ctx.out_dir = out_dir;
        const Common c = parse_common(config);
        ctx.svg = c.svg;
        const std::string exp = config.at("experiment").get<std::string>();

        ordered_json rep;
        if (exp == "alpha")
            rep = exp_alpha(c, ctx);
        else if (exp == "pair")
            rep = exp_pair(c, ctx);
        else if (exp == "ratio")
            rep = exp_ratio(c, ctx);
        else if (exp == "growth")
            rep = exp_growth(c, ctx);
        else if (exp == "weiss")
            rep = exp_weiss(c, ctx);
        else if (exp == "fredholm")
            rep = exp_fredholm(config, ctx);
        else if (exp == "holder")
            rep = exp_holder(c, ctx);
        else if (exp == "sumdiv")
            rep = exp_sumdiv(config, ctx);
        else if (exp == "heleshaw")
            rep = exp_heleshaw(config, c, ctx);
        else if (exp == "threshold-sweep")
            rep = exp_threshold_sweep(config, c, ctx);

        io::write_json(ctx.file("report.json"), rep);
        write_manifest(config, c, ctx);
        if (!quiet) log << "wrote " << (out_dir / "report.json").string() << "\n";
        return kExitOk;
    } catch (const linalg::numerical_failure& e) {
        log << "numerical failure: " << e.what() << " (residual " << e.residual << " after "
            << e.iterations << " iterations)\n";
        return kExitNumericalFailure;
    } catch (const std::invalid_argument& e) {
        log << "config error: " << e.what() << "\n";
        return kExitBadConfig;
    } catch (const empty_domain_error& e) {
        log << "config error: " << e.what() << "\n";
        return kExitBadConfig;
    }
}

int run_sweep(json base_config, const std::string& param,
              const std::vector<json>& values, const fs::path& out_dir, std::ostream& log,
              bool quiet) {
    const auto diagnostics = validate_config(base_config);
    if (!diagnostics.empty()) {
        for (const auto& d : diagnostics) log << "config error: " << d << "\n";
        return kExitBadConfig;
    }
    fs::create_directories(out_dir);

    int threads = 1;
    if (const char* env = std::getenv("HARNACK_LAB_THREADS"))
        threads = std::max(1, std::atoi(env));
    threads = std::min(threads, int(std::max<std::size_t>(values.size(), 1)));

    struct Row {
        int status = -1;
        ordered_json report;
    };
    std::vector<Row> rows(values.size());
    std::atomic<std::size_t> next{0};

    auto worker = [&]() {
        std::ostringstream sink;
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= values.size()) break;
            json cfg = base_config;
            cfg[json::json_pointer("/" + param)] = values[i];
            const fs::path row_dir = out_dir / ("row_" + std::to_string(i));
            rows[i].status = run_experiment(cfg, row_dir, sink, true);
            if (rows[i].status == kExitOk) {
                std::ifstream is(row_dir / "report.json");
                rows[i].report = ordered_json::parse(is);
            }
        }
    };
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();

    // Aggregate scalar fields of the first successful report into columns.
    std::vector<std::string> keys;
    for (const auto& r : rows) {
        if (r.status != kExitOk) continue;
        for (auto it = r.report.begin(); it != r.report.end(); ++it)
            if (it.value().is_number() || it.value().is_string() || it.value().is_boolean())
                keys.push_back(it.key());
        break;
    }

    std::string csv = "row," + param + ",status";
    for (const auto& k : keys) csv += "," + k;
    csv += "\n";
    for (std::size_t i = 0; i < rows.size(); ++i) {
        csv += std::to_string(i) + "," + json(values[i]).dump() + "," +
               std::to_string(rows[i].status);
        for (const auto& k : keys) {
            csv += ",";
            if (rows[i].status == kExitOk && rows[i].report.contains(k)) {
                const auto& v = rows[i].report.at(k);
                if (v.is_number())
                    csv += io::format_double(v.get<double>());
                else if (v.is_string())
                    csv += v.get<std::string>();
                else
                    csv += v.dump();
            }
        }
        csv += "\n";
    }
    io::write_text(out_dir / "sweep.csv", csv);

    ordered_json manifest;
    manifest["tool"] = ordered_json{{"name", "harnack_lab"}, {"version", io::kVersion}};
    manifest["config_hash"] = io::hash_hex(json(base_config).dump());
    manifest["param"] = param;
    manifest["values"] = values;
    manifest["artifacts"] = {"sweep.csv"};
    io::write_json(out_dir / "manifest.json", manifest);
    if (!quiet) log << "wrote " << (out_dir / "sweep.csv").string() << "\n";
    return kExitOk;
}

}  // namespace harnack::experiments
