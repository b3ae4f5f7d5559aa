#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "harnack_lab/experiments.hpp"
#include "harnack_lab/io.hpp"
#include "json.hpp"

using nlohmann::json;
namespace fs = std::filesystem;
namespace exps = harnack::experiments;

TEST_SUITE_BEGIN("cli");

namespace {

fs::path fresh_dir(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / "harnack_lab_tests" / name;
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream is(p, std::ios::binary);
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("config validation rejects unknown keys and bad types") {
    CHECK(exps::validate_config(json{{"experiment", "alpha"}}).empty());
    CHECK_FALSE(exps::validate_config(json{{"experiment", "nope"}}).empty());
    CHECK_FALSE(exps::validate_config(json{{"experiment", "alpha"}, {"bogus", 1}}).empty());
    CHECK_FALSE(exps::validate_config(
                    json{{"experiment", "alpha"}, {"grid", {{"h", "tiny"}}}})
                    .empty());
    CHECK_FALSE(exps::validate_config(
                    json{{"experiment", "alpha"}, {"domain", {{"dim", 2}}}})
                    .empty());  // missing kind
    CHECK_FALSE(exps::validate_config(json::array()).empty());
}

TEST_CASE("the emitted schema validates the configs it describes") {
    const auto schema = exps::config_schema();
    CHECK(schema.at("properties").contains("experiment"));
    CHECK(schema.at("additionalProperties") == false);
}

TEST_CASE("alpha experiment: narrow sector report carries alpha1 = 4") {
    const auto dir = fresh_dir("alpha");
    std::ostringstream log;
    json cfg{{"experiment", "alpha"},
             {"domain", {{"kind", "sector"}, {"aperture", std::numbers::pi / 4.0}}}};
    CHECK(exps::run_experiment(cfg, dir, log) == exps::kExitOk);
    const auto rep = json::parse(slurp(dir / "report.json"));
    CHECK(rep.at("alpha1").get<double>() == doctest::Approx(4.0));
    CHECK(rep.at("verdict") == "counterexample");
    CHECK(fs::exists(dir / "manifest.json"));
}

TEST_CASE("invalid config exits 2, numerical failure exits 3") {
    const auto dir = fresh_dir("exitcodes");
    std::ostringstream log;
    CHECK(exps::run_experiment(json{{"experiment", "alpha"}, {"oops", 1}}, dir, log) ==
          exps::kExitBadConfig);
    // An impossible iteration cap forces the numerical-failure path.
    json cfg{{"experiment", "pair"},
             {"domain", {{"kind", "disk"}}},
             {"grid", {{"h", 1.0 / 32.0}}},
             {"solver", {{"tol", 1e-12}, {"max_iter", 2}}}};
    CHECK(exps::run_experiment(cfg, dir, log) == exps::kExitNumericalFailure);
    CHECK(log.str().find("residual") != std::string::npos);
}

TEST_CASE("pair experiment on the disk reports the Poisson center error") {
    const auto dir = fresh_dir("pair_disk");
    std::ostringstream log;
    json cfg{{"experiment", "pair"},
             {"domain", {{"kind", "disk"}}},
             {"grid", {{"h", 1.0 / 64.0}}}};
    REQUIRE(exps::run_experiment(cfg, dir, log) == exps::kExitOk);
    const auto rep = json::parse(slurp(dir / "report.json"));
    CHECK(rep.at("disk_poisson_error").get<double>() < 1e-4);
    CHECK(fs::exists(dir / "u.bin"));
    CHECK(fs::exists(dir / "v.csv"));
}

TEST_CASE("re-running a config byte-reproduces every artifact") {
    json cfg{{"experiment", "ratio"},
             {"domain", {{"kind", "sector"}, {"aperture", 3.0 * std::numbers::pi / 4.0}}},
             {"grid", {{"h", 1.0 / 32.0}}},
             {"analysis", {{"levels", 4}, {"seed", 42}}}};
    const auto d1 = fresh_dir("repro1");
    const auto d2 = fresh_dir("repro2");
    std::ostringstream log;
    REQUIRE(exps::run_experiment(cfg, d1, log) == exps::kExitOk);
    REQUIRE(exps::run_experiment(cfg, d2, log) == exps::kExitOk);
    for (const auto& entry : fs::directory_iterator(d1)) {
        const auto name = entry.path().filename();
        CHECK(slurp(entry.path()) == slurp(d2 / name));
    }
    const auto m1 = json::parse(slurp(d1 / "manifest.json"));
    const auto m2 = json::parse(slurp(d2 / "manifest.json"));
    CHECK(m1.at("config_hash") == m2.at("config_hash"));
}

TEST_CASE("the manifest's config echo re-validates against the schema") {
    const auto dir = fresh_dir("echo");
    std::ostringstream log;
    json cfg{{"experiment", "alpha"},
             {"domain", {{"kind", "cone"}, {"dim", 3}, {"slope", 1.0}}},
             {"gamma", 0.25}};
    REQUIRE(exps::run_experiment(cfg, dir, log) == exps::kExitOk);
    const auto manifest = json::parse(slurp(dir / "manifest.json"));
    CHECK(exps::validate_config(manifest.at("config")).empty());
    // Axisymmetric cones also dump the eigenfunction profile.
    CHECK(fs::exists(dir / "f1.csv"));
    const auto rep = json::parse(slurp(dir / "report.json"));
    CHECK(rep.at("alpha1").get<double>() > 2.0);  // quarter cone is narrow
}

TEST_CASE("threshold sweep flips the verdict at the critical aperture") {
    const auto dir = fresh_dir("threshold");
    std::ostringstream log;
    json cfg{{"experiment", "threshold-sweep"},
             {"gamma", 0.0},
             {"apertures", {std::numbers::pi / 4.0, std::numbers::pi / 2.0,
                            3.0 * std::numbers::pi / 4.0, std::numbers::pi,
                            7.0 * std::numbers::pi / 4.0}}};
    REQUIRE(exps::run_experiment(cfg, dir, log) == exps::kExitOk);
    const auto rep = json::parse(slurp(dir / "report.json"));
    const auto& rows = rep.at("rows");
    CHECK(rows[0].at("verdict") == "counterexample");
    CHECK(rows[1].at("verdict") == "critical");
    CHECK(rows[2].at("verdict") == "bounded");
    CHECK(rows[4].at("verdict") == "bounded");
    CHECK(fs::exists(dir / "threshold_sweep.csv"));
}

TEST_CASE("sumdiv experiment writes the subsequence and ratio table") {
    const auto dir = fresh_dir("sumdiv");
    std::ostringstream log;
    json cfg{{"experiment", "sumdiv"},
             {"sumdiv", {{"family", "harmonic"}, {"horizon", 5000}, {"j_max", 3}}}};
    REQUIRE(exps::run_experiment(cfg, dir, log) == exps::kExitOk);
    CHECK(fs::exists(dir / "subsequence.json"));
    CHECK(fs::exists(dir / "ratio_table.csv"));
    const auto rep = json::parse(slurp(dir / "report.json"));
    CHECK(rep.at("branch") == "convex_envelope");
}

TEST_CASE("gamma sweep records one row per value with verdicts") {
    const auto dir = fresh_dir("sweep_gamma");
    std::ostringstream log;
    json base{{"experiment", "alpha"},
              {"domain", {{"kind", "sector"}, {"aperture", 3.0 * std::numbers::pi / 4.0}}}};
    const std::vector<json> values{-0.5, 0.0, 0.5, 1.0};
    REQUIRE(exps::run_sweep(base, "gamma", values, dir, log) == exps::kExitOk);
    const auto csv = slurp(dir / "sweep.csv");
    // 2 - 4/3 + gamma > 0 for every gamma in the sweep.
    CHECK(csv.find("verdict") != std::string::npos);
    std::size_t bounded = 0, pos = 0;
    while ((pos = csv.find("bounded", pos)) != std::string::npos) {
        ++bounded;
        pos += 7;
    }
    CHECK(bounded == 4);
    std::size_t rows = 0;
    for (char ch : csv)
        if (ch == '\n') ++rows;
    CHECK(rows == 5);  // header + 4 rows
}

TEST_CASE("h sweep on the disk Poisson pair shows a decreasing error column") {
    const auto dir = fresh_dir("sweep_h");
    std::ostringstream log;
    json base{{"experiment", "pair"}, {"domain", {{"kind", "disk"}}}};
    const std::vector<json> values{1.0 / 16.0, 1.0 / 32.0, 1.0 / 64.0};
    REQUIRE(exps::run_sweep(base, "grid/h", values, dir, log) == exps::kExitOk);
    std::vector<double> errs;
    for (int i = 0; i < 3; ++i) {
        const auto rep =
            json::parse(slurp(dir / ("row_" + std::to_string(i)) / "report.json"));
        errs.push_back(rep.at("disk_poisson_error").get<double>());
    }
    CHECK(errs[1] < errs[0]);
    CHECK(errs[2] < errs[1]);
}

TEST_CASE("aperture-gamma grid: the verdict boundary tracks 2 - pi/omega + gamma") {
    const auto dir = fresh_dir("apgrid");
    std::ostringstream log;
    const std::vector<double> gammas{-0.5, 0.0, 0.5};
    std::vector<double> apertures;
    for (double om = 0.6; om < 3.0; om += 0.15) apertures.push_back(om);
    for (const double gamma : gammas) {
        json cfg{{"experiment", "threshold-sweep"}, {"gamma", gamma}};
        cfg["apertures"] = apertures;
        const auto d = dir / ("g" + std::to_string(gamma));
        REQUIRE(exps::run_experiment(cfg, d, log, true) == exps::kExitOk);
        const auto rep = json::parse(slurp(d / "report.json"));
        // The first bounded aperture must bracket the root omega* = pi/(2+gamma)
        // within one grid step.
        const double om_star = std::numbers::pi / (2.0 + gamma);
        double first_bounded = 1e300;
        for (const auto& row : rep.at("rows"))
            if (row.at("verdict") == "bounded")
                first_bounded = std::min(first_bounded, row.at("omega").get<double>());
        CHECK(first_bounded >= om_star - 1e-12);
        CHECK(first_bounded <= om_star + 0.15 + 1e-12);
    }
}

TEST_CASE("per-row sweep failures land in the status column, run continues") {
    const auto dir = fresh_dir("sweep_fail");
    std::ostringstream log;
    json base{{"experiment", "alpha"},
              {"domain", {{"kind", "sector"}, {"aperture", 1.0}}}};
    // aperture 0 is invalid and must not abort the other rows
    const std::vector<json> values{1.0, 0.0, 2.0};
    REQUIRE(exps::run_sweep(base, "domain/aperture", values, dir, log) == exps::kExitOk);
    const auto csv = slurp(dir / "sweep.csv");
    CHECK(csv.find("\n1,0.0,2") != std::string::npos);  // row 1 exits 2
}

TEST_CASE("field binary dump carries the documented header") {
    const auto dir = fresh_dir("binary");
    std::ostringstream log;
    json cfg{{"experiment", "pair"},
             {"domain", {{"kind", "disk"}}},
             {"grid", {{"h", 1.0 / 16.0}}}};
    REQUIRE(exps::run_experiment(cfg, dir, log) == exps::kExitOk);
    std::ifstream is(dir / "u.bin", std::ios::binary);
    char magic[4];
    is.read(magic, 4);
    CHECK(std::string(magic, 4) == "HLSF");
    std::uint32_t dim = 0;
    is.read(reinterpret_cast<char*>(&dim), sizeof dim);
    CHECK(dim == 2);
    std::uint64_t m0 = 0, m1 = 0;
    is.read(reinterpret_cast<char*>(&m0), sizeof m0);
    is.read(reinterpret_cast<char*>(&m1), sizeof m1);
    double h = 0.0;
    is.read(reinterpret_cast<char*>(&h), sizeof h);
    CHECK(h == doctest::Approx(1.0 / 16.0));
    double xmin0 = 0, xmin1 = 0;
    is.read(reinterpret_cast<char*>(&xmin0), sizeof xmin0);
    is.read(reinterpret_cast<char*>(&xmin1), sizeof xmin1);
    std::uint64_t count = 0;
    is.read(reinterpret_cast<char*>(&count), sizeof count);
    CHECK(count > 100);
    std::vector<double> vals(count);
    is.read(reinterpret_cast<char*>(vals.data()), std::streamsize(count * sizeof(double)));
    CHECK(is.good());
}

TEST_SUITE_END();
