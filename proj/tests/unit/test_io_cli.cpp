#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "ratchet/cli.hpp"
#include "ratchet/csv_io.hpp"
#include "ratchet/stats.hpp"
#include "ratchet/svg.hpp"

using namespace ratchet;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

int run(std::initializer_list<const char*> args) {
    std::vector<const char*> argv{"ratchet"};
    argv.insert(argv.end(), args.begin(), args.end());
    return run_command(static_cast<int>(argv.size()), argv.data());
}

}  // namespace

TEST_CASE("format_g17 round trips doubles exactly") {
    for (double v : {0.1, 1.0 / 3.0, 6.737946999085467e-3, 1e300, -2.5e-17}) {
        const double back = std::stod(format_g17(v));
        CHECK(back == v);
    }
}

TEST_CASE("manifest uses flat key = value lines") {
    Manifest m;
    m.set("alpha", 1.5);
    m.set("tag", "abc");
    CHECK(m.text() == "alpha = 1.5\ntag = abc\n");
}

TEST_CASE("csv writer emits LF rows that read_csv parses back") {
    const std::string path = "/tmp/ratchet_test_io.csv";
    {
        CsvWriter w(path, "ref.manifest");
        w.header({"a", "b"});
        w.field(1.5).field(std::string("x"));
        w.end_row();
        w.field(2.5).field(std::string("y"));
        w.end_row();
    }
    const std::string bytes = slurp(path);
    CHECK(bytes == "# manifest = ref.manifest\na,b\n1.5,x\n2.5,y\n");
    const CsvTable t = read_csv(path);
    REQUIRE(t.columns.size() == 2);
    REQUIRE(t.rows.size() == 2);
    CHECK(t.rows[0][0] == 1.5);
    CHECK(t.rows[1][0] == 2.5);
    std::remove(path.c_str());
}

TEST_CASE("histogram clamps out-of-range samples into edge bins") {
    Histogram h(0.0, 1.0, 10);
    h.add(-0.5);
    h.add(0.55);
    h.add(2.0);
    CHECK(h.total() == 3.0);
    CHECK(h.raw_mass()[0] == 1.0);
    CHECK(h.raw_mass()[5] == 1.0);
    CHECK(h.raw_mass()[9] == 1.0);
}

TEST_CASE("fit_line recovers exact linear data") {
    std::vector<double> x{1.0, 2.0, 3.0, 4.0};
    std::vector<double> y{3.0, 5.0, 7.0, 9.0};
    const LinearFit fit = fit_line(x, y);
    CHECK(fit.slope == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(fit.intercept == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(fit.slope_se == doctest::Approx(0.0).epsilon(1e-10));
}

TEST_CASE("cli derive exits 0, validation errors exit 2") {
    CHECK(run({"derive", "--n", "10000", "--lambda", "0.1", "--s", "0.02"}) == 0);
    // both s and gamma
    CHECK(run({"derive", "--n", "10000", "--lambda", "0.1", "--s", "0.02", "--gamma",
               "0.5"}) == 2);
    // neither
    CHECK(run({"derive", "--n", "10000", "--lambda", "0.1"}) == 2);
    // unknown flag
    CHECK(run({"derive", "--n", "10000", "--lambda", "0.1", "--s", "0.02",
               "--bogus", "1"}) == 2);
    // domain error: N lambda <= 1
    CHECK(run({"derive", "--n", "10", "--lambda", "0.01", "--s", "0.02"}) == 2);
}

TEST_CASE("cli wf writes the four artifacts and is byte-reproducible") {
    const std::string prefix = "/tmp/ratchet_test_wf";
    auto run_once = [&] {
        return run({"wf", "--n", "500", "--lambda", "0.05", "--gamma", "0.8",
                    "--generations", "4000", "--seed", "42", "--out", prefix.c_str()});
    };
    REQUIRE(run_once() == 0);
    const std::string clicks1 = slurp(prefix + ".clicks.csv");
    const std::string hist1 = slurp(prefix + ".hist.csv");
    const std::string scatter1 = slurp(prefix + ".scatter.csv");
    const std::string manifest1 = slurp(prefix + ".manifest");
    CHECK(manifest1.find("rng = ") != std::string::npos);
    CHECK(manifest1.find("seed = 42") != std::string::npos);
    CHECK(clicks1.rfind("# manifest = ", 0) == 0);

    REQUIRE(run_once() == 0);
    CHECK(slurp(prefix + ".clicks.csv") == clicks1);
    CHECK(slurp(prefix + ".hist.csv") == hist1);
    CHECK(slurp(prefix + ".scatter.csv") == scatter1);
    CHECK(slurp(prefix + ".manifest") == manifest1);

    for (const char* suffix : {".clicks.csv", ".hist.csv", ".scatter.csv", ".manifest"})
        std::remove((prefix + suffix).c_str());
}

TEST_CASE("cli plot renders an SVG from a CSV") {
    const std::string csv = "/tmp/ratchet_test_plot.csv";
    {
        CsvWriter w(csv);
        w.header({"x", "y"});
        for (int i = 1; i <= 10; ++i) {
            w.field(static_cast<double>(i)).field(static_cast<double>(i * i));
            w.end_row();
        }
    }
    const std::string svg = "/tmp/ratchet_test_plot.svg";
    CHECK(run({"plot", "--in", csv.c_str(), "--x", "x", "--y", "y", "--svg",
               svg.c_str(), "--log-log"}) == 0);
    const std::string bytes = slurp(svg);
    CHECK(bytes.find("<svg") != std::string::npos);
    CHECK(bytes.find("polyline") != std::string::npos);
    std::remove(csv.c_str());
    std::remove(svg.c_str());
}

TEST_CASE("cli green reports the expected click time") {
    const std::string prefix = "/tmp/ratchet_test_green";
    CHECK(run({"green", "--n", "10000", "--lambda", "0.01", "--gamma", "0.5",
               "--regime", "a1", "--bins", "50", "--out", prefix.c_str()}) == 0);
    const CsvTable t = read_csv(prefix + ".green.csv");
    CHECK(t.rows.size() == 50);
    CHECK(t.column_index("occupation_density") >= 0);
    std::remove((prefix + ".green.csv").c_str());
    std::remove((prefix + ".manifest").c_str());
}

TEST_CASE("cli config file provides defaults that flags override") {
    const std::string cfg = "/tmp/ratchet_test_cfg.ini";
    {
        std::ofstream out(cfg);
        out << "n = 10000\nlambda = 0.1\ns = 0.02\n";
    }
    CHECK(run({"derive", "--config", cfg.c_str()}) == 0);
    CHECK(run({"derive", "--config", cfg.c_str(), "--s", "0.01"}) == 0);
    std::remove(cfg.c_str());
}

TEST_CASE("svg writer rejects empty input") {
    PlotOptions opt;
    CHECK_THROWS_AS(write_svg_plot("/tmp/ratchet_empty.svg", {}, opt),
                    std::runtime_error);
}
