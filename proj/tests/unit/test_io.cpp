#include <stdexcept>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>

#include <doctest.h>

#include "dml/csv.hpp"
#include "dml/manifest.hpp"
#include "dml/params.hpp"
#include "dml/svg.hpp"

using namespace dml;

TEST_CASE("parameter JSON round trip") {
    OriginalParams p;
    p.gamma = 0.28;
    p.I = 0.0556;
    const auto q = original_params_from_json(to_json(p));
    CHECK(q.A == p.A);
    CHECK(q.alpha == p.alpha);
    CHECK(q.gamma == p.gamma);
    CHECK(q.I == p.I);

    ImprovedParams ip;
    ip.I0 = 0.0155;
    ip.k = 0.018;
    const auto iq = improved_params_from_json(to_json(ip));
    CHECK(iq.I0 == ip.I0);
    CHECK(iq.k == ip.k);
    CHECK(iq.phi_ext == ip.phi_ext);
}

TEST_CASE("unknown JSON keys are an error") {
    CHECK_THROWS_AS(original_params_from_json(R"({"gamma":0.2,"mu":1.0})"),
                    std::invalid_argument);
    CHECK_THROWS_AS(improved_params_from_json(R"({"I":0.1})"),
                    std::invalid_argument);  // "I" belongs to the planar set
    CHECK_THROWS_AS(original_params_from_json(R"({"gamma":"x"})"),
                    std::invalid_argument);
    CHECK_THROWS_AS(original_params_from_json(R"({"gamma":-1})"),
                    std::invalid_argument);  // validation after parse
}

TEST_CASE("CSV uses round-trip decimal formatting") {
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> u(-1e3, 1e3);
    CsvTable t;
    t.header = {"a", "b"};
    for (int i = 0; i < 200; ++i) t.rows.push_back({u(rng), u(rng) * 1e-9});
    const auto tmp = std::filesystem::temp_directory_path() / "dml_csv_rt.csv";
    t.write(tmp.string());
    const auto back = CsvTable::read(tmp.string());
    REQUIRE(back.rows.size() == t.rows.size());
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        CHECK(back.rows[i][0] == t.rows[i][0]);  // exact, 17 digits
        CHECK(back.rows[i][1] == t.rows[i][1]);
    }
    std::filesystem::remove(tmp);
}

TEST_CASE("malformed CSV is reported") {
    const auto tmp = std::filesystem::temp_directory_path() / "dml_bad.csv";
    std::ofstream(tmp) << "a,b\n1.0,oops\n";
    CHECK_THROWS_AS(CsvTable::read(tmp.string()), std::runtime_error);
    std::filesystem::remove(tmp);
}

TEST_CASE("SVG rendering is deterministic and structured") {
    SvgPlot plot;
    plot.title = "nullclines";
    SvgSeries s1, s2;
    s1.id = "x_nullcline";
    s1.color = "#ff7f0e";
    s2.id = "y_nullcline";
    s2.color = "black";
    for (int i = 0; i <= 100; ++i) {
        const double x = -1.0 + 2.5 * i / 100;
        s1.x.push_back(x);
        s1.y.push_back(x * x * (1 - x));
        s2.x.push_back(x);
        s2.y.push_back(0.0205 * std::exp(5.276 * x));
    }
    plot.series = {s1, s2};
    const std::string a = plot.render();
    const std::string b = plot.render();
    CHECK(a == b);  // byte-identical

    // exactly two polyline groups beyond the axes/ticks scaffolding
    std::size_t n_polylines = 0, pos = 0;
    while ((pos = a.find("<polyline", pos)) != std::string::npos) {
        ++n_polylines;
        pos += 9;
    }
    CHECK(n_polylines == 2);
    CHECK(a.find("id=\"x_nullcline\"") != std::string::npos);
    CHECK(a.find("id=\"y_nullcline\"") != std::string::npos);
    // no timestamps or machine-dependent content
    CHECK(a.find("date") == std::string::npos);
}

TEST_CASE("manifest round trip") {
    RunManifest m;
    m.subcommand = "simulate";
    m.argv = {"dml", "simulate", "--scenario", "fig4a"};
    m.parameters_json = R"({"gamma":0.315})";
    m.outputs = {"series.csv", "series_meta.json"};
    m.wall_ms = 12.5;
    const auto tmp = std::filesystem::temp_directory_path() / "dml_manifest.json";
    m.write(tmp.string());
    const auto back = RunManifest::read(tmp.string());
    CHECK(back.subcommand == m.subcommand);
    CHECK(back.argv == m.argv);
    CHECK(back.outputs == m.outputs);
    std::filesystem::remove(tmp);
}
