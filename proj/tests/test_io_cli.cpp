#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "cascade/errors.hpp"
#include "cascade/io.hpp"
#include "cascade/model.hpp"
#include "cascade/presets.hpp"
#include "cascade/spectra.hpp"

using namespace cascade;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kSqrt2 = std::numbers::sqrt2;

RunSpec parse(const std::string& text) { return parse_config_text(text, "test"); }

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> lines;
    std::string current;
    for (char c : text) {
        if (c == '\n') {
            lines.push_back(current);
            current.clear();
        } else {
            current.push_back(c);
        }
    }
    if (!current.empty()) lines.push_back(current);
    return lines;
}

std::vector<std::string> fields_of(const std::string& line) {
    std::vector<std::string> fields;
    std::string current;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(current);
            current.clear();
        } else {
            current.push_back(c);
        }
    }
    fields.push_back(current);
    return fields;
}

// strtod must consume the whole field; CSV cells carry nothing but the number
double as_double(const std::string& field) {
    char* end = nullptr;
    const double v = std::strtod(field.c_str(), &end);
    REQUIRE(end == field.c_str() + field.size());
    return v;
}

}  // namespace

TEST_CASE("a minimal document takes the documented defaults") {
    const RunSpec spec = parse(R"({"sites": [{}]})");
    CHECK(spec.config.gamma_A == 0.0);
    REQUIRE(spec.config.n_sites() == 1);
    CHECK(spec.config.sites[0].delta == 0.0);
    CHECK(spec.config.sites[0].kappa_ex == 0.0);
    CHECK(spec.config.sites[0].kappa_in == 0.0);
    CHECK(spec.config.sites[0].g == complexd(0.0, 0.0));
    CHECK(spec.config.sites[0].h == complexd(0.0, 0.0));
    CHECK(spec.config.links.empty());
    CHECK(spec.excited_atom == 1);
    CHECK(!spec.amplitudes);
    CHECK(!spec.grid);

    const OneQuantumState x0 = spec.make_initial();
    REQUIRE(x0.size() == 3);
    CHECK(x0(0) == complexd(1.0, 0.0));
    CHECK(x0.squaredNorm() == 1.0);

    // absent grid defers to the config-derived default
    const FrequencyGrid fallback = spec.effective_grid();
    const FrequencyGrid expected = default_grid(spec.config);
    CHECK(fallback.min == expected.min);
    CHECK(fallback.max == expected.max);
    CHECK(fallback.points == expected.points);

    // omitted links array expands to zero phases, one per fiber segment
    const RunSpec pair = parse(R"({"sites": [{}, {}]})");
    REQUIRE(pair.config.links.size() == 1);
    CHECK(pair.config.links[0].phi_a == 0.0);
    CHECK(pair.config.links[0].phi_b == 0.0);
}

TEST_CASE("a fully specified document parses every field") {
    const char* text = R"({
      "gamma_A": 3.25,
      "sites": [
        {"delta": -1.5, "kappa_ex": 480.0, "kappa_in": 0.25,
         "g": [50.0, -2.0], "h": [0.0, 0.75]},
        {"kappa_ex": 510.0, "g": [0.0, 50.0]}
      ],
      "links": [{"phi_a": 0.7, "phi_b": -0.4}],
      "initial": {"atom": 2},
      "grid": {"min": -120.0, "max": 80.0, "points": 2001}
    })";
    const RunSpec spec = parse(text);
    CHECK(spec.config.gamma_A == 3.25);
    REQUIRE(spec.config.n_sites() == 2);
    CHECK(spec.config.sites[0].delta == -1.5);
    CHECK(spec.config.sites[0].kappa_ex == 480.0);
    CHECK(spec.config.sites[0].kappa_in == 0.25);
    CHECK(spec.config.sites[0].g == complexd(50.0, -2.0));
    CHECK(spec.config.sites[0].h == complexd(0.0, 0.75));
    CHECK(spec.config.sites[1].delta == 0.0);
    CHECK(spec.config.sites[1].g == complexd(0.0, 50.0));
    REQUIRE(spec.config.links.size() == 1);
    CHECK(spec.config.links[0].phi_a == 0.7);
    CHECK(spec.config.links[0].phi_b == -0.4);
    CHECK(spec.excited_atom == 2);
    REQUIRE(spec.grid);
    CHECK(spec.grid->min == -120.0);
    CHECK(spec.grid->max == 80.0);
    CHECK(spec.grid->points == 2001);

    const OneQuantumState x0 = spec.make_initial();
    REQUIRE(x0.size() == 6);
    CHECK(x0(3) == complexd(1.0, 0.0));
    CHECK(x0.squaredNorm() == 1.0);
}

TEST_CASE("explicit amplitudes parse, validate, and reach the state") {
    const RunSpec spec = parse(R"({
      "sites": [{}],
      "initial": {"amplitudes": [[0.6, 0.0], [0.0, 0.5], [0.3, -0.2]]}
    })");
    REQUIRE(spec.amplitudes);
    const OneQuantumState x0 = spec.make_initial();
    REQUIRE(x0.size() == 3);
    CHECK(x0(0) == complexd(0.6, 0.0));
    CHECK(x0(1) == complexd(0.0, 0.5));
    CHECK(x0(2) == complexd(0.3, -0.2));
    CHECK(x0.squaredNorm() == doctest::Approx(0.74).epsilon(1e-15));

    // length must be three slots per site
    CHECK_THROWS_WITH_AS(
        parse(R"({"sites": [{}], "initial": {"amplitudes": [[1.0, 0.0], [0.0, 0.0]]}})"),
        doctest::Contains("expected 3 entries per site, got 2"), ConfigError);

    // one excitation at most: squared norm beyond 1 is rejected
    CHECK_THROWS_WITH_AS(
        parse(R"({"sites": [{}],
                  "initial": {"amplitudes": [[1.0, 0.0], [1.0, 0.0], [0.0, 0.0]]}})"),
        doctest::Contains("exceeds 1"), ConfigError);
    CHECK_THROWS_WITH_AS(
        parse(R"({"sites": [{}],
                  "initial": {"amplitudes": [[1.000001, 0.0], [0.0, 0.0], [0.0, 0.0]]}})"),
        doctest::Contains("exceeds 1"), ConfigError);

    // the unit sphere itself is fine
    const RunSpec edge = parse(R"({
      "sites": [{}],
      "initial": {"amplitudes": [[0.0, 0.0], [1.0, 0.0], [0.0, 0.0]]}
    })");
    CHECK(edge.make_initial().squaredNorm() == 1.0);
}

TEST_CASE("malformed documents name the offending field") {
    struct Row {
        const char* text;
        const char* fragment;
    };
    const Row rows[] = {
        {"not json at all", "test"},
        {R"([1, 2])", "top level must be an object"},
        {R"({"sites": [{}], "gamma": 1})", "unknown key \"gamma\""},
        {R"({})", "sites: required, a non-empty array"},
        {R"({"sites": []})", "sites: required, a non-empty array"},
        {R"({"sites": [7]})", "test.sites[0]: must be an object"},
        {R"({"sites": [{}, {"kappa": 1}]})", "test.sites[1]: unknown key \"kappa\""},
        {R"({"sites": [{"g": 3}]})", "test.sites[0].g: must be a [re, im] pair"},
        {R"({"sites": [{"g": [1.0]}]})", "test.sites[0].g: must be a [re, im] pair"},
        {R"({"sites": [{"g": [1.0, "x"]}]})", "test.sites[0].g[1]: must be a number"},
        {R"({"sites": [{"delta": "x"}]})", "test.sites[0].delta: must be a number"},
        {R"({"sites": [{}, {}], "links": 5})", "links: must be an array"},
        {R"({"sites": [{}, {}], "links": []})", "expected 1 entries for 2 sites"},
        {R"({"sites": [{}], "links": [{"phi_a": 0}]})", "expected 0 entries for 1 sites"},
        {R"({"sites": [{}, {}], "links": [{"phi": 1}]})", "test.links[0]: unknown key \"phi\""},
        {R"({"sites": [{}], "initial": {}})", "needs exactly one of \"atom\" or \"amplitudes\""},
        {R"({"sites": [{}], "initial": {"atom": 1, "amplitudes": []}})",
         "needs exactly one of \"atom\" or \"amplitudes\""},
        {R"({"sites": [{}], "initial": {"atom": 1.5}})", "test.initial.atom: must be an integer"},
        {R"({"sites": [{}, {}], "initial": {"atom": 0}})", "out of range 1..2"},
        {R"({"sites": [{}, {}], "initial": {"atom": 3}})", "out of range 1..2"},
        {R"({"sites": [{}], "grid": {"min": 0, "max": 1}})", "missing \"points\""},
        {R"({"sites": [{}], "grid": {"min": 0, "max": 1, "points": 10.5}})",
         "test.grid.points: must be an integer"},
        {R"({"sites": [{}], "grid": {"min": 1, "max": 1, "points": 10}})", "min < max"},
        {R"({"sites": [{}], "grid": {"min": 0, "max": 1, "points": 1}})", "at least 2 points"},
        {R"({"gamma_A": -1, "sites": [{}]})", "gamma_A must be finite and >= 0"},
        {R"({"sites": [{"kappa_ex": -2}]})", "site 1: kappa_ex must be finite and >= 0"},
    };
    for (const Row& row : rows) {
        CAPTURE(row.text);
        CHECK_THROWS_WITH_AS(parse(row.text), doctest::Contains(row.fragment), ConfigError);
    }
}

TEST_CASE("parse_config reads files and reports unopenable paths") {
    namespace fs = std::filesystem;
    const fs::path path = fs::temp_directory_path() / "cascade_io_test.json";
    {
        std::ofstream out(path);
        out << R"({"gamma_A": 5.0, "sites": [{"kappa_ex": 500.0, "g": [50.0, 0.0]}]})";
    }
    const RunSpec spec = parse_config(path.string());
    CHECK(spec.config.gamma_A == 5.0);
    CHECK(spec.config.sites[0].g == complexd(50.0, 0.0));

    // diagnostics inside a file are prefixed with its path
    {
        std::ofstream out(path);
        out << R"({"sites": [{}], "bogus": 1})";
    }
    try {
        parse_config(path.string());
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        const std::string what = e.what();
        CHECK(what.find(path.string()) != std::string::npos);
        CHECK(what.find("unknown key \"bogus\"") != std::string::npos);
    }
    fs::remove(path);

    CHECK_THROWS_WITH_AS(parse_config("/nonexistent/nope.json"),
                         doctest::Contains("cannot open config file"), ConfigError);
}

TEST_CASE("emit and reparse is byte-stable") {
    RunSpec spec;
    spec.config.gamma_A = kPi;
    spec.config.sites.resize(2);
    spec.config.sites[0].delta = 1.0 / 3.0;
    spec.config.sites[0].kappa_ex = 480.25;
    spec.config.sites[0].kappa_in = 2.5e-17;
    spec.config.sites[0].g = complexd(1.0 / 3.0, -kSqrt2);
    spec.config.sites[0].h = complexd(0.0, 0.125);
    spec.config.sites[1].kappa_ex = 7.0e8;
    spec.config.sites[1].g = complexd(-50.0, 50.0);
    spec.config.links.resize(1);
    spec.config.links[0].phi_a = -kPi / 3.0;
    spec.config.links[0].phi_b = 0.1;
    Eigen::VectorXcd amps(6);
    amps << complexd(0.5, 0.0), complexd(0.0, 0.25), complexd(0.125, -0.125),
        complexd(1.0 / 7.0, 0.0), complexd(0.0, 0.0), complexd(0.0, 1.0 / 9.0);
    spec.amplitudes = amps;
    spec.grid = FrequencyGrid{-2.0 / 3.0, 55.5, 101};

    const std::string emitted = config_to_json(spec);
    CHECK(emitted.back() == '\n');
    const RunSpec back = parse_config_text(emitted, "emitted");
    CHECK(config_to_json(back) == emitted);

    // doubles survive the text round trip bit for bit
    CHECK(back.config.gamma_A == kPi);
    CHECK(back.config.sites[0].g == spec.config.sites[0].g);
    CHECK(back.config.sites[0].kappa_in == 2.5e-17);
    CHECK(back.config.links[0].phi_a == -kPi / 3.0);
    REQUIRE(back.amplitudes);
    CHECK((*back.amplitudes - amps).cwiseAbs().maxCoeff() == 0.0);
    REQUIRE(back.grid);
    CHECK(back.grid->min == -2.0 / 3.0);
    CHECK(back.grid->points == 101);
}

TEST_CASE("presets expose the reference scenarios and reparse identically") {
    REQUIRE(preset_names().size() == 8);
    for (const std::string& name : preset_names()) {
        CAPTURE(name);
        const std::string a = config_to_json(preset(name));
        const std::string b = config_to_json(parse_config_text(a, name));
        CHECK(a == b);
    }

    const RunSpec upper = preset("fig3-upper");
    CHECK(upper.config.gamma_A == 5.0);
    REQUIRE(upper.config.n_sites() == 2);
    for (const SiteParams& site : upper.config.sites) {
        CHECK(site.kappa_ex == 500.0);
        CHECK(site.kappa_in == 0.5);
        CHECK(site.delta == 0.0);
        CHECK(site.g == complexd(50.0, 0.0));
        CHECK(site.h == complexd(0.0, 0.0));
    }
    CHECK(upper.excited_atom == 1);
    REQUIRE(upper.grid);
    CHECK(upper.grid->min == -200.0);
    CHECK(upper.grid->max == 200.0);
    CHECK(upper.grid->points == 8001);

    const RunSpec strong = preset("fig2-upper");
    CHECK(strong.config.sites[0].kappa_ex == 5.0);
    CHECK(strong.config.sites[0].kappa_in == 0.1);
    REQUIRE(strong.grid);
    CHECK(strong.grid->min == -150.0);
    CHECK(strong.grid->points == 30001);

    const RunSpec middle = preset("fig5-atom2");
    REQUIRE(middle.config.n_sites() == 3);
    CHECK(middle.config.sites[0].g == complexd(50.0, 0.0));
    CHECK(middle.config.sites[1].g == complexd(0.0, 50.0));
    CHECK(middle.config.sites[2].g == complexd(50.0, 0.0));
    CHECK(middle.excited_atom == 2);

    try {
        preset("fig9");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        const std::string what = e.what();
        CHECK(what.find("unknown preset \"fig9\"") != std::string::npos);
        CHECK(what.find("fig2-upper") != std::string::npos);
        CHECK(what.find("fig5-atom2") != std::string::npos);
    }
}

TEST_CASE("format_sig17 round-trips every double") {
    const double values[] = {0.0,
                             1.0,
                             -1.0,
                             0.1,
                             1.0 / 3.0,
                             kPi,
                             kSqrt2,
                             2.5e-17,
                             -7.25e+300,
                             5e-324,
                             std::numeric_limits<double>::max(),
                             1.0 + std::numeric_limits<double>::epsilon()};
    for (double v : values) {
        CAPTURE(v);
        const std::string text = as_double(format_sig17(v)) == v ? "ok" : format_sig17(v);
        CHECK(text == "ok");
    }
    CHECK(format_sig17(1.0) == "1");
    CHECK(std::signbit(as_double(format_sig17(-0.0))));
}

TEST_CASE("fiber pair csv carries banner, header, and exact values") {
    const std::vector<double> omega = {-1.5, 0.0, 2.25};
    Eigen::VectorXd a(3), b(3);
    a << kPi, 1.0 / 3.0, 1e-17;
    b << kSqrt2, 2.5, 4e8;

    std::ostringstream out;
    write_fiber_pair_csv(out, omega, a, b, "compare --preset fig3-upper --oracle reduced");
    const std::string text = out.str();
    CHECK(text.find('\r') == std::string::npos);
    CHECK(text.back() == '\n');

    const auto lines = lines_of(text);
    REQUIRE(lines.size() == 5);
    CHECK(lines[0] == "# cascade-qed v1 compare --preset fig3-upper --oracle reduced");
    CHECK(lines[1] == "omega,T_fiber_a,T_fiber_b");
    for (int i = 0; i < 3; ++i) {
        const auto fields = fields_of(lines[static_cast<size_t>(2 + i)]);
        REQUIRE(fields.size() == 3);
        CHECK(as_double(fields[0]) == omega[static_cast<size_t>(i)]);
        CHECK(as_double(fields[1]) == a(i));
        CHECK(as_double(fields[2]) == b(i));
    }

    Eigen::VectorXd shorter(2);
    shorter << 1.0, 2.0;
    std::ostringstream sink;
    CHECK_THROWS_WITH_AS(write_fiber_pair_csv(sink, omega, a, shorter, "compare"),
                         doctest::Contains("column lengths differ"), ConfigError);
}

TEST_CASE("spectrum csv lays out one column per channel") {
    SpectrumSet s;
    s.grid = FrequencyGrid{-1.0, 1.0, 2};
    s.omega = {-1.0, 1.0};
    s.fiber_a = Eigen::VectorXd(2);
    s.fiber_a << 0.25, 1.0 / 3.0;
    s.fiber_b = Eigen::VectorXd(2);
    s.fiber_b << 0.5, 0.75;
    s.side_atoms = Eigen::MatrixXd(2, 2);
    s.side_atoms << 0.01, 0.02, 0.03, 0.04;
    s.scatter_sites = Eigen::MatrixXd(2, 2);
    s.scatter_sites << 1e-5, 2e-5, 3e-5, 4e-5;

    std::ostringstream out;
    write_spectrum_csv(out, s, "spectrum --config chain.json");
    const auto lines = lines_of(out.str());
    REQUIRE(lines.size() == 4);
    CHECK(lines[0] == "# cascade-qed v1 spectrum --config chain.json");
    CHECK(lines[1] ==
          "omega,T_fiber_a,T_fiber_b,T_side_atom_1,T_side_atom_2,"
          "T_scatter_site_1,T_scatter_site_2");

    const auto row0 = fields_of(lines[2]);
    REQUIRE(row0.size() == 7);
    CHECK(as_double(row0[0]) == -1.0);
    CHECK(as_double(row0[1]) == 0.25);
    CHECK(as_double(row0[2]) == 0.5);
    CHECK(as_double(row0[3]) == 0.01);
    CHECK(as_double(row0[4]) == 0.02);
    CHECK(as_double(row0[5]) == 1e-5);
    CHECK(as_double(row0[6]) == 2e-5);
    const auto row1 = fields_of(lines[3]);
    CHECK(as_double(row1[1]) == 1.0 / 3.0);
    CHECK(as_double(row1[6]) == 4e-5);
}

TEST_CASE("computed spectra survive the csv round trip unchanged") {
    const RunSpec spec = preset("fig3-upper");
    const FrequencyGrid grid{-30.0, 30.0, 11};
    const Generator generator = build_generator(spec.config);
    const SpectrumSet s = emission_spectra(spec.config, generator, spec.make_initial(), grid);

    std::ostringstream out;
    write_spectrum_csv(out, s, "spectrum --preset fig3-upper");
    const auto lines = lines_of(out.str());
    REQUIRE(lines.size() == static_cast<size_t>(2 + grid.points));
    for (int i = 0; i < grid.points; ++i) {
        const auto fields = fields_of(lines[static_cast<size_t>(2 + i)]);
        REQUIRE(fields.size() == 7);
        CHECK(as_double(fields[0]) == s.omega[static_cast<size_t>(i)]);
        CHECK(as_double(fields[1]) == s.fiber_a(i));
        CHECK(as_double(fields[2]) == s.fiber_b(i));
        CHECK(as_double(fields[3]) == s.side_atoms(i, 0));
        CHECK(as_double(fields[4]) == s.side_atoms(i, 1));
        CHECK(as_double(fields[5]) == s.scatter_sites(i, 0));
        CHECK(as_double(fields[6]) == s.scatter_sites(i, 1));
    }
}

TEST_CASE("trajectory csv reports norm and channel fractions") {
    Trajectory t;
    t.times = {0.0, 0.5};
    Eigen::VectorXcd x0(3), x1(3);
    x0 << complexd(1.0, 0.0), complexd(0.0, 0.0), complexd(0.0, 0.0);
    x1 << complexd(0.6, 0.0), complexd(0.0, 0.1), complexd(-0.2, 0.0);
    t.states = {x0, x1};
    t.p_spon = {0.0, 0.23};
    t.channel_names = {"fiber_a", "fiber_b", "side_atom_1", "scatter_site_1"};
    t.channel_fractions = Eigen::MatrixXd(2, 4);
    t.channel_fractions << 0.0, 0.0, 0.0, 0.0, 0.1, 0.05, 0.07, 0.01;

    std::ostringstream out;
    write_trajectory_csv(out, t, "evolve --config chain.json");
    const auto lines = lines_of(out.str());
    REQUIRE(lines.size() == 4);
    CHECK(lines[0] == "# cascade-qed v1 evolve --config chain.json");
    CHECK(lines[1] == "t,norm2,p_spon,fiber_a,fiber_b,side_atom_1,scatter_site_1");

    const auto row0 = fields_of(lines[2]);
    REQUIRE(row0.size() == 7);
    CHECK(as_double(row0[0]) == 0.0);
    CHECK(as_double(row0[1]) == 1.0);
    CHECK(as_double(row0[2]) == 0.0);
    const auto row1 = fields_of(lines[3]);
    CHECK(as_double(row1[0]) == 0.5);
    CHECK(as_double(row1[1]) == x1.squaredNorm());
    CHECK(as_double(row1[2]) == 0.23);
    CHECK(as_double(row1[5]) == 0.07);
}
