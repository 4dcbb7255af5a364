#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "clusterem/config.hpp"
#include "clusterem/errors.hpp"
#include "clusterem/io.hpp"

using namespace clusterem;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Json foldylax_json() {
    return Json::parse(R"({
      "domain": {"kind": "box", "center": [0.5, 0.5, 0.5], "extents": [1, 1, 1]},
      "a": 0.02, "h": 0.9, "eta0": 1, "c0": 1, "c_r": 2, "lambda_n0_B": 0.2, "sign": "plus",
      "wave": {"theta": [0, 0, 1], "p": [1, 0, 0]}, "direction_level": 1})");
}

std::string config_error(const Json& j) {
    try {
        parse_foldylax(j);
    } catch (const ConfigError& e) {
        return e.what();
    }
    return "";
}

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("clusterem_io_" + name);
    fs::remove_all(p);
    return p;
}

}  // namespace

TEST_CASE("shortest round-trip doubles") {
    for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, 1.0, 0.0, std::nextafter(1.0, 2.0)}) {
        const std::string s = format_double(v);
        CHECK(std::stod(s) == v);
    }
    CHECK(format_double(0.1) == "0.1");
    CHECK(format_double(std::numeric_limits<double>::quiet_NaN()) == "nan");
    CHECK(format_double(std::numeric_limits<double>::infinity()) == "inf");
    CHECK(format_double(-std::numeric_limits<double>::infinity()) == "-inf");
}

TEST_CASE("far-field table: one row per direction, complex split into Re/Im") {
    FarFieldSamples s;
    s.directions = standard_directions(1);
    for (std::size_t i = 0; i < s.directions.size(); ++i) s.values.push_back(CVec3(cplx(i, -0.5), 0.25, cplx(0, 1)));
    const Table t = far_field_table("farfield", s);
    const std::string csv = to_csv(t, Json{{"k", 1.0}});
    std::istringstream in(csv);
    std::string line;
    std::vector<std::string> lines;
    while (std::getline(in, line)) lines.push_back(line);
    REQUIRE(lines.size() == 2 + 26);
    CHECK(lines[0].rfind("# ", 0) == 0);
    CHECK(lines[1] == "x1,x2,x3,E1_re,E1_im,E2_re,E2_im,E3_re,E3_im");
    CHECK(lines[2].substr(lines[2].size() - 18) == ",0,-0.5,0.25,0,0,1");
}

TEST_CASE("JSON output re-parses to equal values") {
    Report r;
    r.kind = "demo";
    r.meta["scale"] = 0.1;
    r.tables.push_back({"t", {"x", "z", "n", "s", "b"}, {{1.0 / 3.0, cplx(1e-17, -2), 7LL, std::string("ok"), true}}});
    r.plot.rows.push_back({std::string("series"), 1.0, 2.0});
    const Json j = to_json(r);
    const Json back = Json::parse(j.dump());
    CHECK(back == j);
    const Json& row = back["tables"]["t"][0];
    CHECK(row["x"].get<double>() == 1.0 / 3.0);
    CHECK(row["z"]["re"].get<double>() == 1e-17);
    CHECK(row["z"]["im"].get<double>() == -2.0);
    CHECK(row["n"].get<long long>() == 7);
    CHECK(row["b"].get<bool>());
}

TEST_CASE("emit is byte-identical on rerun") {
    Report r;
    r.kind = "demo";
    r.meta["x"] = 1.5;
    r.tables.push_back({"t", {"a", "z"}, {{0.1, cplx(0.2, 0.3)}, {1e300, cplx(-1, 0)}}});
    r.plot.rows.push_back({std::string("s"), 1.0, 0.5});
    const fs::path d1 = scratch("a"), d2 = scratch("b");
    for (Format f : {Format::Csv, Format::Json}) {
        const auto p1 = emit(r, f, d1);
        const auto p2 = emit(r, f, d2);
        REQUIRE(p1.size() == p2.size());
        for (std::size_t i = 0; i < p1.size(); ++i) {
            CHECK(p1[i].filename() == p2[i].filename());
            CHECK(slurp(p1[i]) == slurp(p2[i]));
        }
    }
    CHECK(fs::exists(d1 / "demo_t.csv"));
    CHECK(fs::exists(d1 / "demo_plot.csv"));
    CHECK(fs::exists(d1 / "demo.json"));
    fs::remove_all(d1);
    fs::remove_all(d2);
    CHECK(parse_format("csv") == Format::Csv);
    CHECK_THROWS_AS(parse_format("xml"), ConfigError);
}

TEST_CASE("domain and cluster documents round-trip") {
    for (const DomainShape& d : {DomainShape::unit_box(), DomainShape::ball(Point(0.1, 0.2, -0.3), 0.7)}) {
        const Json j = domain_to_json(d);
        CHECK(domain_to_json(domain_from_json(j)) == j);
        const Cluster c = generate_cluster(d, 0.25);
        const Cluster back = cluster_from_json(Json::parse(cluster_to_json(c).dump()));
        REQUIRE(back.size() == c.size());
        for (std::size_t i = 0; i < c.size(); ++i) CHECK(back.centers[i] == c.centers[i]);
        CHECK(back.d == c.d);
        CHECK(back.on_lattice());
        CHECK(back.lattice == c.lattice);
    }
    Json bad = domain_to_json(DomainShape::unit_box());
    bad["colour"] = "red";
    CHECK_THROWS_AS(domain_from_json(bad), ConfigError);
}

TEST_CASE("foldylax config round-trips and validates") {
    const FoldylaxConfig c = parse_foldylax(foldylax_json());
    const Json once = to_json(c);
    CHECK(to_json(parse_foldylax(once)) == once);

    Json j = foldylax_json();
    j["h"] = 0.5;
    CHECK(config_error(j).find("9/11") != std::string::npos);
    j = foldylax_json();
    j["wave"]["p"] = Json::array({std::sqrt(0.99), 0.0, 0.1});
    CHECK(config_error(j).find("theta . p") != std::string::npos);
    j = foldylax_json();
    j["bogus"] = 1;
    CHECK(config_error(j).find("bogus") != std::string::npos);
    j = foldylax_json();
    j.erase("c_r");
    CHECK(config_error(j).find("c_r") != std::string::npos);
    j = foldylax_json();
    j["sign"] = "up";
    CHECK(!config_error(j).empty());
}

TEST_CASE("overrides") {
    Json j = foldylax_json();
    apply_override(j, "a=0.03");
    apply_override(j, "sign=minus");
    apply_override(j, "wave.theta=[1,0,0]");
    apply_override(j, "wave.p=[0,0,1]");
    const FoldylaxConfig c = parse_foldylax(j);
    CHECK(c.scales.a == 0.03);
    CHECK(c.scales.sign == Sign::Minus);
    CHECK(c.wave.theta == Point(1, 0, 0));
    CHECK_THROWS_AS(apply_override(j, "nonsense=1"), ConfigError);
    CHECK_THROWS_AS(apply_override(j, "wave.q=1"), ConfigError);
    CHECK_THROWS_AS(apply_override(j, "novalue"), ConfigError);
}

TEST_CASE("shipped configs parse") {
    const fs::path dir = fs::path(CLUSTEREM_SOURCE_DIR) / "configs";
    CHECK_NOTHROW(parse_foldylax(read_json_file((dir / "foldylax.json").string())));
    CHECK_NOTHROW(parse_lse(read_json_file((dir / "lse.json").string())));
    CHECK_NOTHROW(parse_regime_map(read_json_file((dir / "effective.json").string())));
    CHECK_NOTHROW(parse_convergence(read_json_file((dir / "converge.json").string())));
    CHECK_NOTHROW(parse_resonance(read_json_file((dir / "resonance.json").string())));
    CHECK_NOTHROW(parse_counting(read_json_file((dir / "counting.json").string())));
    CHECK_NOTHROW(parse_spectrum(read_json_file((dir / "spectrum.json").string())));
    CHECK_THROWS_AS(read_json_file((dir / "missing.json").string()), ConfigError);
}
