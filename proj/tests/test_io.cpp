#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "besovq/io.hpp"
#include "besovq/meyer.hpp"
#include "besovq/random.hpp"
#include "besovq/semigroup.hpp"

using namespace besovq;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / "besovq_test_io";
    fs::create_directories(dir);
    return dir / name;
}

CoefficientSet sample_set() {
    const BasisSpec spec = BasisSpec::for_grid(Grid{2, 32, 2});
    CoefficientSet c(spec, 2);
    c.set(0, WaveletIndex{1u, 0, {1, 2, 0}}, cplx{0.25, -1.5});
    c.set(1, WaveletIndex{3u, spec.j_max, {0, 3, 0}}, cplx{1e-300, 7.0});
    c.set(0, WaveletIndex{0u, spec.j_min, {0, 0, 0}}, -2.0);
    return c;
}

void check_same(const CoefficientSet& a, const CoefficientSet& b) {
    CHECK(a.spec() == b.spec());
    CHECK(a.components() == b.components());
    CHECK(a.nonzeros() == b.nonzeros());
    a.for_each([&](int c, const WaveletIndex& idx, cplx v) { CHECK(b.get(c, idx) == v); });
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("coefficient files round-trip bit for bit") {
    const CoefficientSet c = sample_set();
    const std::string path = scratch("set.bqcs").string();
    io::write_coefficients(path, c);
    CHECK(slurp(path).substr(0, 4) == "BQCS");
    check_same(c, io::read_coefficients(path));
    check_same(c, io::coefficients_from_json(io::coefficients_to_json(c)));
    // through text
    check_same(c, io::coefficients_from_json(nlohmann::json::parse(io::coefficients_to_json(c).dump())));
}

TEST_CASE("malformed coefficient files are rejected with the path") {
    const std::string path = scratch("bad.bqcs").string();
    io::write_text(path, "BQXX garbage");
    CHECK_THROWS_WITH_AS(io::read_coefficients(path), doctest::Contains("bad.bqcs"), Error);
    io::write_coefficients(path, sample_set());
    const std::string full = slurp(path);
    io::write_text(path, full.substr(0, full.size() - 5));
    CHECK_THROWS_AS(io::read_coefficients(path), Error);
    CHECK_THROWS_AS(io::read_coefficients(scratch("missing.bqcs").string()), Error);
}

TEST_CASE("checkpoints round-trip") {
    Rng rng(3);
    io::Checkpoint ck{random_band_limited(Grid{2, 16, 2}, 2, 5, rng), 0.75, 0.125};
    const std::string path = scratch("state.bqck").string();
    io::write_checkpoint(path, ck);
    const io::Checkpoint back = io::read_checkpoint(path);
    CHECK(back.beta == 0.75);
    CHECK(back.time == 0.125);
    CHECK(back.field.grid() == ck.field.grid());
    CHECK((back.field - ck.field).max_coefficient() == 0.0);
    CHECK_THROWS_AS(io::read_coefficients(path), Error);
}

TEST_CASE("trajectory csv lists coefficients above the floor") {
    const BasisSpec spec = BasisSpec::for_grid(Grid{1, 32, 2});
    CoefficientSet one(spec, 1);
    one.set(0, WaveletIndex{1u, 0, {2, 0, 0}}, 1.0);
    const CoefficientTrajectory tc = semigroup_trajectory(one, 1.0, {0.0, 0.01});
    const fs::path path = scratch("traj.csv");
    io::write_trajectory_csv(path.string(), tc, 1e-3);
    std::ifstream in(path);
    std::string header, row;
    std::getline(in, header);
    CHECK(header.rfind("t,component,eps,j,k0,re,im,abs", 0) == 0);
    int at_zero = 0, later = 0;
    while (std::getline(in, row)) {
        if (row.empty()) continue;
        (row.rfind("0,", 0) == 0 ? at_zero : later) += 1;
        CHECK(std::stod(row.substr(row.rfind(',') + 1)) > 1e-3);
    }
    CHECK(at_zero == 1);
    CHECK(later >= 1);
}

TEST_CASE("json helpers create directories and name bad files") {
    const fs::path path = scratch("nested/dir/out.json");
    fs::remove_all(path.parent_path());
    io::write_json(path.string(), {{"a", 1}});
    CHECK(io::read_json(path.string())["a"] == 1);
    io::write_text(path.string(), "{not json");
    CHECK_THROWS_WITH(io::read_json(path.string()), doctest::Contains("out.json"));
}
