#include <doctest.h>

#include <filesystem>

#include "fwm/errors.hpp"
#include "fwm/image_io.hpp"
#include "fwm/presets.hpp"

using namespace fwm;

namespace {
std::filesystem::path scratch(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / "fwm_unit";
    std::filesystem::create_directories(dir);
    return dir / name;
}
}  // namespace

TEST_CASE("PGM round trip keeps geometry and relative values") {
    Image img{Grid2D{6, 4, 5e-6, 7e-6}, {}};
    for (int i = 0; i < 24; ++i) img.v.push_back(0.5 * i);
    const auto path = scratch("round.pgm").string();
    write_pgm(path, img);
    const Image back = read_pgm(path);
    CHECK(back.grid == img.grid);
    for (std::size_t i = 0; i < img.v.size(); ++i) CHECK(back.v[i] == doctest::Approx(img.v[i]).epsilon(1e-4));
}

TEST_CASE("PGM rows run top to bottom in +y") {
    Image img{Grid2D{2, 2, 1e-6, 1e-6}, {0, 0, 0, 1}};  // bright pixel at the larger y
    const auto path = scratch("orient.pgm").string();
    write_pgm(path, img, 8);
    const std::string raw = read_text(path);
    CHECK(static_cast<unsigned char>(raw[raw.size() - 4 + 1]) == 255);
}

TEST_CASE("sidecar-less frames need a pitch") {
    const auto path = scratch("bare.pgm").string();
    write_text(path, std::string("P5\n2 2\n255\n") + std::string("\x01\x02\x03\x04", 4));
    std::filesystem::remove(path + ".hdr");
    CHECK_THROWS_AS(read_pgm(path), IOFailure);
    const Image img = read_pgm(path, 4.3e-6);
    CHECK(img.grid.dx == 4.3e-6);
    CHECK(img.v[0] == 3.0);  // first file row is the top (largest y)
}

TEST_CASE("crop") {
    Image img{Grid2D{8, 8, 1e-6, 1e-6}, std::vector<double>(64)};
    for (int i = 0; i < 64; ++i) img.v[i] = i;
    const Image c = crop(img, 0.0, 0.0, 4e-6, 4e-6);
    CHECK(c.grid.nx == 4);
    CHECK(c.grid.ny == 4);
    CHECK(c.v[2 * 4 + 2] == img.v[4 * 8 + 4]);
    CHECK_THROWS_AS(crop(img, 0.0, 0.0, 20e-6, 4e-6), DomainError);
}

TEST_CASE("missing files raise IOFailure") {
    CHECK_THROWS_AS(read_text("/nonexistent/dir/file"), IOFailure);
    CHECK_THROWS_AS(write_text("/nonexistent/dir/file", "x"), IOFailure);
}

TEST_CASE("preset runs write a manifest with digests") {
    const auto dir = scratch("fig5b_run");
    std::filesystem::remove_all(dir);
    const RunManifest m = run_preset("fig5b", dir.string());
    CHECK(m.preset == "fig5b");
    REQUIRE(m.files.size() >= 2);
    for (const auto& f : m.files) CHECK(std::filesystem::exists(dir / f.name));
    const std::string manifest = read_text((dir / "manifest.txt").string());
    CHECK(manifest.find(version_string()) != std::string::npos);
    CHECK(manifest.find(m.config_digest) != std::string::npos);
    const RunManifest again = run_preset("fig5b", dir.string());
    CHECK(again.files.size() == m.files.size());
    for (std::size_t i = 0; i < m.files.size(); ++i) CHECK(again.files[i].digest == m.files[i].digest);
}
