#include "cervprep/errors.hpp"
#include "cervprep/image.hpp"

#include <doctest.h>
#include <png.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>

using namespace cervprep;
namespace fs = std::filesystem;

namespace {

fs::path temp_file(const std::string& name) {
    static const fs::path dir = [] {
        auto d = fs::temp_directory_path() / "cervprep_test_image";
        fs::create_directories(d);
        return d;
    }();
    return dir / name;
}

RgbImage8 random_image(int w, int h, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> byte(0, 255);
    RgbImage8 img(w, h);
    for (auto& v : img.data) v = static_cast<std::uint8_t>(byte(rng));
    return img;
}

void write_file(const fs::path& path, const std::string& bytes) {
    std::ofstream f(path, std::ios::binary);
    f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

} // namespace

TEST_CASE("P6 decode of a 2x1 file") {
    const auto path = temp_file("two_pixels.ppm");
    write_file(path, std::string("P6 2 1 255\n") + std::string("\xff\x00\x00\x00\x00\xff", 6));
    const RgbImage8 img = load_image(path.string());
    CHECK(img.width == 2);
    CHECK(img.height == 1);
    CHECK(img.data == std::vector<std::uint8_t>{255, 0, 0, 0, 0, 255});
}

TEST_CASE("truncated P6 payload reports unexpected end of pixel data") {
    const auto path = temp_file("truncated.ppm");
    write_file(path, std::string("P6 2 2 255\n") + "\xff\x00\x00");
    CHECK_THROWS_WITH_AS(load_image(path.string()), doctest::Contains("unexpected end of pixel data"),
                         IoError);
}

TEST_CASE("PPM header with comments and maxval > 255 rejected") {
    const auto path = temp_file("deep.ppm");
    write_file(path, std::string("P6 # wide\n1 1 65535\n") + std::string(6, '\x01'));
    CHECK_THROWS_WITH_AS(load_image(path.string()), doctest::Contains("16-bit"), IoError);
}

TEST_CASE("PNG save/load round-trip is the identity") {
    for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
        const RgbImage8 img = random_image(13, 7, seed);
        const auto path = temp_file("roundtrip_" + std::to_string(seed) + ".png");
        save_image(img, path.string());
        CHECK(load_image(path.string()) == img);
    }
}

TEST_CASE("PPM save/load round-trip is the identity") {
    const RgbImage8 img = random_image(5, 9, 99);
    const auto path = temp_file("roundtrip.ppm");
    save_image(img, path.string());
    CHECK(load_image(path.string()) == img);
}

TEST_CASE("1x1 black image round-trips") {
    const RgbImage8 img(1, 1, 0, 0, 0);
    const auto path = temp_file("single.png");
    save_image(img, path.string());
    const RgbImage8 back = load_image(path.string());
    CHECK(back.width == 1);
    CHECK(back.height == 1);
    CHECK(back.data == std::vector<std::uint8_t>{0, 0, 0});
}

TEST_CASE("RGBA PNG loads with alpha discarded") {
    const auto path = temp_file("rgba.png");
    {
        std::FILE* f = std::fopen(path.string().c_str(), "wb");
        REQUIRE(f);
        png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
        png_infop info = png_create_info_struct(png);
        png_init_io(png, f);
        png_set_IHDR(png, info, 2, 1, 8, PNG_COLOR_TYPE_RGB_ALPHA, PNG_INTERLACE_NONE,
                     PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
        png_write_info(png, info);
        const std::uint8_t row[] = {10, 20, 30, 128, 40, 50, 60, 0};
        png_bytep rows[] = {const_cast<png_bytep>(row)};
        png_write_image(png, rows);
        png_write_end(png, nullptr);
        png_destroy_write_struct(&png, &info);
        std::fclose(f);
    }
    const RgbImage8 img = load_image(path.string());
    CHECK(img.data == std::vector<std::uint8_t>{10, 20, 30, 40, 50, 60});
}

TEST_CASE("16-bit PNG rejected, not truncated") {
    const auto path = temp_file("deep.png");
    {
        std::FILE* f = std::fopen(path.string().c_str(), "wb");
        REQUIRE(f);
        png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
        png_infop info = png_create_info_struct(png);
        png_init_io(png, f);
        png_set_IHDR(png, info, 1, 1, 16, PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE,
                     PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
        png_write_info(png, info);
        const std::uint8_t row[] = {0xff, 0xff, 0x00, 0x00, 0x12, 0x34};
        png_bytep rows[] = {const_cast<png_bytep>(row)};
        png_write_image(png, rows);
        png_write_end(png, nullptr);
        png_destroy_write_struct(&png, &info);
        std::fclose(f);
    }
    CHECK_THROWS_WITH_AS(load_image(path.string()), doctest::Contains("16-bit"), IoError);
}

TEST_CASE("unreadable path and garbage content fail cleanly") {
    CHECK_THROWS_AS(load_image("/nonexistent/nope.png"), IoError);
    const auto path = temp_file("garbage.bin");
    write_file(path, "this is not an image");
    CHECK_THROWS_WITH_AS(load_image(path.string()), doctest::Contains("unsupported format"), IoError);
}

TEST_CASE("save to unwritable path fails") {
    const RgbImage8 img(1, 1);
    CHECK_THROWS_AS(save_image(img, "/nonexistent_dir/out.png"), IoError);
}

TEST_CASE("split_planes extracts channels") {
    RgbImage8 img(1, 1, 10, 20, 30);
    const auto planes = split_planes(img);
    CHECK(planes.r.values == std::vector<double>{10.0});
    CHECK(planes.g.values == std::vector<double>{20.0});
    CHECK(planes.b.values == std::vector<double>{30.0});

    const RgbImage8 white(3, 2, 255, 255, 255);
    const auto wp = split_planes(white);
    for (double v : wp.r.values) CHECK(v == 255.0);
    for (double v : wp.g.values) CHECK(v == 255.0);
    for (double v : wp.b.values) CHECK(v == 255.0);
}

TEST_CASE("merge_planes clamps and rounds half-up") {
    Plane r(1, 1), g(1, 1), b(1, 1);
    r.values[0] = 10.4;
    g.values[0] = 20.5;
    b.values[0] = 300.0;
    const RgbImage8 img = merge_planes(r, g, b);
    CHECK(img.data == std::vector<std::uint8_t>{10, 21, 255});

    r.values[0] = -3.0;
    CHECK(merge_planes(r, g, b).data[0] == 0);
}

TEST_CASE("merge_planes rejects mismatched dimensions") {
    CHECK_THROWS_AS(merge_planes(Plane(2, 1), Plane(1, 1), Plane(1, 1)), std::invalid_argument);
}

TEST_CASE("merge of split planes reproduces the image") {
    const RgbImage8 img = random_image(17, 11, 7);
    const auto p = split_planes(img);
    CHECK(merge_planes(p.r, p.g, p.b) == img);
}

TEST_CASE("crop basics") {
    RgbImage8 img = random_image(3, 3, 5);
    CHECK(crop(img, {0, 0, 3, 3}) == img);

    const RgbImage8 center = crop(img, {1, 1, 2, 2});
    CHECK(center.width == 1);
    CHECK(center.height == 1);
    CHECK(center.data[0] == img.pixel(1, 1)[0]);
    CHECK(center.data[1] == img.pixel(1, 1)[1]);
    CHECK(center.data[2] == img.pixel(1, 1)[2]);

    CHECK_THROWS_AS(crop(img, {0, 0, 0, 1}), std::invalid_argument);
    CHECK_THROWS_AS(crop(img, {0, 0, 4, 3}), std::invalid_argument);
}

TEST_CASE("nested crops compose by translation") {
    const RgbImage8 img = random_image(12, 10, 21);
    const BBox a{2, 3, 11, 9};
    const BBox inner{1, 2, 5, 4};
    const BBox translated{a.x0 + inner.x0, a.y0 + inner.y0, a.x0 + inner.x1, a.y0 + inner.y1};
    CHECK(crop(crop(img, a), inner) == crop(img, translated));
}
