#include "cervprep/image.hpp"

#include "cervprep/errors.hpp"

#include <png.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>
#include <numeric>
#include <sstream>

namespace cervprep {

RgbImage8::RgbImage8(int w, int h, std::uint8_t r, std::uint8_t g, std::uint8_t b)
    : width(w), height(h), data(static_cast<std::size_t>(w) * h * 3) {
    for (std::size_t i = 0; i < data.size(); i += 3) {
        data[i] = r;
        data[i + 1] = g;
        data[i + 2] = b;
    }
}

std::size_t BinaryMask::count() const {
    return static_cast<std::size_t>(std::accumulate(bits.begin(), bits.end(), std::uint64_t{0}));
}

namespace {

struct FileCloser {
    void operator()(std::FILE* f) const {
        if (f) std::fclose(f);
    }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

std::string lower_ext(const std::string& path) {
    auto dot = path.find_last_of('.');
    if (dot == std::string::npos) return "";
    std::string ext = path.substr(dot + 1);
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return ext;
}

// --- PPM (P6) ---------------------------------------------------------------

// Reads one whitespace-delimited unsigned integer, skipping '#' comments.
int read_ppm_int(std::istream& in, const std::string& path) {
    int c = in.get();
    while (c != EOF && (std::isspace(c) || c == '#')) {
        if (c == '#') {
            while (c != EOF && c != '\n') c = in.get();
        }
        c = in.get();
    }
    if (c == EOF || !std::isdigit(c)) throw IoError(path + ": malformed PPM header");
    long value = 0;
    while (c != EOF && std::isdigit(c)) {
        value = value * 10 + (c - '0');
        if (value > 1'000'000'000) throw IoError(path + ": PPM header value out of range");
        c = in.get();
    }
    if (c != EOF) in.unget();
    return static_cast<int>(value);
}

RgbImage8 load_ppm(std::ifstream& in, const std::string& path) {
    char magic[2];
    in.read(magic, 2);
    if (!in || magic[0] != 'P' || magic[1] != '6')
        throw IoError(path + ": unsupported format (expected P6)");
    const int width = read_ppm_int(in, path);
    const int height = read_ppm_int(in, path);
    const int maxval = read_ppm_int(in, path);
    if (width < 1 || height < 1) throw IoError(path + ": zero-dimension image");
    if (maxval > 255) throw IoError(path + ": 16-bit PPM rejected (maxval " + std::to_string(maxval) + ")");
    if (maxval < 1) throw IoError(path + ": invalid PPM maxval");
    in.get(); // single whitespace byte after maxval

    RgbImage8 img;
    img.width = width;
    img.height = height;
    img.data.resize(static_cast<std::size_t>(width) * height * 3);
    in.read(reinterpret_cast<char*>(img.data.data()), static_cast<std::streamsize>(img.data.size()));
    if (static_cast<std::size_t>(in.gcount()) != img.data.size())
        throw IoError(path + ": unexpected end of pixel data");
    if (maxval != 255) {
        for (auto& v : img.data)
            v = static_cast<std::uint8_t>(std::lround(v * 255.0 / maxval));
    }
    return img;
}

void save_ppm(const RgbImage8& image, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError(path + ": cannot open for writing");
    out << "P6 " << image.width << " " << image.height << " 255\n";
    out.write(reinterpret_cast<const char*>(image.data.data()),
              static_cast<std::streamsize>(image.data.size()));
    if (!out) throw IoError(path + ": write failed");
}

// --- PNG --------------------------------------------------------------------

// Unwinding through libpng's C frames is safe here: x86-64 builds carry
// unwind tables by default.
[[noreturn]] void png_error_fn(png_structp, png_const_charp msg) {
    throw IoError(std::string("libpng: ") + (msg ? msg : "unknown error"));
}

void png_warning_fn(png_structp, png_const_charp) {}

RgbImage8 load_png(std::FILE* f, const std::string& path) {
    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, png_error_fn, png_warning_fn);
    if (!png) throw IoError(path + ": png_create_read_struct failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_read_struct(&png, nullptr, nullptr);
        throw IoError(path + ": png_create_info_struct failed");
    }

    RgbImage8 img;
    try {
        png_init_io(png, f);
        png_read_info(png, info);

        const png_uint_32 width = png_get_image_width(png, info);
        const png_uint_32 height = png_get_image_height(png, info);
        const int bit_depth = png_get_bit_depth(png, info);
        const int color_type = png_get_color_type(png, info);

        if (width < 1 || height < 1) throw IoError(path + ": zero-dimension image");
        if (bit_depth == 16) throw IoError(path + ": 16-bit PNG rejected");
        if (color_type != PNG_COLOR_TYPE_RGB && color_type != PNG_COLOR_TYPE_RGB_ALPHA)
            throw IoError(path + ": unsupported format (PNG must be 8-bit RGB or RGBA)");
        if (color_type == PNG_COLOR_TYPE_RGB_ALPHA) png_set_strip_alpha(png);

        png_read_update_info(png, info);
        if (png_get_rowbytes(png, info) != width * 3)
            throw IoError(path + ": unexpected PNG row size");

        img.width = static_cast<int>(width);
        img.height = static_cast<int>(height);
        img.data.resize(static_cast<std::size_t>(width) * height * 3);
        std::vector<png_bytep> rows(height);
        for (png_uint_32 y = 0; y < height; ++y)
            rows[y] = img.data.data() + static_cast<std::size_t>(y) * width * 3;
        png_read_image(png, rows.data());
        png_read_end(png, nullptr);
    } catch (...) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw;
    }
    png_destroy_read_struct(&png, &info, nullptr);
    return img;
}

void save_png_impl(const std::uint8_t* data, int width, int height, int color_type,
                   const std::string& path) {
    FilePtr f(std::fopen(path.c_str(), "wb"));
    if (!f) throw IoError(path + ": cannot open for writing");

    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, png_error_fn, png_warning_fn);
    if (!png) throw IoError(path + ": png_create_write_struct failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_write_struct(&png, nullptr);
        throw IoError(path + ": png_create_info_struct failed");
    }

    const int channels = (color_type == PNG_COLOR_TYPE_GRAY) ? 1 : 3;
    try {
        png_init_io(png, f.get());
        png_set_IHDR(png, info, static_cast<png_uint_32>(width), static_cast<png_uint_32>(height), 8,
                     color_type, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
                     PNG_FILTER_TYPE_DEFAULT);
        png_write_info(png, info);
        std::vector<png_bytep> rows(height);
        for (int y = 0; y < height; ++y)
            rows[y] = const_cast<png_bytep>(data + static_cast<std::size_t>(y) * width * channels);
        png_write_image(png, rows.data());
        png_write_end(png, nullptr);
    } catch (...) {
        png_destroy_write_struct(&png, &info);
        throw;
    }
    png_destroy_write_struct(&png, &info);
}

} // namespace

RgbImage8 load_image(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError(path + ": unreadable file");
    unsigned char sig[8] = {0};
    in.read(reinterpret_cast<char*>(sig), 8);
    const auto got = in.gcount();
    in.clear();
    in.seekg(0);

    if (got >= 2 && sig[0] == 'P' && sig[1] == '6') return load_ppm(in, path);
    if (got >= 8 && png_sig_cmp(sig, 0, 8) == 0) {
        in.close();
        FilePtr f(std::fopen(path.c_str(), "rb"));
        if (!f) throw IoError(path + ": unreadable file");
        return load_png(f.get(), path);
    }
    throw IoError(path + ": unsupported format (expected PNG or P6 PPM)");
}

void save_image(const RgbImage8& image, const std::string& path) {
    if (image.width < 1 || image.height < 1 ||
        image.data.size() != static_cast<std::size_t>(image.width) * image.height * 3)
        throw std::invalid_argument("save_image: invalid image");
    const std::string ext = lower_ext(path);
    if (ext == "png")
        save_png_impl(image.data.data(), image.width, image.height, PNG_COLOR_TYPE_RGB, path);
    else if (ext == "ppm")
        save_ppm(image, path);
    else
        throw IoError(path + ": unsupported output extension (use .png or .ppm)");
}

void save_mask_png(const BinaryMask& mask, const std::string& path) {
    std::vector<std::uint8_t> gray(mask.bits.size());
    std::transform(mask.bits.begin(), mask.bits.end(), gray.begin(),
                   [](std::uint8_t b) { return b ? std::uint8_t{255} : std::uint8_t{0}; });
    save_png_impl(gray.data(), mask.width, mask.height, PNG_COLOR_TYPE_GRAY, path);
}

PlaneTriple split_planes(const RgbImage8& image) {
    PlaneTriple t{Plane(image.width, image.height), Plane(image.width, image.height),
                  Plane(image.width, image.height)};
    const std::size_t n = static_cast<std::size_t>(image.width) * image.height;
    for (std::size_t i = 0; i < n; ++i) {
        t.r.values[i] = image.data[3 * i];
        t.g.values[i] = image.data[3 * i + 1];
        t.b.values[i] = image.data[3 * i + 2];
    }
    return t;
}

namespace {
std::uint8_t to_byte(double v) {
    v = std::clamp(v, 0.0, 255.0);
    return static_cast<std::uint8_t>(std::floor(v + 0.5)); // round half-up
}
} // namespace

RgbImage8 merge_planes(const Plane& r, const Plane& g, const Plane& b) {
    if (r.width != g.width || r.width != b.width || r.height != g.height || r.height != b.height)
        throw std::invalid_argument("merge_planes: dimension mismatch");
    RgbImage8 img;
    img.width = r.width;
    img.height = r.height;
    const std::size_t n = r.values.size();
    img.data.resize(n * 3);
    for (std::size_t i = 0; i < n; ++i) {
        img.data[3 * i] = to_byte(r.values[i]);
        img.data[3 * i + 1] = to_byte(g.values[i]);
        img.data[3 * i + 2] = to_byte(b.values[i]);
    }
    return img;
}

RgbImage8 crop(const RgbImage8& image, const BBox& box) {
    if (box.x0 < 0 || box.y0 < 0 || box.x1 > image.width || box.y1 > image.height ||
        box.x0 >= box.x1 || box.y0 >= box.y1)
        throw std::invalid_argument("crop: box out of bounds or empty");
    RgbImage8 out;
    out.width = box.width();
    out.height = box.height();
    out.data.resize(static_cast<std::size_t>(out.width) * out.height * 3);
    for (int y = 0; y < out.height; ++y) {
        const auto* src = image.pixel(box.x0, box.y0 + y);
        std::copy_n(src, static_cast<std::size_t>(out.width) * 3, out.pixel(0, y));
    }
    return out;
}

} // namespace cervprep
