#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace cervprep {

/// 8-bit three-channel raster stored row-major as interleaved R,G,B triples.
/// Top-left origin, y increasing downward.
struct RgbImage8 {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> data; // size = width * height * 3

    RgbImage8() = default;
    RgbImage8(int w, int h, std::uint8_t r = 0, std::uint8_t g = 0, std::uint8_t b = 0);

    std::uint8_t* pixel(int x, int y) { return data.data() + 3 * (static_cast<std::size_t>(y) * width + x); }
    const std::uint8_t* pixel(int x, int y) const {
        return data.data() + 3 * (static_cast<std::size_t>(y) * width + x);
    }
    void set_pixel(int x, int y, std::uint8_t r, std::uint8_t g, std::uint8_t b) {
        auto* p = pixel(x, y);
        p[0] = r;
        p[1] = g;
        p[2] = b;
    }

    bool operator==(const RgbImage8&) const = default;
};

/// Row-major scalar grid holding one color plane or any intermediate field.
/// Values are doubles: the inpainting solver drives residuals below 1e-6,
/// which float storage of byte-scale data cannot represent.
struct Plane {
    int width = 0;
    int height = 0;
    std::vector<double> values; // size = width * height

    Plane() = default;
    Plane(int w, int h, double fill = 0.0)
        : width(w), height(h), values(static_cast<std::size_t>(w) * h, fill) {}

    double at(int x, int y) const { return values[static_cast<std::size_t>(y) * width + x]; }
    double& at(int x, int y) { return values[static_cast<std::size_t>(y) * width + x]; }
};

/// Per-pixel boolean raster; 1 marks a specular or ROI pixel.
struct BinaryMask {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> bits; // size = width * height, values 0/1

    BinaryMask() = default;
    BinaryMask(int w, int h, bool fill = false)
        : width(w), height(h), bits(static_cast<std::size_t>(w) * h, fill ? 1 : 0) {}

    bool get(int x, int y) const { return bits[static_cast<std::size_t>(y) * width + x] != 0; }
    void set(int x, int y, bool v) { bits[static_cast<std::size_t>(y) * width + x] = v ? 1 : 0; }

    std::size_t count() const;

    bool operator==(const BinaryMask&) const = default;
};

/// Half-open pixel rectangle: x in [x0,x1), y in [y0,y1).
struct BBox {
    int x0 = 0;
    int y0 = 0;
    int x1 = 0;
    int y1 = 0;

    int width() const { return x1 - x0; }
    int height() const { return y1 - y0; }

    bool operator==(const BBox&) const = default;
};

/// Decode a PNG (8-bit RGB/RGBA, alpha discarded) or binary PPM (P6, maxval
/// 255) file. The format is sniffed from the file's magic bytes, not the
/// extension. 16-bit inputs are rejected, never truncated.
RgbImage8 load_image(const std::string& path);

/// Encode to PNG or PPM depending on the path extension (.png/.ppm).
/// Round-trips byte-identically through load_image.
void save_image(const RgbImage8& image, const std::string& path);

/// Write a mask as an 8-bit grayscale PNG with values 0/255.
void save_mask_png(const BinaryMask& mask, const std::string& path);

/// Separate an image into R, G, B planes (byte values cast to real).
struct PlaneTriple {
    Plane r, g, b;
};
PlaneTriple split_planes(const RgbImage8& image);

/// Reassemble planes into an image: each value is clamped to [0,255] and
/// rounded half-up to a byte. Inverse of split_planes on byte data.
RgbImage8 merge_planes(const Plane& r, const Plane& g, const Plane& b);

/// Extract the sub-image covered by `box`, which must lie within bounds and
/// be non-empty.
RgbImage8 crop(const RgbImage8& image, const BBox& box);

} // namespace cervprep
