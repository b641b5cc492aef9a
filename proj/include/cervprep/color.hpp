#pragma once

#include "cervprep/image.hpp"

namespace cervprep {

/// One CIELAB color. L is lightness in [0,100]; a and b are the red-green
/// and blue-yellow chromaticity axes.
struct LabColor {
    double L = 0.0;
    double a = 0.0;
    double b = 0.0;
};

/// Per-pixel L, a, b planes sharing the source image dimensions.
struct LabImage {
    int width = 0;
    int height = 0;
    Plane L, a, b;

    LabColor at(int x, int y) const { return {L.at(x, y), a.at(x, y), b.at(x, y)}; }
};

/// sRGB byte triple -> CIELAB via IEC 61966-2-1 inverse companding, the
/// sRGB->XYZ matrix for D65, and the CIE L*a*b* formulas (cube-root/linear
/// split at (6/29)^3). White (255,255,255) maps to L=100, a=b=0.
LabColor srgb_to_lab(std::uint8_t r, std::uint8_t g, std::uint8_t b);

/// Apply srgb_to_lab per pixel.
LabImage rgb_to_lab_image(const RgbImage8& image);

/// Euclidean distance in the (a,b) chromaticity plane. L carries no color
/// information and is excluded.
double delta_ab(const LabColor& c1, const LabColor& c2);

} // namespace cervprep
