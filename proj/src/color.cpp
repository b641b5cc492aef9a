#include "cervprep/color.hpp"

#include <array>
#include <cmath>

namespace cervprep {

namespace {

// sRGB -> XYZ, D65 white point, 2-degree observer.
constexpr double RGB_TO_XYZ[3][3] = {
    {0.4124564, 0.3575761, 0.1804375},
    {0.2126729, 0.7151522, 0.0721750},
    {0.0193339, 0.1191920, 0.9503041},
};
constexpr double D65_XN = 0.95047;
constexpr double D65_YN = 1.00000;
constexpr double D65_ZN = 1.08883;

constexpr double LAB_DELTA = 6.0 / 29.0;
constexpr double LAB_EPSILON = LAB_DELTA * LAB_DELTA * LAB_DELTA; // (6/29)^3

double inverse_compand(double c) {
    return c <= 0.04045 ? c / 12.92 : std::pow((c + 0.055) / 1.055, 2.4);
}

double lab_f(double t) {
    return t > LAB_EPSILON ? std::cbrt(t) : t / (3.0 * LAB_DELTA * LAB_DELTA) + 4.0 / 29.0;
}

// Inverse companding has a 256-value domain per channel; precompute it once.
const std::array<double, 256>& compand_table() {
    static const std::array<double, 256> table = [] {
        std::array<double, 256> t{};
        for (int i = 0; i < 256; ++i) t[i] = inverse_compand(i / 255.0);
        return t;
    }();
    return table;
}

LabColor lab_from_linear(double lr, double lg, double lb) {
    const double x = RGB_TO_XYZ[0][0] * lr + RGB_TO_XYZ[0][1] * lg + RGB_TO_XYZ[0][2] * lb;
    const double y = RGB_TO_XYZ[1][0] * lr + RGB_TO_XYZ[1][1] * lg + RGB_TO_XYZ[1][2] * lb;
    const double z = RGB_TO_XYZ[2][0] * lr + RGB_TO_XYZ[2][1] * lg + RGB_TO_XYZ[2][2] * lb;
    const double fx = lab_f(x / D65_XN);
    const double fy = lab_f(y / D65_YN);
    const double fz = lab_f(z / D65_ZN);
    return {116.0 * fy - 16.0, 500.0 * (fx - fy), 200.0 * (fy - fz)};
}

} // namespace

LabColor srgb_to_lab(std::uint8_t r, std::uint8_t g, std::uint8_t b) {
    const auto& t = compand_table();
    return lab_from_linear(t[r], t[g], t[b]);
}

LabImage rgb_to_lab_image(const RgbImage8& image) {
    LabImage lab;
    lab.width = image.width;
    lab.height = image.height;
    lab.L = Plane(image.width, image.height);
    lab.a = Plane(image.width, image.height);
    lab.b = Plane(image.width, image.height);
    const auto& t = compand_table();
    const std::size_t n = static_cast<std::size_t>(image.width) * image.height;
    for (std::size_t i = 0; i < n; ++i) {
        const LabColor c =
            lab_from_linear(t[image.data[3 * i]], t[image.data[3 * i + 1]], t[image.data[3 * i + 2]]);
        lab.L.values[i] = c.L;
        lab.a.values[i] = c.a;
        lab.b.values[i] = c.b;
    }
    return lab;
}

double delta_ab(const LabColor& c1, const LabColor& c2) {
    const double da = c1.a - c2.a;
    const double db = c1.b - c2.b;
    return std::sqrt(da * da + db * db);
}

} // namespace cervprep
