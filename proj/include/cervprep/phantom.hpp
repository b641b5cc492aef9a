#pragma once

#include "cervprep/image.hpp"

#include <array>
#include <cstdint>
#include <utility>

namespace cervprep {

/// Scene description for one synthetic cervigram: a pink ellipse (the
/// cervix) on a dark neutral background, an optional dark frame band
/// standing in for equipment and overlays, saturated white specular dots
/// inside the ellipse, and Gaussian pixel noise.
struct PhantomSpec {
    int width = 640;
    int height = 640;

    double ellipse_cx = 320.0;
    double ellipse_cy = 320.0;
    double ellipse_ax = 220.0; // semi-axes, pixels
    double ellipse_ay = 205.0;
    double ellipse_rot = 0.0; // radians

    std::array<std::uint8_t, 3> cervix_color{210, 140, 150};
    std::array<std::uint8_t, 3> background_color{60, 55, 58};
    std::array<std::uint8_t, 3> frame_color{25, 22, 26};

    int n_speculars = 12;
    int specular_radius_min = 2;
    int specular_radius_max = 6;

    bool frame = true;          // dark border band, 8% of width per side
    double noise_sigma = 4.0;   // intensity levels; specular pixels stay exact
    std::uint64_t seed = 0;
};

/// Ground truth emitted next to the rendered image.
struct PhantomTruth {
    RgbImage8 clean_image;    // scene before specular dots and noise
    BinaryMask specular_mask; // exactly the painted (255,255,255) pixels
    BinaryMask ellipse_mask;
    BBox ellipse_bbox;        // tight bounds of ellipse_mask
};

/// Default spec with seeded jitter of the ellipse geometry, so a batch of
/// seeds exercises a spread of sizes, positions, and rotations.
PhantomSpec default_phantom_spec(std::uint64_t seed);

/// Render the scene. Deterministic for a fixed spec.
std::pair<RgbImage8, PhantomTruth> generate_phantom(const PhantomSpec& spec);

} // namespace cervprep
