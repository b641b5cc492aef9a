#pragma once

#include "cervprep/image.hpp"

#include <utility>
#include <vector>

namespace cervprep {

/// Morphology footprint, symmetric about its center.
struct StructuringElement {
    enum class Shape { Square, Disk };
    Shape shape = Shape::Square;
    int radius = 1; // >= 1

    /// Center-relative (dx,dy) offsets of the footprint.
    std::vector<std::pair<int, int>> offsets() const;
};

struct SpecularConfig {
    std::uint8_t threshold = 240; // per-plane white cutoff, in [1,255]
    StructuringElement se{};
};

/// A pixel is specular iff R, G and B all reach the threshold (the per-plane
/// white selection AND-ed across planes).
BinaryMask detect_specular(const RgbImage8& image, const SpecularConfig& cfg);

/// Morphological dilation; the footprint is clipped at image borders.
BinaryMask dilate(const BinaryMask& mask, const StructuringElement& se);

/// The Dirichlet ring: false pixels 4-adjacent to at least one true pixel,
/// sorted row-major (y, then x).
std::vector<std::pair<int, int>> mask_boundary(const BinaryMask& mask);

} // namespace cervprep
