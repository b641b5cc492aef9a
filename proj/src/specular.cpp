#include "cervprep/specular.hpp"

#include <stdexcept>

namespace cervprep {

std::vector<std::pair<int, int>> StructuringElement::offsets() const {
    if (radius < 1) throw std::invalid_argument("StructuringElement: radius must be >= 1");
    std::vector<std::pair<int, int>> out;
    for (int dy = -radius; dy <= radius; ++dy)
        for (int dx = -radius; dx <= radius; ++dx) {
            if (shape == Shape::Disk && dx * dx + dy * dy > radius * radius) continue;
            out.emplace_back(dx, dy);
        }
    return out;
}

BinaryMask detect_specular(const RgbImage8& image, const SpecularConfig& cfg) {
    if (cfg.threshold < 1) throw std::invalid_argument("detect_specular: threshold must be in [1,255]");
    BinaryMask mask(image.width, image.height);
    const std::size_t n = static_cast<std::size_t>(image.width) * image.height;
    for (std::size_t i = 0; i < n; ++i) {
        const std::uint8_t* p = image.data.data() + 3 * i;
        mask.bits[i] = (p[0] >= cfg.threshold && p[1] >= cfg.threshold && p[2] >= cfg.threshold) ? 1 : 0;
    }
    return mask;
}

BinaryMask dilate(const BinaryMask& mask, const StructuringElement& se) {
    const auto offs = se.offsets();
    BinaryMask out(mask.width, mask.height);
    for (int y = 0; y < mask.height; ++y)
        for (int x = 0; x < mask.width; ++x) {
            if (!mask.get(x, y)) continue;
            // The SE is symmetric, so stamping it over every source pixel
            // equals the footprint-hit formulation.
            for (const auto& [dx, dy] : offs) {
                const int nx = x + dx;
                const int ny = y + dy;
                if (nx >= 0 && nx < mask.width && ny >= 0 && ny < mask.height) out.set(nx, ny, true);
            }
        }
    return out;
}

std::vector<std::pair<int, int>> mask_boundary(const BinaryMask& mask) {
    static constexpr int DX[4] = {1, -1, 0, 0};
    static constexpr int DY[4] = {0, 0, 1, -1};
    std::vector<std::pair<int, int>> out;
    for (int y = 0; y < mask.height; ++y)
        for (int x = 0; x < mask.width; ++x) {
            if (mask.get(x, y)) continue;
            for (int k = 0; k < 4; ++k) {
                const int nx = x + DX[k];
                const int ny = y + DY[k];
                if (nx >= 0 && nx < mask.width && ny >= 0 && ny < mask.height && mask.get(nx, ny)) {
                    out.emplace_back(x, y);
                    break;
                }
            }
        }
    return out; // row-major by construction
}

} // namespace cervprep
