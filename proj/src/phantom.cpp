#include "cervprep/phantom.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace cervprep {

namespace {

bool inside_ellipse(const PhantomSpec& s, double px, double py) {
    const double dx = px - s.ellipse_cx;
    const double dy = py - s.ellipse_cy;
    const double c = std::cos(s.ellipse_rot);
    const double sn = std::sin(s.ellipse_rot);
    const double u = (c * dx + sn * dy) / s.ellipse_ax;
    const double v = (-sn * dx + c * dy) / s.ellipse_ay;
    return u * u + v * v <= 1.0;
}

std::uint8_t clip_byte(double v) {
    return static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L));
}

} // namespace

PhantomSpec default_phantom_spec(std::uint64_t seed) {
    PhantomSpec s;
    s.seed = seed;
    std::mt19937_64 rng(seed ^ 0x70686e746d5f6a74ULL); // geometry stream, distinct from render stream
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    s.ellipse_cx = s.width * (0.5 + 0.04 * (unit(rng) - 0.5));
    s.ellipse_cy = s.height * (0.5 + 0.04 * (unit(rng) - 0.5));
    s.ellipse_ax = s.width * (0.32 + 0.05 * unit(rng));
    s.ellipse_ay = s.height * (0.30 + 0.05 * unit(rng));
    s.ellipse_rot = 0.5 * (unit(rng) - 0.5); // up to ~0.25 rad either way
    s.n_speculars = 8 + static_cast<int>(unit(rng) * 8.0);
    return s;
}

std::pair<RgbImage8, PhantomTruth> generate_phantom(const PhantomSpec& spec) {
    if (spec.width < 1 || spec.height < 1) throw std::invalid_argument("phantom: empty image");
    if (spec.specular_radius_min < 1 || spec.specular_radius_max < spec.specular_radius_min)
        throw std::invalid_argument("phantom: bad specular radius range");
    const double ext_x = std::hypot(spec.ellipse_ax * std::cos(spec.ellipse_rot),
                                    spec.ellipse_ay * std::sin(spec.ellipse_rot));
    const double ext_y = std::hypot(spec.ellipse_ax * std::sin(spec.ellipse_rot),
                                    spec.ellipse_ay * std::cos(spec.ellipse_rot));
    if (spec.ellipse_cx - ext_x < 0 || spec.ellipse_cx + ext_x > spec.width - 1 ||
        spec.ellipse_cy - ext_y < 0 || spec.ellipse_cy + ext_y > spec.height - 1)
        throw std::invalid_argument("phantom: ellipse out of bounds");

    PhantomTruth truth;
    truth.clean_image = RgbImage8(spec.width, spec.height, spec.background_color[0],
                                  spec.background_color[1], spec.background_color[2]);
    truth.specular_mask = BinaryMask(spec.width, spec.height);
    truth.ellipse_mask = BinaryMask(spec.width, spec.height);

    if (spec.frame) {
        const int band = std::max(1, static_cast<int>(std::lround(0.08 * spec.width)));
        for (int y = 0; y < spec.height; ++y)
            for (int x = 0; x < spec.width; ++x)
                if (x < band || y < band || x >= spec.width - band || y >= spec.height - band)
                    truth.clean_image.set_pixel(x, y, spec.frame_color[0], spec.frame_color[1],
                                                spec.frame_color[2]);
    }

    int ex0 = spec.width, ey0 = spec.height, ex1 = -1, ey1 = -1;
    for (int y = 0; y < spec.height; ++y)
        for (int x = 0; x < spec.width; ++x) {
            if (!inside_ellipse(spec, x, y)) continue;
            truth.ellipse_mask.set(x, y, true);
            truth.clean_image.set_pixel(x, y, spec.cervix_color[0], spec.cervix_color[1],
                                        spec.cervix_color[2]);
            ex0 = std::min(ex0, x);
            ey0 = std::min(ey0, y);
            ex1 = std::max(ex1, x);
            ey1 = std::max(ey1, y);
        }
    if (ex1 < 0) throw std::invalid_argument("phantom: ellipse covers no pixels");
    truth.ellipse_bbox = {ex0, ey0, ex1 + 1, ey1 + 1};

    RgbImage8 image = truth.clean_image;
    std::mt19937_64 rng(spec.seed);

    // Specular dots: whole disk must lie inside the ellipse.
    std::uniform_int_distribution<int> rad(spec.specular_radius_min, spec.specular_radius_max);
    std::uniform_real_distribution<double> px(ex0, ex1 + 1.0);
    std::uniform_real_distribution<double> py(ey0, ey1 + 1.0);
    for (int dot = 0; dot < spec.n_speculars; ++dot) {
        const int r = rad(rng);
        bool placed = false;
        for (int attempt = 0; attempt < 10000 && !placed; ++attempt) {
            const int cx = static_cast<int>(px(rng));
            const int cy = static_cast<int>(py(rng));
            bool fits = true;
            for (int dy = -r; dy <= r && fits; ++dy)
                for (int dx = -r; dx <= r && fits; ++dx) {
                    if (dx * dx + dy * dy > r * r) continue;
                    const int x = cx + dx;
                    const int y = cy + dy;
                    if (x < 0 || x >= spec.width || y < 0 || y >= spec.height ||
                        !truth.ellipse_mask.get(x, y))
                        fits = false;
                }
            if (!fits) continue;
            for (int dy = -r; dy <= r; ++dy)
                for (int dx = -r; dx <= r; ++dx) {
                    if (dx * dx + dy * dy > r * r) continue;
                    image.set_pixel(cx + dx, cy + dy, 255, 255, 255);
                    truth.specular_mask.set(cx + dx, cy + dy, true);
                }
            placed = true;
        }
        if (!placed) throw std::invalid_argument("phantom: speculars cannot fit inside the ellipse");
    }

    if (spec.noise_sigma > 0.0) {
        std::normal_distribution<double> noise(0.0, spec.noise_sigma);
        for (int y = 0; y < spec.height; ++y)
            for (int x = 0; x < spec.width; ++x) {
                if (truth.specular_mask.get(x, y)) continue; // keep highlights saturated
                auto* p = image.pixel(x, y);
                p[0] = clip_byte(p[0] + noise(rng));
                p[1] = clip_byte(p[1] + noise(rng));
                p[2] = clip_byte(p[2] + noise(rng));
            }
    }
    return {std::move(image), std::move(truth)};
}

} // namespace cervprep
