#include "cervprep/roi.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace cervprep {

CervixSelection select_cervix_cluster(const ClusterModel& model, const LabImage& lab, int width,
                                      int height) {
    if (model.k < 2) throw std::invalid_argument("select_cervix_cluster: need k >= 2 clusters");
    const std::size_t n = static_cast<std::size_t>(width) * height;
    if (model.assignments.size() != n)
        throw std::invalid_argument("select_cervix_cluster: assignments do not cover the image");
    if (lab.width != width || lab.height != height)
        throw std::invalid_argument("select_cervix_cluster: lab dimensions mismatch");

    const double cx = (width - 1) / 2.0;
    const double cy = (height - 1) / 2.0;
    const double half_diag_sq = std::max(cx * cx + cy * cy, 1.0);

    std::vector<ClusterScore> scores(static_cast<std::size_t>(model.k));
    for (int c = 0; c < model.k; ++c) scores[static_cast<std::size_t>(c)].cluster = c;
    for (int y = 0; y < height; ++y)
        for (int x = 0; x < width; ++x) {
            auto& s = scores[static_cast<std::size_t>(model.assignments[static_cast<std::size_t>(y) * width + x])];
            const double dx = x - cx;
            const double dy = y - cy;
            s.spatial += dx * dx + dy * dy;
            s.mean_a += lab.a.at(x, y);
            ++s.size;
        }

    double min_spatial = std::numeric_limits<double>::infinity();
    for (auto& s : scores) {
        if (s.size == 0) continue;
        s.spatial /= static_cast<double>(s.size) * half_diag_sq;
        s.mean_a /= static_cast<double>(s.size);
        min_spatial = std::min(min_spatial, s.spatial);
    }
    if (!std::isfinite(min_spatial))
        throw std::invalid_argument("select_cervix_cluster: all clusters empty");

    // Smallest spatial score wins; within 1e-9 of it, the pinkest cluster.
    int best = -1;
    for (const auto& s : scores) {
        if (s.size == 0 || s.spatial > min_spatial + 1e-9) continue;
        if (best < 0 || s.mean_a > scores[static_cast<std::size_t>(best)].mean_a) best = s.cluster;
    }
    return {best, std::move(scores)};
}

ComponentLabeling connected_components(const BinaryMask& mask, int connectivity) {
    if (connectivity != 4 && connectivity != 8)
        throw std::invalid_argument("connected_components: connectivity must be 4 or 8");
    static constexpr int DX8[8] = {1, -1, 0, 0, 1, 1, -1, -1};
    static constexpr int DY8[8] = {0, 0, 1, -1, 1, -1, 1, -1};
    const int n_dirs = connectivity == 4 ? 4 : 8;

    ComponentLabeling out;
    out.width = mask.width;
    out.height = mask.height;
    out.labels.assign(mask.bits.size(), 0);

    std::vector<std::size_t> stack;
    for (std::size_t start = 0; start < mask.bits.size(); ++start) {
        if (!mask.bits[start] || out.labels[start] != 0) continue;
        const auto id = static_cast<std::int32_t>(out.sizes.size() + 1);
        std::size_t count = 0;
        out.labels[start] = id;
        stack.assign(1, start);
        while (!stack.empty()) {
            const std::size_t i = stack.back();
            stack.pop_back();
            ++count;
            const int x = static_cast<int>(i % mask.width);
            const int y = static_cast<int>(i / mask.width);
            for (int k = 0; k < n_dirs; ++k) {
                const int nx = x + DX8[k];
                const int ny = y + DY8[k];
                if (nx < 0 || nx >= mask.width || ny < 0 || ny >= mask.height) continue;
                const std::size_t ni = static_cast<std::size_t>(ny) * mask.width + nx;
                if (mask.bits[ni] && out.labels[ni] == 0) {
                    out.labels[ni] = id;
                    stack.push_back(ni);
                }
            }
        }
        out.sizes.push_back(count);
    }
    return out;
}

BinaryMask largest_component(const ComponentLabeling& labeling) {
    if (labeling.sizes.empty()) throw std::invalid_argument("largest_component: no components");
    std::size_t best = 0;
    for (std::size_t i = 1; i < labeling.sizes.size(); ++i)
        if (labeling.sizes[i] > labeling.sizes[best]) best = i; // ties keep the lower id
    const auto id = static_cast<std::int32_t>(best + 1);

    BinaryMask out(labeling.width, labeling.height);
    for (std::size_t i = 0; i < labeling.labels.size(); ++i) out.bits[i] = labeling.labels[i] == id;
    return out;
}

BBox bbox_with_margin(const BinaryMask& mask, int margin) {
    if (margin < 0) throw std::invalid_argument("bbox_with_margin: margin must be >= 0");
    int x0 = std::numeric_limits<int>::max(), y0 = x0;
    int x1 = -1, y1 = -1;
    for (int y = 0; y < mask.height; ++y)
        for (int x = 0; x < mask.width; ++x) {
            if (!mask.get(x, y)) continue;
            x0 = std::min(x0, x);
            y0 = std::min(y0, y);
            x1 = std::max(x1, x);
            y1 = std::max(y1, y);
        }
    if (x1 < 0) throw std::invalid_argument("bbox_with_margin: empty mask");
    return {std::max(0, x0 - margin), std::max(0, y0 - margin),
            std::min(mask.width, x1 + 1 + margin), std::min(mask.height, y1 + 1 + margin)};
}

RoiResult extract_roi(const ClusterModel& model, const LabImage& lab, int connectivity, int margin) {
    auto selection = select_cervix_cluster(model, lab, lab.width, lab.height);

    BinaryMask member(lab.width, lab.height);
    for (std::size_t i = 0; i < model.assignments.size(); ++i)
        member.bits[i] = model.assignments[i] == selection.cluster_index;

    const auto labeling = connected_components(member, connectivity);
    RoiResult roi;
    roi.cluster_index = selection.cluster_index;
    roi.scores = std::move(selection.scores);
    roi.component_count = labeling.n_components();
    roi.component_sizes = labeling.sizes;
    roi.roi_mask = largest_component(labeling);
    roi.bbox = bbox_with_margin(roi.roi_mask, margin);
    return roi;
}

} // namespace cervprep
