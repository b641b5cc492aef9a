#pragma once

#include "cervprep/color.hpp"
#include "cervprep/image.hpp"
#include "cervprep/kmeans.hpp"

#include <vector>

namespace cervprep {

/// Connected-component labeling of a mask. Component ids are contiguous,
/// 1..n in row-major order of first encounter; 0 is background.
struct ComponentLabeling {
    int width = 0;
    int height = 0;
    std::vector<std::int32_t> labels;
    std::vector<std::size_t> sizes; // sizes[id-1] = pixel count of component id

    int n_components() const { return static_cast<int>(sizes.size()); }
};

/// Per-cluster selection evidence: spatial score is the mean squared
/// distance of member pixels to the image center, normalized by the squared
/// half-diagonal; mean_a is the cluster's average Lab a (pinkness).
struct ClusterScore {
    int cluster = 0;
    std::size_t size = 0;
    double spatial = 0.0;
    double mean_a = 0.0;
};

struct CervixSelection {
    int cluster_index = 0;
    std::vector<ClusterScore> scores; // one per cluster, empty ones flagged by size 0
};

struct RoiResult {
    int cluster_index = 0;
    BinaryMask roi_mask; // largest connected component of the chosen cluster
    BBox bbox;           // roi_mask bounds expanded by the margin, clamped
    std::vector<ClusterScore> scores;
    int component_count = 0;
    std::vector<std::size_t> component_sizes;
};

/// Pick the cervix cluster: smallest spatial score wins; ties within 1e-9
/// go to the larger mean a (the pinker cluster). Assignments must cover the
/// width x height pixels in row-major order. Empty clusters are excluded;
/// all-empty is an error.
CervixSelection select_cervix_cluster(const ClusterModel& model, const LabImage& lab, int width,
                                      int height);

ComponentLabeling connected_components(const BinaryMask& mask, int connectivity);

/// Mask of the component with the most pixels; ties break to the lowest id.
BinaryMask largest_component(const ComponentLabeling& labeling);

/// Tight bounding box of the true pixels, grown by `margin` on each side and
/// clamped to the mask bounds. Empty masks are an error.
BBox bbox_with_margin(const BinaryMask& mask, int margin);

/// Cluster -> member mask -> largest component -> expanded bbox.
RoiResult extract_roi(const ClusterModel& model, const LabImage& lab, int connectivity, int margin);

} // namespace cervprep
