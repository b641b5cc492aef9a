#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace cervprep {

/// One d-dimensional sample; d = 2 for the pipeline's (a,b) chromaticity.
using FeatureVector = std::vector<double>;

enum class KmeansInit { RandomPoints, KmeansPlusPlus };

KmeansInit kmeans_init_from_string(const std::string& name);
std::string to_string(KmeansInit init);

struct KmeansConfig {
    int k = 2;
    KmeansInit init = KmeansInit::RandomPoints;
    std::uint64_t seed = 0;
    int max_iters = 100;
    /// When set, overrides seeded initialization (must hold exactly k means).
    std::optional<std::vector<FeatureVector>> initial_means;
};

struct ClusterModel {
    int k = 0;
    std::vector<FeatureVector> means;
    std::vector<std::int32_t> assignments; // per-point cluster index in [0,k)
    int iterations = 0;
    double wcss = 0.0;               // within-cluster sum of squared distances
    std::vector<double> wcss_history; // one entry per assignment pass
    bool converged = false;          // assignment-equality stop was reached

    std::vector<std::size_t> cluster_sizes() const;
};

double squared_distance(const FeatureVector& a, const FeatureVector& b);

/// Index of the nearest mean by squared Euclidean distance; ties break to
/// the lowest index.
int assign_nearest(const FeatureVector& point, const std::vector<FeatureVector>& means);

/// Componentwise averages per cluster. A cluster with no members keeps its
/// previous mean.
std::vector<FeatureVector> update_means(const std::vector<FeatureVector>& points,
                                        const std::vector<std::int32_t>& assignments, int k,
                                        const std::vector<FeatureVector>& previous_means);

/// Lloyd iteration: assign each point to the nearest mean, recompute means,
/// stop when assignments repeat between successive passes (or at max_iters,
/// reported via converged=false). Deterministic for fixed inputs and seed.
ClusterModel kmeans(const std::vector<FeatureVector>& points, const KmeansConfig& cfg);

} // namespace cervprep
