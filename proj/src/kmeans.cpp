#include "cervprep/kmeans.hpp"

#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>

namespace cervprep {

KmeansInit kmeans_init_from_string(const std::string& name) {
    if (name == "random" || name == "random-points") return KmeansInit::RandomPoints;
    if (name == "kmeanspp" || name == "kmeans++") return KmeansInit::KmeansPlusPlus;
    throw std::invalid_argument("unknown kmeans init: " + name);
}

std::string to_string(KmeansInit init) {
    return init == KmeansInit::RandomPoints ? "random-points" : "kmeanspp";
}

std::vector<std::size_t> ClusterModel::cluster_sizes() const {
    std::vector<std::size_t> sizes(static_cast<std::size_t>(k), 0);
    for (auto a : assignments) ++sizes[static_cast<std::size_t>(a)];
    return sizes;
}

double squared_distance(const FeatureVector& a, const FeatureVector& b) {
    if (a.size() != b.size()) throw std::invalid_argument("squared_distance: dimension mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

int assign_nearest(const FeatureVector& point, const std::vector<FeatureVector>& means) {
    if (means.empty()) throw std::invalid_argument("assign_nearest: no means");
    int best = 0;
    double best_d = squared_distance(point, means[0]);
    for (std::size_t k = 1; k < means.size(); ++k) {
        const double d = squared_distance(point, means[k]);
        if (d < best_d) {
            best_d = d;
            best = static_cast<int>(k);
        }
    }
    return best;
}

std::vector<FeatureVector> update_means(const std::vector<FeatureVector>& points,
                                        const std::vector<std::int32_t>& assignments, int k,
                                        const std::vector<FeatureVector>& previous_means) {
    if (assignments.size() != points.size())
        throw std::invalid_argument("update_means: assignments/points size mismatch");
    if (previous_means.size() != static_cast<std::size_t>(k))
        throw std::invalid_argument("update_means: previous_means must hold k entries");

    const std::size_t dim = points.empty() ? 0 : points[0].size();
    std::vector<FeatureVector> sums(static_cast<std::size_t>(k), FeatureVector(dim, 0.0));
    std::vector<std::size_t> counts(static_cast<std::size_t>(k), 0);
    for (std::size_t i = 0; i < points.size(); ++i) {
        const auto c = static_cast<std::size_t>(assignments[i]);
        if (c >= static_cast<std::size_t>(k))
            throw std::invalid_argument("update_means: assignment out of range");
        for (std::size_t d = 0; d < dim; ++d) sums[c][d] += points[i][d];
        ++counts[c];
    }
    std::vector<FeatureVector> means(static_cast<std::size_t>(k));
    for (std::size_t c = 0; c < static_cast<std::size_t>(k); ++c) {
        if (counts[c] == 0) {
            means[c] = previous_means[c];
            continue;
        }
        means[c] = sums[c];
        for (auto& v : means[c]) v /= static_cast<double>(counts[c]);
    }
    return means;
}

namespace {

double wcss_of(const std::vector<FeatureVector>& points, const std::vector<std::int32_t>& assignments,
               const std::vector<FeatureVector>& means) {
    double total = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i)
        total += squared_distance(points[i], means[static_cast<std::size_t>(assignments[i])]);
    return total;
}

std::vector<FeatureVector> init_random_points(const std::vector<FeatureVector>& points, int k,
                                              std::mt19937_64& rng) {
    // Partial Fisher-Yates over the index range gives k distinct samples.
    std::vector<std::size_t> idx(points.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::vector<FeatureVector> means;
    means.reserve(static_cast<std::size_t>(k));
    for (int c = 0; c < k; ++c) {
        std::uniform_int_distribution<std::size_t> pick(c, idx.size() - 1);
        std::swap(idx[static_cast<std::size_t>(c)], idx[pick(rng)]);
        means.push_back(points[idx[static_cast<std::size_t>(c)]]);
    }
    return means;
}

std::vector<FeatureVector> init_kmeanspp(const std::vector<FeatureVector>& points, int k,
                                         std::mt19937_64& rng) {
    std::uniform_int_distribution<std::size_t> first(0, points.size() - 1);
    std::vector<FeatureVector> means{points[first(rng)]};
    std::vector<double> d2(points.size());
    while (means.size() < static_cast<std::size_t>(k)) {
        double total = 0.0;
        for (std::size_t i = 0; i < points.size(); ++i) {
            double best = std::numeric_limits<double>::infinity();
            for (const auto& m : means) best = std::min(best, squared_distance(points[i], m));
            d2[i] = best;
            total += best;
        }
        std::size_t chosen;
        if (total <= 0.0) {
            chosen = first(rng); // all mass on existing centers; fall back to uniform
        } else {
            std::uniform_real_distribution<double> pick(0.0, total);
            double target = pick(rng);
            chosen = points.size() - 1;
            for (std::size_t i = 0; i < points.size(); ++i) {
                target -= d2[i];
                if (target <= 0.0) {
                    chosen = i;
                    break;
                }
            }
        }
        means.push_back(points[chosen]);
    }
    return means;
}

} // namespace

ClusterModel kmeans(const std::vector<FeatureVector>& points, const KmeansConfig& cfg) {
    if (points.empty()) throw std::invalid_argument("kmeans: empty point set");
    if (cfg.k < 1) throw std::invalid_argument("kmeans: k must be >= 1");
    if (static_cast<std::size_t>(cfg.k) > points.size())
        throw std::invalid_argument("kmeans: k exceeds number of points");
    if (cfg.max_iters < 1) throw std::invalid_argument("kmeans: max_iters must be >= 1");
    const std::size_t dim = points[0].size();
    for (const auto& p : points)
        if (p.size() != dim) throw std::invalid_argument("kmeans: inconsistent point dimensions");

    std::mt19937_64 rng(cfg.seed);
    std::vector<FeatureVector> means;
    if (cfg.initial_means) {
        if (cfg.initial_means->size() != static_cast<std::size_t>(cfg.k))
            throw std::invalid_argument("kmeans: initial_means must hold k entries");
        means = *cfg.initial_means;
    } else if (cfg.init == KmeansInit::RandomPoints) {
        means = init_random_points(points, cfg.k, rng);
    } else {
        means = init_kmeanspp(points, cfg.k, rng);
    }

    ClusterModel model;
    model.k = cfg.k;
    std::vector<std::int32_t> prev;
    std::vector<std::int32_t> assignments(points.size());
    while (model.iterations < cfg.max_iters) {
        for (std::size_t i = 0; i < points.size(); ++i)
            assignments[i] = static_cast<std::int32_t>(assign_nearest(points[i], means));
        ++model.iterations;
        model.wcss_history.push_back(wcss_of(points, assignments, means));
        if (assignments == prev) {
            model.converged = true;
            break;
        }
        prev = assignments;
        if (model.iterations >= cfg.max_iters) break;
        means = update_means(points, assignments, cfg.k, means);
    }
    model.means = std::move(means);
    model.assignments = std::move(assignments);
    model.wcss = model.wcss_history.back();
    return model;
}

} // namespace cervprep
