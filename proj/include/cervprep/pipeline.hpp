#pragma once

#include "cervprep/image.hpp"
#include "cervprep/inpaint.hpp"
#include "cervprep/kmeans.hpp"
#include "cervprep/roi.hpp"
#include "cervprep/specular.hpp"

#include <nlohmann/json_fwd.hpp>

#include <string>
#include <vector>

namespace cervprep {

struct PipelineConfig {
    SpecularConfig specular{};
    SolverConfig solver{};
    KmeansConfig kmeans{};
    int connectivity = 8;
    int crop_margin = 10;
    bool use_l = false;            // cluster on (L,a,b) instead of (a,b)
    bool grayscale_inpaint = false; // fill the luma plane instead of each channel
    bool subsample = true;          // k-means on a 65536-pixel sample for large images
    bool emit_intermediates = false;
    std::string output_dir = ".";
};

/// Pixel count above which k-means runs on a subsample (512 x 512).
inline constexpr std::size_t kSubsampleThreshold = 512ull * 512ull;
inline constexpr std::size_t kSubsampleSize = 65536;

struct ChannelSolveStats {
    std::string channel; // "r", "g", "b" or "luma"
    SolveStats stats;
};

struct PipelineReport {
    std::string input_path;
    int width = 0;
    int height = 0;

    std::size_t specular_raw_pixels = 0;
    std::size_t specular_dilated_pixels = 0;

    std::vector<ChannelSolveStats> solves;
    std::vector<std::string> warnings;

    int kmeans_iterations = 0;
    bool kmeans_converged = false;
    bool kmeans_subsampled = false;
    std::size_t kmeans_sample_size = 0;
    std::vector<FeatureVector> kmeans_means;
    std::vector<std::size_t> cluster_sizes;
    double wcss = 0.0;

    int roi_cluster_index = 0;
    std::vector<ClusterScore> cluster_scores;
    int component_count = 0;
    std::vector<std::size_t> component_sizes;
    BBox bbox;

    struct Timing {
        double detect_ms = 0, dilate_ms = 0, inpaint_ms = 0, lab_ms = 0, kmeans_ms = 0,
               roi_ms = 0, crop_ms = 0, total_ms = 0;
    } timing;

    nlohmann::json to_json(const PipelineConfig& cfg, bool include_timing = true) const;
};

struct PipelineResult {
    RgbImage8 cropped;
    RoiResult roi;
    RgbImage8 inpainted;
    BinaryMask dilated_mask;
    PipelineReport report;
};

/// Fig-style flow over one image: specular detection -> dilation -> harmonic
/// inpainting -> Lab conversion -> k-means over chromaticity -> cervix
/// cluster -> largest component -> bbox -> crop of the inpainted image.
/// Deterministic for a fixed config and seed. Throws DegenerateInput when
/// clustering collapses to fewer than two non-empty clusters.
PipelineResult run_pipeline(const RgbImage8& image, const PipelineConfig& cfg,
                            const std::string& input_name = "");

struct BatchItem {
    std::string file;
    bool ok = false;
    std::string error; // set when !ok
    BBox bbox;         // set when ok
};

struct BatchSummary {
    std::string input_dir;
    std::vector<BatchItem> items; // sorted by filename
    std::size_t succeeded = 0;
    std::size_t failed = 0;

    nlohmann::json to_json() const;
};

/// Process every readable .png/.ppm in the directory; one failure never
/// aborts the batch. Per-image outputs (cropped image, report, optional
/// intermediates) land in cfg.output_dir/<stem>/. Errors if the directory
/// holds no candidate images.
BatchSummary run_batch(const std::string& input_dir, const PipelineConfig& cfg);

/// Write cropped image, report JSON, and optional intermediates for one
/// pipeline result into `dir` using the stem of the input name.
void write_outputs(const PipelineResult& result, const PipelineConfig& cfg, const std::string& dir,
                   const std::string& stem);

} // namespace cervprep
