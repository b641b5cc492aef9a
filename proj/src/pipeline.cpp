#include "cervprep/pipeline.hpp"

#include "cervprep/color.hpp"
#include "cervprep/errors.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cctype>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <random>

namespace fs = std::filesystem;

namespace cervprep {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

// Distinct pixel indices drawn without replacement (partial Fisher-Yates).
std::vector<std::size_t> sample_indices(std::size_t n, std::size_t count, std::uint64_t seed) {
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::mt19937_64 rng(seed ^ 0x73756273616d70ULL); // decoupled from the k-means init stream
    for (std::size_t i = 0; i < count; ++i) {
        std::uniform_int_distribution<std::size_t> pick(i, n - 1);
        std::swap(idx[i], idx[pick(rng)]);
    }
    idx.resize(count);
    return idx;
}

FeatureVector pixel_features(const LabImage& lab, std::size_t i, bool use_l) {
    if (use_l) return {lab.L.values[i], lab.a.values[i], lab.b.values[i]};
    return {lab.a.values[i], lab.b.values[i]};
}

Plane luma_plane(const RgbImage8& image) {
    Plane y(image.width, image.height);
    const std::size_t n = y.values.size();
    for (std::size_t i = 0; i < n; ++i)
        y.values[i] = 0.299 * image.data[3 * i] + 0.587 * image.data[3 * i + 1] +
                      0.114 * image.data[3 * i + 2];
    return y;
}

nlohmann::json bbox_json(const BBox& b) {
    return {{"x0", b.x0}, {"y0", b.y0}, {"x1", b.x1}, {"y1", b.y1}};
}

} // namespace

nlohmann::json PipelineReport::to_json(const PipelineConfig& cfg, bool include_timing) const {
    nlohmann::json j;
    j["schema"] = 1;
    j["input"] = {{"path", input_path}, {"width", width}, {"height", height}};
    j["specular"] = {{"threshold", cfg.specular.threshold},
                     {"se",
                      {{"shape", cfg.specular.se.shape == StructuringElement::Shape::Square
                                     ? "square"
                                     : "disk"},
                       {"radius", cfg.specular.se.radius}}},
                     {"raw_pixels", specular_raw_pixels},
                     {"dilated_pixels", specular_dilated_pixels}};

    nlohmann::json channels = nlohmann::json::array();
    for (const auto& s : solves)
        channels.push_back({{"channel", s.channel},
                            {"iterations", s.stats.iterations},
                            {"final_residual", s.stats.final_residual},
                            {"converged", s.stats.converged}});
    j["solver"] = {{"method", to_string(cfg.solver.method)},
                   {"omega", cfg.solver.omega},
                   {"tol", cfg.solver.tol},
                   {"max_iters", cfg.solver.max_iters},
                   {"channels", channels}};
    j["warnings"] = warnings;

    j["kmeans"] = {{"k", cfg.kmeans.k},
                   {"init", to_string(cfg.kmeans.init)},
                   {"seed", cfg.kmeans.seed},
                   {"iterations", kmeans_iterations},
                   {"converged", kmeans_converged},
                   {"subsampled", kmeans_subsampled},
                   {"sample_size", kmeans_sample_size},
                   {"means", kmeans_means},
                   {"cluster_sizes", cluster_sizes},
                   {"wcss", wcss}};

    nlohmann::json scores = nlohmann::json::array();
    for (const auto& s : cluster_scores)
        scores.push_back(
            {{"cluster", s.cluster}, {"size", s.size}, {"spatial", s.spatial}, {"mean_a", s.mean_a}});
    j["roi"] = {{"cluster_index", roi_cluster_index},
                {"scores", scores},
                {"component_count", component_count},
                {"component_sizes", component_sizes},
                {"bbox", bbox_json(bbox)}};

    if (include_timing)
        j["timing_ms"] = {{"detect", timing.detect_ms}, {"dilate", timing.dilate_ms},
                          {"inpaint", timing.inpaint_ms}, {"lab", timing.lab_ms},
                          {"kmeans", timing.kmeans_ms}, {"roi", timing.roi_ms},
                          {"crop", timing.crop_ms},     {"total", timing.total_ms}};
    return j;
}

PipelineResult run_pipeline(const RgbImage8& image, const PipelineConfig& cfg,
                            const std::string& input_name) {
    if (image.width < 1 || image.height < 1 ||
        image.data.size() != static_cast<std::size_t>(image.width) * image.height * 3)
        throw std::invalid_argument("run_pipeline: invalid image");

    const auto t_total = Clock::now();
    PipelineResult out;
    auto& rep = out.report;
    rep.input_path = input_name;
    rep.width = image.width;
    rep.height = image.height;

    auto t = Clock::now();
    const BinaryMask raw_mask = detect_specular(image, cfg.specular);
    rep.specular_raw_pixels = raw_mask.count();
    rep.timing.detect_ms = ms_since(t);

    t = Clock::now();
    out.dilated_mask = dilate(raw_mask, cfg.specular.se);
    const BinaryMask& mask = out.dilated_mask;
    rep.specular_dilated_pixels = mask.count();
    rep.timing.dilate_ms = ms_since(t);

    t = Clock::now();
    if (rep.specular_dilated_pixels == mask.bits.size())
        throw DegenerateInput("specular mask covers the entire image");
    if (cfg.grayscale_inpaint) {
        auto [fill, stats] = inpaint_plane(luma_plane(image), mask, cfg.solver);
        out.inpainted = image;
        for (std::size_t i = 0; i < mask.bits.size(); ++i) {
            if (!mask.bits[i]) continue;
            const auto v = static_cast<std::uint8_t>(
                std::clamp(std::lround(fill.values[i]), 0L, 255L));
            out.inpainted.data[3 * i] = v;
            out.inpainted.data[3 * i + 1] = v;
            out.inpainted.data[3 * i + 2] = v;
        }
        rep.solves.push_back({"luma", stats});
    } else {
        auto [img, stats] = inpaint_image(image, mask, cfg.solver);
        out.inpainted = std::move(img);
        rep.solves.push_back({"r", stats[0]});
        rep.solves.push_back({"g", stats[1]});
        rep.solves.push_back({"b", stats[2]});
    }
    for (const auto& s : rep.solves)
        if (!s.stats.converged)
            rep.warnings.push_back("solver did not converge on channel " + s.channel + " (residual " +
                                   std::to_string(s.stats.final_residual) + ")");
    rep.timing.inpaint_ms = ms_since(t);

    // ROI detection reads the inpainted image: raw highlights would seed a
    // spurious white cluster.
    t = Clock::now();
    const LabImage lab = rgb_to_lab_image(out.inpainted);
    rep.timing.lab_ms = ms_since(t);

    t = Clock::now();
    const std::size_t n_pixels = static_cast<std::size_t>(image.width) * image.height;
    const bool subsampled = cfg.subsample && n_pixels > kSubsampleThreshold;

    ClusterModel model;
    if (subsampled) {
        const auto idx = sample_indices(n_pixels, kSubsampleSize, cfg.kmeans.seed);
        std::vector<FeatureVector> sample;
        sample.reserve(idx.size());
        for (auto i : idx) sample.push_back(pixel_features(lab, i, cfg.use_l));
        const ClusterModel sub = kmeans(sample, cfg.kmeans);

        model.k = sub.k;
        model.means = sub.means;
        model.iterations = sub.iterations;
        model.converged = sub.converged;
        model.assignments.resize(n_pixels);
        double wcss = 0.0;
        for (std::size_t i = 0; i < n_pixels; ++i) {
            const auto f = pixel_features(lab, i, cfg.use_l);
            const int c = assign_nearest(f, model.means);
            model.assignments[i] = static_cast<std::int32_t>(c);
            wcss += squared_distance(f, model.means[static_cast<std::size_t>(c)]);
        }
        model.wcss = wcss;
        rep.kmeans_sample_size = kSubsampleSize;
    } else {
        std::vector<FeatureVector> points;
        points.reserve(n_pixels);
        for (std::size_t i = 0; i < n_pixels; ++i) points.push_back(pixel_features(lab, i, cfg.use_l));
        model = kmeans(points, cfg.kmeans);
        rep.kmeans_sample_size = n_pixels;
    }
    rep.kmeans_subsampled = subsampled;
    rep.kmeans_iterations = model.iterations;
    rep.kmeans_converged = model.converged;
    rep.kmeans_means = model.means;
    rep.cluster_sizes = model.cluster_sizes();
    rep.wcss = model.wcss;
    if (!model.converged)
        rep.warnings.push_back("k-means hit the iteration guard before assignments stabilized");
    rep.timing.kmeans_ms = ms_since(t);

    const auto non_empty =
        std::count_if(rep.cluster_sizes.begin(), rep.cluster_sizes.end(), [](auto s) { return s > 0; });
    if (non_empty < 2)
        throw DegenerateInput("degenerate clustering: all pixels fell into one cluster");

    t = Clock::now();
    out.roi = extract_roi(model, lab, cfg.connectivity, cfg.crop_margin);
    rep.roi_cluster_index = out.roi.cluster_index;
    rep.cluster_scores = out.roi.scores;
    rep.component_count = out.roi.component_count;
    rep.component_sizes = out.roi.component_sizes;
    rep.bbox = out.roi.bbox;
    rep.timing.roi_ms = ms_since(t);

    t = Clock::now();
    out.cropped = crop(out.inpainted, out.roi.bbox);
    rep.timing.crop_ms = ms_since(t);
    rep.timing.total_ms = ms_since(t_total);
    return out;
}

void write_outputs(const PipelineResult& result, const PipelineConfig& cfg, const std::string& dir,
                   const std::string& stem) {
    fs::create_directories(dir);
    const auto base = fs::path(dir) / stem;
    save_image(result.cropped, (base.string() + "_cropped.png"));
    {
        std::ofstream f(base.string() + "_report.json");
        if (!f) throw IoError(base.string() + "_report.json: cannot open for writing");
        f << result.report.to_json(cfg).dump(2) << "\n";
    }
    if (cfg.emit_intermediates) {
        save_mask_png(result.dilated_mask, base.string() + "_mask.png");
        save_image(result.inpainted, base.string() + "_inpainted.png");
        save_mask_png(result.roi.roi_mask, base.string() + "_roi.png");
    }
}

nlohmann::json BatchSummary::to_json() const {
    nlohmann::json j;
    j["schema"] = 1;
    j["input_dir"] = input_dir;
    j["processed"] = items.size();
    j["succeeded"] = succeeded;
    j["failed"] = failed;
    nlohmann::json images = nlohmann::json::array();
    nlohmann::json failures = nlohmann::json::array();
    for (const auto& it : items) {
        if (it.ok)
            images.push_back({{"file", it.file}, {"bbox", bbox_json(it.bbox)}});
        else
            failures.push_back({{"file", it.file}, {"error", it.error}});
    }
    j["images"] = images;
    j["failures"] = failures;
    return j;
}

BatchSummary run_batch(const std::string& input_dir, const PipelineConfig& cfg) {
    if (!fs::is_directory(input_dir)) throw IoError(input_dir + ": not a directory");

    std::vector<fs::path> inputs;
    for (const auto& entry : fs::directory_iterator(input_dir)) {
        if (!entry.is_regular_file()) continue;
        std::string ext = entry.path().extension().string();
        std::transform(ext.begin(), ext.end(), ext.begin(),
                       [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
        if (ext == ".png" || ext == ".ppm") inputs.push_back(entry.path());
    }
    if (inputs.empty()) throw IoError(input_dir + ": no .png or .ppm images found");
    std::sort(inputs.begin(), inputs.end());

    BatchSummary summary;
    summary.input_dir = input_dir;
    for (const auto& path : inputs) {
        BatchItem item;
        item.file = path.filename().string();
        try {
            const RgbImage8 image = load_image(path.string());
            const PipelineResult result = run_pipeline(image, cfg, path.filename().string());
            const std::string stem = path.stem().string();
            write_outputs(result, cfg, (fs::path(cfg.output_dir) / stem).string(), stem);
            item.ok = true;
            item.bbox = result.roi.bbox;
            ++summary.succeeded;
        } catch (const std::exception& e) {
            item.error = e.what();
            ++summary.failed;
        }
        summary.items.push_back(std::move(item));
    }

    fs::create_directories(cfg.output_dir);
    const auto summary_path = fs::path(cfg.output_dir) / "summary.json";
    std::ofstream f(summary_path);
    if (!f) throw IoError(summary_path.string() + ": cannot open for writing");
    f << summary.to_json().dump(2) << "\n";
    return summary;
}

} // namespace cervprep
