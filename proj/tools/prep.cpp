// prep: batch preprocessing for colposcopy images.
//   prep run <image>     single-image pipeline
//   prep batch <dir>     directory pipeline, failures isolated per image
//   prep phantom         synthetic test image with ground truth

#include "cervprep/color.hpp"
#include "cervprep/errors.hpp"
#include "cervprep/phantom.hpp"
#include "cervprep/pipeline.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

namespace fs = std::filesystem;
using namespace cervprep;

namespace {

constexpr int kExitBadArgs = 2;
constexpr int kExitIo = 3;
constexpr int kExitDegenerate = 4;

void add_pipeline_flags(CLI::App* cmd, PipelineConfig& cfg, int& threshold, std::string& se_shape,
                        std::string& solver, std::string& init, bool& no_subsample) {
    cmd->set_config("--config", "", "TOML file with flag names as keys; command-line flags win");
    cmd->add_option("--out", cfg.output_dir, "Output directory")->capture_default_str();
    cmd->add_option("--threshold", threshold, "Per-plane white cutoff, 1..255")
        ->check(CLI::Range(1, 255))
        ->capture_default_str();
    cmd->add_option("--dilate-radius", cfg.specular.se.radius, "Structuring element radius")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd->add_option("--se", se_shape, "Structuring element shape")
        ->check(CLI::IsMember({"square", "disk"}))
        ->capture_default_str();
    cmd->add_option("--solver", solver, "Laplace solver")
        ->check(CLI::IsMember({"jacobi", "gs", "sor"}))
        ->capture_default_str();
    cmd->add_option("--omega", cfg.solver.omega, "SOR relaxation factor, (0,2)")
        ->capture_default_str();
    cmd->add_option("--tol", cfg.solver.tol, "Residual target, intensity units")
        ->capture_default_str();
    cmd->add_option("--max-iters", cfg.solver.max_iters, "Solver iteration cap")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd->add_option("--k", cfg.kmeans.k, "Cluster count")->check(CLI::PositiveNumber)->capture_default_str();
    cmd->add_option("--init", init, "K-means initialization")
        ->check(CLI::IsMember({"random", "kmeanspp"}))
        ->capture_default_str();
    cmd->add_option("--seed", cfg.kmeans.seed, "RNG seed")->capture_default_str();
    cmd->add_option("--connectivity", cfg.connectivity, "Component adjacency")
        ->check(CLI::IsMember({4, 8}))
        ->capture_default_str();
    cmd->add_option("--margin", cfg.crop_margin, "Crop margin, pixels")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    cmd->add_flag("--use-l", cfg.use_l, "Cluster on (L,a,b) instead of (a,b)");
    cmd->add_flag("--grayscale-inpaint", cfg.grayscale_inpaint,
                  "Fill the luma plane instead of each RGB channel");
    cmd->add_flag("--no-subsample", no_subsample, "Run k-means on every pixel");
    cmd->add_flag("--emit-intermediates", cfg.emit_intermediates,
                  "Also write mask, inpainted, and ROI images");
}

void finalize_config(PipelineConfig& cfg, int threshold, const std::string& se_shape,
                     const std::string& solver, const std::string& init, bool no_subsample) {
    cfg.specular.threshold = static_cast<std::uint8_t>(threshold);
    cfg.specular.se.shape =
        se_shape == "disk" ? StructuringElement::Shape::Disk : StructuringElement::Shape::Square;
    cfg.solver.method = solver_method_from_string(solver);
    cfg.kmeans.init = kmeans_init_from_string(init);
    cfg.subsample = !no_subsample;
}

int do_run(const std::string& input, const PipelineConfig& cfg) {
    const RgbImage8 image = load_image(input);
    const fs::path in_path(input);
    const PipelineResult result = run_pipeline(image, cfg, in_path.filename().string());
    write_outputs(result, cfg, cfg.output_dir, in_path.stem().string());

    const auto& b = result.roi.bbox;
    std::cout << input << ": specular " << result.report.specular_raw_pixels << " px (dilated "
              << result.report.specular_dilated_pixels << "), cluster " << result.roi.cluster_index
              << ", roi [" << b.x0 << "," << b.y0 << ")x[" << b.x1 << "," << b.y1 << ")\n";
    return 0;
}

int do_batch(const std::string& input_dir, const PipelineConfig& cfg) {
    const BatchSummary summary = run_batch(input_dir, cfg);
    for (const auto& item : summary.items) {
        if (item.ok)
            std::cout << "ok   " << item.file << "\n";
        else
            std::cout << "FAIL " << item.file << ": " << item.error << "\n";
    }
    std::cout << summary.succeeded << " succeeded, " << summary.failed << " failed; summary at "
              << (fs::path(cfg.output_dir) / "summary.json").string() << "\n";
    return 0; // per-image failures are recorded, not fatal
}

struct PhantomArgs {
    std::uint64_t seed = 0;
    std::string out = ".";
    int width = 0, height = 0; // 0 = keep seeded default
    int speculars = -1;
    double noise = -1.0;
    bool no_frame = false;
};

int do_phantom(const PhantomArgs& args) {
    PhantomSpec spec = default_phantom_spec(args.seed);
    if (args.width > 0 || args.height > 0) {
        // Re-derive the seeded geometry at the requested size.
        const double sx = args.width > 0 ? static_cast<double>(args.width) / spec.width : 1.0;
        const double sy = args.height > 0 ? static_cast<double>(args.height) / spec.height : 1.0;
        spec.ellipse_cx *= sx;
        spec.ellipse_ax *= sx;
        spec.ellipse_cy *= sy;
        spec.ellipse_ay *= sy;
        if (args.width > 0) spec.width = args.width;
        if (args.height > 0) spec.height = args.height;
    }
    if (args.speculars >= 0) spec.n_speculars = args.speculars;
    if (args.noise >= 0.0) spec.noise_sigma = args.noise;
    if (args.no_frame) spec.frame = false;

    const auto [image, truth] = generate_phantom(spec);
    fs::create_directories(args.out);
    const auto base = fs::path(args.out) / ("phantom_" + std::to_string(args.seed));
    save_image(image, base.string() + ".png");
    save_image(truth.clean_image, base.string() + "_clean.png");
    save_mask_png(truth.specular_mask, base.string() + "_specular_mask.png");
    save_mask_png(truth.ellipse_mask, base.string() + "_ellipse_mask.png");

    nlohmann::json j;
    j["schema"] = 1;
    j["seed"] = spec.seed;
    j["width"] = spec.width;
    j["height"] = spec.height;
    j["ellipse"] = {{"cx", spec.ellipse_cx}, {"cy", spec.ellipse_cy}, {"ax", spec.ellipse_ax},
                    {"ay", spec.ellipse_ay}, {"rot", spec.ellipse_rot}};
    j["ellipse_bbox"] = {{"x0", truth.ellipse_bbox.x0},
                         {"y0", truth.ellipse_bbox.y0},
                         {"x1", truth.ellipse_bbox.x1},
                         {"y1", truth.ellipse_bbox.y1}};
    j["n_speculars"] = spec.n_speculars;
    j["specular_pixels"] = truth.specular_mask.count();
    j["noise_sigma"] = spec.noise_sigma;
    std::ofstream f(base.string() + "_truth.json");
    if (!f) throw IoError(base.string() + "_truth.json: cannot open for writing");
    f << j.dump(2) << "\n";

    std::cout << "wrote " << base.string() << ".png (" << spec.width << "x" << spec.height << ", "
              << truth.specular_mask.count() << " specular px)\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Colposcopy image preprocessing: specular removal by harmonic inpainting and "
                 "cervix ROI extraction by chromaticity clustering"};
    app.require_subcommand(1);

    PipelineConfig cfg;
    int threshold = cfg.specular.threshold;
    std::string se_shape = "square";
    std::string solver = "sor";
    std::string init = "random";
    bool no_subsample = false;

    std::string run_input;
    auto* run_cmd = app.add_subcommand("run", "Process a single image");
    run_cmd->add_option("input", run_input, "PNG or PPM image")->required();
    add_pipeline_flags(run_cmd, cfg, threshold, se_shape, solver, init, no_subsample);

    std::string batch_dir;
    auto* batch_cmd = app.add_subcommand("batch", "Process every image in a directory");
    batch_cmd->add_option("input", batch_dir, "Directory of PNG/PPM images")->required();
    add_pipeline_flags(batch_cmd, cfg, threshold, se_shape, solver, init, no_subsample);

    PhantomArgs ph;
    auto* phantom_cmd = app.add_subcommand("phantom", "Generate a synthetic test image with truth");
    phantom_cmd->set_config("--config", "", "TOML file with flag names as keys");
    phantom_cmd->add_option("--seed", ph.seed, "Phantom seed")->capture_default_str();
    phantom_cmd->add_option("--out", ph.out, "Output directory")->capture_default_str();
    phantom_cmd->add_option("--width", ph.width, "Override width");
    phantom_cmd->add_option("--height", ph.height, "Override height");
    phantom_cmd->add_option("--speculars", ph.speculars, "Number of specular dots");
    phantom_cmd->add_option("--noise-sigma", ph.noise, "Gaussian noise level");
    phantom_cmd->add_flag("--no-frame", ph.no_frame, "Skip the dark border band");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitBadArgs;
    }

    try {
        finalize_config(cfg, threshold, se_shape, solver, init, no_subsample);
        if (run_cmd->parsed()) return do_run(run_input, cfg);
        if (batch_cmd->parsed()) return do_batch(batch_dir, cfg);
        return do_phantom(ph);
    } catch (const DegenerateInput& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitDegenerate;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
