// Python bindings for the main operations: image I/O, specular detection,
// harmonic inpainting, Lab conversion, k-means, phantom generation, and the
// full pipeline. Images cross the boundary as numpy arrays: uint8 (H,W,3)
// for color images, bool (H,W) for masks, float64 (H,W) for planes.

#include "cervprep/color.hpp"
#include "cervprep/errors.hpp"
#include "cervprep/image.hpp"
#include "cervprep/inpaint.hpp"
#include "cervprep/kmeans.hpp"
#include "cervprep/phantom.hpp"
#include "cervprep/pipeline.hpp"
#include "cervprep/roi.hpp"
#include "cervprep/specular.hpp"

#include <nlohmann/json.hpp>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstring>

namespace py = pybind11;
using namespace cervprep;

namespace {

RgbImage8 image_from_array(const py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast>& arr) {
    if (arr.ndim() != 3 || arr.shape(2) != 3)
        throw py::value_error("expected a uint8 array of shape (H, W, 3)");
    RgbImage8 img;
    img.height = static_cast<int>(arr.shape(0));
    img.width = static_cast<int>(arr.shape(1));
    img.data.resize(static_cast<std::size_t>(img.width) * img.height * 3);
    std::memcpy(img.data.data(), arr.data(), img.data.size());
    return img;
}

py::array_t<std::uint8_t> array_from_image(const RgbImage8& img) {
    py::array_t<std::uint8_t> arr({img.height, img.width, 3});
    std::memcpy(arr.mutable_data(), img.data.data(), img.data.size());
    return arr;
}

BinaryMask mask_from_array(const py::array_t<bool, py::array::c_style | py::array::forcecast>& arr) {
    if (arr.ndim() != 2) throw py::value_error("expected a bool array of shape (H, W)");
    BinaryMask mask(static_cast<int>(arr.shape(1)), static_cast<int>(arr.shape(0)));
    const bool* src = arr.data();
    for (std::size_t i = 0; i < mask.bits.size(); ++i) mask.bits[i] = src[i] ? 1 : 0;
    return mask;
}

py::array_t<bool> array_from_mask(const BinaryMask& mask) {
    py::array_t<bool> arr({mask.height, mask.width});
    bool* dst = arr.mutable_data();
    for (std::size_t i = 0; i < mask.bits.size(); ++i) dst[i] = mask.bits[i] != 0;
    return arr;
}

Plane plane_from_array(const py::array_t<double, py::array::c_style | py::array::forcecast>& arr) {
    if (arr.ndim() != 2) throw py::value_error("expected a float array of shape (H, W)");
    Plane p(static_cast<int>(arr.shape(1)), static_cast<int>(arr.shape(0)));
    std::memcpy(p.values.data(), arr.data(), p.values.size() * sizeof(double));
    return p;
}

py::array_t<double> array_from_plane(const Plane& p) {
    py::array_t<double> arr({p.height, p.width});
    std::memcpy(arr.mutable_data(), p.values.data(), p.values.size() * sizeof(double));
    return arr;
}

py::dict stats_dict(const SolveStats& s) {
    py::dict d;
    d["iterations"] = s.iterations;
    d["final_residual"] = s.final_residual;
    d["converged"] = s.converged;
    return d;
}

StructuringElement make_se(const std::string& shape, int radius) {
    StructuringElement se;
    se.shape = shape == "disk" ? StructuringElement::Shape::Disk : StructuringElement::Shape::Square;
    if (shape != "disk" && shape != "square") throw py::value_error("se shape must be 'square' or 'disk'");
    se.radius = radius;
    return se;
}

SolverConfig make_solver(const std::string& method, double omega, double tol, int max_iters) {
    return {solver_method_from_string(method), omega, tol, max_iters};
}

py::dict bbox_dict(const BBox& b) {
    py::dict d;
    d["x0"] = b.x0;
    d["y0"] = b.y0;
    d["x1"] = b.x1;
    d["y1"] = b.y1;
    return d;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Colposcopy image preprocessing: specular removal by harmonic inpainting and "
              "cervix ROI extraction by chromaticity clustering";

    py::register_exception<IoError>(m, "IoError", PyExc_IOError);
    py::register_exception<DegenerateInput>(m, "DegenerateInputError", PyExc_ValueError);

    m.def("load_image", [](const std::string& path) { return array_from_image(load_image(path)); },
          py::arg("path"), "Decode a PNG (8-bit RGB/RGBA) or binary PPM file to uint8 (H,W,3).");

    m.def("save_image",
          [](const py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast>& arr,
             const std::string& path) { save_image(image_from_array(arr), path); },
          py::arg("image"), py::arg("path"), "Encode to PNG or PPM depending on the extension.");

    m.def("detect_specular",
          [](const py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast>& img,
             int threshold, const std::string& se_shape, int se_radius) {
              SpecularConfig cfg{static_cast<std::uint8_t>(threshold), make_se(se_shape, se_radius)};
              return array_from_mask(detect_specular(image_from_array(img), cfg));
          },
          py::arg("image"), py::arg("threshold") = 240, py::arg("se_shape") = "square",
          py::arg("se_radius") = 1,
          "Mask of pixels whose R, G and B all reach the threshold.");

    m.def("dilate",
          [](const py::array_t<bool, py::array::c_style | py::array::forcecast>& mask,
             const std::string& se_shape, int se_radius) {
              return array_from_mask(dilate(mask_from_array(mask), make_se(se_shape, se_radius)));
          },
          py::arg("mask"), py::arg("se_shape") = "square", py::arg("se_radius") = 1);

    m.def("mask_boundary",
          [](const py::array_t<bool, py::array::c_style | py::array::forcecast>& mask) {
              return mask_boundary(mask_from_array(mask));
          },
          py::arg("mask"), "Row-major (x, y) coordinates of the Dirichlet ring around the mask.");

    m.def("inpaint_plane",
          [](const py::array_t<double, py::array::c_style | py::array::forcecast>& plane,
             const py::array_t<bool, py::array::c_style | py::array::forcecast>& mask,
             const std::string& method, double omega, double tol, int max_iters) {
              auto [filled, stats] = inpaint_plane(plane_from_array(plane), mask_from_array(mask),
                                                   make_solver(method, omega, tol, max_iters));
              return py::make_tuple(array_from_plane(filled), stats_dict(stats));
          },
          py::arg("plane"), py::arg("mask"), py::arg("method") = "sor", py::arg("omega") = 1.9,
          py::arg("tol") = 1e-4, py::arg("max_iters") = 20000,
          "Harmonic fill of masked pixels; returns (plane, stats).");

    m.def("inpaint_image",
          [](const py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast>& img,
             const py::array_t<bool, py::array::c_style | py::array::forcecast>& mask,
             const std::string& method, double omega, double tol, int max_iters) {
              auto [filled, stats] = inpaint_image(image_from_array(img), mask_from_array(mask),
                                                   make_solver(method, omega, tol, max_iters));
              py::list per_channel;
              for (const auto& s : stats) per_channel.append(stats_dict(s));
              return py::make_tuple(array_from_image(filled), per_channel);
          },
          py::arg("image"), py::arg("mask"), py::arg("method") = "sor", py::arg("omega") = 1.9,
          py::arg("tol") = 1e-4, py::arg("max_iters") = 20000,
          "Per-channel harmonic fill; returns (image, [stats_r, stats_g, stats_b]).");

    m.def("srgb_to_lab",
          [](int r, int g, int b) {
              const LabColor c = srgb_to_lab(static_cast<std::uint8_t>(r), static_cast<std::uint8_t>(g),
                                             static_cast<std::uint8_t>(b));
              return py::make_tuple(c.L, c.a, c.b);
          },
          py::arg("r"), py::arg("g"), py::arg("b"));

    m.def("rgb_to_lab",
          [](const py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast>& img) {
              const LabImage lab = rgb_to_lab_image(image_from_array(img));
              py::array_t<double> arr({lab.height, lab.width, 3});
              auto view = arr.mutable_unchecked<3>();
              for (int y = 0; y < lab.height; ++y)
                  for (int x = 0; x < lab.width; ++x) {
                      view(y, x, 0) = lab.L.at(x, y);
                      view(y, x, 1) = lab.a.at(x, y);
                      view(y, x, 2) = lab.b.at(x, y);
                  }
              return arr;
          },
          py::arg("image"), "Per-pixel CIELAB (D65), float64 (H,W,3).");

    m.def("delta_ab",
          [](py::sequence c1, py::sequence c2) {
              auto to_lab = [](py::sequence s) {
                  if (py::len(s) != 3) throw py::value_error("LabColor needs 3 components");
                  return LabColor{s[0].cast<double>(), s[1].cast<double>(), s[2].cast<double>()};
              };
              return delta_ab(to_lab(c1), to_lab(c2));
          },
          py::arg("c1"), py::arg("c2"), "Euclidean distance in the (a,b) chromaticity plane.");

    m.def("fundamental_solution",
          [](int n, double c1, double c2, const std::vector<double>& x) {
              return fundamental_solution({n, c1, c2}, x);
          },
          py::arg("n"), py::arg("c1"), py::arg("c2"), py::arg("x"));

    m.def("verify_radial_harmonicity",
          [](double c1, double c2, double h, double inner, double outer) {
              return verify_radial_harmonicity({2, c1, c2}, h, inner, outer);
          },
          py::arg("c1"), py::arg("c2"), py::arg("h"), py::arg("inner"), py::arg("outer"));

    m.def("kmeans",
          [](const py::array_t<double, py::array::c_style | py::array::forcecast>& pts, int k,
             const std::string& init, std::uint64_t seed, int max_iters) {
              if (pts.ndim() != 2) throw py::value_error("expected points of shape (N, d)");
              const auto n = static_cast<std::size_t>(pts.shape(0));
              const auto d = static_cast<std::size_t>(pts.shape(1));
              std::vector<FeatureVector> points(n, FeatureVector(d));
              const double* src = pts.data();
              for (std::size_t i = 0; i < n; ++i)
                  points[i].assign(src + i * d, src + (i + 1) * d);
              KmeansConfig cfg{k, kmeans_init_from_string(init), seed, max_iters, std::nullopt};
              const ClusterModel model = kmeans(points, cfg);

              py::array_t<std::int32_t> assignments({static_cast<py::ssize_t>(n)});
              std::memcpy(assignments.mutable_data(), model.assignments.data(),
                          n * sizeof(std::int32_t));
              py::array_t<double> means({static_cast<py::ssize_t>(model.means.size()),
                                         static_cast<py::ssize_t>(d)});
              for (std::size_t c = 0; c < model.means.size(); ++c)
                  std::memcpy(means.mutable_data() + c * d, model.means[c].data(), d * sizeof(double));

              py::dict out;
              out["k"] = model.k;
              out["means"] = means;
              out["assignments"] = assignments;
              out["iterations"] = model.iterations;
              out["wcss"] = model.wcss;
              out["wcss_history"] = model.wcss_history;
              out["converged"] = model.converged;
              return out;
          },
          py::arg("points"), py::arg("k") = 2, py::arg("init") = "random", py::arg("seed") = 0,
          py::arg("max_iters") = 100,
          "Lloyd k-means with the assignment-equality stopping rule.");

    m.def("generate_phantom",
          [](std::uint64_t seed, int n_speculars, double noise_sigma, bool frame) {
              PhantomSpec spec = default_phantom_spec(seed);
              if (n_speculars >= 0) spec.n_speculars = n_speculars;
              if (noise_sigma >= 0) spec.noise_sigma = noise_sigma;
              spec.frame = frame;
              auto [image, truth] = generate_phantom(spec);
              py::dict t;
              t["clean_image"] = array_from_image(truth.clean_image);
              t["specular_mask"] = array_from_mask(truth.specular_mask);
              t["ellipse_mask"] = array_from_mask(truth.ellipse_mask);
              t["ellipse_bbox"] = bbox_dict(truth.ellipse_bbox);
              return py::make_tuple(array_from_image(image), t);
          },
          py::arg("seed") = 0, py::arg("n_speculars") = -1, py::arg("noise_sigma") = -1.0,
          py::arg("frame") = true,
          "Seeded synthetic cervigram; returns (image, truth dict).");

    m.def("run_pipeline",
          [](const py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast>& img,
             int threshold, int dilate_radius, const std::string& se_shape,
             const std::string& solver, double omega, double tol, int max_iters, int k,
             const std::string& init, std::uint64_t seed, int connectivity, int margin, bool use_l,
             bool grayscale_inpaint, bool subsample) {
              PipelineConfig cfg;
              cfg.specular.threshold = static_cast<std::uint8_t>(threshold);
              cfg.specular.se = make_se(se_shape, dilate_radius);
              cfg.solver = make_solver(solver, omega, tol, max_iters);
              cfg.kmeans.k = k;
              cfg.kmeans.init = kmeans_init_from_string(init);
              cfg.kmeans.seed = seed;
              cfg.connectivity = connectivity;
              cfg.crop_margin = margin;
              cfg.use_l = use_l;
              cfg.grayscale_inpaint = grayscale_inpaint;
              cfg.subsample = subsample;

              const PipelineResult result = run_pipeline(image_from_array(img), cfg);
              py::dict out;
              out["cropped"] = array_from_image(result.cropped);
              out["inpainted"] = array_from_image(result.inpainted);
              out["specular_mask"] = array_from_mask(result.dilated_mask);
              out["roi_mask"] = array_from_mask(result.roi.roi_mask);
              out["bbox"] = bbox_dict(result.roi.bbox);
              out["cluster_index"] = result.roi.cluster_index;
              auto j = result.report.to_json(cfg);
              out["report"] = py::module_::import("json").attr("loads")(j.dump());
              return out;
          },
          py::arg("image"), py::arg("threshold") = 240, py::arg("dilate_radius") = 1,
          py::arg("se_shape") = "square", py::arg("solver") = "sor", py::arg("omega") = 1.9,
          py::arg("tol") = 1e-4, py::arg("max_iters") = 20000, py::arg("k") = 2,
          py::arg("init") = "random", py::arg("seed") = 0, py::arg("connectivity") = 8,
          py::arg("margin") = 10, py::arg("use_l") = false, py::arg("grayscale_inpaint") = false,
          py::arg("subsample") = true,
          "Full preprocessing flow; returns cropped/inpainted images, masks, bbox, and report.");

#ifdef CERVPREP_VERSION
    m.attr("__version__") = CERVPREP_VERSION;
#else
    m.attr("__version__") = "dev";
#endif
}
