#include "cervprep/inpaint.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace cervprep {

SolverMethod solver_method_from_string(const std::string& name) {
    if (name == "jacobi") return SolverMethod::Jacobi;
    if (name == "gs" || name == "gauss-seidel") return SolverMethod::GaussSeidel;
    if (name == "sor") return SolverMethod::Sor;
    throw std::invalid_argument("unknown solver method: " + name);
}

std::string to_string(SolverMethod m) {
    switch (m) {
        case SolverMethod::Jacobi: return "jacobi";
        case SolverMethod::GaussSeidel: return "gauss-seidel";
        case SolverMethod::Sor: return "sor";
    }
    return "?";
}

double discrete_laplacian(const Plane& plane, int x, int y) {
    if (x < 1 || x > plane.width - 2 || y < 1 || y > plane.height - 2)
        throw std::out_of_range("discrete_laplacian: coordinate on border");
    return plane.at(x - 1, y) + plane.at(x + 1, y) + plane.at(x, y - 1) + plane.at(x, y + 1) -
           4.0 * plane.at(x, y);
}

namespace {

// Mirror reflection about the border pixel (index -1 maps to 1). Degenerate
// single-pixel axes clamp to 0.
int reflect(int i, int n) {
    if (n == 1) return 0;
    while (i < 0 || i >= n) i = (i < 0) ? -i : 2 * n - 2 - i;
    return i;
}

struct Unknown {
    int x, y;
    std::size_t idx;        // flat index into the plane
    std::size_t nb[4];      // reflected flat neighbor indices
    double rhs;             // f at this pixel (h = 1)
};

void validate_solver_config(const SolverConfig& cfg) {
    if (cfg.method == SolverMethod::Sor && (cfg.omega <= 0.0 || cfg.omega >= 2.0))
        throw std::invalid_argument("SolverConfig: omega must be in (0,2)");
    if (cfg.tol <= 0.0) throw std::invalid_argument("SolverConfig: tol must be > 0");
    if (cfg.max_iters < 1) throw std::invalid_argument("SolverConfig: max_iters must be >= 1");
}

// Seed each mask component with the mean of its boundary ring so iterates
// start inside the maximum-principle envelope.
void init_component_means(Plane& u, const BinaryMask& mask) {
    const int w = mask.width;
    const int h = mask.height;
    std::vector<int> comp(static_cast<std::size_t>(w) * h, -1);
    std::vector<std::size_t> stack;
    static constexpr int DX[4] = {1, -1, 0, 0};
    static constexpr int DY[4] = {0, 0, 1, -1};

    int n_comp = 0;
    for (std::size_t start = 0; start < comp.size(); ++start) {
        if (!mask.bits[start] || comp[start] >= 0) continue;
        const int id = n_comp++;
        double sum = 0.0;
        std::size_t n_boundary = 0;
        std::vector<std::size_t> members;
        comp[start] = id;
        stack.assign(1, start);
        while (!stack.empty()) {
            const std::size_t i = stack.back();
            stack.pop_back();
            members.push_back(i);
            const int x = static_cast<int>(i % w);
            const int y = static_cast<int>(i / w);
            for (int k = 0; k < 4; ++k) {
                const int nx = x + DX[k];
                const int ny = y + DY[k];
                if (nx < 0 || nx >= w || ny < 0 || ny >= h) continue;
                const std::size_t ni = static_cast<std::size_t>(ny) * w + nx;
                if (mask.bits[ni]) {
                    if (comp[ni] < 0) {
                        comp[ni] = id;
                        stack.push_back(ni);
                    }
                } else {
                    sum += u.values[ni];
                    ++n_boundary;
                }
            }
        }
        // A proper sub-mask always touches at least one unmasked pixel; the
        // full-coverage case was rejected before we got here.
        const double mean = n_boundary ? sum / static_cast<double>(n_boundary) : 0.0;
        for (std::size_t i : members) u.values[i] = mean;
    }
}

double max_residual(const Plane& u, const std::vector<Unknown>& unknowns) {
    double worst = 0.0;
    for (const auto& q : unknowns) {
        const double r = u.values[q.nb[0]] + u.values[q.nb[1]] + u.values[q.nb[2]] +
                         u.values[q.nb[3]] - 4.0 * u.values[q.idx] + q.rhs;
        worst = std::max(worst, std::abs(r));
    }
    return worst;
}

} // namespace

std::pair<Plane, SolveStats> solve_poisson(const Plane& plane, const BinaryMask& mask,
                                           const std::optional<PoissonRhs>& rhs,
                                           const SolverConfig& cfg) {
    validate_solver_config(cfg);
    if (mask.width != plane.width || mask.height != plane.height)
        throw std::invalid_argument("solve_poisson: mask dimensions do not match plane");
    if (rhs && (rhs->f.width != plane.width || rhs->f.height != plane.height))
        throw std::invalid_argument("solve_poisson: rhs dimensions do not match plane");

    const std::size_t n_masked = mask.count();
    Plane u = plane;
    if (n_masked == 0) return {std::move(u), SolveStats{0, 0.0, true}};
    if (n_masked == u.values.size())
        throw std::invalid_argument("solve_poisson: mask covers entire plane");

    const int w = plane.width;
    const int h = plane.height;
    std::vector<Unknown> unknowns;
    unknowns.reserve(n_masked);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            if (!mask.get(x, y)) continue;
            Unknown q;
            q.x = x;
            q.y = y;
            q.idx = static_cast<std::size_t>(y) * w + x;
            q.nb[0] = static_cast<std::size_t>(y) * w + reflect(x - 1, w);
            q.nb[1] = static_cast<std::size_t>(y) * w + reflect(x + 1, w);
            q.nb[2] = static_cast<std::size_t>(reflect(y - 1, h)) * w + x;
            q.nb[3] = static_cast<std::size_t>(reflect(y + 1, h)) * w + x;
            q.rhs = rhs ? rhs->f.values[q.idx] : 0.0;
            unknowns.push_back(q);
        }

    init_component_means(u, mask);

    // Red-black split keeps Gauss-Seidel/SOR sweeps order-independent.
    std::vector<const Unknown*> colors[2];
    for (const auto& q : unknowns) colors[(q.x + q.y) & 1].push_back(&q);

    const double omega = cfg.method == SolverMethod::Sor ? cfg.omega : 1.0;
    std::vector<double> scratch(cfg.method == SolverMethod::Jacobi ? unknowns.size() : 0);

    SolveStats stats;
    stats.final_residual = max_residual(u, unknowns);
    stats.converged = stats.final_residual <= cfg.tol;
    while (!stats.converged && stats.iterations < cfg.max_iters) {
        if (cfg.method == SolverMethod::Jacobi) {
            for (std::size_t i = 0; i < unknowns.size(); ++i) {
                const auto& q = unknowns[i];
                scratch[i] = 0.25 * (u.values[q.nb[0]] + u.values[q.nb[1]] + u.values[q.nb[2]] +
                                     u.values[q.nb[3]] + q.rhs);
            }
            for (std::size_t i = 0; i < unknowns.size(); ++i) u.values[unknowns[i].idx] = scratch[i];
        } else {
            for (const auto* bucket : {&colors[0], &colors[1]})
                for (const Unknown* q : *bucket) {
                    const double sigma = 0.25 * (u.values[q->nb[0]] + u.values[q->nb[1]] +
                                                 u.values[q->nb[2]] + u.values[q->nb[3]] + q->rhs);
                    u.values[q->idx] += omega * (sigma - u.values[q->idx]);
                }
        }
        ++stats.iterations;
        stats.final_residual = max_residual(u, unknowns);
        stats.converged = stats.final_residual <= cfg.tol;
    }
    return {std::move(u), stats};
}

std::pair<Plane, SolveStats> inpaint_plane(const Plane& plane, const BinaryMask& mask,
                                           const SolverConfig& cfg) {
    return solve_poisson(plane, mask, std::nullopt, cfg);
}

std::pair<RgbImage8, std::array<SolveStats, 3>> inpaint_image(const RgbImage8& image,
                                                              const BinaryMask& mask,
                                                              const SolverConfig& cfg) {
    auto planes = split_planes(image);
    auto [r, sr] = inpaint_plane(planes.r, mask, cfg);
    auto [g, sg] = inpaint_plane(planes.g, mask, cfg);
    auto [b, sb] = inpaint_plane(planes.b, mask, cfg);
    return {merge_planes(r, g, b), {sr, sg, sb}};
}

double fundamental_solution(const FundamentalSolutionParams& p, std::span<const double> x) {
    if (p.n < 2) throw std::invalid_argument("fundamental_solution: n must be >= 2");
    if (x.size() != static_cast<std::size_t>(p.n))
        throw std::invalid_argument("fundamental_solution: point dimension must equal n");
    double r2 = 0.0;
    for (double xi : x) r2 += xi * xi;
    const double r = std::sqrt(r2);
    if (r == 0.0) throw std::domain_error("fundamental_solution: undefined at the origin");
    if (p.n == 2) return p.c1 * std::log(r) + p.c2;
    return p.c1 / ((2.0 - p.n) * std::pow(r, p.n - 2)) + p.c2;
}

double max_stencil_residual(const std::function<double(double, double)>& f, double h, double inner,
                            double outer) {
    if (!(0.0 < inner && inner < outer)) throw std::invalid_argument("annulus radii must satisfy 0 < inner < outer");
    if (!(h > 0.0) || h >= inner / 4.0) throw std::invalid_argument("grid spacing must satisfy 0 < h < inner/4");

    const int n = static_cast<int>(std::ceil(outer / h)) + 1;
    const auto inside = [&](int i, int j) {
        const double r = std::hypot(i * h, j * h);
        return inner <= r && r <= outer;
    };
    double worst = 0.0;
    for (int i = -n; i <= n; ++i)
        for (int j = -n; j <= n; ++j) {
            if (!inside(i, j) || !inside(i - 1, j) || !inside(i + 1, j) || !inside(i, j - 1) ||
                !inside(i, j + 1))
                continue;
            const double lap = (f((i - 1) * h, j * h) + f((i + 1) * h, j * h) +
                                f(i * h, (j - 1) * h) + f(i * h, (j + 1) * h) -
                                4.0 * f(i * h, j * h)) /
                               (h * h);
            worst = std::max(worst, std::abs(lap));
        }
    return worst;
}

double verify_radial_harmonicity(const FundamentalSolutionParams& p, double h, double inner,
                                 double outer) {
    if (p.n != 2) throw std::invalid_argument("verify_radial_harmonicity: grid oracle is 2-D (n = 2)");
    return max_stencil_residual(
        [&](double x, double y) {
            const double pt[2] = {x, y};
            return fundamental_solution(p, pt);
        },
        h, inner, outer);
}

} // namespace cervprep
