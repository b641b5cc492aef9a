#pragma once

#include "cervprep/image.hpp"
#include "cervprep/specular.hpp"

#include <array>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>

namespace cervprep {

/// Iterative scheme for the discrete Laplace/Poisson solve.
enum class SolverMethod { Jacobi, GaussSeidel, Sor };

SolverMethod solver_method_from_string(const std::string& name);
std::string to_string(SolverMethod m);

struct SolverConfig {
    SolverMethod method = SolverMethod::Sor;
    double omega = 1.9;     // SOR relaxation factor, in (0,2)
    double tol = 1e-4;      // max-norm residual target, image intensity units
    int max_iters = 20000;
};

struct SolveStats {
    int iterations = 0;
    double final_residual = 0.0; // max |discrete Laplacian + f| over masked pixels
    bool converged = true;
};

/// Right-hand side for -lap(u) = f, sampled on the grid. The inpainting path
/// always uses f = 0 (Laplace's equation).
struct PoissonRhs {
    Plane f;
};

/// Parameters of the radial solution of Laplace's equation on R^n minus the
/// origin: c1*ln|x| + c2 in the plane, c1/((2-n)|x|^(n-2)) + c2 for n >= 3.
struct FundamentalSolutionParams {
    int n = 2; // dimension, >= 2
    double c1 = 1.0;
    double c2 = 0.0;
};

/// Five-point Laplacian u(x-1,y)+u(x+1,y)+u(x,y-1)+u(x,y+1)-4u(x,y) at an
/// interior pixel, unit grid spacing. Throws on border coordinates.
double discrete_laplacian(const Plane& plane, int x, int y);

/// Fill masked pixels with the discrete harmonic interpolant of the
/// surrounding unmasked values. Unmasked pixels pass through unchanged.
/// Stencil neighbors falling off the image are mirror-reflected, which acts
/// as a zero-gradient condition at the frame edge. Unknowns start at the
/// mean of their mask component's boundary ring. Non-convergence within
/// max_iters returns the best iterate with converged=false; a mask covering
/// the whole plane is an error.
std::pair<Plane, SolveStats> inpaint_plane(const Plane& plane, const BinaryMask& mask,
                                           const SolverConfig& cfg);

/// General form: solve -lap(u) = f on the masked pixels with Dirichlet data
/// from the unmasked ones. inpaint_plane is the f = 0 case.
std::pair<Plane, SolveStats> solve_poisson(const Plane& plane, const BinaryMask& mask,
                                           const std::optional<PoissonRhs>& rhs,
                                           const SolverConfig& cfg);

/// Split the image into planes, inpaint each with the same mask, reassemble.
std::pair<RgbImage8, std::array<SolveStats, 3>> inpaint_image(const RgbImage8& image,
                                                              const BinaryMask& mask,
                                                              const SolverConfig& cfg);

/// Radial solution evaluated at a point x of dimension p.n. |x| = 0 is
/// outside the domain and throws.
double fundamental_solution(const FundamentalSolutionParams& p, std::span<const double> x);

/// Max |5-point Laplacian| of f over grid points of spacing h whose whole
/// stencil lies in the annulus inner <= |x| <= outer, scaled by 1/h^2.
double max_stencil_residual(const std::function<double(double, double)>& f, double h, double inner,
                            double outer);

/// Consistency oracle for the n = 2 fundamental solution: samples it on the
/// annulus grid and returns the max scaled residual, which must shrink about
/// 4x when h is halved (second-order stencil on a smooth harmonic function).
double verify_radial_harmonicity(const FundamentalSolutionParams& p, double h, double inner,
                                 double outer);

} // namespace cervprep
