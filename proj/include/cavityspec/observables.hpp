#ifndef CAVITYSPEC_OBSERVABLES_HPP
#define CAVITYSPEC_OBSERVABLES_HPP

#include "cavityspec/errors.hpp"
#include "cavityspec/models.hpp"

#include <functional>
#include <utility>
#include <vector>

namespace cavityspec::observables {

// Nodes and weights on [-1, 1]; Newton iteration on the Legendre
// recurrence.  n in [2, 512] (the low end admits the textbook two- and
// three-point checks).
std::pair<std::vector<double>, std::vector<double>>
gauss_legendre_nodes(int n);

// A sampled eigenstate density: Gauss-Legendre nodes mapped onto the
// physical domain, with the volume measure folded into the weights
// (dx in the box, 2 pi r dr in the disc), so sum(w * a^2) is the norm.
struct RadialProfile {
    models::EigenState state; // metadata; defaulted for ad-hoc profiles
    bool disc = false;        // domain: [0, R] if set, else [-L/2, L/2]
    double size = 0.0;        // R or L
    int node_count = 0;
    std::vector<double> nodes;      // physical coordinates
    std::vector<double> weights;    // quadrature weight x jacobian x measure
    std::vector<double> amplitudes; // amplitude(nodes[i])
    double norm_constant = 1.0;     // factor applied so far
    std::function<double(double)> amplitude; // current (scaled) callable
};

// Sample an arbitrary callable on the box / disc without normalizing.
RadialProfile sample_box(const std::function<double(double)>& psi, double L,
                         int node_count);
RadialProfile sample_disc(const std::function<double(double)>& psi, double R,
                          int node_count);

// Scale so the density integrates to 1 (+- 1e-10); identically-zero or
// non-finite input is a data error.
RadialProfile normalize(RadialProfile p);

// Sampled + normalized profile of a computed eigenstate.
RadialProfile make_profile(const models::EigenState& state,
                           const models::RobinParam& bc, double size,
                           int node_count = 128);

// |gamma psi + psi'| / max(|gamma psi|, |psi'|, peak/size) at the wall
// (worst wall in the box); psi' from a one-sided 5-point stencil,
// h = 1e-4 * size.  The peak/size floor keeps the ratio near zero when
// both wall terms are at rounding-noise level (a flat state under a
// Neumann wall).  Dirichlet: |psi(wall)| / max |amplitude|.
double boundary_residual(const RadialProfile& p, const models::RobinParam& bc);

// Probability flux through the wall.  The stored amplitudes are real, so
// this is identically zero; kept as an explicit audit.
double normal_current(const RadialProfile& p);

struct MomentSet {
    double mean_x = 0.0;     // <x>; the disc value is 0 by symmetry
    double mean_x2 = 0.0;    // <x^2> (or <r^2>)
    double delta_x = 0.0;    // sqrt(<x^2> - <x>^2)
    double mean_nx = 0.0;    // boundary integral of (n . x) rho
    double mean_gamma = 0.0; // boundary integral of gamma rho (0 Dirichlet)
    double mean_n = 0.0;     // signed boundary integral of n rho (box only)
};

// Interior moments by quadrature; boundary moments from wall densities
// (two endpoint terms in the box, circumference x wall density in the
// disc).  Requires a normalized profile.
MomentSet moments(const RadialProfile& p, const models::RobinParam& bc);

struct UncertaintyReport {
    double lhs = 0.0; // 2 M E
    double rhs = 0.0;
    MomentSet moments;
    bool satisfied = false; // lhs >= rhs - 1e-9
    bool saturated = false; // |lhs - rhs| <= 1e-9
};

// Audit of the wall-corrected uncertainty bound
//   2 M E  >=  ((d + <n>.<x> - <n.x>) / (2 dx))^2 + <gamma> + <n>^2/4
// with d the spatial dimension (1 in the box, 2 in the disc).
UncertaintyReport uncertainty_check(const models::EigenState& state,
                                    const models::RobinParam& bc, double size,
                                    int node_count = 128);

} // namespace cavityspec::observables

#endif
