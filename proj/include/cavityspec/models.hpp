#ifndef CAVITYSPEC_MODELS_HPP
#define CAVITYSPEC_MODELS_HPP

#include "cavityspec/errors.hpp"
#include "cavityspec/rootkit.hpp"

#include <functional>
#include <string>
#include <vector>

namespace cavityspec::models {

// Wall parameter of the boundary condition  gamma*psi + n.grad(psi) = 0.
// Dirichlet is its own variant with its own residual (the wall value of the
// regular solution), never a huge finite gamma.
struct RobinParam {
    bool is_dirichlet = false;
    double gamma = 0.0;

    static RobinParam finite(double g);
    static RobinParam dirichlet();
    void validate() const;
};

// Box of width L, walls at x = +-L/2, in units 1/alpha (alpha = 1 here).
struct BoxGeometry {
    double L = 0.0;
    void validate() const;
};

// Disc of radius R; 1/alpha for the oscillator, arbitrary length unit for
// the free particle.
struct DiscGeometry {
    double R = 0.0;
    void validate() const;
};

enum class Model { sho1d, disc_free, disc_iso };
enum class Parity { even, odd };
enum class EnergyUnit { omega, half_inv_MR2, pi2_half_inv_MR2 };

const char* to_string(Model m);
const char* to_string(EnergyUnit u);

struct EigenState {
    Model model = Model::sho1d;
    Parity parity = Parity::even; // sho1d sector
    int m = 0;                    // disc sector (angular momentum)
    int index = 0;                // 0-based position in the sorted spectrum
    // spectral variable: nu for the oscillators; kR for the free disc, with
    // negative-energy states stored as kappa*R alongside the flag below
    double spectral = 0.0;
    bool negative_energy = false;
    double energy = 0.0;
    EnergyUnit unit = EnergyUnit::omega;
};

struct SpectrumResult {
    std::vector<EigenState> states;
    bool partial = false;   // fewer roots in the window than requested
    std::string warning;
};

// ---------------------------------------------------------------------
// 1-d oscillator in a box (spectral variable nu, E = (nu + 1/2) omega)

double sho_even_residual(double nu, double L, const RobinParam& bc);
double sho_odd_residual(double nu, double L, const RobinParam& bc);
// magnitude of the residual's ingredients (coefficients and special
// functions taken separately), bounded away from zero at roots; the
// reference for scaled residual comparisons
double sho_even_residual_scale(double nu, double L, const RobinParam& bc);
double sho_odd_residual_scale(double nu, double L, const RobinParam& bc);

SpectrumResult sho_spectrum(double L, const RobinParam& bc, Parity parity,
                            int count);

// Unnormalized amplitude, defined on |x| <= L/2 (domain error outside).
std::function<double(double)> sho_wavefunction(const EigenState& state,
                                               const RobinParam& bc, double L);

// ---------------------------------------------------------------------
// free particle in a disc (spectral variable kR, E = +-(kR)^2 / (2 M R^2))

enum class EnergySign { positive, negative };

double free_residual(double kR_or_kappaR, EnergySign sign, int m, double R,
                     const RobinParam& bc);
double free_residual_scale(double kR_or_kappaR, EnergySign sign, int m,
                           double R, const RobinParam& bc);

SpectrumResult free_spectrum(double R, const RobinParam& bc, int m, int count,
                             EnergyUnit unit = EnergyUnit::half_inv_MR2);

std::function<double(double)> free_wavefunction(const EigenState& state,
                                                double R);

// ---------------------------------------------------------------------
// isotropic oscillator in a disc (spectral variable nu, E = (nu + 1) omega)

double iso_residual(double nu, int m, double R, const RobinParam& bc);
double iso_residual_scale(double nu, int m, double R, const RobinParam& bc);

SpectrumResult iso_spectrum(double R, const RobinParam& bc, int m, int count);

// Unnormalized radial amplitude on 0 <= r <= R; finite at the origin.
// The wall condition enters only through state.spectral, but the
// parameter is validated so mismatched calls fail loudly.
std::function<double(double)> iso_wavefunction(const EigenState& state,
                                               double R, const RobinParam& bc);

// ---------------------------------------------------------------------
// radii at which an integer spectral value is an exact eigenvalue

// nu = |m|: R = (gamma + sqrt(4|m| + gamma^2)) / 2 (alpha = 1); the result
// is residual-verified before being returned.
double special_radius_nu_eq_m(int m, double gamma);

// nu = |m| + 2 comes from a quartic in R; two parameter slices have closed
// forms (Neumann, and gamma = R alpha^2), the general gamma case is solved
// by scanning the quartic.
struct GammaSpec {
    enum class Kind { value, neumann, gamma_eq_R } kind = Kind::value;
    double value = 0.0;

    static GammaSpec at(double gamma) { return {Kind::value, gamma}; }
    static GammaSpec neumann() { return {Kind::neumann, 0.0}; }
    static GammaSpec gamma_eq_R() { return {Kind::gamma_eq_R, 0.0}; }
};

std::vector<double> special_radius_nu_eq_m_plus_2(int m, const GammaSpec& gs);

} // namespace cavityspec::models

#endif
