#include "cavityspec/observables.hpp"

#include <cmath>
#include <cstdio>

namespace cavityspec::observables {

namespace {

std::string fmt(const char* f, double a, double b = 0.0) {
    char buf[160];
    std::snprintf(buf, sizeof buf, f, a, b);
    return buf;
}

constexpr double TINY = 1e-300;

} // namespace

std::pair<std::vector<double>, std::vector<double>>
gauss_legendre_nodes(int n) {
    if (n < 2 || n > 512)
        fail(errc::domain,
             fmt("gauss_legendre_nodes: n = %g outside [2, 512]",
                 static_cast<double>(n)));
    std::vector<double> x(n), w(n);
    int half = (n + 1) / 2;
    for (int i = 0; i < half; ++i) {
        // Chebyshev-based starting guess, then Newton on P_n
        double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
            }
            pp = n * (z * p0 - p1) / (z * z - 1.0);
            double dz = p0 / pp;
            z -= dz;
            if (std::abs(dz) < 1e-15)
                break;
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * pp * pp);
        w[n - 1 - i] = w[i];
    }
    return {x, w};
}

namespace {

RadialProfile sample(const std::function<double(double)>& psi, bool disc,
                     double size, int node_count) {
    if (!(size > 0.0))
        fail(errc::domain, "profile: domain size must be positive");
    auto [gx, gw] = gauss_legendre_nodes(node_count);
    RadialProfile p;
    p.disc = disc;
    p.size = size;
    p.node_count = node_count;
    p.nodes.resize(node_count);
    p.weights.resize(node_count);
    p.amplitudes.resize(node_count);
    for (int i = 0; i < node_count; ++i) {
        if (disc) {
            double r = size * (gx[i] + 1.0) / 2.0; // [0, R]
            p.nodes[i] = r;
            p.weights[i] = gw[i] * (size / 2.0) * 2.0 * M_PI * r;
        } else {
            double xx = size * gx[i] / 2.0; // [-L/2, L/2]
            p.nodes[i] = xx;
            p.weights[i] = gw[i] * (size / 2.0);
        }
        p.amplitudes[i] = psi(p.nodes[i]);
    }
    p.amplitude = psi;
    return p;
}

} // namespace

RadialProfile sample_box(const std::function<double(double)>& psi, double L,
                         int node_count) {
    return sample(psi, false, L, node_count);
}

RadialProfile sample_disc(const std::function<double(double)>& psi, double R,
                          int node_count) {
    return sample(psi, true, R, node_count);
}

RadialProfile normalize(RadialProfile p) {
    double norm = 0.0;
    for (int i = 0; i < p.node_count; ++i)
        norm += p.weights[i] * p.amplitudes[i] * p.amplitudes[i];
    if (!std::isfinite(norm) || norm <= 0.0)
        fail(errc::data, fmt("normalize: profile norm %g is not usable", norm));
    double a = 1.0 / std::sqrt(norm);
    for (double& v : p.amplitudes)
        v *= a;
    p.norm_constant *= a;
    auto base = p.amplitude;
    p.amplitude = [a, base](double xx) { return a * base(xx); };
    return p;
}

RadialProfile make_profile(const models::EigenState& state,
                           const models::RobinParam& bc, double size,
                           int node_count) {
    std::function<double(double)> raw;
    bool disc = state.model != models::Model::sho1d;
    switch (state.model) {
    case models::Model::sho1d:
        raw = models::sho_wavefunction(state, bc, size);
        break;
    case models::Model::disc_free:
        raw = models::free_wavefunction(state, size);
        break;
    case models::Model::disc_iso:
        raw = models::iso_wavefunction(state, size, bc);
        break;
    }
    RadialProfile p = sample(raw, disc, size, node_count);
    p.state = state;
    return normalize(std::move(p));
}

namespace {

// one-sided 5-point first derivative; dir = +1 samples x0, x0+h, ...
double stencil_deriv(const std::function<double(double)>& f, double x0,
                     double h, int dir) {
    double s = dir > 0 ? 1.0 : -1.0;
    double f0 = f(x0);
    double f1 = f(x0 + s * h);
    double f2 = f(x0 + 2.0 * s * h);
    double f3 = f(x0 + 3.0 * s * h);
    double f4 = f(x0 + 4.0 * s * h);
    return s * (-25.0 * f0 + 48.0 * f1 - 36.0 * f2 + 16.0 * f3 - 3.0 * f4) /
           (12.0 * h);
}

// floor = natural derivative scale of the profile (peak/size); without it a
// state whose wall terms both sit at rounding-noise level (constant psi under
// a Neumann wall) would report noise/noise = 1 instead of ~0
double wall_ratio(double gpsi, double dpsi_outward, double floor_scale) {
    double denom = std::max(
        {std::abs(gpsi), std::abs(dpsi_outward), floor_scale, TINY});
    return std::abs(gpsi + dpsi_outward) / denom;
}

double peak_amplitude(const RadialProfile& p) {
    double peak = 0.0;
    for (double a : p.amplitudes)
        peak = std::max(peak, std::abs(a));
    return peak;
}

} // namespace

double boundary_residual(const RadialProfile& p, const models::RobinParam& bc) {
    bc.validate();
    double h = 1e-4 * p.size;
    double peak = peak_amplitude(p);
    if (peak <= 0.0)
        fail(errc::data, "boundary_residual: zero profile");
    if (bc.is_dirichlet) {
        if (p.disc)
            return std::abs(p.amplitude(p.size)) / peak;
        double half = p.size / 2.0;
        return std::max(std::abs(p.amplitude(half)),
                        std::abs(p.amplitude(-half))) /
               peak;
    }
    double floor_scale = peak / p.size;
    if (p.disc) {
        double w = p.size;
        double d = stencil_deriv(p.amplitude, w, h, -1); // outward = +d/dr
        return wall_ratio(bc.gamma * p.amplitude(w), d, floor_scale);
    }
    double half = p.size / 2.0;
    double dr = stencil_deriv(p.amplitude, half, h, -1);
    double dl = -stencil_deriv(p.amplitude, -half, h, +1); // outward = -d/dx
    double right = wall_ratio(bc.gamma * p.amplitude(half), dr, floor_scale);
    double left = wall_ratio(bc.gamma * p.amplitude(-half), dl, floor_scale);
    return std::max(right, left);
}

double normal_current(const RadialProfile& p) {
    for (double a : p.amplitudes)
        if (!std::isfinite(a))
            fail(errc::data, "normal_current: amplitude is not a finite real");
    // Im(psi* d_n psi) with a real amplitude: exactly zero.
    return 0.0;
}

MomentSet moments(const RadialProfile& p, const models::RobinParam& bc) {
    bc.validate();
    double norm = 0.0, mx = 0.0, mx2 = 0.0;
    for (int i = 0; i < p.node_count; ++i) {
        double rho = p.amplitudes[i] * p.amplitudes[i];
        norm += p.weights[i] * rho;
        mx += p.weights[i] * p.nodes[i] * rho;
        mx2 += p.weights[i] * p.nodes[i] * p.nodes[i] * rho;
    }
    if (std::abs(norm - 1.0) > 1e-8)
        fail(errc::data,
             fmt("moments: profile is not normalized (integral = %g)", norm));

    MomentSet ms;
    if (p.disc) {
        // the density carries no angle dependence, so the vector boundary
        // and interior first moments vanish identically
        ms.mean_x = 0.0;
        ms.mean_x2 = mx2;
        double rho_w = p.amplitude(p.size) * p.amplitude(p.size);
        double ring = 2.0 * M_PI * p.size * rho_w; // circumference integral
        ms.mean_nx = p.size * ring;
        ms.mean_gamma = bc.is_dirichlet ? 0.0 : bc.gamma * ring;
        ms.mean_n = 0.0;
    } else {
        if (std::abs(mx) > 1e-10)
            fail(errc::data,
                 fmt("moments: <x> = %g violates the parity symmetry check",
                     mx));
        ms.mean_x = mx;
        ms.mean_x2 = mx2;
        double half = p.size / 2.0;
        double rho_r = p.amplitude(half) * p.amplitude(half);
        double rho_l = p.amplitude(-half) * p.amplitude(-half);
        ms.mean_nx = half * (rho_r + rho_l);
        ms.mean_gamma = bc.is_dirichlet ? 0.0 : bc.gamma * (rho_r + rho_l);
        ms.mean_n = rho_r - rho_l;
    }
    ms.delta_x = std::sqrt(std::max(0.0, ms.mean_x2 - ms.mean_x * ms.mean_x));
    return ms;
}

UncertaintyReport uncertainty_check(const models::EigenState& state,
                                    const models::RobinParam& bc, double size,
                                    int node_count) {
    RadialProfile p = make_profile(state, bc, size, node_count);
    MomentSet ms = moments(p, bc);

    double lhs;
    if (state.model == models::Model::disc_free) {
        double e = state.energy; // in units 1/(2 M R^2) (possibly / pi^2)
        if (state.unit == models::EnergyUnit::pi2_half_inv_MR2)
            e *= M_PI * M_PI;
        lhs = e / (size * size);
    } else {
        lhs = 2.0 * state.energy; // hbar = M = omega = 1
    }

    double d = state.model == models::Model::sho1d ? 1.0 : 2.0;
    double num = d + ms.mean_n * ms.mean_x - ms.mean_nx;
    double rhs = num * num / (4.0 * ms.mean_x2 - 4.0 * ms.mean_x * ms.mean_x) +
                 ms.mean_gamma + ms.mean_n * ms.mean_n / 4.0;

    UncertaintyReport rep;
    rep.lhs = lhs;
    rep.rhs = rhs;
    rep.moments = ms;
    rep.satisfied = lhs >= rhs - 1e-9;
    rep.saturated = std::abs(lhs - rhs) <= 1e-9;
    return rep;
}

} // namespace cavityspec::observables
