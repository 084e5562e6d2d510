#ifndef CAVITYSPEC_REFERENCE_DATA_HPP
#define CAVITYSPEC_REFERENCE_DATA_HPP

namespace cavityspec::reference {

// Published reference values for the lowest even resonance: the wall
// coupling tuned, at each cavity size, so the ground level sits at the
// threshold shape; used by the verify-tables command and the acceptance
// run.  nu is the spectral value, energy the corresponding level.
struct ResonanceRow {
    double size;   // L (box) or R (disc)
    double gamma;
    double nu;
    double energy; // (nu + 1/2) omega box, (nu + 1) omega disc
};

inline constexpr ResonanceRow box_resonances[8] = {
    {8.0, -3.7288, -0.0014, 0.49858},
    {7.0, -3.1715, -0.00795, 0.49205},
    {6.0, -2.5657, -0.0334, 0.4666},
    {5.0, -1.8735, -0.0962, 0.4038},
    {4.0, -1.1366, -0.1985, 0.3015},
    {3.0, -0.5349, -0.3192, 0.1808},
    {2.0, -0.1641, -0.4168, 0.0832},
    {1.0, -0.0206, -0.4790, 0.021},
};

inline constexpr ResonanceRow disc_resonances[8] = {
    {4.0, -3.4609, -0.0099, 0.9901},
    {3.5, -2.8662, -0.0466, 0.9534},
    {3.0, -2.2280, -0.1450, 0.855},
    {2.5, -1.5504, -0.3196, 0.6804},
    {2.0, -0.8986, -0.5254, 0.4746},
    {1.5, -0.4070, -0.7232, 0.2768},
    {1.0, -0.1240, -0.8753, 0.1247},
    {0.5, -0.0157, -0.9688, 0.0312},
};

} // namespace cavityspec::reference

#endif
