#ifndef CAVITYSPEC_SPECFUN_HPP
#define CAVITYSPEC_SPECFUN_HPP

#include "cavityspec/errors.hpp"

namespace cavityspec::specfun {

// Requested accuracy for the series evaluators. rel_tol is the target
// relative error of the *sum* (the achievable error is limited by the
// condition number of the series, see the golden fixtures); max_terms caps
// the Taylor loops.
struct AccuracyBudget {
    double rel_tol = 1e-12;
    int max_terms = 600;
    const char* note = "";

    void validate() const {
        if (!(rel_tol > 0.0 && rel_tol <= 1e-6))
            fail(errc::domain, "AccuracyBudget: rel_tol must be in (0, 1e-6]");
        if (max_terms < 100)
            fail(errc::domain, "AccuracyBudget: max_terms must be >= 100");
    }
};

// ln|Gamma(x)|. Poles of Gamma (x = 0, -1, -2, ...) are rejected.
double ln_gamma(double x);
// Same, but also reports sign(Gamma(x)) in sign_out (+1 or -1).
double ln_gamma(double x, int& sign_out);

// 1/Gamma(x): entire in x, zero at the non-positive integers. This is the
// channel everything else uses near Gamma poles, so root scans can cross
// integer orders without special-casing.
double gamma_inv(double x);

// Kummer's confluent hypergeometric 1F1(a; b; x).
// Domain: |a| <= 50, |x| <= 100, b not a non-positive integer.
double kummer_m(double a, double b, double x, const AccuracyBudget& budget = {});

// Regularized Kummer function 1F1(a; b; x)/Gamma(b), continuous in b
// including b = 0, -1, -2, ... (term-wise 1/Gamma(b+k) series there).
double kummer_m_regularized(double a, double b, double x,
                            const AccuracyBudget& budget = {});

// Weber parabolic cylinder function D_nu(z).
// Domain: nu in [-10, 30], |z| <= 20.
double pcf_d(double nu, double z);

// Bessel J_m(x) for m >= -1, 0 <= x <= 200, with J_{-1} == -J_1 so the
// disc residual can be written down once and also hold at m = 0.
double bessel_j(int m, double x);

// Modified Bessel I_m(x) for m >= -1, 0 <= x <= 300, with I_{-1} == I_1.
double bessel_i(int m, double x);

namespace detail {
// Raw 1F1 Taylor sum without the public-domain guard; used internally where
// the argument provably stays representable (wall-side screening of the
// oscillator residuals). Returns the compensated sum.
double kummer_series_raw(double a, double b, double x, int max_terms,
                         double rel_tol);
}

} // namespace cavityspec::specfun

#endif
