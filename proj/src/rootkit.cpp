#include "cavityspec/rootkit.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace cavityspec::rootkit {

namespace {

int sgn(double v) { return v > 0.0 ? 1 : (v < 0.0 ? -1 : 0); }

std::string fmt(const char* f, double a, double b = 0.0) {
    char buf[160];
    std::snprintf(buf, sizeof buf, f, a, b);
    return buf;
}

} // namespace

void Bracket::validate() const {
    if (!(lo < hi))
        fail(errc::data, "Bracket: requires lo < hi");
    if (!std::isfinite(f_lo) || !std::isfinite(f_hi))
        fail(errc::data, "Bracket: non-finite endpoint residual");
    bool straddles = (sgn(f_lo) != sgn(f_hi)) && !(f_lo == 0.0 && f_hi == 0.0);
    if (!straddles)
        fail(errc::data, "Bracket: endpoint residuals do not straddle zero");
}

void RootConfig::validate() const {
    if (!(grid_step > 0.0))
        fail(errc::config, "RootConfig: grid_step must be > 0");
    if (!(tol_x > 0.0 && tol_x <= 1e-6))
        fail(errc::config, "RootConfig: tol_x must be in (0, 1e-6]");
    if (max_bisections < 60)
        fail(errc::config, "RootConfig: max_bisections must be >= 60");
}

std::vector<Bracket> find_sign_changes(const std::function<double(double)>& f,
                                       double a, double b, double step,
                                       int* skipped_nonfinite) {
    if (!(a < b))
        fail(errc::domain, "find_sign_changes: requires a < b");
    if (!(step > 0.0))
        fail(errc::domain, "find_sign_changes: requires step > 0");

    std::vector<Bracket> out;
    int skipped = 0;

    // grid including b as the exact last point
    std::vector<double> xs;
    for (long i = 0;; ++i) {
        double x = a + i * step;
        if (x >= b)
            break;
        xs.push_back(x);
    }
    xs.push_back(b);

    // keep only finite evaluations, remembering adjacency: a skipped point
    // breaks the chain so we never bracket across a pole
    bool have_prev = false;
    double xp = 0.0, fp = 0.0;
    // a grid point that evaluated to exactly zero; resolved once the next
    // finite point is known
    bool pending_zero = false;
    double zxp = 0.0, zfp = 0.0;
    bool zero_had_prev = false;

    for (double x : xs) {
        double fx = f(x);
        if (!std::isfinite(fx)) {
            ++skipped;
            have_prev = false;
            pending_zero = false;
            continue;
        }
        if (pending_zero) {
            // bracket around the exact grid zero if its finite neighbors
            // straddle; same-sign neighbors mean a tangency -> documented miss
            if (zero_had_prev && sgn(zfp) != 0 && sgn(fx) != 0 &&
                sgn(zfp) != sgn(fx))
                out.push_back({zxp, x, zfp, fx});
            pending_zero = false;
        }
        if (fx == 0.0) {
            pending_zero = true;
            zxp = xp;
            zfp = fp;
            zero_had_prev = have_prev;
            have_prev = false; // the zero itself is not a bracket endpoint
            xp = x;
            fp = fx;
            continue;
        }
        if (have_prev && sgn(fp) != sgn(fx))
            out.push_back({xp, x, fp, fx});
        have_prev = true;
        xp = x;
        fp = fx;
    }

    if (skipped_nonfinite)
        *skipped_nonfinite = skipped;
    std::sort(out.begin(), out.end(),
              [](const Bracket& p, const Bracket& q) { return p.lo < q.lo; });
    return out;
}

double refine(const std::function<double(double)>& f, Bracket bracket,
              const RootConfig& config) {
    config.validate();
    bracket.validate();

    double lo = bracket.lo, hi = bracket.hi;
    double flo = bracket.f_lo, fhi = bracket.f_hi;
    double best_x = std::abs(flo) <= std::abs(fhi) ? lo : hi;
    double best_f = std::min(std::abs(flo), std::abs(fhi));

    // an endpoint that is exactly zero is already the root
    if (flo == 0.0)
        return lo;
    if (fhi == 0.0)
        return hi;

    int it = 0;
    while (hi - lo > config.tol_x) {
        if (++it > config.max_bisections)
            throw refine_failure(
                {lo, hi, flo, fhi},
                fmt("refine: %g bisections exhausted at width %g",
                    static_cast<double>(config.max_bisections), hi - lo));
        double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi)
            break; // interval at floating-point resolution
        double fm = f(mid);
        if (!std::isfinite(fm))
            throw refine_failure({lo, hi, flo, fhi},
                                 "refine: non-finite residual inside bracket");
        if (std::abs(fm) < best_f) {
            best_f = std::abs(fm);
            best_x = mid;
        }
        if (fm == 0.0)
            return mid;
        if (sgn(fm) == sgn(flo)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
            fhi = fm;
        }
    }
    return best_x;
}

Branch continue_branch(const std::function<double(double, double)>& f,
                       const std::vector<double>& gamma_grid, double seed_root,
                       const RootConfig& config, double global_lo,
                       double global_hi, int branch_index) {
    config.validate();
    if (gamma_grid.empty())
        fail(errc::data, "continue_branch: empty gamma grid");
    if (!(global_lo < global_hi))
        fail(errc::data, "continue_branch: bad global interval");

    Branch br;
    br.branch_index = branch_index;
    br.gamma_grid = gamma_grid;
    br.roots.reserve(gamma_grid.size());
    br.jump_flag.assign(gamma_grid.size(), 0);
    br.roots.push_back(seed_root);

    for (std::size_t j = 1; j < gamma_grid.size(); ++j) {
        double g = gamma_grid[j];
        auto fj = [&](double x) { return f(g, x); };
        double prev = br.roots[j - 1];
        double local_motion =
            j >= 2 ? std::abs(br.roots[j - 1] - br.roots[j - 2]) : 0.0;
        double w = std::max(config.grid_step, 4.0 * local_motion);

        double root = 0.0;
        bool found = false;
        while (true) {
            double lo = std::max(global_lo, prev - w);
            double hi = std::min(global_hi, prev + w);
            auto brs = find_sign_changes(fj, lo, hi, config.grid_step);
            if (!brs.empty()) {
                // nearest bracket to the previous root
                const Bracket* pick = &brs[0];
                double bestd = 1e308;
                for (const auto& cand : brs) {
                    double mid = 0.5 * (cand.lo + cand.hi);
                    double d = std::abs(mid - prev);
                    if (d < bestd) {
                        bestd = d;
                        pick = &cand;
                    }
                }
                root = refine(fj, *pick, config);
                found = true;
                break;
            }
            if (lo <= global_lo && hi >= global_hi)
                break; // nowhere left to grow
            w *= 2.0;
        }
        if (!found)
            throw branch_lost(j, br,
                              fmt("continue_branch: level lost at gamma = %g "
                                  "(grid index %g)",
                                  g, static_cast<double>(j)));
        double motion_scale = std::max(local_motion, config.grid_step);
        if (std::abs(root - prev) > 10.0 * motion_scale)
            br.jump_flag[j] = 1;
        br.roots.push_back(root);
    }
    return br;
}

std::pair<double, double> min_gap(const Branch& a, const Branch& b,
                                  const std::function<double(double)>& gap_fn) {
    if (a.gamma_grid.size() != b.gamma_grid.size() || a.gamma_grid.empty())
        fail(errc::data, "min_gap: branches must share one nonempty grid");
    for (std::size_t i = 0; i < a.gamma_grid.size(); ++i)
        if (a.gamma_grid[i] != b.gamma_grid[i])
            fail(errc::data, "min_gap: branches must share the same grid");

    std::size_t k = 0;
    double best = 1e308;
    for (std::size_t i = 0; i < a.roots.size(); ++i) {
        double gap = b.roots[i] - a.roots[i];
        if (gap <= 0.0)
            fail(errc::data,
                 fmt("min_gap: branches touch or cross at gamma = %g — "
                     "mixed symmetry sectors",
                     a.gamma_grid[i]));
        if (gap < best) { // strict: tie breaks to the smallest gamma
            best = gap;
            k = i;
        }
    }
    if (!gap_fn)
        return {a.gamma_grid[k], best};

    // golden-section between the argmin's neighbors
    double lo = a.gamma_grid[k > 0 ? k - 1 : k];
    double hi = a.gamma_grid[k + 1 < a.gamma_grid.size() ? k + 1 : k];
    if (!(lo < hi))
        return {a.gamma_grid[k], best};
    const double invphi = 0.6180339887498948482;
    double x1 = hi - invphi * (hi - lo);
    double x2 = lo + invphi * (hi - lo);
    double f1 = gap_fn(x1), f2 = gap_fn(x2);
    for (int it = 0; it < 80 && hi - lo > 1e-10 * std::max(1.0, std::abs(hi));
         ++it) {
        if (f1 <= f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - invphi * (hi - lo);
            f1 = gap_fn(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + invphi * (hi - lo);
            f2 = gap_fn(x2);
        }
    }
    double gx = 0.5 * (lo + hi);
    double gv = gap_fn(gx);
    if (gv <= 0.0)
        fail(errc::data, "min_gap: refined gap not positive — mixed sectors");
    // never report worse than the best grid point
    if (gv < best)
        return {gx, gv};
    return {a.gamma_grid[k], best};
}

} // namespace cavityspec::rootkit
