#ifndef CAVITYSPEC_ROOTKIT_HPP
#define CAVITYSPEC_ROOTKIT_HPP

#include "cavityspec/errors.hpp"

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

namespace cavityspec::rootkit {

// A sign change enclosed by two finite residual evaluations.
struct Bracket {
    double lo = 0.0;
    double hi = 0.0;
    double f_lo = 0.0;
    double f_hi = 0.0;

    void validate() const;
};

struct RootConfig {
    double grid_step = 0.02;
    double tol_x = 1e-10;
    int max_bisections = 200;

    void validate() const;
};

// One energy level tracked across a gamma grid.
struct Branch {
    std::vector<double> gamma_grid;
    std::vector<double> roots;
    int branch_index = 0;
    // set where the root moved by more than 10x the local motion between
    // neighboring grid points (possible branch loss)
    std::vector<std::uint8_t> jump_flag;
};

// refine() exhausted max_bisections; carries the bracket it got stuck in.
class refine_failure : public error {
public:
    refine_failure(const Bracket& b, const std::string& msg)
        : error(errc::accuracy, msg), final_bracket(b) {}
    Bracket final_bracket;
};

// continue_branch() lost the level; carries what was tracked so far.
class branch_lost : public error {
public:
    branch_lost(std::size_t index, Branch partial, const std::string& msg)
        : error(errc::solver, msg), grid_index(index),
          tracked(std::move(partial)) {}
    std::size_t grid_index;
    Branch tracked;
};

// Walk [a, b] with the given step and bracket every sign change between
// adjacent finite evaluations. Non-finite grid points are skipped and
// counted in *skipped_nonfinite when provided. Even-multiplicity roots
// between grid points are missed by construction.
std::vector<Bracket> find_sign_changes(const std::function<double(double)>& f,
                                       double a, double b, double step,
                                       int* skipped_nonfinite = nullptr);

// Bisection to |hi - lo| <= tol_x. The returned point carries a residual no
// larger in magnitude than any evaluation made along the way, bracket ends
// included.
double refine(const std::function<double(double)>& f, Bracket bracket,
              const RootConfig& config);

// Track one root of f(gamma, x) across gamma_grid starting from a verified
// seed at gamma_grid[0]. The search window around the previous root expands
// until a sign change is found; leaving [global_lo, global_hi] throws
// branch_lost.
Branch continue_branch(const std::function<double(double, double)>& f,
                       const std::vector<double>& gamma_grid, double seed_root,
                       const RootConfig& config, double global_lo,
                       double global_hi, int branch_index = 0);

// Location and size of the minimal vertical gap between two branches that
// share a gamma grid. With a live gap evaluator the grid argmin is refined
// by golden-section search between its neighboring grid points; without one
// the grid resolution is the answer. Ties break to the smallest gamma.
std::pair<double, double> min_gap(
    const Branch& a, const Branch& b,
    const std::function<double(double)>& gap_fn = nullptr);

} // namespace cavityspec::rootkit

#endif
