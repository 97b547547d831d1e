#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace bsb {

// The two roots of the ratio constraint within the first interference
// period, on either side of the reflectance peak.
enum class Branch
{
    thin,  // phase below the reflectance peak
    thick  // phase above the reflectance peak
};

enum class BranchPolicy
{
    both,
    thin_only,
    thick_only
};

std::string_view to_string(Branch branch);

struct MinimizeTolerances
{
    double constraint = 1e-10;     // relative residual |x - x_target| / x_target
    double objective = 1e-8;       // bracket width in ln(eps_s); also the branch tie band
    double extrapolation = 0.01;   // allowed relative drift of alpha between levels
};

struct MinimizeConfig
{
    double x_target = 1.0;
    double gamma_tilde = 1e-3;
    double omega_tilde = 1e-3;
    double eps_s_min = 1.0 + 1e-6;
    double eps_s_max = 1e3;
    BranchPolicy branch_policy = BranchPolicy::both;
    MinimizeTolerances tolerances{};
    int scan_points = 256;

    void validate() const;
};

struct ThicknessSolution
{
    double thickness = 0.0;  // scaled, omega_T l / c
    double phase = 0.0;      // Re(n) omega_tilde thickness, in (0, pi)
    double p = 0.0;
    double x = 0.0;
    double constraint_residual = 0.0;
    int iterations = 0;
};

// Thickness at which the slab reaches x_target on the requested branch, or
// nullopt when this permittivity cannot reach the ratio. Throws
// ConvergenceError if the root polish misses the constraint tolerance.
std::optional<ThicknessSolution> solve_thickness_for_ratio(double eps_s, double x_target,
                                                           double gamma_tilde,
                                                           double omega_tilde, Branch branch,
                                                           const MinimizeTolerances& tol = {});

// Smallest permittivity at which a lossless slab reaches ratio x:
// eta >= (1 + sqrt(1 + x)) / sqrt(x).
double lossless_feasibility_boundary(double x_target);

struct MinimizeDiagnostics
{
    int scan_evaluations = 0;
    int refine_iterations = 0;
    int inner_iterations = 0;
    double constraint_residual = 0.0;
    double rejected_branch_p = 0.0;  // +inf when the other branch is infeasible or skipped
    double scan_lower = 0.0;         // first permittivity of the coarse scan
};

struct MinimizeResult
{
    bool feasible = false;
    double alpha = 0.0;  // p_min / (gamma_tilde omega_tilde)
    double eps_s_star = 0.0;
    double d_star = 0.0;
    double p_min = 0.0;
    double phi_star = 0.0;
    Branch branch = Branch::thin;
    double gamma_tilde = 0.0;  // working point the result belongs to
    double omega_tilde = 0.0;
    MinimizeDiagnostics diagnostics{};
};

MinimizeResult minimize_absorption(const MinimizeConfig& config);

struct WorkingPoint
{
    double gamma_tilde;
    double omega_tilde;
};

// (1e-3, 1e-3) followed by (1e-4, 1e-4).
std::vector<WorkingPoint> default_refinement();

// Working points gamma / 10^k, omega / 10^k for k = 0 .. levels - 1.
std::vector<WorkingPoint> decade_refinement(double gamma_tilde, double omega_tilde, int levels);

struct AlphaEstimate
{
    bool feasible = false;
    double alpha = 0.0;  // from the last level
    double drift = 0.0;  // relative change between the last two levels; NaN with one level
    bool linear_scaling = false;  // drift within tolerance; false when unchecked
    std::vector<MinimizeResult> levels;
};

// Runs minimize_absorption at each working point. A single level is
// accepted but leaves the scaling check undone.
AlphaEstimate extract_alpha(const MinimizeConfig& base, std::span<const WorkingPoint> levels);

struct SweepRow
{
    double x = 0.0;
    double alpha = 0.0;
    double eps_s_star = 0.0;
    double d_star = 0.0;
    double p_min = 0.0;
    bool feasible = false;
};

SweepRow to_sweep_row(const MinimizeResult& result, double x);

std::vector<double> make_grid(double lo, double hi, int points, bool logarithmic);

// Rows come back in the order of x_values regardless of jobs.
std::vector<SweepRow> sweep(std::span<const double> x_values, const MinimizeConfig& tmpl,
                            unsigned jobs = 1);

}  // namespace bsb
