#include "bsb/optimizer.hpp"

#include "bsb/errors.hpp"
#include "bsb/slab.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>

#include <boost/math/tools/roots.hpp>

namespace bsb {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

bool positive(double v) { return std::isfinite(v) && v > 0.0; }

struct GoldenResult
{
    double arg;
    double value;
    int iterations;
};

// Golden-section search on [lo, hi]. Returns the best point visited, which
// may be an endpoint when f is monotone on the bracket.
template <class F>
GoldenResult golden_minimize(F&& f, double lo, double hi, double width_tol, int max_iter = 300)
{
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c), fd = f(d);
    GoldenResult best{fc <= fd ? c : d, std::min(fc, fd), 0};

    int it = 0;
    while (b - a > width_tol && it < max_iter)
    {
        ++it;
        if (fc <= fd)
        {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
            if (fc < best.value)
                best = {c, fc, it};
        }
        else
        {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
            if (fd < best.value)
                best = {d, fd, it};
        }
    }
    best.iterations = it;
    return best;
}

// Evaluates the slab along one permittivity as a function of the
// interference phase. Every call routes through the same arithmetic as
// slab::evaluate so reported values reproduce bit-for-bit.
class PhaseScan
{
  public:
    PhaseScan(double eps_s, double gamma_tilde, double omega_tilde)
        : eps_s_(eps_s)
        , gamma_(gamma_tilde)
        , omega_(omega_tilde)
        , n_(scaled_index(eps_s, gamma_tilde, omega_tilde))
    {
    }

    double thickness(double phase) const { return phase / (n_.eta * omega_); }

    SlabResponse at(double phase) const
    {
        return evaluate({omega_, gamma_, thickness(phase), eps_s_});
    }

    double log_ratio(double phase) const { return std::log(at(phase).x); }

  private:
    double eps_s_;
    double gamma_;
    double omega_;
    ComplexIndex n_;
};

struct BothBranches
{
    std::optional<ThicknessSolution> thin;
    std::optional<ThicknessSolution> thick;
};

constexpr double kPhaseFloor = 1e-12;

std::optional<ThicknessSolution> polish_root(const PhaseScan& scan, double lo, double hi,
                                             double g_lo, double g_hi, double log_target,
                                             double x_target, const MinimizeTolerances& tol)
{
    auto g = [&](double phase) { return scan.log_ratio(phase) - log_target; };
    std::uintmax_t iters = 200;
    const auto bracket = boost::math::tools::toms748_solve(
        g, lo, hi, g_lo, g_hi, boost::math::tools::eps_tolerance<double>(52), iters);

    const double a = bracket.first, b = bracket.second;
    const auto ra = scan.at(a), rb = scan.at(b);
    const double res_a = std::abs(ra.x - x_target) / x_target;
    const double res_b = std::abs(rb.x - x_target) / x_target;
    const bool pick_a = res_a <= res_b;

    ThicknessSolution sol;
    sol.phase = pick_a ? a : b;
    sol.thickness = scan.thickness(sol.phase);
    const auto& r = pick_a ? ra : rb;
    sol.p = r.p;
    sol.x = r.x;
    sol.constraint_residual = pick_a ? res_a : res_b;
    sol.iterations = static_cast<int>(iters);

    if (!(sol.constraint_residual <= tol.constraint))
        throw ConvergenceError("ratio constraint not met: residual "
                               + std::to_string(sol.constraint_residual));
    return sol;
}

BothBranches solve_branches(double eps_s, double x_target, double gamma_tilde,
                            double omega_tilde, bool want_thin, bool want_thick,
                            const MinimizeTolerances& tol, int* peak_iterations = nullptr)
{
    BothBranches out;
    const PhaseScan scan(eps_s, gamma_tilde, omega_tilde);
    const double log_target = std::log(x_target);

    // x(phase) has a single minimum (reflectance peak) inside the period.
    const auto peak = golden_minimize([&](double ph) { return scan.log_ratio(ph); },
                                      kPhaseFloor, kPi - kPhaseFloor, 1e-10);
    if (peak_iterations)
        *peak_iterations = peak.iterations;
    const double g_peak = peak.value - log_target;
    if (!(g_peak < 0.0))
        return out;

    if (want_thin)
    {
        const double lo = kPhaseFloor;
        const double g_lo = scan.log_ratio(lo) - log_target;
        if (g_lo > 0.0)
            out.thin = polish_root(scan, lo, peak.arg, g_lo, g_peak, log_target, x_target, tol);
    }
    if (want_thick)
    {
        const double hi = kPi * (1.0 - kPhaseFloor);
        const double g_hi = scan.log_ratio(hi) - log_target;
        if (g_hi > 0.0)
            out.thick = polish_root(scan, peak.arg, hi, g_peak, g_hi, log_target, x_target, tol);
    }
    return out;
}

void check_solve_inputs(double eps_s, double x_target, double gamma_tilde, double omega_tilde)
{
    if (!std::isfinite(eps_s) || !(eps_s > 1.0))
        throw std::invalid_argument("static permittivity must exceed 1");
    if (!positive(x_target))
        throw std::invalid_argument("splitting ratio must be positive");
    if (!positive(gamma_tilde) || !positive(omega_tilde))
        throw std::invalid_argument("scaled line width and frequency must be positive");
}

struct BranchOptimum
{
    bool feasible = false;
    double eps_s = kNaN;
    ThicknessSolution solution{};
};

}  // namespace

std::string_view to_string(Branch branch)
{
    return branch == Branch::thin ? "thin" : "thick";
}

void MinimizeConfig::validate() const
{
    if (!positive(x_target))
        throw std::invalid_argument("splitting ratio must be positive");
    if (!positive(gamma_tilde) || !positive(omega_tilde))
        throw std::invalid_argument("scaled line width and frequency must be positive");
    if (!(gamma_tilde < 1.0) || !(omega_tilde < 1.0))
        throw std::invalid_argument("scaled line width and frequency must be below 1");
    if (!std::isfinite(eps_s_min) || !(eps_s_min > 1.0))
        throw std::invalid_argument("permittivity search must start above 1");
    if (!std::isfinite(eps_s_max) || !(eps_s_max > eps_s_min))
        throw std::invalid_argument("permittivity search interval is empty");
    if (!positive(tolerances.constraint) || !positive(tolerances.objective)
        || !positive(tolerances.extrapolation))
        throw std::invalid_argument("tolerances must be positive");
    if (scan_points < 3)
        throw std::invalid_argument("permittivity scan needs at least 3 points");
}

double lossless_feasibility_boundary(double x_target)
{
    if (!positive(x_target))
        throw std::invalid_argument("splitting ratio must be positive");
    const double eta = (1.0 + std::sqrt(1.0 + x_target)) / std::sqrt(x_target);
    return eta * eta;
}

std::optional<ThicknessSolution> solve_thickness_for_ratio(double eps_s, double x_target,
                                                           double gamma_tilde,
                                                           double omega_tilde, Branch branch,
                                                           const MinimizeTolerances& tol)
{
    check_solve_inputs(eps_s, x_target, gamma_tilde, omega_tilde);
    auto both = solve_branches(eps_s, x_target, gamma_tilde, omega_tilde,
                               branch == Branch::thin, branch == Branch::thick, tol);
    return branch == Branch::thin ? both.thin : both.thick;
}

MinimizeResult minimize_absorption(const MinimizeConfig& config)
{
    config.validate();
    const auto& tol = config.tolerances;
    const bool want_thin = config.branch_policy != BranchPolicy::thick_only;
    const bool want_thick = config.branch_policy != BranchPolicy::thin_only;

    MinimizeResult result;
    result.gamma_tilde = config.gamma_tilde;
    result.omega_tilde = config.omega_tilde;
    result.alpha = result.eps_s_star = result.d_star = result.p_min = result.phi_star = kNaN;
    result.diagnostics.rejected_branch_p = kInf;
    result.diagnostics.constraint_residual = kNaN;

    // Below the lossless boundary no thickness reaches x_target; start the
    // scan just under it so the boundary-adjacent optimum is resolved.
    const double boundary = lossless_feasibility_boundary(config.x_target);
    const double lower = std::max(config.eps_s_min, 0.99 * boundary);
    result.diagnostics.scan_lower = lower;
    if (!(lower < config.eps_s_max))
        return result;

    const int n = config.scan_points;
    const double log_lo = std::log(lower);
    const double log_hi = std::log(config.eps_s_max);
    std::vector<double> grid(n);
    for (int i = 0; i < n; ++i)
        grid[i] = std::exp(log_lo + (log_hi - log_lo) * i / (n - 1));
    grid.front() = lower;
    grid.back() = config.eps_s_max;

    auto& diag = result.diagnostics;
    std::vector<double> p_thin(n, kInf), p_thick(n, kInf);
    for (int i = 0; i < n; ++i)
    {
        int peak_it = 0;
        const auto sol = solve_branches(grid[i], config.x_target, config.gamma_tilde,
                                        config.omega_tilde, want_thin, want_thick, tol, &peak_it);
        ++diag.scan_evaluations;
        diag.inner_iterations += peak_it;
        if (sol.thin)
        {
            p_thin[i] = sol.thin->p;
            diag.inner_iterations += sol.thin->iterations;
        }
        if (sol.thick)
        {
            p_thick[i] = sol.thick->p;
            diag.inner_iterations += sol.thick->iterations;
        }
    }

    auto refine = [&](Branch branch, const std::vector<double>& p) {
        BranchOptimum opt;
        const auto it = std::min_element(p.begin(), p.end());
        if (!std::isfinite(*it))
            return opt;
        const auto i = static_cast<int>(it - p.begin());
        const double a = std::log(grid[std::max(i - 1, 0)]);
        const double b = std::log(grid[std::min(i + 1, n - 1)]);

        auto objective = [&](double log_eps) {
            const auto s = solve_thickness_for_ratio(std::exp(log_eps), config.x_target,
                                                     config.gamma_tilde, config.omega_tilde,
                                                     branch, tol);
            return s ? s->p : kInf;
        };
        const auto g = golden_minimize(objective, a, b, tol.objective);
        diag.refine_iterations += g.iterations;

        // Keep the scan point if refinement never improved on it.
        const double eps = g.value <= *it ? std::exp(g.arg) : grid[i];
        const auto s = solve_thickness_for_ratio(eps, config.x_target, config.gamma_tilde,
                                                 config.omega_tilde, branch, tol);
        if (!s)
            throw ConvergenceError("refined permittivity lost feasibility");
        opt.feasible = true;
        opt.eps_s = eps;
        opt.solution = *s;
        return opt;
    };

    const BranchOptimum thin = want_thin ? refine(Branch::thin, p_thin) : BranchOptimum{};
    const BranchOptimum thick = want_thick ? refine(Branch::thick, p_thick) : BranchOptimum{};
    if (!thin.feasible && !thick.feasible)
        return result;

    bool choose_thin = thin.feasible;
    if (thin.feasible && thick.feasible)
    {
        const double pt = thin.solution.p, pk = thick.solution.p;
        const bool tied = std::abs(pt - pk) <= tol.objective * std::max(pt, pk);
        choose_thin = tied ? thin.solution.thickness <= thick.solution.thickness : pt < pk;
    }
    const auto& chosen = choose_thin ? thin : thick;
    const auto& rejected = choose_thin ? thick : thin;

    result.feasible = true;
    result.branch = choose_thin ? Branch::thin : Branch::thick;
    result.eps_s_star = chosen.eps_s;
    result.d_star = chosen.solution.thickness;
    result.phi_star = chosen.solution.phase;
    result.p_min = chosen.solution.p;
    result.alpha = result.p_min / (config.gamma_tilde * config.omega_tilde);
    diag.constraint_residual = chosen.solution.constraint_residual;
    diag.rejected_branch_p = rejected.feasible ? rejected.solution.p : kInf;
    return result;
}

std::vector<WorkingPoint> default_refinement()
{
    return {{1e-3, 1e-3}, {1e-4, 1e-4}};
}

std::vector<WorkingPoint> decade_refinement(double gamma_tilde, double omega_tilde, int levels)
{
    if (levels < 1)
        throw std::invalid_argument("refinement needs at least one level");
    std::vector<WorkingPoint> out;
    double scale = 1.0;
    for (int k = 0; k < levels; ++k, scale *= 10.0)
        out.push_back({gamma_tilde / scale, omega_tilde / scale});
    return out;
}

AlphaEstimate extract_alpha(const MinimizeConfig& base, std::span<const WorkingPoint> levels)
{
    if (levels.empty())
        throw std::invalid_argument("alpha extraction needs at least one working point");

    AlphaEstimate est;
    for (const auto& wp : levels)
    {
        auto cfg = base;
        cfg.gamma_tilde = wp.gamma_tilde;
        cfg.omega_tilde = wp.omega_tilde;
        est.levels.push_back(minimize_absorption(cfg));
        if (!est.levels.back().feasible)
        {
            est.alpha = est.drift = kNaN;
            return est;
        }
    }
    est.feasible = true;
    est.alpha = est.levels.back().alpha;
    est.drift = kNaN;
    if (est.levels.size() >= 2)
    {
        const double prev = est.levels[est.levels.size() - 2].alpha;
        est.drift = std::abs(est.alpha - prev) / est.alpha;
    }
    est.linear_scaling = est.drift <= base.tolerances.extrapolation;
    return est;
}

SweepRow to_sweep_row(const MinimizeResult& result, double x)
{
    return {x, result.alpha, result.eps_s_star, result.d_star, result.p_min, result.feasible};
}

std::vector<double> make_grid(double lo, double hi, int points, bool logarithmic)
{
    if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi))
        throw std::invalid_argument("grid bounds must satisfy lo < hi");
    if (points < 2)
        throw std::invalid_argument("grid needs at least 2 points");
    if (logarithmic && !(lo > 0.0))
        throw std::invalid_argument("logarithmic grid needs positive bounds");

    std::vector<double> grid(points);
    const double a = logarithmic ? std::log10(lo) : lo;
    const double b = logarithmic ? std::log10(hi) : hi;
    for (int i = 0; i < points; ++i)
    {
        const double t = a + (b - a) * i / (points - 1);
        grid[i] = logarithmic ? std::pow(10.0, t) : t;
    }
    grid.front() = lo;
    grid.back() = hi;
    return grid;
}

std::vector<SweepRow> sweep(std::span<const double> x_values, const MinimizeConfig& tmpl,
                            unsigned jobs)
{
    if (x_values.empty())
        throw std::invalid_argument("sweep grid is empty");
    for (double x : x_values)
        if (!positive(x))
            throw std::invalid_argument("sweep ratios must be positive");

    std::vector<SweepRow> rows(x_values.size());
    auto solve_row = [&](std::size_t i) {
        auto cfg = tmpl;
        cfg.x_target = x_values[i];
        rows[i] = to_sweep_row(minimize_absorption(cfg), x_values[i]);
    };

    const unsigned workers =
        std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(x_values.size())));
    if (workers == 1)
    {
        for (std::size_t i = 0; i < rows.size(); ++i)
            solve_row(i);
        return rows;
    }

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w)
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < rows.size(); i = next++)
                {
                    try
                    {
                        solve_row(i);
                    }
                    catch (...)
                    {
                        std::lock_guard lock(failure_mutex);
                        if (!failure)
                            failure = std::current_exception();
                    }
                }
            });
    }
    if (failure)
        std::rethrow_exception(failure);
    return rows;
}

}  // namespace bsb
