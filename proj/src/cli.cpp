#include "bsb/cli.hpp"

#include "bsb/errors.hpp"
#include "bsb/linewidth.hpp"
#include "bsb/optimizer.hpp"
#include "bsb/output.hpp"
#include "bsb/slab.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace bsb::cli {

namespace {

class UsageError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

struct Sink
{
    std::string format = "csv";
    std::string out_path;
};

void add_sink_options(CLI::App& cmd, Sink& sink)
{
    cmd.add_option("--format", sink.format, "Output format: csv or jsonl")
        ->capture_default_str();
    cmd.add_option("--out", sink.out_path, "Write records to this file instead of stdout");
}

void emit(const Sink& sink, const std::vector<OutputRecord>& records, std::ostream& out)
{
    const auto format = parse_output_format(sink.format);
    std::ostringstream buf;
    write_records(buf, records, format);
    if (sink.out_path.empty())
    {
        out << buf.str();
        return;
    }
    std::ofstream file(sink.out_path, std::ios::binary | std::ios::trunc);
    if (!file)
        throw UsageError("cannot open output file: " + sink.out_path);
    file << buf.str();
}

void require(bool ok, const char* message)
{
    if (!ok)
        throw UsageError(message);
}

bool positive(double v) { return std::isfinite(v) && v > 0.0; }

// ---------------------------------------------------------------------------
// eval

struct EvalArgs
{
    double eps_s = 0.0;
    double gamma = 0.0;
    double omega = 0.0;
    double thickness = 0.0;
    bool allow_lossless = false;
    Sink sink;
};

void register_eval(CLI::App& app, EvalArgs& a)
{
    auto* cmd = app.add_subcommand("eval", "Evaluate T, R, absorption and ratio at one point");
    cmd->add_option("--eps-s", a.eps_s, "Static permittivity (> 1)")->required();
    cmd->add_option("--gamma", a.gamma, "Scaled line width gamma/omega_T")->required();
    cmd->add_option("--omega", a.omega, "Scaled frequency omega/omega_T")->required();
    cmd->add_option("--thickness", a.thickness, "Scaled thickness omega_T l / c")->required();
    cmd->add_flag("--allow-lossless", a.allow_lossless, "Accept --gamma 0");
    add_sink_options(*cmd, a.sink);
}

int run_eval(const EvalArgs& a, std::ostream& out)
{
    require(std::isfinite(a.eps_s) && a.eps_s > 1.0, "--eps-s must exceed 1");
    require(positive(a.omega), "--omega must be positive");
    require(std::isfinite(a.thickness) && a.thickness >= 0.0, "--thickness must be non-negative");
    if (a.allow_lossless)
        require(std::isfinite(a.gamma) && a.gamma >= 0.0, "--gamma must be non-negative");
    else
        require(positive(a.gamma), "--gamma must be positive (use --allow-lossless for 0)");

    const auto damping = a.allow_lossless ? Damping::lossless : Damping::strict;
    const auto res = evaluate({a.omega, a.gamma, a.thickness, a.eps_s}, damping);

    OutputRecord rec;
    rec.add("eps_s", a.eps_s)
        .add("gamma", a.gamma)
        .add("omega", a.omega)
        .add("thickness", a.thickness)
        .add("allow_lossless", a.allow_lossless)
        .add("t_re", res.t.real())
        .add("t_im", res.t.imag())
        .add("t_abs2", res.transmittance())
        .add("r_re", res.r.real())
        .add("r_im", res.r.imag())
        .add("r_abs2", res.reflectance())
        .add("p", res.p)
        .add("x", res.x);
    emit(a.sink, {rec}, out);
    return exit_ok;
}

// ---------------------------------------------------------------------------
// minimize

struct MinimizeArgs
{
    double x = 0.0;
    double gamma = 1e-3;
    double omega = 1e-3;
    double eps_s_min = 1.0 + 1e-6;
    double eps_s_max = 1e3;
    int refine_levels = 1;
    std::string branch = "both";
    Sink sink;
};

void register_minimize(CLI::App& app, MinimizeArgs& a)
{
    auto* cmd = app.add_subcommand("minimize",
                                   "Minimize absorption over thickness and permittivity at ratio x");
    cmd->add_option("--x", a.x, "Target splitting ratio |T|^2/|R|^2")->required();
    cmd->add_option("--gamma", a.gamma, "Scaled line width of the working point")
        ->capture_default_str();
    cmd->add_option("--omega", a.omega, "Scaled frequency of the working point")
        ->capture_default_str();
    cmd->add_option("--eps-s-min", a.eps_s_min, "Lower end of the permittivity search")
        ->capture_default_str();
    cmd->add_option("--eps-s-max", a.eps_s_max, "Upper end of the permittivity search")
        ->capture_default_str();
    cmd->add_option("--refine-levels", a.refine_levels,
                    "Working points, each a decade below the previous")
        ->capture_default_str();
    cmd->add_option("--branch", a.branch, "Branches to examine: both, thin or thick")
        ->capture_default_str();
    add_sink_options(*cmd, a.sink);
}

BranchPolicy parse_branch_policy(const std::string& name)
{
    if (name == "both")
        return BranchPolicy::both;
    if (name == "thin")
        return BranchPolicy::thin_only;
    if (name == "thick")
        return BranchPolicy::thick_only;
    throw UsageError("--branch must be both, thin or thick");
}

int run_minimize(const MinimizeArgs& a, std::ostream& out, std::ostream& err)
{
    require(positive(a.x), "--x must be positive");
    require(positive(a.gamma) && a.gamma < 1.0, "--gamma must lie in (0, 1)");
    require(positive(a.omega) && a.omega < 1.0, "--omega must lie in (0, 1)");
    require(std::isfinite(a.eps_s_min) && a.eps_s_min > 1.0, "--eps-s-min must exceed 1");
    require(std::isfinite(a.eps_s_max) && a.eps_s_max > a.eps_s_min,
            "--eps-s-max must exceed --eps-s-min");
    require(a.refine_levels >= 1 && a.refine_levels <= 6, "--refine-levels must lie in [1, 6]");

    MinimizeConfig cfg;
    cfg.x_target = a.x;
    cfg.eps_s_min = a.eps_s_min;
    cfg.eps_s_max = a.eps_s_max;
    cfg.branch_policy = parse_branch_policy(a.branch);
    const auto levels = decade_refinement(a.gamma, a.omega, a.refine_levels);
    const auto est = extract_alpha(cfg, levels);
    const auto& last = est.levels.back();

    if (a.refine_levels >= 2 && est.feasible && !est.linear_scaling)
        err << "bsb: warning: alpha drifts by " << format_double(est.drift)
            << " between the last two levels\n";

    OutputRecord rec;
    rec.add("x", a.x)
        .add("gamma", a.gamma)
        .add("omega", a.omega)
        .add("eps_s_min", a.eps_s_min)
        .add("eps_s_max", a.eps_s_max)
        .add("refine_levels", a.refine_levels)
        .add("branch_policy", a.branch)
        .add("feasible", last.feasible)
        .add("alpha", last.alpha)
        .add("eps_s", last.eps_s_star)
        .add("d", last.d_star)
        .add("p_min", last.p_min)
        .add("phi", last.phi_star)
        .add("branch", last.feasible ? std::string(to_string(last.branch)) : "none")
        .add("gamma_final", last.gamma_tilde)
        .add("omega_final", last.omega_tilde)
        .add("alpha_drift", est.drift)
        .add("linear_scaling", est.linear_scaling)
        .add("constraint_residual", last.diagnostics.constraint_residual)
        .add("rejected_branch_p", last.diagnostics.rejected_branch_p)
        .add("scan_evaluations", last.diagnostics.scan_evaluations)
        .add("refine_iterations", last.diagnostics.refine_iterations)
        .add("inner_iterations", last.diagnostics.inner_iterations);
    emit(a.sink, {rec}, out);

    if (!last.feasible)
    {
        err << "bsb: ratio " << format_double(a.x)
            << " is not reachable for eps_s in the search interval\n";
        return exit_infeasible;
    }
    return exit_ok;
}

// ---------------------------------------------------------------------------
// sweep

struct SweepArgs
{
    double x_min = 0.0;
    double x_max = 0.0;
    int points = 0;
    bool log = false;
    int jobs = 0;  // 0: take BSB_JOBS, else 1
    Sink sink;
};

void register_sweep(CLI::App& app, SweepArgs& a)
{
    auto* cmd = app.add_subcommand("sweep", "Tabulate alpha and eps_s over a grid of ratios");
    cmd->add_option("--x-min", a.x_min, "Smallest ratio")->required();
    cmd->add_option("--x-max", a.x_max, "Largest ratio")->required();
    cmd->add_option("--points", a.points, "Number of grid points (>= 2)")->required();
    cmd->add_flag("--log", a.log, "Logarithmic spacing");
    cmd->add_option("--jobs", a.jobs, "Worker threads (default: BSB_JOBS or 1)");
    add_sink_options(*cmd, a.sink);
}

unsigned resolve_jobs(int flag)
{
    if (flag != 0)
    {
        require(flag >= 1, "--jobs must be at least 1");
        return static_cast<unsigned>(flag);
    }
    const char* env = std::getenv("BSB_JOBS");
    if (env == nullptr || *env == '\0')
        return 1;
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    require(end != env && *end == '\0' && v >= 1 && v <= 1024,
            "BSB_JOBS must be a positive integer");
    return static_cast<unsigned>(v);
}

int run_sweep(const SweepArgs& a, std::ostream& out)
{
    require(positive(a.x_min), "--x-min must be positive");
    require(std::isfinite(a.x_max) && a.x_max > a.x_min, "--x-max must exceed --x-min");
    require(a.points >= 2, "--points must be at least 2");
    const unsigned jobs = resolve_jobs(a.jobs);

    const auto grid = make_grid(a.x_min, a.x_max, a.points, a.log);
    const auto rows = sweep(grid, MinimizeConfig{}, jobs);

    std::vector<OutputRecord> records;
    records.reserve(rows.size());
    for (const auto& row : rows)
    {
        OutputRecord rec;
        rec.add("x", row.x)
            .add("alpha", row.alpha)
            .add("eps_s", row.eps_s_star)
            .add("d", row.d_star)
            .add("p_min", row.p_min)
            .add("feasible", row.feasible);
        records.push_back(std::move(rec));
    }
    emit(a.sink, records, out);
    return exit_ok;
}

// ---------------------------------------------------------------------------
// bound

struct BoundArgs
{
    double x = 0.0;
    double omega = 0.1;
    double nvt = 1e9;
    double fit_gamma = 1e-3;
    double fit_omega = 1e-3;
    Sink sink;
};

void register_bound(CLI::App& app, BoundArgs& a)
{
    auto* cmd = app.add_subcommand("bound", "Minimal absorption probability at frequency omega");
    cmd->add_option("--x", a.x, "Target splitting ratio")->required();
    cmd->add_option("--omega", a.omega, "Scaled light frequency omega/omega_T")
        ->capture_default_str();
    cmd->add_option("--nvt", a.nvt, "Atoms per cubic transition wavelength")
        ->capture_default_str();
    cmd->add_option("--fit-gamma", a.fit_gamma, "Line width used to extract alpha")
        ->capture_default_str();
    cmd->add_option("--fit-omega", a.fit_omega, "Frequency used to extract alpha")
        ->capture_default_str();
    add_sink_options(*cmd, a.sink);
}

int run_bound(const BoundArgs& a, std::ostream& out, std::ostream& err)
{
    require(positive(a.x), "--x must be positive");
    require(positive(a.omega), "--omega must be positive");
    require(positive(a.nvt), "--nvt must be positive");
    require(positive(a.fit_gamma) && a.fit_gamma < 1.0, "--fit-gamma must lie in (0, 1)");
    require(positive(a.fit_omega) && a.fit_omega < 1.0, "--fit-omega must lie in (0, 1)");
    if (a.omega > 0.5)
        err << "bsb: warning: omega " << format_double(a.omega)
            << " is outside the low-frequency regime\n";

    MinimizeConfig cfg;
    cfg.x_target = a.x;
    cfg.gamma_tilde = a.fit_gamma;
    cfg.omega_tilde = a.fit_omega;
    const auto res = minimize_absorption(cfg);

    const double nan = std::numeric_limits<double>::quiet_NaN();
    double eta = nan, linewidth = nan, p_min = nan, coefficient = nan, local_field = nan;
    if (res.feasible)
    {
        eta = std::sqrt(res.eps_s_star);
        const DecayContext ctx{a.nvt, eta};
        linewidth = scaled_linewidth_bound(ctx, a.omega);
        p_min = min_absorption_probability(res.alpha, ctx, a.omega);
        coefficient = p_min / std::pow(a.omega, 4);
        local_field = local_field_factor(eta);
    }

    OutputRecord rec;
    rec.add("x", a.x)
        .add("omega", a.omega)
        .add("nvt", a.nvt)
        .add("fit_gamma", a.fit_gamma)
        .add("fit_omega", a.fit_omega)
        .add("feasible", res.feasible)
        .add("alpha", res.alpha)
        .add("eps_s", res.eps_s_star)
        .add("eta", eta)
        .add("local_field", local_field)
        .add("linewidth", linewidth)
        .add("p_min", p_min)
        .add("p_min_per_omega4", coefficient);
    emit(a.sink, {rec}, out);

    if (!res.feasible)
    {
        err << "bsb: ratio " << format_double(a.x) << " is not reachable\n";
        return exit_infeasible;
    }
    return exit_ok;
}

int print_constants(std::ostream& out)
{
    OutputRecord rec;
    rec.add("hbar", constants::hbar)
        .add("epsilon0", constants::epsilon0)
        .add("c", constants::speed_of_light);
    write_records(out, {rec}, OutputFormat::csv);
    return exit_ok;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Lower bounds on beam-splitter absorption for a single-resonance slab", "bsb"};
    bool show_constants = false;
    app.add_flag("--constants", show_constants, "Print the physical constants and exit");
    app.require_subcommand(0, 1);

    EvalArgs eval_args;
    MinimizeArgs minimize_args;
    SweepArgs sweep_args;
    BoundArgs bound_args;
    register_eval(app, eval_args);
    register_minimize(app, minimize_args);
    register_sweep(app, sweep_args);
    register_bound(app, bound_args);

    try
    {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    }
    catch (const CLI::CallForHelp& e)
    {
        return app.exit(e, out, err);
    }
    catch (const CLI::CallForAllHelp& e)
    {
        return app.exit(e, out, err);
    }
    catch (const CLI::ParseError& e)
    {
        err << "bsb: " << e.what() << '\n';
        return exit_usage;
    }

    try
    {
        if (show_constants)
            return print_constants(out);
        if (app.got_subcommand("eval"))
            return run_eval(eval_args, out);
        if (app.got_subcommand("minimize"))
            return run_minimize(minimize_args, out, err);
        if (app.got_subcommand("sweep"))
            return run_sweep(sweep_args, out);
        if (app.got_subcommand("bound"))
            return run_bound(bound_args, out, err);
        err << "bsb: expected a subcommand: eval, minimize, sweep or bound\n";
        return exit_usage;
    }
    catch (const UsageError& e)
    {
        err << "bsb: " << e.what() << '\n';
        return exit_usage;
    }
    catch (const std::invalid_argument& e)
    {
        err << "bsb: " << e.what() << '\n';
        return exit_usage;
    }
    catch (const std::exception& e)
    {
        err << "bsb: error: " << e.what() << '\n';
        return exit_failure;
    }
}

}  // namespace bsb::cli
