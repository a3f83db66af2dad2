#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cascade/analysis.hpp"
#include "cascade/errors.hpp"
#include "cascade/evolve.hpp"
#include "cascade/io.hpp"
#include "cascade/kernels.hpp"
#include "cascade/model.hpp"
#include "cascade/presets.hpp"
#include "cascade/reduced.hpp"
#include "cascade/regimes.hpp"
#include "cascade/spectra.hpp"

namespace {

using namespace cascade;

struct SourceOpts {
    std::string config_path;
    std::string preset_name;
    std::string grid_text;
};

struct KernelOpts {
    std::string kernel = "auto";
    int threads = 1;
};

void add_source(CLI::App* cmd, SourceOpts& src, bool with_grid = true) {
    auto* config = cmd->add_option("--config", src.config_path, "chain description (JSON file)");
    auto* named = cmd->add_option("--preset", src.preset_name, "named reference scenario");
    config->excludes(named);
    named->excludes(config);
    if (with_grid)
        cmd->add_option("--grid", src.grid_text, "frequency grid override: min,max,points");
}

void add_kernel(CLI::App* cmd, KernelOpts& opts) {
    cmd->add_option("--kernel", opts.kernel, "sweep kernel: auto|scalar|avx2|neon");
    cmd->add_option("--threads", opts.threads, "worker threads for frequency sweeps");
}

FrequencyGrid parse_grid_text(const std::string& text) {
    FrequencyGrid grid;
    char c1 = 0, c2 = 0;
    std::istringstream in(text);
    if (!(in >> grid.min >> c1 >> grid.max >> c2 >> grid.points) || c1 != ',' || c2 != ',' ||
        !(in >> std::ws).eof())
        throw ConfigError("--grid expects min,max,points, got \"" + text + "\"");
    grid.validate();
    return grid;
}

RunSpec load_spec(const SourceOpts& src) {
    if (src.config_path.empty() == src.preset_name.empty())
        throw ConfigError("exactly one of --config or --preset is required");
    RunSpec spec =
        src.config_path.empty() ? preset(src.preset_name) : parse_config(src.config_path);
    if (!src.grid_text.empty()) spec.grid = parse_grid_text(src.grid_text);
    return spec;
}

kernels::SolveOptions solve_options(const KernelOpts& opts) {
    kernels::SolveOptions so;
    if (opts.kernel == "auto")
        so.kernel = kernels::Kernel::auto_pick;
    else if (opts.kernel == "scalar")
        so.kernel = kernels::Kernel::scalar;
    else if (opts.kernel == "avx2")
        so.kernel = kernels::Kernel::avx2;
    else if (opts.kernel == "neon")
        so.kernel = kernels::Kernel::neon;
    else
        throw ConfigError("unknown --kernel \"" + opts.kernel + "\" (auto|scalar|avx2|neon)");
    if (opts.threads < 1) throw ConfigError("--threads must be >= 1");
    so.threads = opts.threads;
    return so;
}

// "-" selects stdout; CSV writers expect a clean stream either way.
class Output {
  public:
    explicit Output(const std::string& path) : to_stdout_(path == "-") {
        if (!to_stdout_) {
            file_.open(path, std::ios::binary);
            if (!file_) throw ConfigError("cannot open output file: " + path);
        }
    }
    std::ostream& stream() { return to_stdout_ ? std::cout : file_; }
    bool to_stdout() const { return to_stdout_; }

  private:
    std::ofstream file_;
    bool to_stdout_ = false;
};

void warn_bad_cavity(const ChainConfig& config) {
    double g_max = 0.0;
    double kappa_min = std::numeric_limits<double>::infinity();
    for (const SiteParams& site : config.sites) {
        g_max = std::max(g_max, std::abs(site.g));
        kappa_min = std::min(kappa_min, site.kappa_total());
    }
    if (g_max > 0.0 && kappa_min < 10.0 * g_max)
        std::cerr << "note: the reduced model assumes kappa >> g; here min kappa / max |g| = "
                  << kappa_min / g_max << "\n";
}

OracleVariant detect_variant(const ChainConfig& config) {
    if (config.n_sites() != 2) throw ConfigError("compare --oracle strong: needs 2 sites");
    const complexd g1 = config.sites[0].g;
    const complexd g2 = config.sites[1].g;
    const double scale = std::max({1.0, std::abs(g1), std::abs(g2)});
    if (std::abs(g1 - g2) <= 1e-12 * scale) return OracleVariant::equal_g;
    if (std::abs(g1 - complexd(0.0, 1.0) * g2) <= 1e-12 * scale)
        return OracleVariant::quadrature_g;
    throw ConfigError("compare --oracle strong: needs g_1 = g_2 or g_1 = i g_2");
}

void run_spectrum(const SourceOpts& src, const std::string& out_path, const KernelOpts& kopts) {
    const RunSpec spec = load_spec(src);
    const Generator gen = build_generator(spec.config);
    const SpectrumSet set = emission_spectra(spec.config, gen, spec.make_initial(),
                                             spec.effective_grid(), solve_options(kopts));
    Output out(out_path);
    write_spectrum_csv(out.stream(), set, "spectrum");
}

void run_evolve(const SourceOpts& src, const std::string& out_path, const EvolveOptions& opts) {
    const RunSpec spec = load_spec(src);
    const Generator gen = build_generator(spec.config);
    const Trajectory traj = evolve(gen, spec.config, spec.make_initial(), opts);
    Output out(out_path);
    write_trajectory_csv(out.stream(), traj, "evolve");
}

void run_reduced_spectrum(const SourceOpts& src, const std::string& out_path) {
    const RunSpec spec = load_spec(src);
    if (spec.amplitudes)
        throw ConfigError("reduced-spectrum: needs an excited-atom initial state");
    warn_bad_cavity(spec.config);
    const FrequencyGrid grid = spec.effective_grid();
    const auto [fiber_a, fiber_b] = reduced_fiber_spectra(spec.config, spec.excited_atom, grid);
    Output out(out_path);
    write_fiber_pair_csv(out.stream(), grid.values(), fiber_a, fiber_b, "reduced-spectrum");
}

void run_compare(const SourceOpts& src, const std::string& out_path, const std::string& oracle,
                 const KernelOpts& kopts) {
    const RunSpec spec = load_spec(src);
    const FrequencyGrid grid = spec.effective_grid();
    const Generator gen = build_generator(spec.config);
    const auto [full_a, full_b] =
        fiber_spectra(spec.config, gen, spec.make_initial(), grid, solve_options(kopts));

    Eigen::VectorXd oracle_a, oracle_b;
    if (oracle == "strong") {
        if (spec.amplitudes || spec.excited_atom != 1)
            throw ConfigError("compare --oracle strong: defined for atom 1 initially excited");
        const OracleVariant variant = detect_variant(spec.config);
        if (variant == OracleVariant::quadrature_g) {
            const double g = std::abs(spec.config.sites[0].g);
            const double kappa = spec.config.sites[0].kappa_total();
            if (g < 10.0 * kappa)
                std::cerr << "note: the rotating-wave oracle assumes g >> kappa; here g/kappa = "
                          << g / kappa << "\n";
        }
        std::tie(oracle_a, oracle_b) = strong_coupling_spectrum_oracle(spec.config, grid, variant);
    } else if (oracle == "reduced") {
        if (spec.amplitudes)
            throw ConfigError("compare --oracle reduced: needs an excited-atom initial state");
        warn_bad_cavity(spec.config);
        std::tie(oracle_a, oracle_b) =
            reduced_fiber_spectra(spec.config, spec.excited_atom, grid);
    } else {
        throw ConfigError("--oracle must be strong or reduced");
    }

    Output out(out_path);
    std::ostream& csv = out.stream();
    csv << "# cascade-qed v1 compare\n";
    csv << "omega,T_fiber_a,T_fiber_b,oracle_fiber_a,oracle_fiber_b\n";
    const std::vector<double> omega = grid.values();
    for (int j = 0; j < grid.points; ++j) {
        csv << format_sig17(omega[j]) << ',' << format_sig17(full_a(j)) << ','
            << format_sig17(full_b(j)) << ',' << format_sig17(oracle_a(j)) << ','
            << format_sig17(oracle_b(j)) << '\n';
    }

    // The summary must not contaminate a CSV that goes to stdout.
    std::ostream& report = out.to_stdout() ? std::cerr : std::cout;
    const Peak pa_full = global_maximum(omega, full_a);
    const Peak pa_orc = global_maximum(omega, oracle_a);
    const Peak pb_full = global_maximum(omega, full_b);
    const Peak pb_orc = global_maximum(omega, oracle_b);
    report << "sup-norm / peak: fiber_a " << sup_diff_rel_peak(full_a, oracle_a) << ", fiber_b "
           << sup_diff_rel_peak(full_b, oracle_b) << "\n";
    report << "fiber_a peak: full " << pa_full.value << " at " << pa_full.omega << ", oracle "
           << pa_orc.value << " at " << pa_orc.omega << "\n";
    report << "fiber_b peak: full " << pb_full.value << " at " << pb_full.omega << ", oracle "
           << pb_orc.value << " at " << pb_orc.omega << "\n";
}

OneQuantumState mirror_state(const OneQuantumState& x) {
    const Eigen::Index n = x.size() / 3;
    OneQuantumState y(x.size());
    for (Eigen::Index k = 0; k < n; ++k) {
        const Eigen::Index m = n - 1 - k;
        y(3 * m + 0) = x(3 * k + 0);
        y(3 * m + 1) = x(3 * k + 2);
        y(3 * m + 2) = x(3 * k + 1);
    }
    return y;
}

void run_validate(const SourceOpts& src, double tol, const KernelOpts& kopts) {
    const RunSpec spec = load_spec(src);
    const ChainConfig& config = spec.config;
    const Generator gen = build_generator(config);
    const OneQuantumState x0 = spec.make_initial();
    const double norm0 = x0.squaredNorm();
    const kernels::SolveOptions sopts = solve_options(kopts);

    int failures = 0;
    auto check = [&failures](const std::string& name, bool ok, const std::string& detail) {
        std::cout << (ok ? "[ok]   " : "[FAIL] ") << name << ": " << detail << "\n";
        if (!ok) ++failures;
    };

    // Cross-feed entries of the generator against the output coefficients.
    {
        const OutputCoefficients out = output_coefficients(config);
        double worst = 0.0;
        for (int k = 0; k < config.n_sites(); ++k) {
            for (int j = 0; j < k; ++j)
                worst = std::max(worst, std::abs(gen.matrix(3 * k + 1, 3 * j + 1) +
                                                 std::conj(out.c_a(k)) * out.c_a(j)));
            for (int j = k + 1; j < config.n_sites(); ++j)
                worst = std::max(worst, std::abs(gen.matrix(3 * k + 2, 3 * j + 2) +
                                                 std::conj(out.c_b(k)) * out.c_b(j)));
        }
        const double scale = std::max(1.0, gen.matrix.cwiseAbs().maxCoeff());
        check("feed-contract", worst <= 1e-13 * scale,
              "max feed mismatch " + format_sig17(worst));
    }

    // total_decay_rate against -d||x||^2/dt from the generator quadratic form.
    {
        std::mt19937_64 rng(20260814);
        std::normal_distribution<double> normal;
        double worst = 0.0;
        for (int rep = 0; rep < 5; ++rep) {
            OneQuantumState x(gen.dim());
            for (Eigen::Index i = 0; i < x.size(); ++i) x(i) = {normal(rng), normal(rng)};
            x /= x.norm();
            const double split = total_decay_rate(config, x);
            const double form = -2.0 * std::real(x.dot(gen.matrix * x));
            worst = std::max(worst, std::abs(split - form) / std::max(1.0, std::abs(form)));
        }
        check("decay-split", worst <= 1e-12, "max relative mismatch " + format_sig17(worst));
    }

    EvolveOptions eopts;
    eopts.rel_tol = std::min(tol, 1e-10);
    eopts.abs_tol = eopts.rel_tol * 1e-2;
    eopts.tail_threshold = 1e-9;
    const Trajectory traj = evolve(gen, config, x0, eopts);

    {
        double worst = 0.0;
        for (int i = 0; i < traj.n_nodes(); ++i)
            worst = std::max(worst,
                             std::abs(traj.states[i].squaredNorm() + traj.p_spon[i] - norm0));
        check("conservation", worst <= 1e-8,
              "max |norm2 + p_spon - start| = " + format_sig17(worst) + " over " +
                  std::to_string(traj.n_nodes()) + " nodes");
    }
    {
        bool ok = true;
        for (size_t i = 1; i < traj.p_spon.size(); ++i)
            ok = ok && traj.p_spon[i] >= traj.p_spon[i - 1] - 1e-12;
        ok = ok && traj.channel_fractions.minCoeff() >= -1e-12;
        check("monotone-emission", ok,
              "p_spon nondecreasing, channel fractions nonnegative");
    }

    const SpectrumSet set =
        emission_spectra(config, gen, x0, spec.effective_grid(), sopts);
    {
        const double low = std::min({set.fiber_a.minCoeff(), set.fiber_b.minCoeff(),
                                     set.side_atoms.size() ? set.side_atoms.minCoeff() : 0.0,
                                     set.scatter_sites.size() ? set.scatter_sites.minCoeff()
                                                              : 0.0});
        check("spectrum-nonnegative", low >= 0.0, "min value " + format_sig17(low));
    }

    {
        FrequencyGrid sub = spec.effective_grid();
        sub.points = 201;
        const auto [fa, fb] = fiber_spectra(config, gen, x0, sub, sopts);
        const ChainConfig mc = mirrored(config);
        const auto [ma, mb] =
            fiber_spectra(mc, build_generator(mc), mirror_state(x0), sub, sopts);
        const double rel =
            std::max(sup_diff_rel_peak(fa, mb), sup_diff_rel_peak(fb, ma));
        check("mirror-symmetry", rel <= 1e-10, "sup/peak discrepancy " + format_sig17(rel));
    }

    {
        const FrequencyGrid wide = audit_grid(config, gen);
        const SpectrumSet audit_set = emission_spectra(config, gen, x0, wide, sopts);
        const AuditReport report = normalization_audit(audit_set, traj);
        const double defect = std::abs(report.spectral_total - norm0);
        check("normalization-audit", defect <= 1e-3,
              "integrated spectra total " + format_sig17(report.spectral_total) + " vs " +
                  format_sig17(norm0) + " (grid " + std::to_string(wide.points) + " points)");
    }

    if (failures > 0)
        throw ValidationError(std::to_string(failures) + " invariant(s) failed");
}

void run_preset(const std::string& name, const std::string& out_path) {
    if (name.empty()) {
        for (const std::string& candidate : preset_names()) std::cout << candidate << "\n";
        return;
    }
    Output out(out_path);
    out.stream() << config_to_json(preset(name));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"one-excitation dynamics and emission spectra of fiber-cascaded cavity chains"};
    app.require_subcommand(1);

    SourceOpts spectrum_src;
    KernelOpts spectrum_kernel;
    std::string spectrum_out = "-";
    auto* spectrum_cmd =
        app.add_subcommand("spectrum", "emission spectral densities, every channel (CSV)");
    add_source(spectrum_cmd, spectrum_src);
    add_kernel(spectrum_cmd, spectrum_kernel);
    spectrum_cmd->add_option("--out", spectrum_out, "output path (default stdout)");
    spectrum_cmd->callback([&] { run_spectrum(spectrum_src, spectrum_out, spectrum_kernel); });

    SourceOpts evolve_src;
    std::string evolve_out = "-";
    EvolveOptions evolve_opts;
    double evolve_tol = 1e-10;
    auto* evolve_cmd =
        app.add_subcommand("evolve", "time-domain trajectory with emission bookkeeping (CSV)");
    add_source(evolve_cmd, evolve_src, /*with_grid=*/false);
    evolve_cmd->add_option("--out", evolve_out, "output path (default stdout)");
    evolve_cmd->add_option("--tol", evolve_tol, "relative step tolerance");
    evolve_cmd->add_option("--t-end", evolve_opts.t_end,
                           "integration horizon (<= 0: auto from slowest decay)");
    evolve_cmd->add_option("--store-dt", evolve_opts.store_dt,
                           "minimum spacing of stored rows (0: every step)");
    evolve_cmd->add_option("--tail", evolve_opts.tail_threshold,
                           "stop once the undecayed norm^2 falls below this (0: run to t-end)");
    evolve_cmd->callback([&] {
        evolve_opts.rel_tol = evolve_tol;
        evolve_opts.abs_tol = evolve_tol * 1e-2;
        run_evolve(evolve_src, evolve_out, evolve_opts);
    });

    SourceOpts reduced_src;
    std::string reduced_out = "-";
    auto* reduced_cmd = app.add_subcommand(
        "reduced-spectrum", "fiber spectra of the adiabatically eliminated atom-only model (CSV)");
    add_source(reduced_cmd, reduced_src);
    reduced_cmd->add_option("--out", reduced_out, "output path (default stdout)");
    reduced_cmd->callback([&] { run_reduced_spectrum(reduced_src, reduced_out); });

    SourceOpts compare_src;
    KernelOpts compare_kernel;
    std::string compare_out = "-";
    std::string compare_oracle;
    auto* compare_cmd = app.add_subcommand(
        "compare", "full model vs a closed-form oracle: CSV plus a discrepancy summary");
    add_source(compare_cmd, compare_src);
    add_kernel(compare_cmd, compare_kernel);
    compare_cmd->add_option("--out", compare_out, "output path (default stdout)");
    compare_cmd->add_option("--oracle", compare_oracle, "strong|reduced")->required();
    compare_cmd->callback(
        [&] { run_compare(compare_src, compare_out, compare_oracle, compare_kernel); });

    SourceOpts validate_src;
    KernelOpts validate_kernel;
    double validate_tol = 1e-10;
    auto* validate_cmd =
        app.add_subcommand("validate", "run the invariant suite on a configuration");
    add_source(validate_cmd, validate_src);
    add_kernel(validate_cmd, validate_kernel);
    validate_cmd->add_option("--tol", validate_tol, "integration tolerance for the checks");
    validate_cmd->callback([&] { run_validate(validate_src, validate_tol, validate_kernel); });

    std::string preset_arg;
    std::string preset_out = "-";
    bool emit_config = false;
    auto* preset_cmd =
        app.add_subcommand("preset", "materialize a named scenario (no name: list them)");
    preset_cmd->add_option("name", preset_arg, "preset name");
    preset_cmd->add_flag("--emit-config", emit_config, "write the JSON config (the default)");
    preset_cmd->add_option("--out", preset_out, "output path (default stdout)");
    preset_cmd->callback([&] { run_preset(preset_arg, preset_out); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 3;
    } catch (const ValidationError& e) {
        std::cerr << "validation failure: " << e.what() << "\n";
        return 4;
    }
    return 0;
}
