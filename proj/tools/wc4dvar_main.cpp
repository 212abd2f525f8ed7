// Command line surface over the wc4dvar library. Every subcommand reads
// an optional JSON config file, applies flag overrides, and writes its
// artifacts under --out (or $WC4DVAR_OUT, default ./out).

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>

#include "wc4dvar/harness.hpp"

namespace {

using namespace wc4dvar;

struct CommonFlags {
    std::string config_path;
    std::string network = "";
    std::uint64_t seed = 0;
    bool seed_set = false;
    double sigma_o = -1.0;
    double sigma_b = -1.0;
    double tol = -1.0;
    int max_iters = -1;
    std::string out_dir;
};

void add_common(CLI::App* sub, CommonFlags& f) {
    sub->add_option("--config", f.config_path, "JSON config file");
    sub->add_option("--network", f.network, "observation network id (a-f)");
    sub->add_option("--seed", f.seed, "master seed")->each([&](const std::string&) {
        f.seed_set = true;
    });
    sub->add_option("--sigma-o", f.sigma_o, "observation error std dev");
    sub->add_option("--sigma-b", f.sigma_b, "background/model error std dev");
    sub->add_option("--tol", f.tol, "solver relative residual tolerance");
    sub->add_option("--max-iters", f.max_iters, "solver iteration cap");
    sub->add_option("-o,--out", f.out_dir, "output directory (default $WC4DVAR_OUT or ./out)");
}

ExperimentConfig build_config(const CommonFlags& f) {
    ExperimentConfig cfg;
    if (!f.config_path.empty()) cfg = ExperimentConfig::from_json_file(f.config_path);
    if (!f.network.empty()) {
        require(f.network.size() == 1 && f.network[0] >= 'a' && f.network[0] <= 'f',
                "unknown network id '" + f.network + "' (expected a-f)");
        cfg.network_id = f.network[0];
        cfg.explicit_network.reset();
    }
    if (f.seed_set) cfg.master_seed = f.seed;
    if (f.sigma_o > 0) cfg.covariance.sigma_o = f.sigma_o;
    if (f.sigma_b > 0) cfg.covariance.sigma_b = f.sigma_b;
    if (f.tol > 0) cfg.solver.tol = f.tol;
    if (f.max_iters > 0) cfg.solver.max_iters = f.max_iters;
    return cfg;
}

std::filesystem::path output_dir(const CommonFlags& f) {
    if (!f.out_dir.empty()) return f.out_dir;
    if (const char* env = std::getenv("WC4DVAR_OUT")) return env;
    return "out";
}

void write_states_csv(const std::filesystem::path& path, const std::vector<State>& states) {
    std::ofstream out(path);
    out << "time";
    for (int j = 0; j < states[0].size(); ++j) out << ",x" << j + 1;
    out << '\n';
    for (std::size_t t = 0; t < states.size(); ++t) {
        out << t;
        for (int j = 0; j < states[t].size(); ++j) out << ',' << states[t][j];
        out << '\n';
    }
}

int cmd_simulate(const CommonFlags& f) {
    const ExperimentConfig cfg = build_config(f);
    const TwinData twin = run_twin(cfg);
    const auto dir = output_dir(f);
    std::filesystem::create_directories(dir);
    write_states_csv(dir / "truth.csv", twin.truth.states);
    write_states_csv(dir / "forecast.csv", twin.forecast.states);
    std::ofstream obs(dir / "observations.csv");
    obs << "row,time,component,value,innovation\n";
    const auto& rows = cfg.network().rows();
    for (std::size_t r = 0; r < rows.size(); ++r)
        obs << r << ',' << rows[r].first << ',' << rows[r].second + 1 << ','
            << twin.observations[r] << ',' << twin.d[r] << '\n';
    std::cout << "twin experiment written to " << dir.string() << " (p = " << twin.d.size()
              << ")\n";
    return 0;
}

int cmd_spectrum(const CommonFlags& f, const std::string& form_arg) {
    const ExperimentConfig cfg = build_config(f);
    const TwinData twin = run_twin(cfg);
    const NetworkAnalysis na = analyze_network(cfg, twin);
    const auto dir = output_dir(f);
    std::filesystem::create_directories(dir);
    const std::string net(1, na.network_id);
    auto emit = [&](Formulation form, const Spectrum& sp) {
        const std::string name = to_string(form);
        if (!form_arg.empty() && form_arg != name) return;
        write_spectrum_csv(dir / ("spectrum_" + name + "_" + net + ".csv"), sp);
        std::cout << name << ": dim " << sp.eigenvalues.size() << ", inertia (" << sp.n_plus
                  << ", " << sp.n_minus << ", " << sp.n_zero << "), range [" << sp.min() << ", "
                  << sp.max() << "]\n";
    };
    emit(Formulation::A3, na.a3);
    emit(Formulation::A2, na.a2);
    emit(Formulation::A1, na.a1);
    std::cout << "psi in [" << na.summary.psi_min << ", " << na.summary.psi_max << "], nu in ["
              << na.summary.nu_min << ", " << na.summary.nu_max << "], theta in ["
              << na.summary.theta_min << ", " << na.summary.theta_max << "]\n";
    return 0;
}

int cmd_bounds(const CommonFlags& f, const std::string& form_arg) {
    const ExperimentConfig cfg = build_config(f);
    const TwinData twin = run_twin(cfg);
    const NetworkAnalysis na = analyze_network(cfg, twin);
    const auto dir = output_dir(f);
    std::filesystem::create_directories(dir);
    const std::string net(1, na.network_id);
    bool ok = true;
    auto emit = [&](Formulation form, const BoundsReport& b, const ContainmentVerdict& v) {
        const std::string name = to_string(form);
        if (!form_arg.empty() && form_arg != name) return;
        write_bounds_json(dir / ("bounds_" + name + "_" + net + ".json"), na, form);
        std::cout << name << ":";
        if (b.negative)
            std::cout << " negative [" << b.negative->lo << ", " << b.negative->hi << "],";
        std::cout << " positive [" << b.positive.lo << ", " << b.positive.hi << "] "
                  << (v.contained ? "CONTAINED" : "VIOLATED") << '\n';
        ok &= v.contained;
    };
    emit(Formulation::A3, na.bounds3, na.verdict3);
    emit(Formulation::A2, na.bounds2, na.verdict2);
    emit(Formulation::A1, na.bounds1, na.verdict1);
    return ok ? 0 : 1;
}

int cmd_solve(const CommonFlags& f, const std::string& form_arg) {
    const ExperimentConfig cfg = build_config(f);
    const TwinData twin = run_twin(cfg);
    const auto ops = make_operators(cfg, twin);
    const auto dir = output_dir(f);
    std::filesystem::create_directories(dir);
    const std::string net(1, cfg.explicit_network ? '?' : cfg.network_id);
    bool ok = true;
    auto emit = [&](Formulation form) {
        const std::string name = to_string(form);
        if (!form_arg.empty() && form_arg != name) return;
        const SystemInstance sys = make_system(ops, form, twin.b, twin.d);
        auto [x, log] = form == Formulation::A1 ? cg(sys.apply, sys.rhs, cfg.solver)
                                                : minres(sys.apply, sys.rhs, cfg.solver);
        write_residuals_csv(dir / ("residuals_" + name + "_" + net + ".csv"), log);
        const Increment inc = recover_increment(*ops, form, x, twin.d);
        std::cout << name << ": " << log.iterations << " iterations, "
                  << (log.converged ? "converged" : "NOT converged") << ", final relres "
                  << log.final_explicit_residual << ", |dx| " << inc.dx.norm() << '\n';
        ok &= log.converged;
    };
    emit(Formulation::A3);
    emit(Formulation::A2);
    emit(Formulation::A1);
    return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spectral analysis harness for the three weak-constraint 4D-Var "
                 "linear-system formulations (Lorenz 96 twin experiments)"};
    app.require_subcommand(1);

    CommonFlags f;
    std::string form_arg;

    CLI::App* simulate = app.add_subcommand("simulate", "generate twin experiment data");
    add_common(simulate, f);

    CLI::App* spectrum =
        app.add_subcommand("spectrum", "full eigenvalue spectra and extreme-value summary");
    add_common(spectrum, f);
    spectrum->add_option("--form", form_arg, "restrict to one formulation (a3|a2|a1)");

    CLI::App* bounds = app.add_subcommand("bounds", "spectral interval reports and containment");
    add_common(bounds, f);
    bounds->add_option("--form", form_arg, "restrict to one formulation (a3|a2|a1)");

    CLI::App* solve = app.add_subcommand("solve", "MINRES/CG solves with residual logs");
    add_common(solve, f);
    solve->add_option("--form", form_arg, "restrict to one formulation (a3|a2|a1)");

    CLI::App* tables = app.add_subcommand("tables", "interval-vs-spectrum tables, CSV");
    add_common(tables, f);

    CLI::App* figures =
        app.add_subcommand("figures", "spectra and residual curves for networks a-f, CSV");
    add_common(figures, f);

    CLI::App* verify = app.add_subcommand("verify", "full property suite, verify.json verdict");
    add_common(verify, f);

    CLI11_PARSE(app, argc, argv);

    try {
        if (!form_arg.empty()) wc4dvar::formulation_from_string(form_arg);  // validate early
        if (simulate->parsed()) return cmd_simulate(f);
        if (spectrum->parsed()) return cmd_spectrum(f, form_arg);
        if (bounds->parsed()) return cmd_bounds(f, form_arg);
        if (solve->parsed()) return cmd_solve(f, form_arg);
        if (tables->parsed()) {
            const bool ok = reproduce_tables(build_config(f), output_dir(f));
            std::cout << (ok ? "all table rows contained\n" : "containment violation in tables\n");
            return ok ? 0 : 1;
        }
        if (figures->parsed()) {
            const bool ok = reproduce_figures(build_config(f), output_dir(f));
            std::cout << (ok ? "figure data written\n" : "containment violation in figure data\n");
            return ok ? 0 : 1;
        }
        if (verify->parsed()) {
            const bool ok = wc4dvar::verify(build_config(f), output_dir(f));
            std::cout << (ok ? "verify: PASS\n" : "verify: FAIL\n");
            return ok ? 0 : 1;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 2;
}
