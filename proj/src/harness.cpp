#include "wc4dvar/harness.hpp"

#include <json.hpp>

#include <fstream>
#include <iomanip>
#include <sstream>

namespace wc4dvar {

using nlohmann::json;

ObservationNetwork ExperimentConfig::network() const {
    if (explicit_network) return *explicit_network;
    return named_network(network_id, model.n, model.steps);
}

ExperimentConfig ExperimentConfig::from_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path.string());
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError("config parse error in " + path.string() + ": " + e.what());
    }
    ExperimentConfig cfg;
    if (j.contains("model")) {
        const auto& m = j["model"];
        cfg.model.n = m.value("n", cfg.model.n);
        cfg.model.forcing = m.value("forcing", cfg.model.forcing);
        cfg.model.dt = m.value("dt", cfg.model.dt);
        cfg.model.steps = m.value("steps", cfg.model.steps);
    }
    if (j.contains("covariance")) {
        const auto& c = j["covariance"];
        cfg.covariance.sigma_b = c.value("sigma_b", cfg.covariance.sigma_b);
        cfg.covariance.sigma_o = c.value("sigma_o", cfg.covariance.sigma_o);
        cfg.covariance.length_scale = c.value("length_scale", cfg.covariance.length_scale);
        cfg.covariance.dx = c.value("dx", 1.0 / cfg.model.n);
    } else {
        cfg.covariance.dx = 1.0 / cfg.model.n;
    }
    if (j.contains("network")) {
        const auto& net = j["network"];
        if (net.is_string()) {
            const std::string id = net.get<std::string>();
            require(id.size() == 1, "config: network id must be a single letter a-f");
            cfg.network_id = id[0];
        } else {
            // Explicit network: {"observed": {"<time>": [components, 1-based]}}
            std::vector<std::vector<int>> observed(cfg.model.steps + 1);
            for (const auto& [key, comps] : net.at("observed").items()) {
                const int t = std::stoi(key);
                require(t >= 0 && t <= cfg.model.steps, "config: observation time out of range");
                for (int c : comps.get<std::vector<int>>()) observed[t].push_back(c - 1);
            }
            cfg.explicit_network = ObservationNetwork(cfg.model.n, std::move(observed));
        }
    }
    cfg.master_seed = j.value("seed", cfg.master_seed);
    if (j.contains("solver")) {
        cfg.solver.tol = j["solver"].value("tol", cfg.solver.tol);
        cfg.solver.max_iters = j["solver"].value("max_iters", cfg.solver.max_iters);
    }
    cfg.spinup_steps = j.value("spinup_steps", cfg.spinup_steps);
    return cfg;
}

TwinData run_twin(const ExperimentConfig& cfg) {
    cfg.model.validate();
    cfg.covariance.validate();
    const ModelConfig& mc = cfg.model;
    const int n = mc.n;
    const int N = mc.steps;
    const ObservationNetwork net = cfg.network();

    const Matrix B = soar_matrix(n, cfg.covariance);
    const BlockDiagCovariance Bcov({B});

    // Spin the truth onto the attractor from a fixed perturbed rest state.
    State x = Vector::Constant(n, mc.forcing);
    x[0] += 1e-2;
    ModelConfig spin = mc;
    spin.steps = std::max(1, cfg.spinup_steps);
    if (cfg.spinup_steps > 0) x = integrate(x, spin).states.back();

    TwinData twin;
    // Truth with model errors drawn from Q (= B here).
    GaussianSampler model_rng = GaussianSampler::for_role(
        cfg.master_seed, static_cast<std::uint32_t>(NoiseRole::ModelError));
    std::vector<State> model_error(N);
    for (int i = 0; i < N; ++i) model_error[i] = Bcov.sample(model_rng);
    twin.truth = integrate(x, mc, &model_error);

    // Background: truth initial state plus B-distributed noise.
    GaussianSampler bg_rng = GaussianSampler::for_role(
        cfg.master_seed, static_cast<std::uint32_t>(NoiseRole::Background));
    twin.background = twin.truth.states[0] + Bcov.sample(bg_rng);

    // Observations: selected truth components plus sigma_o noise.
    GaussianSampler obs_rng = GaussianSampler::for_role(
        cfg.master_seed, static_cast<std::uint32_t>(NoiseRole::Observation));
    const int p = net.total_obs();
    twin.observations.resize(p);
    int row = 0;
    for (const auto& [t, c] : net.rows())
        twin.observations[row++] = twin.truth.states[t][c] + cfg.covariance.sigma_o * obs_rng.next();

    // Linearisation trajectory: perfect-model forecast from the background.
    twin.forecast = integrate(twin.background, mc);

    // Increment data. With a perfect-model linearisation trajectory the
    // state part b is zero by construction; keep the general formulas.
    const int s = (N + 1) * n;
    twin.b = Vector::Zero(s);
    twin.b.head(n) = twin.forecast.states[0] - twin.background;
    for (int i = 1; i <= N; ++i) {
        auto [pred, sd] = rk4_step(twin.forecast.states[i - 1], mc);
        twin.b.segment(i * n, n) = -(twin.forecast.states[i] - pred);
    }
    twin.d.resize(p);
    row = 0;
    for (const auto& [t, c] : net.rows())
        twin.d[row] = twin.observations[row] - twin.forecast.states[t][c], ++row;
    return twin;
}

std::shared_ptr<const BlockOperators> make_operators(const ExperimentConfig& cfg,
                                                     const TwinData& twin) {
    const Matrix B = soar_matrix(cfg.model.n, cfg.covariance);
    BlockDiagCovariance D = build_D(B, B, cfg.model.steps);
    const ObservationNetwork net = cfg.network();
    BlockDiagCovariance R = build_R(net, cfg.covariance.sigma_o);
    return std::make_shared<BlockOperators>(cfg.model, twin.forecast, net, std::move(D),
                                            std::move(R));
}

NetworkAnalysis analyze_network(const ExperimentConfig& cfg, const TwinData& twin) {
    NetworkAnalysis na;
    na.network_id = cfg.explicit_network ? '?' : cfg.network_id;
    na.ops = make_operators(cfg, twin);
    na.p = na.ops->obs_dim();
    na.summary = summarize(*na.ops);
    na.a3 = sym_eig(assemble_dense(*na.ops, Formulation::A3));
    na.a2 = sym_eig(assemble_dense(*na.ops, Formulation::A2));
    na.a1 = sym_eig(assemble_dense(*na.ops, Formulation::A1));
    na.bounds3 = bounds_a3(na.summary);
    na.bounds2 = bounds_a2(na.summary);
    na.bounds1 = bounds_a1(na.summary);
    na.verdict3 = check_containment(na.bounds3, na.a3);
    na.verdict2 = check_containment(na.bounds2, na.a2);
    na.verdict1 = check_containment(na.bounds1, na.a1);
    return na;
}

std::vector<ChainStep> chain_between(const ExperimentConfig& cfg, const TwinData& twin,
                                     const ObservationNetwork& base,
                                     const ObservationNetwork& target) {
    require(target.contains(base), "chain_between: base network not contained in target");
    std::vector<std::pair<int, int>> additions;
    for (const auto& row : target.rows()) {
        bool in_base = false;
        for (const auto& b : base.rows())
            if (b == row) {
                in_base = true;
                break;
            }
        if (!in_base) additions.push_back(row);
    }

    std::vector<ChainStep> chain;
    ObservationNetwork net = base;
    ExperimentConfig step_cfg = cfg;
    for (std::size_t k = 0;; ++k) {
        step_cfg.explicit_network = net;
        // The twin's d/observations are network-dependent, but the chain
        // only inspects spectra, which depend on the network alone.
        NetworkAnalysis na = analyze_network(step_cfg, twin);
        ChainStep cs;
        cs.p = na.p;
        cs.diagonal_R = true;
        cs.summary = na.summary;
        cs.a3 = std::move(na.a3);
        cs.a2 = std::move(na.a2);
        cs.a1 = std::move(na.a1);
        chain.push_back(std::move(cs));
        if (k == additions.size()) break;
        net = net.with_observation(additions[k].first, additions[k].second);
    }
    return chain;
}

namespace {

std::string fmt(double v) {
    std::ostringstream os;
    os << std::setprecision(12) << v;
    return os.str();
}

json interval_json(const Interval& iv) { return json{{"lo", iv.lo}, {"hi", iv.hi}}; }

json bounds_json(const BoundsReport& r, const Spectrum& sp, const ContainmentVerdict& v) {
    json j;
    j["formulation"] = to_string(r.formulation);
    if (r.negative) j["negative_interval"] = interval_json(*r.negative);
    j["positive_interval"] = interval_json(r.positive);
    if (r.formulation == Formulation::A2) {
        j["beta1"] = r.beta1;
        j["beta2"] = r.beta2;
        j["beta3"] = r.beta3;
        j["beta_choice"] = r.beta_choice;
    }
    j["eig_min"] = sp.min();
    j["eig_max"] = sp.max();
    j["inertia"] = {sp.n_plus, sp.n_minus, sp.n_zero};
    j["contained"] = v.contained;
    j["violations"] = v.violations;
    return j;
}

void ensure_dir(const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
}

struct TableRow {
    std::string network;
    Interval neg_bounds, neg_eigs;
    Interval pos_bounds, pos_eigs;
    bool has_negative = true;
    bool contained = true;
};

void write_table_csv(const std::filesystem::path& path, const std::vector<TableRow>& rows) {
    std::ofstream out(path);
    out << "network,neg_lo,neg_hi,eig_neg_min,eig_neg_max,pos_lo,pos_hi,eig_pos_min,"
           "eig_pos_max,verdict\n";
    for (const auto& r : rows) {
        out << r.network << ',';
        if (r.has_negative)
            out << fmt(r.neg_bounds.lo) << ',' << fmt(r.neg_bounds.hi) << ','
                << fmt(r.neg_eigs.lo) << ',' << fmt(r.neg_eigs.hi) << ',';
        else
            out << ",,,,";
        out << fmt(r.pos_bounds.lo) << ',' << fmt(r.pos_bounds.hi) << ',' << fmt(r.pos_eigs.lo)
            << ',' << fmt(r.pos_eigs.hi) << ',' << (r.contained ? "CONTAINED" : "VIOLATED")
            << '\n';
    }
}

TableRow row_from(const NetworkAnalysis& na, Formulation form) {
    TableRow r;
    r.network = std::string(1, na.network_id);
    const BoundsReport& b = form == Formulation::A3   ? na.bounds3
                            : form == Formulation::A2 ? na.bounds2
                                                      : na.bounds1;
    const Spectrum& sp = form == Formulation::A3 ? na.a3 : form == Formulation::A2 ? na.a2 : na.a1;
    const ContainmentVerdict& v =
        form == Formulation::A3 ? na.verdict3 : form == Formulation::A2 ? na.verdict2 : na.verdict1;
    r.contained = v.contained;
    r.pos_bounds = b.positive;
    if (b.negative) {
        auto [nlo, nhi, plo, phi] = sp.signed_extremes();
        r.neg_bounds = *b.negative;
        r.neg_eigs = Interval{nlo, nhi};
        r.pos_eigs = Interval{plo, phi};
    } else {
        r.has_negative = false;
        r.pos_eigs = Interval{sp.min(), sp.max()};
    }
    return r;
}

}  // namespace

bool reproduce_tables(const ExperimentConfig& cfg, const std::filesystem::path& out_dir) {
    ensure_dir(out_dir);
    const TwinData twin = run_twin(cfg);
    bool all_contained = true;

    std::vector<TableRow> t2, t3, t4;
    for (char id : {'a', 'c', 'e', 'f'}) {
        ExperimentConfig c = cfg;
        c.network_id = id;
        c.explicit_network.reset();
        const NetworkAnalysis na = analyze_network(c, twin);
        t2.push_back(row_from(na, Formulation::A3));
        t3.push_back(row_from(na, Formulation::A2));
        t4.push_back(row_from(na, Formulation::A1));
        all_contained &= na.verdict3.contained && na.verdict2.contained && na.verdict1.contained;
    }
    write_table_csv(out_dir / "table2.csv", t2);
    write_table_csv(out_dir / "table3.csv", t3);
    write_table_csv(out_dir / "table4.csv", t4);

    // Alternative-bound comparison: network d with sigma_o=1.5, sigma_b=1.
    ExperimentConfig alt = cfg;
    alt.network_id = 'd';
    alt.explicit_network.reset();
    alt.covariance.sigma_o = 1.5;
    alt.covariance.sigma_b = 1.0;
    const TwinData alt_twin = run_twin(alt);
    const NetworkAnalysis na = analyze_network(alt, alt_twin);
    const AlternativeBoundInputs an_in = compute_alternative_inputs(*na.ops, na.a1);
    const AlternativeBounds an = bounds_an(na.summary, an_in);
    all_contained &= na.verdict3.contained && na.verdict2.contained && na.verdict1.contained;

    auto write_alt = [&](const std::filesystem::path& path, const Spectrum& sp,
                         const BoundsReport& thm, const Interval& an_neg,
                         const Interval& an_pos) {
        auto [nlo, nhi, plo, phi] = sp.signed_extremes();
        std::ofstream out(path);
        out << "row,neg_lo,neg_hi,pos_lo,pos_hi\n";
        out << "eigenvalues," << fmt(nlo) << ',' << fmt(nhi) << ',' << fmt(plo) << ',' << fmt(phi)
            << '\n';
        out << "theorem," << fmt(thm.negative->lo) << ',' << fmt(thm.negative->hi) << ','
            << fmt(thm.positive.lo) << ',' << fmt(thm.positive.hi) << '\n';
        out << "alternative," << fmt(an_neg.lo) << ',' << fmt(an_neg.hi) << ',' << fmt(an_pos.lo)
            << ',' << fmt(an_pos.hi) << '\n';
    };
    write_alt(out_dir / "table5.csv", na.a3, na.bounds3, an.a3_negative, an.a3_positive);
    write_alt(out_dir / "table6.csv", na.a2, na.bounds2, an.a2_negative, an.a2_positive);
    return all_contained;
}

bool reproduce_figures(const ExperimentConfig& cfg, const std::filesystem::path& out_dir) {
    ensure_dir(out_dir);
    bool ok = true;
    for (char id : {'a', 'b', 'c', 'd', 'e', 'f'}) {
        ExperimentConfig c = cfg;
        c.network_id = id;
        c.explicit_network.reset();
        const TwinData net_twin = run_twin(c);  // same truth, network-sized d
        const NetworkAnalysis na = analyze_network(c, net_twin);
        const std::string suffix = std::string(1, id);
        write_spectrum_csv(out_dir / ("spectrum_a3_" + suffix + ".csv"), na.a3);
        write_spectrum_csv(out_dir / ("spectrum_a2_" + suffix + ".csv"), na.a2);
        write_spectrum_csv(out_dir / ("spectrum_a1_" + suffix + ".csv"), na.a1);
        write_bounds_json(out_dir / ("bounds_a3_" + suffix + ".json"), na, Formulation::A3);
        write_bounds_json(out_dir / ("bounds_a2_" + suffix + ".json"), na, Formulation::A2);
        write_bounds_json(out_dir / ("bounds_a1_" + suffix + ".json"), na, Formulation::A1);
        ok &= na.verdict3.contained && na.verdict2.contained && na.verdict1.contained;

        const SystemInstance s3 = make_system(na.ops, Formulation::A3, net_twin.b, net_twin.d);
        const SystemInstance s2 = make_system(na.ops, Formulation::A2, net_twin.b, net_twin.d);
        const SystemInstance s1 = make_system(na.ops, Formulation::A1, net_twin.b, net_twin.d);
        auto [x3, log3] = minres(s3.apply, s3.rhs, cfg.solver);
        auto [x2, log2] = minres(s2.apply, s2.rhs, cfg.solver);
        auto [x1, log1] = cg(s1.apply, s1.rhs, cfg.solver);
        write_residuals_csv(out_dir / ("residuals_a3_" + suffix + ".csv"), log3);
        write_residuals_csv(out_dir / ("residuals_a2_" + suffix + ".csv"), log2);
        write_residuals_csv(out_dir / ("residuals_a1_" + suffix + ".csv"), log1);
    }
    return ok;
}

bool verify(const ExperimentConfig& cfg, const std::filesystem::path& out_dir) {
    ensure_dir(out_dir);
    const TwinData twin = run_twin(cfg);
    const NetworkAnalysis na = analyze_network(cfg, twin);
    const int s = na.ops->state_dim();
    const int p = na.ops->obs_dim();

    json j;
    j["network"] = std::string(1, na.network_id);
    j["p"] = p;

    bool ok = true;
    // Inertia counts.
    const bool inertia_ok = na.a3.n_plus == s + p && na.a3.n_minus == s && na.a3.n_zero == 0 &&
                            na.a2.n_plus == s && na.a2.n_minus == s && na.a2.n_zero == 0 &&
                            na.a1.n_plus == s && na.a1.n_minus == 0 && na.a1.n_zero == 0;
    j["inertia_ok"] = inertia_ok;
    ok &= inertia_ok;

    // Containment.
    j["a3"] = bounds_json(na.bounds3, na.a3, na.verdict3);
    j["a2"] = bounds_json(na.bounds2, na.a2, na.verdict2);
    j["a1"] = bounds_json(na.bounds1, na.a1, na.verdict1);
    ok &= na.verdict3.contained && na.verdict2.contained && na.verdict1.contained;

    // Adjoint identity over the trajectory.
    GaussianSampler rng(cfg.master_seed ^ 0x5eedULL);
    double worst_adj = 0.0;
    for (int i = 0; i < cfg.model.steps; ++i) {
        const StageData& sd = na.ops->trajectory().stage_cache[i];
        for (int k = 0; k < 10; ++k) {
            const Vector dx = rng.vector(cfg.model.n);
            const Vector y = rng.vector(cfg.model.n);
            const Vector mdx = tlm_apply(sd, dx, cfg.model);
            const Vector mty = adjoint_apply(sd, y, cfg.model);
            const double lhs = mdx.dot(y), rhs = dx.dot(mty);
            worst_adj = std::max(worst_adj,
                                 std::abs(lhs - rhs) / std::max(1e-300, mdx.norm() * y.norm()));
        }
    }
    j["adjoint_identity_rel_error"] = worst_adj;
    ok &= worst_adj <= 1e-12;

    // Solver protocol.
    const SystemInstance s3 = make_system(na.ops, Formulation::A3, twin.b, twin.d);
    const SystemInstance s1 = make_system(na.ops, Formulation::A1, twin.b, twin.d);
    auto [x3, log3] = minres(s3.apply, s3.rhs, cfg.solver);
    auto [x1, log1] = cg(s1.apply, s1.rhs, cfg.solver);
    bool monotone = true;
    for (std::size_t i = 1; i < log3.relative_residuals.size(); ++i)
        monotone &= log3.relative_residuals[i] <=
                    log3.relative_residuals[i - 1] + 1e-12;
    j["minres_iterations"] = log3.iterations;
    j["minres_converged"] = log3.converged;
    j["minres_monotone"] = monotone;
    j["cg_iterations"] = log1.iterations;
    j["cg_converged"] = log1.converged;
    ok &= monotone;

    j["ok"] = ok;
    std::ofstream out(out_dir / "verify.json");
    out << j.dump(2) << '\n';
    return ok;
}

void write_spectrum_csv(const std::filesystem::path& path, const Spectrum& sp) {
    std::ofstream out(path);
    out << "index,eigenvalue\n";
    for (int i = 0; i < sp.eigenvalues.size(); ++i)
        out << i << ',' << fmt(sp.eigenvalues[i]) << '\n';
}

void write_residuals_csv(const std::filesystem::path& path, const SolveLog& log) {
    std::ofstream out(path);
    out << "iteration,relative_residual\n";
    for (std::size_t i = 0; i < log.relative_residuals.size(); ++i)
        out << i << ',' << fmt(log.relative_residuals[i]) << '\n';
}

void write_bounds_json(const std::filesystem::path& path, const NetworkAnalysis& na,
                       Formulation form) {
    json j;
    j["network"] = std::string(1, na.network_id);
    j["p"] = na.p;
    j["summary"] = {{"psi_min", na.summary.psi_min},     {"psi_max", na.summary.psi_max},
                    {"nu_min", na.summary.nu_min},       {"nu_max", na.summary.nu_max},
                    {"rho_min", na.summary.rho_min},     {"rho_max", na.summary.rho_max},
                    {"theta_min", na.summary.theta_min}, {"theta_max", na.summary.theta_max},
                    {"sigma_min", na.summary.sigma_min}, {"sigma_max", na.summary.sigma_max},
                    {"tau_min", na.summary.tau_min},     {"tau_max", na.summary.tau_max}};
    switch (form) {
        case Formulation::A3:
            j["bounds"] = bounds_json(na.bounds3, na.a3, na.verdict3);
            break;
        case Formulation::A2:
            j["bounds"] = bounds_json(na.bounds2, na.a2, na.verdict2);
            break;
        case Formulation::A1:
            j["bounds"] = bounds_json(na.bounds1, na.a1, na.verdict1);
            break;
    }
    std::ofstream out(path);
    out << j.dump(2) << '\n';
}

void write_matrix_csv(const std::filesystem::path& path, const Matrix& m) {
    std::ofstream out(path);
    for (int i = 0; i < m.rows(); ++i) {
        for (int j = 0; j < m.cols(); ++j) {
            out << fmt(m(i, j));
            out << (j + 1 < m.cols() ? ',' : '\n');
        }
    }
}

}  // namespace wc4dvar
