#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "wc4dvar/harness.hpp"

using namespace wc4dvar;

namespace {

ExperimentConfig small_config(char network_id = 'f') {
    ExperimentConfig cfg;
    cfg.model.n = 8;
    cfg.model.steps = 4;
    cfg.covariance.dx = 1.0 / 8.0;
    cfg.network_id = network_id;
    cfg.spinup_steps = 200;
    return cfg;
}

}  // namespace

TEST_CASE("twin experiment is deterministic under one seed") {
    const ExperimentConfig cfg = small_config();
    const TwinData t1 = run_twin(cfg);
    const TwinData t2 = run_twin(cfg);
    CHECK((t1.background - t2.background).norm() == 0.0);
    CHECK((t1.observations - t2.observations).norm() == 0.0);
    for (std::size_t i = 0; i < t1.truth.states.size(); ++i)
        CHECK((t1.truth.states[i] - t2.truth.states[i]).norm() == 0.0);
}

TEST_CASE("different seeds give different noise") {
    ExperimentConfig cfg = small_config();
    const TwinData t1 = run_twin(cfg);
    cfg.master_seed = 2;
    const TwinData t2 = run_twin(cfg);
    CHECK((t1.background - t2.background).norm() > 1e-6);
}

TEST_CASE("networks share the truth under one master seed") {
    ExperimentConfig cfg_a = small_config('a');
    ExperimentConfig cfg_f = small_config('f');
    const TwinData ta = run_twin(cfg_a);
    const TwinData tf = run_twin(cfg_f);
    REQUIRE(ta.truth.states.size() == tf.truth.states.size());
    for (std::size_t i = 0; i < ta.truth.states.size(); ++i)
        CHECK((ta.truth.states[i] - tf.truth.states[i]).norm() == 0.0);
    CHECK((ta.background - tf.background).norm() == 0.0);
    // Network a sees one component of the same truth.
    CHECK(ta.d.size() == 1);
    CHECK(tf.d.size() == cfg_f.model.n * (cfg_f.model.steps + 1));
}

TEST_CASE("b vanishes for the first outer loop and d matches innovations") {
    const ExperimentConfig cfg = small_config('c');
    const TwinData twin = run_twin(cfg);
    CHECK(twin.b.norm() <= 1e-12);
    const auto rows = cfg.network().rows();
    for (std::size_t r = 0; r < rows.size(); ++r) {
        const auto [t, c] = rows[r];
        CHECK(twin.d[r] ==
              doctest::Approx(twin.observations[r] - twin.forecast.states[t][c]).epsilon(1e-14));
    }
}

TEST_CASE("observation noise has the configured spread") {
    // Monte Carlo across seeds on the fully observed network.
    ExperimentConfig cfg = small_config('f');
    double sq = 0.0;
    int count = 0;
    for (std::uint64_t seed = 1; seed <= 40; ++seed) {
        cfg.master_seed = seed;
        const TwinData twin = run_twin(cfg);
        const auto rows = cfg.network().rows();
        for (std::size_t r = 0; r < rows.size(); ++r) {
            const auto [t, c] = rows[r];
            const double noise = twin.observations[r] - twin.truth.states[t][c];
            sq += noise * noise;
            ++count;
        }
    }
    const double std_hat = std::sqrt(sq / count);
    CHECK(std_hat == doctest::Approx(cfg.covariance.sigma_o).epsilon(0.1));
}

TEST_CASE("analysis produces contained bounds and correct inertia") {
    const ExperimentConfig cfg = small_config('c');
    const TwinData twin = run_twin(cfg);
    const NetworkAnalysis na = analyze_network(cfg, twin);
    const int s = na.ops->state_dim();
    CHECK(na.p == cfg.network().total_obs());
    CHECK(na.a3.n_plus == s + na.p);
    CHECK(na.a3.n_minus == s);
    CHECK(na.a2.n_plus == s);
    CHECK(na.a2.n_minus == s);
    CHECK(na.a1.n_minus == 0);
    CHECK(na.verdict3.contained);
    CHECK(na.verdict2.contained);
    CHECK(na.verdict1.contained);
}

TEST_CASE("chain between nested networks satisfies the monotonicity suite") {
    const ExperimentConfig cfg = small_config('a');
    const TwinData twin = run_twin(cfg);
    const ObservationNetwork base = named_network('a', cfg.model.n, cfg.model.steps);
    // Grow a into a small superset by hand to keep the chain short.
    ObservationNetwork target = base.with_observation(0, 0);
    target = target.with_observation(2, 4);
    target = target.with_observation(4, 6);
    const std::vector<ChainStep> chain = chain_between(cfg, twin, base, target);
    REQUIRE(chain.size() == 4);
    for (std::size_t k = 0; k + 1 < chain.size(); ++k)
        CHECK(chain[k + 1].p == chain[k].p + 1);
    const MonotonicityReport rep = monotonicity_report(chain);
    CHECK(rep.chain_valid);
    CHECK(rep.lemma1_theta);
    CHECK(rep.lemma2_rho);
    CHECK(rep.lemma3_nu);
    CHECK(rep.thm3_a3_extremes);
    CHECK(rep.thm5_a2_extremes);
    CHECK(rep.thm7_a1_all);
    CHECK(rep.cor1_a3_pos_interval);
    CHECK(rep.cor6_a2_neg_lower);
    CHECK(rep.cor7_pos_nesting);
    CHECK(rep.cor8_a1_upper);
}

TEST_CASE("verify writes a verdict file and passes at small scale") {
    const ExperimentConfig cfg = small_config('c');
    const auto dir = std::filesystem::temp_directory_path() / "wc4dvar_test_verify";
    std::filesystem::remove_all(dir);
    CHECK(verify(cfg, dir));
    CHECK(std::filesystem::exists(dir / "verify.json"));
    std::filesystem::remove_all(dir);
}

TEST_CASE("config file round trip") {
    const auto path = std::filesystem::temp_directory_path() / "wc4dvar_test_cfg.json";
    {
        std::ofstream out(path);
        out << R"({
            "model": {"n": 8, "steps": 4},
            "covariance": {"sigma_o": 0.2, "sigma_b": 0.1, "length_scale": 0.05},
            "network": "c",
            "seed": 9,
            "solver": {"tol": 1e-6, "max_iters": 100},
            "spinup_steps": 50
        })";
    }
    const ExperimentConfig cfg = ExperimentConfig::from_json_file(path);
    CHECK(cfg.model.n == 8);
    CHECK(cfg.model.steps == 4);
    CHECK(cfg.covariance.sigma_o == 0.2);
    CHECK(cfg.covariance.sigma_b == 0.1);
    CHECK(cfg.covariance.dx == doctest::Approx(1.0 / 8.0));
    CHECK(cfg.network_id == 'c');
    CHECK(cfg.master_seed == 9);
    CHECK(cfg.solver.tol == 1e-6);
    CHECK(cfg.solver.max_iters == 100);
    CHECK(cfg.spinup_steps == 50);
    std::filesystem::remove(path);
    CHECK_THROWS_AS(ExperimentConfig::from_json_file(path), ConfigError);
}
