#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "ebmlab/experiments.hpp"
#include "ebmlab/noise.hpp"
#include "ebmlab/report.hpp"
#include "ebmlab/rng.hpp"

using namespace ebmlab;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

ExperimentConfig parse(const std::string& text) {
    std::istringstream in(text);
    return ExperimentConfig::parse_stream(in);
}

}  // namespace

TEST_CASE("config parsing: values, comments, rejection of unknowns and bad domains") {
    ExperimentConfig cfg = parse(
        "kind = convergence\n"
        "# a comment line\n"
        "scheme = ffs   # trailing comment\n"
        "beta = 0.3\n"
        "kappa = 1, 2\n"
        "theta_star = 0.5, -0.5\n"
        "dim = 2\n"
        "horizon = 500\n"
        "replicates = 3\n");
    CHECK(cfg.scheme == Scheme::FlipFlopSingle);
    CHECK(cfg.beta == doctest::Approx(0.3));
    CHECK(cfg.kappa_diag == std::vector<double>{1.0, 2.0});
    CHECK(cfg.theta_star == std::vector<double>{0.5, -0.5});
    CHECK(cfg.replicates == 3);

    CHECK_THROWS_AS(parse("betta = 0.5\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse("beta = 1.5\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse("replicates = 0\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse("horizon = 5\nperiod = 1\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse("just words\n"), std::invalid_argument);

    std::string described = cfg.describe();
    CHECK(described.find("beta = 0.3") != std::string::npos);
    CHECK(described.find("scheme = flip-flop-single") != std::string::npos);
}

TEST_CASE("geometric checkpoints: spacing, range, offset away from integers") {
    auto cks = geometric_checkpoints(2.0, 1e4);
    REQUIRE(cks.size() > 10);
    CHECK(cks.front() >= 2.0);
    CHECK(cks.back() <= 1e4);
    double rho = std::pow(10.0, 0.125);
    for (size_t k = 1; k < cks.size(); ++k)
        CHECK(cks[k] / cks[k - 1] == doctest::Approx(rho).epsilon(1e-12));
    // centers are 10^{1/16} * rho^k, never integer powers of ten
    for (double t : cks) {
        double frac = std::fmod(std::log10(t), 0.125);
        CHECK(std::min(frac, 0.125 - frac) > 0.01);
    }
}

TEST_CASE("fit_slope recovers an exact power law") {
    std::vector<double> x, y;
    for (int k = 1; k <= 20; ++k) {
        x.push_back(std::log(static_cast<double>(k)));
        y.push_back(2.5 - 0.7 * x.back());
    }
    CHECK(fit_slope(x, y) == doctest::Approx(-0.7).epsilon(1e-12));
    CHECK_THROWS_AS(fit_slope({1.0}, {1.0}), std::invalid_argument);
    CHECK_THROWS_AS(fit_slope({1.0, 1.0}, {1.0, 2.0}), std::invalid_argument);
}

TEST_CASE("envelope formulas match their closed forms") {
    double t = 250.0, beta = 0.5, c = 2.0, period = 4.0, sigma = 0.5, ratio = 2.0;
    CHECK(decay_envelope(t, beta, c, period, sigma, ratio) ==
          doctest::Approx(std::pow(period, 0.5 - beta) * sigma * (4.7 * ratio + 1.2) *
                          std::pow(c, -beta) * std::sqrt(std::log(t)) / std::pow(t, beta))
              .epsilon(1e-14));
    // finite-family base uses the sewing constant K(alpha, 1)
    double k_alpha = 1.0 / (1.0 - std::pow(2.0, -0.42));
    CHECK(finite_family_envelope_base(t, beta, period, sigma, ratio, 0.42) ==
          doctest::Approx(std::pow(period, 0.5 - beta) * sigma * (k_alpha * ratio + 1.0) /
                          std::pow(t, beta))
              .epsilon(1e-14));
}

TEST_CASE("convergence experiment: miniature run is sane and reproducible") {
    ExperimentConfig cfg;
    cfg.scheme = Scheme::RandomReshuffle;
    cfg.beta = 0.5;
    cfg.dim = 2;
    cfg.kappa_diag = {1.0, 2.0};
    cfg.sigma = 0.5;
    cfg.horizon = 1000.0;
    cfg.steps_per_unit = 16;
    cfg.replicates = 4;
    cfg.seed = 5;
    RateReport rep = convergence_experiment(cfg);
    REQUIRE(!rep.checkpoints.empty());
    for (size_t k = 1; k < rep.checkpoints.size(); ++k)
        CHECK(rep.checkpoints[k] > rep.checkpoints[k - 1]);
    REQUIRE(rep.rms_errors.rows() == 4);
    REQUIRE(rep.slope.size() == 4);
    for (int r = 0; r < 4; ++r) {
        CHECK(rep.diverged_at[r] == 0);
        CHECK(std::isfinite(rep.slope[r]));
        CHECK(rep.c_alpha[r] > 0.0);
        CHECK(rep.final_residual[r] < 1.0);
    }
    CHECK(std::abs(rep.median_slope() + 0.5) < 0.2);

    RateReport again = convergence_experiment(cfg);
    CHECK((rep.rms_errors.array() == again.rms_errors.array()).all());
}

TEST_CASE("n-scaling experiment rejects an inadequate period sweep") {
    ExperimentConfig cfg;
    cfg.kind = "n-scaling";
    cfg.periods = {1.0, 2.0, 4.0};
    CHECK_THROWS_AS(n_scaling_experiment(cfg), std::invalid_argument);
    cfg.periods = {1.0, 2.0, 4.0, 8.0};  // only 0.9 decades
    CHECK_THROWS_AS(n_scaling_experiment(cfg), std::invalid_argument);
}

TEST_CASE("n-scaling experiment: miniature sweep produces a finite slope") {
    ExperimentConfig cfg;
    cfg.kind = "n-scaling";
    cfg.scheme = Scheme::RandomReshuffle;
    cfg.beta = 0.5;
    cfg.periods = {1.0, 4.0, 16.0, 64.0};
    cfg.horizon_epochs = 100.0;
    cfg.steps_per_unit = 8;
    cfg.replicates = 2;
    cfg.seed = 9;
    ScalingReport rep = n_scaling_experiment(cfg);
    REQUIRE(rep.prefactor.size() == 4);
    for (double p : rep.prefactor) CHECK(p > 0.0);
    CHECK(std::isfinite(rep.slope));
    CHECK(rep.target == doctest::Approx(0.0));
}

TEST_CASE("discrete-continuous comparison: miniature run") {
    ExperimentConfig cfg;
    cfg.kind = "discrete-continuous";
    cfg.scheme = Scheme::SingleShuffle;
    cfg.beta = 0.7;
    cfg.dim = 2;
    cfg.data_count = 100;
    cfg.h = 0.01;
    cfg.sigma_eps = 1.0;
    cfg.sgdo_steps = 100000;
    cfg.steps_per_unit = 32;
    cfg.replicates = 2;
    cfg.seed = 13;
    ComparisonReport rep = discrete_vs_continuous(cfg);
    CHECK(rep.epoch0_bitexact);
    CHECK(std::isfinite(rep.discrete_slope));
    CHECK(std::isfinite(rep.continuous_slope));
    CHECK(rep.final_error_to_theta_hat < rep.final_error_to_theta_star);
    CHECK((rep.theta_hat - rep.theta_star).norm() > 0.0);
}

TEST_CASE("tail bound check: pinned variance proxy and monotone empirical tail") {
    TailReport rep = tail_bound_check(0.42, {0.8, 1.2, 1.6, 2.0, 2.4}, 2000, 128, 17);
    // (1 - b*) b*^{1 - 2 alpha} at b* = 0.16/1.16, frozen from a 30-digit evaluation
    CHECK(rep.sigma_sq == doctest::Approx(0.6278963084141715).epsilon(1e-12));
    CHECK(rep.mean_seminorm > 0.0);
    for (size_t k = 1; k < rep.empirical.size(); ++k)
        CHECK(rep.empirical[k] <= rep.empirical[k - 1]);
    CHECK(rep.all_within);
    CHECK_THROWS_AS(tail_bound_check(0.6, {1.0}, 10, 16, 1), std::invalid_argument);
}

TEST_CASE("bridge envelope validation: single-bridge seminorm is grid-stable") {
    EnvelopeReport coarse = bridge_envelope_validation(0.42, 0.8, 1, 20, 2, 4096, 19);
    EnvelopeReport fine = bridge_envelope_validation(0.42, 0.8, 1, 20, 2, 8192, 19);
    CHECK(coarse.median_single > 0.0);
    double ratio = fine.median_single / coarse.median_single;
    CHECK(ratio >= 0.98);  // refinement can only reveal more pairs per path,
    CHECK(ratio <= 1.1);   // but these are independent draws, so allow slack
    // a^{-1/2} envelope level, frozen from a 30-digit evaluation of 0.8^{-1/2}
    CHECK(1.0 / std::sqrt(coarse.a) == doctest::Approx(1.1180339887498949).epsilon(1e-14));
    CHECK_THROWS_AS(bridge_envelope_validation(0.42, 0.8, 10, 2, 1, 64, 1),
                    std::invalid_argument);
}

TEST_CASE("asymptotic bound checks pass at a reduced horizon") {
    QuadratureReport rep = asymptotic_bound_checks(Schedule(0.5, 1.0), 1.0, 1000.0);
    CHECK(rep.all_pass());
    CHECK(rep.quadrature_ok);
    CHECK(rep.richardson_gap <= 1e-6);
    bool saw_ratio = false;
    for (const auto& e : rep.entries) {
        CHECK(e.pass);
        if (e.name == "convolution-ratio") {
            saw_ratio = true;
            CHECK(e.value <= 1.1);
            CHECK(e.value >= 1.0);  // the ratio approaches 1 from above
        }
    }
    CHECK(saw_ratio);
}

TEST_CASE("constants audit: recomputed values, flags, and reconstruction") {
    ConstantsAudit audit = constants_audit();
    // frozen from 30-digit evaluations at alpha = 0.42, a = 0.8
    CHECK(audit.b_star == doctest::Approx(0.13793103448275862).epsilon(1e-12));
    CHECK(audit.admissible == doctest::Approx(0.7963098258418031).epsilon(1e-12));
    CHECK(audit.sqrt_inv_a == doctest::Approx(1.1180339887498949).epsilon(1e-12));
    CHECK(audit.leading == doctest::Approx(4.426535982490960).epsilon(1e-12));
    CHECK(audit.admissible_flagged);
    CHECK(audit.leading_flagged);
    // the stated values are recovered exactly at alpha = 0.40
    CHECK(audit.reconstruction_admissible ==
          doctest::Approx(0.8585814486631533).epsilon(1e-12));
    CHECK(audit.reconstruction_leading ==
          doctest::Approx(4.617271256601431).epsilon(1e-12));
    CHECK(std::abs(audit.reconstruction_admissible - audit.paper_admissible) < 1e-6);
    CHECK(std::abs(audit.reconstruction_leading - audit.paper_leading) < 1e-5);
    std::string text = audit.format();
    CHECK(text.find("DISAGREES") != std::string::npos);
}

TEST_CASE("report emission: deterministic bytes and declared schema") {
    ExperimentConfig cfg;
    cfg.scheme = Scheme::SingleShuffle;
    cfg.beta = 0.5;
    cfg.horizon = 200.0;
    cfg.steps_per_unit = 8;
    cfg.replicates = 2;
    cfg.seed = 23;
    RateReport rep = convergence_experiment(cfg);
    emit_rate_csv("rate_a.csv", rep);
    emit_rate_csv("rate_b.csv", rep);
    std::string a = slurp("rate_a.csv"), b = slurp("rate_b.csv");
    CHECK(a == b);
    CHECK(a.rfind("t,replicate,error,envelope,pass", 0) == 0);
    emit_rate_svg("rate_a.svg", rep);
    emit_rate_svg("rate_b.svg", rep);
    std::string sa = slurp("rate_a.svg"), sb = slurp("rate_b.svg");
    CHECK(sa == sb);
    CHECK(sa.rfind("<svg", 0) == 0);
    CHECK(sa.find("envelope") != std::string::npos);
    std::remove("rate_a.csv");
    std::remove("rate_b.csv");
    std::remove("rate_a.svg");
    std::remove("rate_b.svg");
}

TEST_CASE("empty replicate table yields a header-only CSV") {
    write_table_csv("empty.csv", {"t", "replicate", "error", "envelope", "pass"}, {});
    std::string text = slurp("empty.csv");
    CHECK(text == "t,replicate,error,envelope,pass\n");
    std::remove("empty.csv");
}
