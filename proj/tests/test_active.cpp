#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "starpls/active.hpp"
#include "test_support.hpp"

using namespace starpls;

namespace {

constexpr double kLn2 = 0.69314718055994530942;

double combine(const MmseTerms& t, const SystemConfig& cfg) {
    return (cfg.omega1 * (t.f1 + cfg.p1 * (t.f2 + t.f4) +
                          cfg.p0() * (t.f3 + t.f5)) +
            cfg.omega2 * t.fc) /
           kLn2;
}

}  // namespace

TEST_CASE("direct log terms recombine into the weighted objective") {
    const SystemConfig cfg = test::unit_config(8, 4);
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const ChannelSet ch = test::random_channels(8, 4, 10 + seed);
        const StarCoefficients co = test::random_coeffs(cfg, 20 + seed);
        const BeamformerPair bf =
            test::random_beamformers(4, cfg.p_tmax, 30 + seed);

        const MmseTerms t = direct_log_terms(ch, co, bf, cfg);
        const double truth = weighted_objective(ch, co, bf, cfg);
        CHECK(combine(t, cfg) ==
              doctest::Approx(truth).epsilon(1e-12));
    }
}

TEST_CASE("optimal auxiliaries make every surrogate term tight") {
    const SystemConfig cfg = test::unit_config(8, 4);
    for (std::uint64_t seed = 0; seed < 25; ++seed) {
        const ChannelSet ch = test::random_channels(8, 4, 40 + seed);
        const StarCoefficients co = test::random_coeffs(cfg, 50 + seed);
        const BeamformerPair bf =
            test::random_beamformers(4, cfg.p_tmax, 60 + seed);

        const AuxVars aux = update_auxiliaries(ch, co, bf, cfg);
        const MmseTerms d = direct_log_terms(ch, co, bf, cfg);
        const MmseTerms s = surrogate_log_terms(ch, co, aux, bf, cfg);

        auto close = [](double a, double b) {
            return std::abs(a - b) <= 1e-10 * std::max(1.0, std::abs(b));
        };
        CHECK(close(s.f1, d.f1));
        CHECK(close(s.f2, d.f2));
        CHECK(close(s.f3, d.f3));
        CHECK(close(s.f4, d.f4));
        CHECK(close(s.f5, d.f5));
        CHECK(close(s.fc, d.fc));

        CHECK(surrogate_objective(ch, co, aux, bf, cfg) ==
              doctest::Approx(weighted_objective(ch, co, bf, cfg))
                  .epsilon(1e-10));
    }
}

TEST_CASE("the surrogate minorizes the true objective away from expansion") {
    const SystemConfig cfg = test::unit_config(8, 4);
    const ChannelSet ch = test::random_channels(8, 4, 77);
    const StarCoefficients co = test::random_coeffs(cfg, 78);
    const BeamformerPair anchor =
        test::random_beamformers(4, cfg.p_tmax, 79);
    const AuxVars aux = update_auxiliaries(ch, co, anchor, cfg);

    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const BeamformerPair bf = test::random_beamformers(
            4, cfg.p_tmax * (0.2 + 0.05 * static_cast<double>(seed % 10)),
            500 + seed);
        const double lo = surrogate_objective(ch, co, aux, bf, cfg);
        const double hi = weighted_objective(ch, co, bf, cfg);
        CHECK(lo <= hi + 1e-9 * std::max(1.0, std::abs(hi)));
    }
}

TEST_CASE("vector equalizers match a dense MMSE solve") {
    const SystemConfig cfg = test::unit_config(8, 4);
    const ChannelSet ch = test::random_channels(8, 4, 91);
    const StarCoefficients co = test::random_coeffs(cfg, 92);
    const BeamformerPair bf = test::random_beamformers(4, cfg.p_tmax, 93);

    const AuxVars aux = update_auxiliaries(ch, co, bf, cfg);
    const SurfacePair sp = build_surface_matrices(co);
    const Eigen::VectorXcd x_c = ch.h_br * bf.w_c;
    const double l = ch.l_re;

    // u2: receiver for the public stream seen through the reflection side
    {
        const Eigen::VectorXcd x = sp.r.cwiseProduct(x_c);
        const Eigen::MatrixXcd cov =
            cfg.sigma2_e * Eigen::MatrixXcd::Identity(8, 8) +
            l * x * x.adjoint();
        const Eigen::VectorXcd dense = cov.inverse() * (std::sqrt(l) * x);
        CHECK((aux.u2 - dense).norm() <= 1e-10 * std::max(1.0, dense.norm()));
    }
    // u3: transmission-side analog
    {
        const Eigen::VectorXcd x = sp.t.cwiseProduct(x_c);
        const Eigen::MatrixXcd cov =
            cfg.sigma2_e * Eigen::MatrixXcd::Identity(8, 8) +
            l * x * x.adjoint();
        const Eigen::VectorXcd dense = cov.inverse() * (std::sqrt(l) * x);
        CHECK((aux.u3 - dense).norm() <= 1e-10 * std::max(1.0, dense.norm()));
    }
    CHECK(aux.w1 > 0.0);
    CHECK(aux.wc > 0.0);
    CHECK(aux.w4 > 0.0);
}

TEST_CASE("normal-equation blocks are hermitian, definite and reject bad multipliers") {
    const SystemConfig cfg = test::unit_config(8, 4);
    const ChannelSet ch = test::random_channels(8, 4, 15);
    const StarCoefficients co = test::random_coeffs(cfg, 16);
    const BeamformerPair bf = test::random_beamformers(4, cfg.p_tmax, 17);
    const AuxVars aux = update_auxiliaries(ch, co, bf, cfg);

    CHECK_THROWS_AS(assemble_normal_equations(ch, co, aux, -1.0, cfg),
                    std::invalid_argument);

    const NormalEquations ne = assemble_normal_equations(ch, co, aux, 0.5, cfg);
    CHECK((ne.g1 - ne.g1.adjoint()).norm() <= 1e-12 * ne.g1.norm());
    CHECK((ne.g1_hat - ne.g1_hat.adjoint()).norm() <=
          1e-12 * ne.g1_hat.norm());
    CHECK(Eigen::LLT<Eigen::MatrixXcd>(ne.g1).info() == Eigen::Success);
    CHECK(Eigen::LLT<Eigen::MatrixXcd>(ne.g1_hat).info() == Eigen::Success);
}

TEST_CASE("raising the multiplier never raises the transmit power") {
    const SystemConfig cfg = test::unit_config(8, 4);
    const ChannelSet ch = test::random_channels(8, 4, 21);
    const StarCoefficients co = test::random_coeffs(cfg, 22);
    const BeamformerPair bf = test::random_beamformers(4, cfg.p_tmax, 23);
    const AuxVars aux = update_auxiliaries(ch, co, bf, cfg);

    double prev = optimal_beamformers(ch, co, aux, 1e-3, cfg).power();
    for (double varrho : {1e-2, 1e-1, 1.0, 10.0}) {
        const double p = optimal_beamformers(ch, co, aux, varrho, cfg).power();
        CHECK(p <= prev * (1.0 + 1e-12));
        prev = p;
    }
}

TEST_CASE("active solve respects the budget and never regresses") {
    const SystemConfig cfg = test::unit_config(8, 4);
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const ChannelSet ch = test::random_channels(8, 4, 200 + seed);
        const StarCoefficients co = test::random_coeffs(cfg, 210 + seed);
        const BeamformerPair bf0 =
            test::random_beamformers(4, cfg.p_tmax, 220 + seed);

        const ActiveResult ar = solve_active(ch, co, bf0, cfg);
        CHECK(ar.bf.power() <= cfg.p_tmax * (1.0 + 1e-6));
        CHECK(ar.dual.varrho >= 0.0);

        const AuxVars aux = update_auxiliaries(ch, co, bf0, cfg);
        const double before = surrogate_objective(ch, co, aux, bf0, cfg);
        const double after = surrogate_objective(ch, co, aux, ar.bf, cfg);
        CHECK(after >= before - 1e-9 * std::max(1.0, std::abs(before)));

        // minorization turns surrogate ascent into true ascent
        CHECK(weighted_objective(ch, co, ar.bf, cfg) >=
              weighted_objective(ch, co, bf0, cfg) -
                  1e-9 * std::max(1.0, std::abs(before)));
    }
}

TEST_CASE("a slack power budget keeps the multiplier at zero") {
    SystemConfig cfg = test::unit_config(8, 4);
    cfg.p_tmax = 1e6;
    const ChannelSet ch = test::random_channels(8, 4, 31);
    const StarCoefficients co = test::random_coeffs(cfg, 32);
    const BeamformerPair bf0 = test::random_beamformers(4, 1.0, 33);

    const ActiveResult ar = solve_active(ch, co, bf0, cfg);
    CHECK(ar.dual.varrho == 0.0);
    CHECK(ar.converged);
    CHECK(ar.bf.power() <= cfg.p_tmax);
}

TEST_CASE("a binding budget is met to the dual tolerance") {
    SystemConfig cfg = test::unit_config(8, 4);
    cfg.p_tmax = 0.5;
    const ChannelSet ch = test::random_channels(8, 4, 41);
    const StarCoefficients co = test::random_coeffs(cfg, 42);
    const BeamformerPair bf0 = test::random_beamformers(4, 0.5, 43);

    const ActiveResult ar = solve_active(ch, co, bf0, cfg);
    CHECK(ar.bf.power() <= cfg.p_tmax * (1.0 + 1e-9));
    CHECK(ar.bf.power() >= cfg.p_tmax * 0.9);
    CHECK(ar.dual.varrho > 0.0);
    CHECK(ar.converged);
}
