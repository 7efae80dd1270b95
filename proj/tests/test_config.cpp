#include <stdexcept>

#include "doctest.h"
#include "starpls/config.hpp"

using namespace starpls;

TEST_CASE("defaults validate and derived sizes follow the controls") {
    SystemConfig cfg;
    CHECK_NOTHROW(cfg.validate());
    CHECK(cfg.phase_levels() == 4);
    CHECK(cfg.p0() == 0.5);
    CHECK(cfg.ceo_population() == 192);  // 4 * 3 * 16
    CHECK(cfg.ceo_elite() == 19);        // round(0.1 * 192)

    cfg.lambda_bits = 3;
    CHECK(cfg.phase_levels() == 8);

    cfg.m = 1;
    cfg.ceo_omega = 4.0;
    cfg.ceo_eta = 0.01;
    CHECK(cfg.ceo_elite() == 1);  // floor is one elite
}

TEST_CASE("validate rejects out-of-domain fields") {
    const SystemConfig base;
    auto broken = [&](auto&& mut) {
        SystemConfig cfg = base;
        mut(cfg);
        return cfg;
    };
    CHECK_THROWS_AS(broken([](SystemConfig& c) { c.n_t = 0; }).validate(),
                    std::invalid_argument);
    CHECK_THROWS_AS(broken([](SystemConfig& c) { c.m = 0; }).validate(),
                    std::invalid_argument);
    CHECK_THROWS_AS(broken([](SystemConfig& c) { c.lambda_bits = 0; }).validate(),
                    std::invalid_argument);
    CHECK_THROWS_AS(broken([](SystemConfig& c) { c.p_tmax = 0.0; }).validate(),
                    std::invalid_argument);
    CHECK_THROWS_AS(broken([](SystemConfig& c) { c.sigma2_e = -1.0; }).validate(),
                    std::invalid_argument);
    CHECK_THROWS_AS(broken([](SystemConfig& c) { c.p1 = 1.5; }).validate(),
                    std::invalid_argument);
    CHECK_THROWS_AS(broken([](SystemConfig& c) { c.omega1 = 0.0; }).validate(),
                    std::invalid_argument);
    CHECK_THROWS_AS(broken([](SystemConfig& c) { c.omega2 = 1.5; }).validate(),
                    std::invalid_argument);
    CHECK_THROWS_AS(broken([](SystemConfig& c) { c.ceo_omega = 3.0; }).validate(),
                    std::invalid_argument);
    CHECK_THROWS_AS(broken([](SystemConfig& c) { c.ceo_eta = 1.0; }).validate(),
                    std::invalid_argument);
    CHECK_THROWS_AS(broken([](SystemConfig& c) { c.ceo_chi = 0.0; }).validate(),
                    std::invalid_argument);
    CHECK_THROWS_AS(broken([](SystemConfig& c) { c.max_outer = 0; }).validate(),
                    std::invalid_argument);
}

TEST_CASE("dB helpers") {
    CHECK(db_to_linear(0.0) == doctest::Approx(1.0));
    CHECK(db_to_linear(10.0) == doctest::Approx(10.0));
    CHECK(dbm_to_watts(30.0) == doctest::Approx(1.0));
    CHECK(dbm_to_watts(-110.0) == doctest::Approx(1e-14));
    CHECK(dbm_to_watts(0.0) == doctest::Approx(1e-3));
}

TEST_CASE("config hash is stable and sensitive to every knob it covers") {
    SystemConfig a;
    const std::string ha = config_hash(a);
    CHECK(ha.size() == 16);
    CHECK(config_hash(a) == ha);

    SystemConfig b = a;
    b.m = 17;
    CHECK(config_hash(b) != ha);

    SystemConfig c = a;
    c.p_tmax = 1.0000001;
    CHECK(config_hash(c) != ha);
}
