#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "starpls/channel.hpp"

using namespace starpls;

TEST_CASE("path loss follows rho * d^-alpha") {
    CHECK(path_loss(0.01, 400.0, 2.6) ==
          doctest::Approx(1.71650084891580804e-09).epsilon(1e-12));
    CHECK(path_loss(0.01, 75.0, 2.6) ==
          doctest::Approx(1.33303243039063036e-07).epsilon(1e-12));
    CHECK(path_loss(1.0, 1.0, 3.7) == doctest::Approx(1.0));

    CHECK_THROWS_AS(path_loss(0.0, 10.0, 2.0), std::domain_error);
    CHECK_THROWS_AS(path_loss(0.01, 0.0, 2.0), std::domain_error);
    CHECK_THROWS_AS(path_loss(0.01, -1.0, 2.0), std::domain_error);
}

TEST_CASE("generated channels have the right shape, scale and seed behavior") {
    SystemConfig cfg;
    cfg.m = 256;
    cfg.n_t = 8;

    const ChannelSet ch = generate_channels(cfg, RngStream{3, 1});
    CHECK(ch.h_br.rows() == 256);
    CHECK(ch.h_br.cols() == 8);
    CHECK(ch.h_rb.size() == 256);
    CHECK(ch.h_rc.size() == 256);
    CHECK(ch.l_re ==
          doctest::Approx(path_loss(cfg.rho, cfg.d_re, cfg.alpha)).epsilon(1e-15));

    // mean squared magnitudes concentrate on the link path gains
    const double l_br = path_loss(cfg.rho, cfg.d_br, cfg.alpha);
    const double l_rb = path_loss(cfg.rho, cfg.d_rb, cfg.alpha);
    CHECK(ch.h_br.squaredNorm() / (256.0 * 8.0) ==
          doctest::Approx(l_br).epsilon(0.1));
    CHECK(ch.h_rb.squaredNorm() / 256.0 == doctest::Approx(l_rb).epsilon(0.2));

    const ChannelSet again = generate_channels(cfg, RngStream{3, 1});
    CHECK((ch.h_br - again.h_br).squaredNorm() == 0.0);
    CHECK((ch.h_rb - again.h_rb).squaredNorm() == 0.0);
    CHECK((ch.h_rc - again.h_rc).squaredNorm() == 0.0);

    const ChannelSet other = generate_channels(cfg, RngStream{4, 1});
    CHECK((ch.h_br - other.h_br).squaredNorm() != 0.0);
}

TEST_CASE("eavesdropper fading draws are unit variance and stream-addressed") {
    const RngStream rng{9, 44};
    const Eigen::VectorXcd a = sample_eve_smallscale(64, rng);
    const Eigen::VectorXcd b = sample_eve_smallscale(64, rng);
    CHECK(a.size() == 64);
    CHECK((a - b).squaredNorm() == 0.0);

    Xoshiro256ss eng(rng);
    const Eigen::VectorXcd c = sample_eve_smallscale(64, eng);
    CHECK((a - c).squaredNorm() == 0.0);

    double pow_sum = 0.0;
    const int reps = 2000;
    for (int i = 0; i < reps; ++i)
        pow_sum += sample_eve_smallscale(64, rng.substream(i)).squaredNorm();
    CHECK(pow_sum / (64.0 * reps) == doctest::Approx(1.0).epsilon(0.02));
}
