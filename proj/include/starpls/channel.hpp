#pragma once

#include <Eigen/Dense>

#include "starpls/config.hpp"
#include "starpls/rng.hpp"

namespace starpls {

// One realization of the static links. Entries already include the distance
// path loss; the eavesdropper link is kept as its path gain only because its
// small-scale part is redrawn per location sample.
struct ChannelSet {
    Eigen::MatrixXcd h_br;  // BS to surface, M x N_t
    Eigen::VectorXcd h_rb;  // surface to covert user, M
    Eigen::VectorXcd h_rc;  // surface to public user, M
    double l_re = 0.0;      // path gain of the surface-eavesdropper link
};

// rho * d^(-alpha). Throws std::domain_error for non-positive arguments.
double path_loss(double rho, double d, double alpha);

// Rayleigh links with i.i.d. unit-variance small-scale fading, scaled by the
// square-root path gains from cfg. Deterministic in (cfg, rng).
ChannelSet generate_channels(const SystemConfig& cfg, const RngStream& rng);

// Unit-variance small-scale vector for one eavesdropper location draw.
Eigen::VectorXcd sample_eve_smallscale(int m, Xoshiro256ss& eng);
Eigen::VectorXcd sample_eve_smallscale(int m, const RngStream& rng);

}  // namespace starpls
