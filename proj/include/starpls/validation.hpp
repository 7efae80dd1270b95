#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <vector>

#include "starpls/channel.hpp"
#include "starpls/config.hpp"
#include "starpls/optimizer.hpp"
#include "starpls/rates.hpp"
#include "starpls/rng.hpp"

namespace starpls {

struct McEstimate {
    double mean = 0.0;
    double std_error = 0.0;  // sample std / sqrt(n_samples)
    int n_samples = 0;
};

// Monte-Carlo estimate of the expected eavesdropping rate: per draw the
// region is Bernoulli(p1) and the fading vector is redrawn. Draw i uses
// substream i, so the estimate is independent of evaluation order.
McEstimate empirical_avg_eaves_rate(const ChannelSet& ch,
                                    const StarCoefficients& coeffs,
                                    const BeamformerPair& bf,
                                    const SystemConfig& cfg, int n,
                                    const RngStream& rng);

struct AsymptoticErrorRow {
    int m = 0;
    double median_rel_error = 0.0;
};

// Relative gap between the Monte-Carlo eavesdropping rate and its
// large-system surrogate, across surface sizes. The gap should shrink as m
// grows.
std::vector<AsymptoticErrorRow> asymptotic_error_curve(
    const SystemConfig& base, const std::vector<int>& m_list, int n,
    const std::vector<std::uint64_t>& seeds);

struct WiretapRow {
    int region_b = 0;  // 1 = reflection side, 0 = transmission side
    int draw = 0;
    double rate_no_security = 0.0;
    double rate_secure = 0.0;
};

struct WiretapResult {
    std::vector<WiretapRow> rows;
    double mean_no_security_r = 0.0;
    double mean_secure_r = 0.0;
    double mean_no_security_t = 0.0;
    double mean_secure_t = 0.0;
    OptResult secure;
    OptResult no_security;
};

// Paired comparison of the eavesdropper's instantaneous rate under the full
// secure design versus a reference design optimized with the eavesdropper's
// path gain driven to zero (same weights, same channels otherwise). Both
// designs are evaluated against the true eavesdropper link on shared
// location draws, n_channels per region.
WiretapResult wiretap_suppression(const ChannelSet& ch, const SystemConfig& cfg,
                                  int n_channels, const RngStream& rng);

// Central finite differences, step h per coordinate.
Eigen::VectorXd finite_diff_gradient(
    const std::function<double(const Eigen::VectorXd&)>& f,
    const Eigen::VectorXd& x, double h);

}  // namespace starpls
