#pragma once

#include <Eigen/Dense>
#include <string>
#include <utility>
#include <vector>

#include "starpls/active.hpp"
#include "starpls/ceo.hpp"
#include "starpls/channel.hpp"
#include "starpls/config.hpp"
#include "starpls/rates.hpp"
#include "starpls/rng.hpp"

namespace starpls {

enum class Scheme { proposed, zf, conventional_ris };

const char* scheme_name(Scheme s);
Scheme scheme_from_name(const std::string& name);

struct OptResult {
    BeamformerPair bf;
    StarCoefficients coeffs;
    RateReport report;
    std::vector<double> trajectory;  // weighted objective, initial point first
    int outer_iterations = 0;
    bool converged = false;
};

// Uniform random phases and amplitudes; the standard starting point.
StarCoefficients random_feasible_coefficients(const SystemConfig& cfg,
                                              const RngStream& rng);

// Matched-filter directions toward the two users, equal power split.
BeamformerPair matched_equal_power_init(const ChannelSet& ch,
                                        const StarCoefficients& coeffs,
                                        const SystemConfig& cfg);

// Alternating optimization of beamformers (surrogate ascent with a power
// dual) and surface coefficients (cross-entropy search).
OptResult optimize(const ChannelSet& ch, const SystemConfig& cfg,
                   const RngStream& rng);

// Zero-forcing baseline: each stream is nulled at the other user's effective
// channel. Throws std::runtime_error when the 2-row effective channel is
// rank deficient (needs n_t >= 2).
BeamformerPair zf_beamformers(const ChannelSet& ch,
                              const StarCoefficients& coeffs, double p_b,
                              double p_c);

// Best power split for the ZF directions over the grid
// {k/100 * p_tmax : k = 1..99}, by exhaustive objective evaluation.
std::pair<double, double> zf_power_split(const ChannelSet& ch,
                                         const StarCoefficients& coeffs,
                                         const SystemConfig& cfg);

// Restricts a surface to the conventional-RIS family: the first half of the
// elements reflect (beta_r ~ 1), the second half transmit (beta_r ~ 0).
// Requires an even element count; idempotent.
StarCoefficients conventional_ris_project(StarCoefficients coeffs);

// Nearest grid index (1-based) per phase under the plain absolute-difference
// metric; ties resolve to the smaller index.
Eigen::VectorXi discretize_phases(const Eigen::VectorXd& phases, int q);

OptResult optimize_zf(const ChannelSet& ch, const SystemConfig& cfg,
                      const RngStream& rng);
OptResult optimize_conventional_ris(const ChannelSet& ch,
                                    const SystemConfig& cfg,
                                    const RngStream& rng);

OptResult run_scheme(Scheme scheme, const ChannelSet& ch,
                     const SystemConfig& cfg, const RngStream& rng);

}  // namespace starpls
