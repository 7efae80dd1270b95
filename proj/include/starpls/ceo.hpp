#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "starpls/channel.hpp"
#include "starpls/config.hpp"
#include "starpls/rates.hpp"
#include "starpls/rng.hpp"

namespace starpls {

// Sampling distribution for surface candidates: one categorical row per phase
// shifter (first M rows reflection, next M transmission) and one truncated
// Gaussian per element amplitude.
struct TiltingParams {
    Eigen::MatrixXd p;      // 2M x Q, row-stochastic
    Eigen::VectorXd mu;     // M
    Eigen::VectorXd sigma;  // M
};

struct Candidate {
    StarCoefficients coeffs;
    double objective = 0.0;
};

// Uniform phase pmfs, mu = 1/2, sigma = 1.
TiltingParams init_tilting(int m, int q);

// Inverse-CDF categorical draw; returns a 1-based phase index.
int sample_phase(const Eigen::RowVectorXd& pmf, Xoshiro256ss& eng);

// Truncated Gaussian on (0, 1]: up to 64 proposals, then a uniform fallback.
double sample_amplitude(double mu, double sigma, Xoshiro256ss& eng);

// Draws a full surface configuration and scores it with the weighted
// objective at the given beamformers.
Candidate sample_candidate(const TiltingParams& params, const ChannelSet& ch,
                           const BeamformerPair& bf, const SystemConfig& cfg,
                           Xoshiro256ss& eng);

// Maximum-likelihood refit on the top k_elite of a descending-ranked
// population: phase rows become elite frequencies, amplitude moments become
// elite mean / population standard deviation.
TiltingParams update_tilting(const std::vector<Candidate>& ranked, int k_elite);

// params_old + chi * (params_fresh - params_old), with a row-sum guard.
TiltingParams smooth(const TiltingParams& fresh, const TiltingParams& old_params,
                     double chi);

struct PassiveResult {
    StarCoefficients coeffs;
    double objective = 0.0;
    std::vector<double> trajectory;  // best-so-far per iteration
    int iterations = 0;
};

// Applied to every candidate before scoring; used to restrict the search to
// sub-families such as reflect-only/transmit-only element splits.
using CoeffProjection = std::function<void(StarCoefficients&)>;

// Cross-entropy search over discrete phases and continuous amplitudes at
// fixed beamformers. The incumbent is injected into the first population, so
// the result never scores below coeffs_init.
PassiveResult solve_passive(const ChannelSet& ch, const BeamformerPair& bf,
                            const StarCoefficients& coeffs_init,
                            const SystemConfig& cfg, const RngStream& rng,
                            const CoeffProjection& projection = {});

}  // namespace starpls
