#pragma once

#include <Eigen/Dense>

#include "starpls/channel.hpp"
#include "starpls/config.hpp"
#include "starpls/rates.hpp"

namespace starpls {

// MMSE auxiliaries frozen at one design point. u1/uc are scalar equalizers
// for the two served users; u2/u3 are vector equalizers tied to the public
// stream as seen in the reflection/transmission regions. The w* fields are
// the positive MMSE weights (inverse error covariances).
struct AuxVars {
    std::complex<double> u1;
    std::complex<double> uc;
    Eigen::VectorXcd u2;
    Eigen::VectorXcd u3;
    double w1 = 1.0;
    double w2 = 1.0;
    double w3 = 1.0;
    double w4 = 1.0;
    double w5 = 1.0;
    double wc = 1.0;
};

// Dual multiplier bookkeeping for the power constraint.
struct DualState {
    double varrho = 0.0;
    double step = 0.0;
    int iterations = 0;
};

// Quadratic-form blocks of the two decoupled beamformer systems:
// g1 * w_b = g2 and g1_hat * w_c = g2_hat.
struct NormalEquations {
    Eigen::MatrixXcd g1;
    Eigen::MatrixXcd g1_hat;
    Eigen::VectorXcd g2;
    Eigen::VectorXcd g2_hat;
};

// The six log terms (natural log) the weighted objective decomposes into:
// served-user terms f1/fc and the four eavesdropper-side terms. The weighted
// objective equals
//   (omega1*(f1 + p1*(f2+f4) + p0*(f3+f5)) + omega2*fc) / ln 2.
struct MmseTerms {
    double f1 = 0.0;
    double f2 = 0.0;
    double f3 = 0.0;
    double f4 = 0.0;
    double f5 = 0.0;
    double fc = 0.0;
};

// Direct evaluation of the log terms at a design point.
MmseTerms direct_log_terms(const ChannelSet& ch, const StarCoefficients& coeffs,
                           const BeamformerPair& bf, const SystemConfig& cfg);

// MMSE minorants ln(w) - w*E + 1 of the same terms under frozen auxiliaries;
// each is tight when aux came from this bf.
MmseTerms surrogate_log_terms(const ChannelSet& ch,
                              const StarCoefficients& coeffs,
                              const AuxVars& aux, const BeamformerPair& bf,
                              const SystemConfig& cfg);

AuxVars update_auxiliaries(const ChannelSet& ch, const StarCoefficients& coeffs,
                           const BeamformerPair& bf, const SystemConfig& cfg);

NormalEquations assemble_normal_equations(const ChannelSet& ch,
                                          const StarCoefficients& coeffs,
                                          const AuxVars& aux, double varrho,
                                          const SystemConfig& cfg);

// Stationary beamformers of the power-penalized surrogate at multiplier
// varrho >= 0.
BeamformerPair optimal_beamformers(const ChannelSet& ch,
                                   const StarCoefficients& coeffs,
                                   const AuxVars& aux, double varrho,
                                   const SystemConfig& cfg);

// Concave quadratic minorant of weighted_objective at the expansion point
// that produced aux; tight there, below it everywhere else. Bits/s/Hz.
double surrogate_objective(const ChannelSet& ch, const StarCoefficients& coeffs,
                           const AuxVars& aux, const BeamformerPair& bf,
                           const SystemConfig& cfg);

double lagrangian_value(const ChannelSet& ch, const StarCoefficients& coeffs,
                        const AuxVars& aux, const BeamformerPair& bf,
                        double varrho, const SystemConfig& cfg);

struct ActiveResult {
    BeamformerPair bf;
    DualState dual;
    int iterations = 0;
    bool converged = false;
};

// One inner active-beamforming solve: freeze auxiliaries at bf_init, then
// find the dual multiplier enforcing the power budget (subgradient steps with
// a bisection safeguard on a maintained bracket). Never returns an iterate
// worse than bf_init under the frozen surrogate.
ActiveResult solve_active(const ChannelSet& ch, const StarCoefficients& coeffs,
                          const BeamformerPair& bf_init,
                          const SystemConfig& cfg);

}  // namespace starpls
