#pragma once

#include <Eigen/Dense>

#include "starpls/channel.hpp"
#include "starpls/config.hpp"

namespace starpls {

// Active beamformers for the covert stream (w_b) and the public stream (w_c).
struct BeamformerPair {
    Eigen::VectorXcd w_b;
    Eigen::VectorXcd w_c;

    double power() const { return w_b.squaredNorm() + w_c.squaredNorm(); }
};

// Energy-splitting surface state. Element m reflects with amplitude
// sqrt(beta_r[m]) and transmits with sqrt(1 - beta_r[m]); phases are indices
// into the uniform grid {k * 2pi / q : k = 1..q}.
struct StarCoefficients {
    Eigen::VectorXd beta_r;
    Eigen::VectorXi phase_idx_r;
    Eigen::VectorXi phase_idx_t;
    int q = 0;

    Eigen::VectorXd beta_t() const {
        return Eigen::VectorXd::Ones(beta_r.size()) - beta_r;
    }

    // Throws std::invalid_argument naming the violated invariant.
    void validate() const;
};

// Diagonals of the reflection and transmission surface responses.
struct SurfacePair {
    Eigen::VectorXcd r;
    Eigen::VectorXcd t;
};

SurfacePair build_surface_matrices(const StarCoefficients& coeffs);

// Per-realization rates, bits/s/Hz.
double rate_bob(const ChannelSet& ch, const StarCoefficients& coeffs,
                const BeamformerPair& bf, double sigma2_b);
double rate_carol(const ChannelSet& ch, const StarCoefficients& coeffs,
                  const BeamformerPair& bf, double sigma2_c);

// Eavesdropping rate for one location draw; b = 1 places the eavesdropper in
// the reflection region, b = 0 in the transmission region. h_re_smallscale is
// the unit-variance fading vector, l_re the link path gain.
double eaves_rate_instant(const Eigen::VectorXcd& h_re_smallscale, double l_re,
                          int b, const ChannelSet& ch,
                          const StarCoefficients& coeffs,
                          const BeamformerPair& bf, double sigma2_e);

// [r_b - r_eb]^+
double security_rate_instant(double r_b, double r_eb);

// Large-system stand-in for the expected eavesdropping rate: the mixture over
// the two regions of log2(1 + l*||U x_b||^2 / (l*||U x_c||^2 + sigma2_e)).
double asymptotic_eaves_penalty(const ChannelSet& ch,
                                const StarCoefficients& coeffs,
                                const BeamformerPair& bf,
                                const SystemConfig& cfg);

// rate_bob minus the asymptotic penalty. Deliberately unclamped so the
// optimizer sees a smooth objective; clamp at reporting time.
double avg_security_rate_asymptotic(const ChannelSet& ch,
                                    const StarCoefficients& coeffs,
                                    const BeamformerPair& bf,
                                    const SystemConfig& cfg);

// omega1 * avg_security_rate_asymptotic + omega2 * rate_carol. This is the
// quantity every solver maximizes.
double weighted_objective(const ChannelSet& ch, const StarCoefficients& coeffs,
                          const BeamformerPair& bf, const SystemConfig& cfg);

struct RateReport {
    double r_b = 0.0;
    double r_c = 0.0;
    double r_sec_asymptotic = 0.0;  // clamped at zero
    double objective = 0.0;
};

RateReport make_rate_report(const ChannelSet& ch, const StarCoefficients& coeffs,
                            const BeamformerPair& bf, const SystemConfig& cfg);

namespace detail {

// Quantities shared by every rate expression at a fixed design point. The
// public functions evaluate through this struct so that fused evaluations
// (e.g. the cross-entropy sampler) reproduce their results bit for bit.
struct RateWorkspace {
    Eigen::VectorXcd u_r, u_t;  // surface diagonals
    Eigen::VectorXcd x_b, x_c;  // h_br * w_b, h_br * w_c

    RateWorkspace(const ChannelSet& ch, const StarCoefficients& coeffs,
                  const BeamformerPair& bf);
};

double rate_bob_ws(const RateWorkspace& ws, const ChannelSet& ch,
                   double sigma2_b);
double rate_carol_ws(const RateWorkspace& ws, const ChannelSet& ch,
                     double sigma2_c);
double penalty_ws(const RateWorkspace& ws, const StarCoefficients& coeffs,
                  const ChannelSet& ch, const SystemConfig& cfg);
double weighted_objective_ws(const RateWorkspace& ws,
                             const StarCoefficients& coeffs,
                             const ChannelSet& ch, const SystemConfig& cfg);

}  // namespace detail

}  // namespace starpls
