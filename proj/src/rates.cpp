#include "starpls/rates.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

namespace starpls {

namespace {

constexpr double kInvLn2 = 1.4426950408889634074;
constexpr double kTwoPi = 6.2831853071795864769;

void require(bool ok, const char* invariant) {
    if (!ok) {
        throw std::invalid_argument(
            std::string("surface coefficients invariant violated: ") + invariant);
    }
}

SurfacePair build_surfaces_unchecked(const StarCoefficients& coeffs) {
    const Eigen::Index m = coeffs.beta_r.size();
    const int q = coeffs.q;
    std::vector<std::complex<double>> phasor(static_cast<std::size_t>(q) + 1);
    for (int k = 1; k <= q; ++k)
        phasor[k] = std::polar(1.0, kTwoPi * static_cast<double>(k % q) / q);

    SurfacePair s;
    s.r.resize(m);
    s.t.resize(m);
    for (Eigen::Index i = 0; i < m; ++i) {
        s.r(i) = std::sqrt(coeffs.beta_r(i)) * phasor[coeffs.phase_idx_r(i)];
        s.t(i) = std::sqrt(1.0 - coeffs.beta_r(i)) * phasor[coeffs.phase_idx_t(i)];
    }
    return s;
}

double log2_one_plus(double x) { return std::log1p(x) * kInvLn2; }

}  // namespace

void StarCoefficients::validate() const {
    require(q >= 2, "q >= 2 phase levels");
    const Eigen::Index m = beta_r.size();
    require(m >= 1, "at least one element");
    require(phase_idx_r.size() == m && phase_idx_t.size() == m,
            "phase index vectors sized like beta_r");
    for (Eigen::Index i = 0; i < m; ++i) {
        require(beta_r(i) > 0.0 && beta_r(i) <= 1.0, "beta_r in (0, 1]");
        require(phase_idx_r(i) >= 1 && phase_idx_r(i) <= q,
                "phase_idx_r in [1, q]");
        require(phase_idx_t(i) >= 1 && phase_idx_t(i) <= q,
                "phase_idx_t in [1, q]");
    }
}

SurfacePair build_surface_matrices(const StarCoefficients& coeffs) {
    coeffs.validate();
    return build_surfaces_unchecked(coeffs);
}

namespace detail {

RateWorkspace::RateWorkspace(const ChannelSet& ch,
                             const StarCoefficients& coeffs,
                             const BeamformerPair& bf) {
    SurfacePair s = build_surfaces_unchecked(coeffs);
    u_r = std::move(s.r);
    u_t = std::move(s.t);
    x_b = ch.h_br * bf.w_b;
    x_c = ch.h_br * bf.w_c;
}

double rate_bob_ws(const RateWorkspace& ws, const ChannelSet& ch,
                   double sigma2_b) {
    const std::complex<double> sig =
        ch.h_rb.conjugate().cwiseProduct(ws.u_r).cwiseProduct(ws.x_b).sum();
    const std::complex<double> leak =
        ch.h_rb.conjugate().cwiseProduct(ws.u_r).cwiseProduct(ws.x_c).sum();
    return log2_one_plus(std::norm(sig) / (std::norm(leak) + sigma2_b));
}

double rate_carol_ws(const RateWorkspace& ws, const ChannelSet& ch,
                     double sigma2_c) {
    const std::complex<double> sig =
        ch.h_rc.conjugate().cwiseProduct(ws.u_t).cwiseProduct(ws.x_c).sum();
    const std::complex<double> leak =
        ch.h_rc.conjugate().cwiseProduct(ws.u_t).cwiseProduct(ws.x_b).sum();
    return log2_one_plus(std::norm(sig) / (std::norm(leak) + sigma2_c));
}

double penalty_ws(const RateWorkspace& ws, const StarCoefficients& coeffs,
                  const ChannelSet& ch, const SystemConfig& cfg) {
    const Eigen::ArrayXd pb = ws.x_b.array().abs2();
    const Eigen::ArrayXd pc = ws.x_c.array().abs2();
    const Eigen::ArrayXd br = coeffs.beta_r.array();
    const double l = ch.l_re;
    const double nr_b = (br * pb).sum();
    const double nr_c = (br * pc).sum();
    const double nt_b = ((1.0 - br) * pb).sum();
    const double nt_c = ((1.0 - br) * pc).sum();
    const double term_r = log2_one_plus(l * nr_b / (l * nr_c + cfg.sigma2_e));
    const double term_t = log2_one_plus(l * nt_b / (l * nt_c + cfg.sigma2_e));
    return cfg.p1 * term_r + cfg.p0() * term_t;
}

double weighted_objective_ws(const RateWorkspace& ws,
                             const StarCoefficients& coeffs,
                             const ChannelSet& ch, const SystemConfig& cfg) {
    const double avg_sec = rate_bob_ws(ws, ch, cfg.sigma2_b) -
                           penalty_ws(ws, coeffs, ch, cfg);
    return cfg.omega1 * avg_sec + cfg.omega2 * rate_carol_ws(ws, ch, cfg.sigma2_c);
}

}  // namespace detail

double rate_bob(const ChannelSet& ch, const StarCoefficients& coeffs,
                const BeamformerPair& bf, double sigma2_b) {
    detail::RateWorkspace ws(ch, coeffs, bf);
    return detail::rate_bob_ws(ws, ch, sigma2_b);
}

double rate_carol(const ChannelSet& ch, const StarCoefficients& coeffs,
                  const BeamformerPair& bf, double sigma2_c) {
    detail::RateWorkspace ws(ch, coeffs, bf);
    return detail::rate_carol_ws(ws, ch, sigma2_c);
}

double eaves_rate_instant(const Eigen::VectorXcd& h_re_smallscale, double l_re,
                          int b, const ChannelSet& ch,
                          const StarCoefficients& coeffs,
                          const BeamformerPair& bf, double sigma2_e) {
    if (h_re_smallscale.size() != ch.h_br.rows()) {
        throw std::invalid_argument(
            "eaves_rate_instant: fading vector length must match element count");
    }
    detail::RateWorkspace ws(ch, coeffs, bf);
    const Eigen::VectorXcd& u = (b != 0) ? ws.u_r : ws.u_t;
    const double sl = std::sqrt(l_re);
    const std::complex<double> sig =
        sl * h_re_smallscale.conjugate().cwiseProduct(u).cwiseProduct(ws.x_b).sum();
    const std::complex<double> leak =
        sl * h_re_smallscale.conjugate().cwiseProduct(u).cwiseProduct(ws.x_c).sum();
    return log2_one_plus(std::norm(sig) / (std::norm(leak) + sigma2_e));
}

double security_rate_instant(double r_b, double r_eb) {
    const double d = r_b - r_eb;
    return d > 0.0 ? d : 0.0;
}

double asymptotic_eaves_penalty(const ChannelSet& ch,
                                const StarCoefficients& coeffs,
                                const BeamformerPair& bf,
                                const SystemConfig& cfg) {
    detail::RateWorkspace ws(ch, coeffs, bf);
    return detail::penalty_ws(ws, coeffs, ch, cfg);
}

double avg_security_rate_asymptotic(const ChannelSet& ch,
                                    const StarCoefficients& coeffs,
                                    const BeamformerPair& bf,
                                    const SystemConfig& cfg) {
    detail::RateWorkspace ws(ch, coeffs, bf);
    return detail::rate_bob_ws(ws, ch, cfg.sigma2_b) -
           detail::penalty_ws(ws, coeffs, ch, cfg);
}

double weighted_objective(const ChannelSet& ch, const StarCoefficients& coeffs,
                          const BeamformerPair& bf, const SystemConfig& cfg) {
    return cfg.omega1 * avg_security_rate_asymptotic(ch, coeffs, bf, cfg) +
           cfg.omega2 * rate_carol(ch, coeffs, bf, cfg.sigma2_c);
}

RateReport make_rate_report(const ChannelSet& ch, const StarCoefficients& coeffs,
                            const BeamformerPair& bf, const SystemConfig& cfg) {
    detail::RateWorkspace ws(ch, coeffs, bf);
    RateReport rep;
    rep.r_b = detail::rate_bob_ws(ws, ch, cfg.sigma2_b);
    rep.r_c = detail::rate_carol_ws(ws, ch, cfg.sigma2_c);
    const double avg_sec = rep.r_b - detail::penalty_ws(ws, coeffs, ch, cfg);
    rep.r_sec_asymptotic = avg_sec > 0.0 ? avg_sec : 0.0;
    rep.objective = cfg.omega1 * avg_sec + cfg.omega2 * rep.r_c;
    return rep;
}

}  // namespace starpls
