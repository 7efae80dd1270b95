#include "starpls/optimizer.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace starpls {

namespace {

constexpr double kTwoPi = 6.2831853071795864769;
constexpr std::uint64_t kSubInitCoeffs = 11;
constexpr std::uint64_t kSubPassive = 13;

enum class ActiveKind { surrogate, zero_forcing };

BeamformerPair zf_design(const ChannelSet& ch, const StarCoefficients& coeffs,
                         const SystemConfig& cfg) {
    const auto split = zf_power_split(ch, coeffs, cfg);
    return zf_beamformers(ch, coeffs, split.first, split.second);
}

OptResult optimize_impl(const ChannelSet& ch, const SystemConfig& cfg,
                        const RngStream& rng, ActiveKind kind,
                        const CoeffProjection& projection) {
    cfg.validate();

    StarCoefficients coeffs =
        random_feasible_coefficients(cfg, rng.substream(kSubInitCoeffs));
    if (projection) projection(coeffs);

    BeamformerPair bf = (kind == ActiveKind::zero_forcing)
                            ? zf_design(ch, coeffs, cfg)
                            : matched_equal_power_init(ch, coeffs, cfg);

    OptResult res;
    res.trajectory.push_back(weighted_objective(ch, coeffs, bf, cfg));

    bool outer_converged = false;
    bool active_converged = true;
    int done = 0;
    for (int t = 1; t <= cfg.max_outer; ++t) {
        if (kind == ActiveKind::zero_forcing) {
            bf = zf_design(ch, coeffs, cfg);
        } else {
            ActiveResult ar = solve_active(ch, coeffs, bf, cfg);
            bf = ar.bf;
            active_converged = ar.converged;
        }
        PassiveResult pr = solve_passive(ch, bf, coeffs, cfg,
                                         rng.substream(kSubPassive, t),
                                         projection);
        coeffs = pr.coeffs;
        res.trajectory.push_back(pr.objective);
        done = t;
        if (std::abs(res.trajectory[t] - res.trajectory[t - 1]) < cfg.tol_outer) {
            outer_converged = true;
            break;
        }
    }

    res.bf = bf;
    res.coeffs = coeffs;
    res.outer_iterations = done;
    res.converged = outer_converged && active_converged;
    res.report = make_rate_report(ch, coeffs, bf, cfg);
    return res;
}

}  // namespace

const char* scheme_name(Scheme s) {
    switch (s) {
        case Scheme::proposed: return "proposed";
        case Scheme::zf: return "zf";
        case Scheme::conventional_ris: return "conventional_ris";
    }
    return "unknown";
}

Scheme scheme_from_name(const std::string& name) {
    if (name == "proposed") return Scheme::proposed;
    if (name == "zf") return Scheme::zf;
    if (name == "conventional_ris") return Scheme::conventional_ris;
    throw ConfigError("unknown scheme: " + name);
}

StarCoefficients random_feasible_coefficients(const SystemConfig& cfg,
                                              const RngStream& rng) {
    Xoshiro256ss eng(rng);
    const int m = cfg.m;
    const int q = cfg.phase_levels();
    StarCoefficients c;
    c.q = q;
    c.beta_r.resize(m);
    c.phase_idx_r.resize(m);
    c.phase_idx_t.resize(m);
    const auto draw_idx = [&]() {
        int k = 1 + static_cast<int>(eng.uniform01() * q);
        return k > q ? q : k;
    };
    for (int i = 0; i < m; ++i) c.phase_idx_r(i) = draw_idx();
    for (int i = 0; i < m; ++i) c.phase_idx_t(i) = draw_idx();
    for (int i = 0; i < m; ++i) c.beta_r(i) = eng.uniform_open01();
    return c;
}

BeamformerPair matched_equal_power_init(const ChannelSet& ch,
                                        const StarCoefficients& coeffs,
                                        const SystemConfig& cfg) {
    SurfacePair s = build_surface_matrices(coeffs);
    const Eigen::VectorXcd d_b =
        (s.r.asDiagonal() * ch.h_br).adjoint() * ch.h_rb;
    const Eigen::VectorXcd d_c =
        (s.t.asDiagonal() * ch.h_br).adjoint() * ch.h_rc;
    const double amp = std::sqrt(cfg.p_tmax / 2.0);

    BeamformerPair bf;
    const auto scaled = [&](const Eigen::VectorXcd& d) -> Eigen::VectorXcd {
        const double n = d.norm();
        if (n > 0.0) return (amp / n) * d;
        Eigen::VectorXcd e = Eigen::VectorXcd::Zero(d.size());
        if (e.size() > 0) e(0) = amp;
        return e;
    };
    bf.w_b = scaled(d_b);
    bf.w_c = scaled(d_c);
    return bf;
}

OptResult optimize(const ChannelSet& ch, const SystemConfig& cfg,
                   const RngStream& rng) {
    return optimize_impl(ch, cfg, rng, ActiveKind::surrogate, {});
}

BeamformerPair zf_beamformers(const ChannelSet& ch,
                              const StarCoefficients& coeffs, double p_b,
                              double p_c) {
    if (p_b < 0.0 || p_c < 0.0)
        throw std::invalid_argument("zf_beamformers: negative power");
    if (ch.h_br.cols() < 2)
        throw std::runtime_error(
            "zero-forcing infeasible: needs at least two transmit antennas");

    SurfacePair s = build_surface_matrices(coeffs);
    const Eigen::VectorXcd hb_eff =
        (s.r.asDiagonal() * ch.h_br).adjoint() * ch.h_rb;
    const Eigen::VectorXcd hc_eff =
        (s.t.asDiagonal() * ch.h_br).adjoint() * ch.h_rc;

    Eigen::MatrixXcd h_eff(2, ch.h_br.cols());
    h_eff.row(0) = hb_eff.adjoint();
    h_eff.row(1) = hc_eff.adjoint();

    const Eigen::Matrix2cd gram = h_eff * h_eff.adjoint();
    const double scale = std::abs(gram(0, 0)) * std::abs(gram(1, 1));
    const std::complex<double> det =
        gram(0, 0) * gram(1, 1) - gram(0, 1) * gram(1, 0);
    if (!(std::abs(det) > 1e-12 * scale))
        throw std::runtime_error(
            "zero-forcing infeasible: effective channel is rank deficient");

    const Eigen::MatrixXcd pinv = h_eff.adjoint() * gram.inverse();

    BeamformerPair bf;
    const auto scaled = [&](const Eigen::VectorXcd& col,
                            double p) -> Eigen::VectorXcd {
        const double n = col.norm();
        if (n == 0.0 || p == 0.0) return Eigen::VectorXcd::Zero(col.size());
        return (std::sqrt(p) / n) * col;
    };
    bf.w_b = scaled(pinv.col(0), p_b);
    bf.w_c = scaled(pinv.col(1), p_c);
    return bf;
}

std::pair<double, double> zf_power_split(const ChannelSet& ch,
                                         const StarCoefficients& coeffs,
                                         const SystemConfig& cfg) {
    double best_pb = cfg.p_tmax / 2.0;
    double best_obj = -std::numeric_limits<double>::infinity();
    for (int k = 1; k <= 99; ++k) {
        const double p_b = cfg.p_tmax * (k / 100.0);
        const double p_c = cfg.p_tmax - p_b;
        const BeamformerPair bf = zf_beamformers(ch, coeffs, p_b, p_c);
        const double obj = weighted_objective(ch, coeffs, bf, cfg);
        if (obj > best_obj) {
            best_obj = obj;
            best_pb = p_b;
        }
    }
    return {best_pb, cfg.p_tmax - best_pb};
}

StarCoefficients conventional_ris_project(StarCoefficients coeffs) {
    const Eigen::Index m = coeffs.beta_r.size();
    if (m % 2 != 0)
        throw std::invalid_argument(
            "conventional_ris_project: element count must be even");
    const Eigen::Index half = m / 2;
    for (Eigen::Index i = 0; i < m; ++i)
        coeffs.beta_r(i) = i < half ? 1.0 - 1e-6 : 1e-6;
    return coeffs;
}

Eigen::VectorXi discretize_phases(const Eigen::VectorXd& phases, int q) {
    if (q < 1) throw std::invalid_argument("discretize_phases: q >= 1");
    Eigen::VectorXi idx(phases.size());
    for (Eigen::Index i = 0; i < phases.size(); ++i) {
        int best_k = 1;
        double best_d = std::abs(phases(i) - kTwoPi / q);
        for (int k = 2; k <= q; ++k) {
            const double d = std::abs(phases(i) - kTwoPi * k / q);
            if (d < best_d) {
                best_d = d;
                best_k = k;
            }
        }
        idx(i) = best_k;
    }
    return idx;
}

OptResult optimize_zf(const ChannelSet& ch, const SystemConfig& cfg,
                      const RngStream& rng) {
    return optimize_impl(ch, cfg, rng, ActiveKind::zero_forcing, {});
}

OptResult optimize_conventional_ris(const ChannelSet& ch,
                                    const SystemConfig& cfg,
                                    const RngStream& rng) {
    return optimize_impl(ch, cfg, rng, ActiveKind::surrogate,
                         [](StarCoefficients& c) {
                             c = conventional_ris_project(std::move(c));
                         });
}

OptResult run_scheme(Scheme scheme, const ChannelSet& ch,
                     const SystemConfig& cfg, const RngStream& rng) {
    switch (scheme) {
        case Scheme::proposed: return optimize(ch, cfg, rng);
        case Scheme::zf: return optimize_zf(ch, cfg, rng);
        case Scheme::conventional_ris:
            return optimize_conventional_ris(ch, cfg, rng);
    }
    throw std::invalid_argument("run_scheme: unknown scheme");
}

}  // namespace starpls
