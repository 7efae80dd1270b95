#include "starpls/active.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace starpls {

namespace {

constexpr double kInvLn2 = 1.4426950408889634074;

// Effective scalars/vectors every MMSE expression is built from.
struct ActiveWorkspace {
    Eigen::VectorXcd hb_eff;  // H^H U_r^H h_rb
    Eigen::VectorXcd hc_eff;  // H^H U_t^H h_rc
    Eigen::MatrixXcd v_r;     // U_r H
    Eigen::MatrixXcd v_t;     // U_t H

    ActiveWorkspace(const ChannelSet& ch, const StarCoefficients& coeffs) {
        SurfacePair s = build_surface_matrices(coeffs);
        v_r = s.r.asDiagonal() * ch.h_br;
        v_t = s.t.asDiagonal() * ch.h_br;
        hb_eff = v_r.adjoint() * ch.h_rb;
        hc_eff = v_t.adjoint() * ch.h_rc;
    }
};

struct ErrorTerms {
    double e1, e2, e3, e4, e5, ec;
};

ErrorTerms error_terms(const ActiveWorkspace& ws, const ChannelSet& ch,
                       const AuxVars& aux, const BeamformerPair& bf,
                       const SystemConfig& cfg) {
    const double l = ch.l_re;
    const double sl = std::sqrt(l);

    const std::complex<double> s_b = ws.hb_eff.dot(bf.w_b);
    const std::complex<double> i_b = ws.hb_eff.dot(bf.w_c);
    const std::complex<double> s_c = ws.hc_eff.dot(bf.w_c);
    const std::complex<double> i_c = ws.hc_eff.dot(bf.w_b);

    const Eigen::VectorXcd xr_b = ws.v_r * bf.w_b;
    const Eigen::VectorXcd xr_c = ws.v_r * bf.w_c;
    const Eigen::VectorXcd xt_b = ws.v_t * bf.w_b;
    const Eigen::VectorXcd xt_c = ws.v_t * bf.w_c;

    ErrorTerms e;
    e.e1 = std::norm(std::conj(aux.u1) * s_b - 1.0) +
           std::norm(aux.u1) * (std::norm(i_b) + cfg.sigma2_b);
    e.ec = std::norm(std::conj(aux.uc) * s_c - 1.0) +
           std::norm(aux.uc) * (std::norm(i_c) + cfg.sigma2_c);
    e.e2 = std::norm(sl * aux.u2.dot(xr_c) - 1.0) +
           cfg.sigma2_e * aux.u2.squaredNorm();
    e.e3 = std::norm(sl * aux.u3.dot(xt_c) - 1.0) +
           cfg.sigma2_e * aux.u3.squaredNorm();
    e.e4 = 1.0 + l * (xr_b.squaredNorm() + xr_c.squaredNorm()) / cfg.sigma2_e;
    e.e5 = 1.0 + l * (xt_b.squaredNorm() + xt_c.squaredNorm()) / cfg.sigma2_e;
    return e;
}

double fhat(double w, double err) { return std::log(w) - w * err + 1.0; }

MmseTerms surrogate_terms_from_errors(const ErrorTerms& e, const AuxVars& aux) {
    MmseTerms t;
    t.f1 = fhat(aux.w1, e.e1);
    t.f2 = fhat(aux.w2, e.e2);
    t.f3 = fhat(aux.w3, e.e3);
    t.f4 = fhat(aux.w4, e.e4);
    t.f5 = fhat(aux.w5, e.e5);
    t.fc = fhat(aux.wc, e.ec);
    return t;
}

double combine_terms(const MmseTerms& t, const SystemConfig& cfg) {
    const double sec =
        t.f1 + cfg.p1 * (t.f2 + t.f4) + cfg.p0() * (t.f3 + t.f5);
    return kInvLn2 * (cfg.omega1 * sec + cfg.omega2 * t.fc);
}

}  // namespace

MmseTerms direct_log_terms(const ChannelSet& ch, const StarCoefficients& coeffs,
                           const BeamformerPair& bf, const SystemConfig& cfg) {
    ActiveWorkspace ws(ch, coeffs);
    const double l = ch.l_re;

    const std::complex<double> s_b = ws.hb_eff.dot(bf.w_b);
    const std::complex<double> i_b = ws.hb_eff.dot(bf.w_c);
    const std::complex<double> s_c = ws.hc_eff.dot(bf.w_c);
    const std::complex<double> i_c = ws.hc_eff.dot(bf.w_b);

    const double nr_b = (ws.v_r * bf.w_b).squaredNorm();
    const double nr_c = (ws.v_r * bf.w_c).squaredNorm();
    const double nt_b = (ws.v_t * bf.w_b).squaredNorm();
    const double nt_c = (ws.v_t * bf.w_c).squaredNorm();

    MmseTerms t;
    t.f1 = std::log1p(std::norm(s_b) / (std::norm(i_b) + cfg.sigma2_b));
    t.fc = std::log1p(std::norm(s_c) / (std::norm(i_c) + cfg.sigma2_c));
    t.f2 = std::log1p(l * nr_c / cfg.sigma2_e);
    t.f3 = std::log1p(l * nt_c / cfg.sigma2_e);
    t.f4 = -std::log1p(l * (nr_b + nr_c) / cfg.sigma2_e);
    t.f5 = -std::log1p(l * (nt_b + nt_c) / cfg.sigma2_e);
    return t;
}

MmseTerms surrogate_log_terms(const ChannelSet& ch,
                              const StarCoefficients& coeffs,
                              const AuxVars& aux, const BeamformerPair& bf,
                              const SystemConfig& cfg) {
    ActiveWorkspace ws(ch, coeffs);
    return surrogate_terms_from_errors(error_terms(ws, ch, aux, bf, cfg), aux);
}

AuxVars update_auxiliaries(const ChannelSet& ch, const StarCoefficients& coeffs,
                           const BeamformerPair& bf, const SystemConfig& cfg) {
    ActiveWorkspace ws(ch, coeffs);
    const double l = ch.l_re;
    const double sl = std::sqrt(l);

    const std::complex<double> s_b = ws.hb_eff.dot(bf.w_b);
    const std::complex<double> i_b = ws.hb_eff.dot(bf.w_c);
    const std::complex<double> s_c = ws.hc_eff.dot(bf.w_c);
    const std::complex<double> i_c = ws.hc_eff.dot(bf.w_b);

    const Eigen::VectorXcd xr_b = ws.v_r * bf.w_b;
    const Eigen::VectorXcd xr_c = ws.v_r * bf.w_c;
    const Eigen::VectorXcd xt_b = ws.v_t * bf.w_b;
    const Eigen::VectorXcd xt_c = ws.v_t * bf.w_c;

    AuxVars aux;
    const double den_b = std::norm(s_b) + std::norm(i_b) + cfg.sigma2_b;
    aux.u1 = s_b / den_b;
    aux.w1 = 1.0 + std::norm(s_b) / (std::norm(i_b) + cfg.sigma2_b);

    const double den_c = std::norm(s_c) + std::norm(i_c) + cfg.sigma2_c;
    aux.uc = s_c / den_c;
    aux.wc = 1.0 + std::norm(s_c) / (std::norm(i_c) + cfg.sigma2_c);

    // Rank-1 (Sherman-Morrison) form of (l x x^H + sigma2 I)^{-1} sqrt(l) x.
    const double gr = l * xr_c.squaredNorm();
    aux.u2 = (sl / (cfg.sigma2_e + gr)) * xr_c;
    aux.w2 = 1.0 + gr / cfg.sigma2_e;

    const double gt = l * xt_c.squaredNorm();
    aux.u3 = (sl / (cfg.sigma2_e + gt)) * xt_c;
    aux.w3 = 1.0 + gt / cfg.sigma2_e;

    aux.w4 = 1.0 / (1.0 + l * (xr_b.squaredNorm() + xr_c.squaredNorm()) /
                              cfg.sigma2_e);
    aux.w5 = 1.0 / (1.0 + l * (xt_b.squaredNorm() + xt_c.squaredNorm()) /
                              cfg.sigma2_e);
    return aux;
}

NormalEquations assemble_normal_equations(const ChannelSet& ch,
                                          const StarCoefficients& coeffs,
                                          const AuxVars& aux, double varrho,
                                          const SystemConfig& cfg) {
    if (varrho < 0.0)
        throw std::invalid_argument("assemble_normal_equations: varrho >= 0");
    ActiveWorkspace ws(ch, coeffs);
    const int n = static_cast<int>(ch.h_br.cols());
    const double l = ch.l_re;
    const double sl = std::sqrt(l);

    const Eigen::MatrixXcd a = ws.hc_eff * ws.hc_eff.adjoint();
    const Eigen::MatrixXcd b = ws.hb_eff * ws.hb_eff.adjoint();
    const Eigen::MatrixXcd c_r = ws.v_r.adjoint() * ws.v_r;
    const Eigen::MatrixXcd c_t = ws.v_t.adjoint() * ws.v_t;
    const Eigen::VectorXcd d_r = ws.v_r.adjoint() * aux.u2;
    const Eigen::VectorXcd d_t = ws.v_t.adjoint() * aux.u3;

    const double o1 = cfg.omega1;
    const double o2 = cfg.omega2;
    const double p1 = cfg.p1;
    const double p0 = cfg.p0();

    NormalEquations ne;
    const Eigen::MatrixXcd shared =
        kInvLn2 *
        (o1 * aux.w1 * std::norm(aux.u1) * b + o2 * aux.wc * std::norm(aux.uc) * a +
         (o1 * l / cfg.sigma2_e) * (p1 * aux.w4 * c_r + p0 * aux.w5 * c_t));
    const Eigen::MatrixXcd ridge =
        varrho * Eigen::MatrixXcd::Identity(n, n);

    ne.g1 = ridge + shared;
    ne.g1_hat = ridge + shared +
                (kInvLn2 * o1 * l) *
                    (p1 * aux.w2 * (d_r * d_r.adjoint()) +
                     p0 * aux.w3 * (d_t * d_t.adjoint()));
    ne.g2 = (kInvLn2 * o1 * aux.w1) * (aux.u1 * ws.hb_eff);
    ne.g2_hat = (kInvLn2 * o2 * aux.wc) * (aux.uc * ws.hc_eff) +
                (kInvLn2 * o1 * sl) * (p1 * aux.w2 * d_r + p0 * aux.w3 * d_t);
    return ne;
}

BeamformerPair optimal_beamformers(const ChannelSet& ch,
                                   const StarCoefficients& coeffs,
                                   const AuxVars& aux, double varrho,
                                   const SystemConfig& cfg) {
    NormalEquations ne = assemble_normal_equations(ch, coeffs, aux, varrho, cfg);
    const Eigen::Index n = ne.g1.rows();
    BeamformerPair bf;
    bf.w_b = ne.g2.isZero(0.0) ? Eigen::VectorXcd::Zero(n).eval()
                               : ne.g1.ldlt().solve(ne.g2).eval();
    bf.w_c = ne.g2_hat.isZero(0.0)
                 ? Eigen::VectorXcd::Zero(n).eval()
                 : ne.g1_hat.ldlt().solve(ne.g2_hat).eval();
    return bf;
}

double surrogate_objective(const ChannelSet& ch, const StarCoefficients& coeffs,
                           const AuxVars& aux, const BeamformerPair& bf,
                           const SystemConfig& cfg) {
    return combine_terms(surrogate_log_terms(ch, coeffs, aux, bf, cfg), cfg);
}

double lagrangian_value(const ChannelSet& ch, const StarCoefficients& coeffs,
                        const AuxVars& aux, const BeamformerPair& bf,
                        double varrho, const SystemConfig& cfg) {
    return surrogate_objective(ch, coeffs, aux, bf, cfg) -
           varrho * (bf.power() - cfg.p_tmax);
}

ActiveResult solve_active(const ChannelSet& ch, const StarCoefficients& coeffs,
                          const BeamformerPair& bf_init,
                          const SystemConfig& cfg) {
    const AuxVars aux = update_auxiliaries(ch, coeffs, bf_init, cfg);
    const double p_max = cfg.p_tmax;
    const double feas_slack = p_max * (1.0 + 1e-9);

    ActiveResult res;
    res.dual.step = cfg.subgrad_step;

    const auto solve_at = [&](double varrho) {
        return optimal_beamformers(ch, coeffs, aux, varrho, cfg);
    };

    BeamformerPair bf = solve_at(0.0);
    double power = bf.power();
    if (std::isfinite(power) && power <= feas_slack) {
        res.bf = bf;
        res.dual.varrho = 0.0;
        res.converged = true;
    } else {
        // Bracket the multiplier: power is nonincreasing in varrho.
        double lo = 0.0;
        double hi = cfg.subgrad_step > 0.0 ? cfg.subgrad_step : 1.0;
        BeamformerPair bf_hi = solve_at(hi);
        int doublings = 0;
        while ((!std::isfinite(bf_hi.power()) || bf_hi.power() > p_max) &&
               doublings < 200) {
            lo = hi;
            hi *= 2.0;
            bf_hi = solve_at(hi);
            ++doublings;
        }

        double varrho = 0.5 * (lo + hi);
        bool hit_tol = false;
        int it = 0;
        for (it = 1; it <= cfg.max_dual; ++it) {
            bf = solve_at(varrho);
            power = bf.power();
            if (std::isfinite(power) && std::abs(power - p_max) <= cfg.tol_dual * p_max) {
                hit_tol = true;
                break;
            }
            if (!std::isfinite(power) || power > p_max) {
                lo = varrho;
            } else {
                hi = varrho;
                bf_hi = bf;
            }
            if (hi - lo <= cfg.tol_dual * hi) {
                hit_tol = true;
                varrho = hi;
                bf = bf_hi;
                power = bf.power();
                break;
            }
            const double step = cfg.subgrad_step / std::sqrt(static_cast<double>(it));
            double next = varrho + step * (power - p_max);
            // keep every iterate in the middle half of the bracket so the
            // bracket shrinks geometrically even when the steps are tiny
            const double lo_q = lo + 0.25 * (hi - lo);
            const double hi_q = hi - 0.25 * (hi - lo);
            if (!(next >= lo_q && next <= hi_q)) next = 0.5 * (lo + hi);
            varrho = next;
            res.dual.step = step;
        }
        if (!(std::isfinite(power) && power <= feas_slack)) {
            varrho = hi;
            bf = bf_hi;
            power = bf.power();
            if (!(std::isfinite(power) && power <= feas_slack) && power > 0.0) {
                const double scale = std::sqrt(p_max / power);
                bf.w_b *= scale;
                bf.w_c *= scale;
            }
        }
        res.bf = bf;
        res.dual.varrho = varrho;
        res.dual.iterations = it;
        res.iterations = it;
        res.converged = hit_tol;
    }

    // Frozen-surrogate ascent guarantee: never hand back something worse than
    // the expansion point when the expansion point was itself feasible.
    if (bf_init.power() <= feas_slack && bf_init.w_b.size() == res.bf.w_b.size()) {
        const double s_new = surrogate_objective(ch, coeffs, aux, res.bf, cfg);
        const double s_old = surrogate_objective(ch, coeffs, aux, bf_init, cfg);
        if (!(s_new >= s_old - 1e-12 * std::max(1.0, std::abs(s_old)))) {
            res.bf = bf_init;
            res.converged = true;
        }
    }
    return res;
}

}  // namespace starpls
