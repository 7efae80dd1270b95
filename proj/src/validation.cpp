#include "starpls/validation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "starpls/parallel.hpp"

namespace starpls {

namespace {

constexpr std::uint64_t kSubChannels = 21;
constexpr std::uint64_t kSubCoeffs = 22;
constexpr std::uint64_t kSubEve = 23;
constexpr std::uint64_t kSubSecure = 1;
constexpr std::uint64_t kSubBlind = 2;
constexpr std::uint64_t kSubEvalR = 3;
constexpr std::uint64_t kSubEvalT = 4;

double median(std::vector<double> v) {
    if (v.empty()) throw std::invalid_argument("median of empty set");
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

McEstimate empirical_avg_eaves_rate(const ChannelSet& ch,
                                    const StarCoefficients& coeffs,
                                    const BeamformerPair& bf,
                                    const SystemConfig& cfg, int n,
                                    const RngStream& rng) {
    if (n < 100)
        throw std::invalid_argument("empirical_avg_eaves_rate: n >= 100");
    const int m = static_cast<int>(ch.h_br.rows());
    std::vector<double> rates(n);
    parallel_for(static_cast<std::size_t>(n), [&](std::size_t i) {
        Xoshiro256ss eng(rng.substream(i));
        const int b = eng.uniform01() < cfg.p1 ? 1 : 0;
        const Eigen::VectorXcd h_ss = sample_eve_smallscale(m, eng);
        rates[i] =
            eaves_rate_instant(h_ss, ch.l_re, b, ch, coeffs, bf, cfg.sigma2_e);
    });

    McEstimate est;
    est.n_samples = n;
    double sum = 0.0;
    for (double r : rates) sum += r;
    est.mean = sum / n;
    if (n > 1) {
        double ss = 0.0;
        for (double r : rates) ss += (r - est.mean) * (r - est.mean);
        est.std_error = std::sqrt(ss / (n - 1)) / std::sqrt(static_cast<double>(n));
    }
    return est;
}

std::vector<AsymptoticErrorRow> asymptotic_error_curve(
    const SystemConfig& base, const std::vector<int>& m_list, int n,
    const std::vector<std::uint64_t>& seeds) {
    if (m_list.empty() || seeds.empty())
        throw std::invalid_argument("asymptotic_error_curve: empty inputs");
    for (std::size_t i = 1; i < m_list.size(); ++i) {
        if (m_list[i] <= m_list[i - 1])
            throw std::invalid_argument("asymptotic_error_curve: m_list ascending");
    }
    std::vector<AsymptoticErrorRow> rows;
    rows.reserve(m_list.size());
    for (int m : m_list) {
        SystemConfig cfg = base;
        cfg.m = m;
        cfg.validate();
        std::vector<double> errors;
        errors.reserve(seeds.size());
        for (std::uint64_t seed : seeds) {
            const ChannelSet ch =
                generate_channels(cfg, RngStream{seed, kSubChannels});
            const StarCoefficients coeffs =
                random_feasible_coefficients(cfg, RngStream{seed, kSubCoeffs});
            // Probe with one dominant stream: the residual stream stays below
            // the eavesdropper's noise floor at every tested M, so the
            // wiretap SNR grows with the element count and the closed-form
            // penalty has a limit to converge to. With comparable stream
            // powers the leaked interference scales with M as well and the
            // gap saturates instead of vanishing.
            constexpr double kResidual = 1e-6;
            BeamformerPair bf = matched_equal_power_init(ch, coeffs, cfg);
            bf.w_b *= std::sqrt(2.0 * (1.0 - kResidual));
            bf.w_c *= std::sqrt(2.0 * kResidual);
            const McEstimate mc = empirical_avg_eaves_rate(
                ch, coeffs, bf, cfg, n, RngStream{seed, kSubEve});
            const double pen = asymptotic_eaves_penalty(ch, coeffs, bf, cfg);
            const double denom = std::max(std::abs(pen), 1e-300);
            errors.push_back(std::abs(mc.mean - pen) / denom);
        }
        rows.push_back({m, median(errors)});
    }
    return rows;
}

WiretapResult wiretap_suppression(const ChannelSet& ch, const SystemConfig& cfg,
                                  int n_channels, const RngStream& rng) {
    if (n_channels < 1)
        throw std::invalid_argument("wiretap_suppression: n_channels >= 1");

    WiretapResult out;
    out.secure = optimize(ch, cfg, rng.substream(kSubSecure));

    // Reference: identical problem except the design never sees the
    // eavesdropper link (path gain scaled to nothing). Evaluation below uses
    // the true link for both designs.
    ChannelSet blind_ch = ch;
    blind_ch.l_re = ch.l_re * 1e-30;
    out.no_security = optimize(blind_ch, cfg, rng.substream(kSubBlind));

    const int m = static_cast<int>(ch.h_br.rows());
    out.rows.resize(2 * static_cast<std::size_t>(n_channels));
    for (int region = 0; region < 2; ++region) {
        const int b = region == 0 ? 1 : 0;
        const std::uint64_t tag = b == 1 ? kSubEvalR : kSubEvalT;
        parallel_for(static_cast<std::size_t>(n_channels), [&](std::size_t i) {
            Xoshiro256ss eng(rng.substream(tag, i));
            const Eigen::VectorXcd h_ss = sample_eve_smallscale(m, eng);
            WiretapRow row;
            row.region_b = b;
            row.draw = static_cast<int>(i);
            row.rate_secure =
                eaves_rate_instant(h_ss, ch.l_re, b, ch, out.secure.coeffs,
                                   out.secure.bf, cfg.sigma2_e);
            row.rate_no_security =
                eaves_rate_instant(h_ss, ch.l_re, b, ch, out.no_security.coeffs,
                                   out.no_security.bf, cfg.sigma2_e);
            out.rows[static_cast<std::size_t>(region) * n_channels + i] = row;
        });
    }

    double sums[4] = {0.0, 0.0, 0.0, 0.0};
    for (const WiretapRow& row : out.rows) {
        if (row.region_b == 1) {
            sums[0] += row.rate_no_security;
            sums[1] += row.rate_secure;
        } else {
            sums[2] += row.rate_no_security;
            sums[3] += row.rate_secure;
        }
    }
    out.mean_no_security_r = sums[0] / n_channels;
    out.mean_secure_r = sums[1] / n_channels;
    out.mean_no_security_t = sums[2] / n_channels;
    out.mean_secure_t = sums[3] / n_channels;
    return out;
}

Eigen::VectorXd finite_diff_gradient(
    const std::function<double(const Eigen::VectorXd&)>& f,
    const Eigen::VectorXd& x, double h) {
    if (!(h > 0.0)) throw std::invalid_argument("finite_diff_gradient: h > 0");
    Eigen::VectorXd g(x.size());
    Eigen::VectorXd xp = x;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        const double xi = x(i);
        xp(i) = xi + h;
        const double fp = f(xp);
        xp(i) = xi - h;
        const double fm = f(xp);
        xp(i) = xi;
        g(i) = (fp - fm) / (2.0 * h);
    }
    return g;
}

}  // namespace starpls
