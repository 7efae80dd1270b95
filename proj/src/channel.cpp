#include "starpls/channel.hpp"

#include <cmath>
#include <stdexcept>

namespace starpls {

namespace {
// Fixed substream tags so each link owns an independent draw sequence.
constexpr std::uint64_t kStreamBr = 1;
constexpr std::uint64_t kStreamRb = 2;
constexpr std::uint64_t kStreamRc = 3;
}  // namespace

double path_loss(double rho, double d, double alpha) {
    if (rho <= 0.0) throw std::domain_error("path_loss: rho must be positive");
    if (d <= 0.0) throw std::domain_error("path_loss: distance must be positive");
    if (alpha <= 0.0)
        throw std::domain_error("path_loss: exponent must be positive");
    return rho * std::pow(d, -alpha);
}

ChannelSet generate_channels(const SystemConfig& cfg, const RngStream& rng) {
    const int m = cfg.m;
    const int n_t = cfg.n_t;
    const double s_br = std::sqrt(path_loss(cfg.rho, cfg.d_br, cfg.alpha));
    const double s_rb = std::sqrt(path_loss(cfg.rho, cfg.d_rb, cfg.alpha));
    const double s_rc = std::sqrt(path_loss(cfg.rho, cfg.d_rc, cfg.alpha));

    ChannelSet ch;
    ch.h_br.resize(m, n_t);
    {
        Xoshiro256ss eng(rng.substream(kStreamBr));
        for (int r = 0; r < m; ++r)
            for (int c = 0; c < n_t; ++c) ch.h_br(r, c) = s_br * eng.complex_normal();
    }
    ch.h_rb.resize(m);
    {
        Xoshiro256ss eng(rng.substream(kStreamRb));
        for (int r = 0; r < m; ++r) ch.h_rb(r) = s_rb * eng.complex_normal();
    }
    ch.h_rc.resize(m);
    {
        Xoshiro256ss eng(rng.substream(kStreamRc));
        for (int r = 0; r < m; ++r) ch.h_rc(r) = s_rc * eng.complex_normal();
    }
    ch.l_re = path_loss(cfg.rho, cfg.d_re, cfg.alpha);
    return ch;
}

Eigen::VectorXcd sample_eve_smallscale(int m, Xoshiro256ss& eng) {
    if (m < 1) throw std::domain_error("sample_eve_smallscale: m must be >= 1");
    Eigen::VectorXcd h(m);
    for (int r = 0; r < m; ++r) h(r) = eng.complex_normal();
    return h;
}

Eigen::VectorXcd sample_eve_smallscale(int m, const RngStream& rng) {
    Xoshiro256ss eng(rng);
    return sample_eve_smallscale(m, eng);
}

}  // namespace starpls
