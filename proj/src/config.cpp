#include "starpls/config.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace starpls {

namespace {

void require(bool ok, const char* invariant) {
    if (!ok) {
        throw std::invalid_argument(std::string("config invariant violated: ") +
                                    invariant);
    }
}

}  // namespace

int SystemConfig::ceo_population() const {
    return static_cast<int>(std::llround(ceo_omega * 3.0 * m));
}

int SystemConfig::ceo_elite() const {
    int k = static_cast<int>(std::llround(ceo_eta * ceo_population()));
    return k < 1 ? 1 : k;
}

void SystemConfig::validate() const {
    require(n_t >= 1, "n_t >= 1");
    require(m >= 1, "m >= 1");
    require(lambda_bits >= 1, "lambda_bits >= 1");
    require(p_tmax > 0.0, "p_tmax > 0");
    require(sigma2_b > 0.0, "sigma2_b > 0");
    require(sigma2_c > 0.0, "sigma2_c > 0");
    require(sigma2_e > 0.0, "sigma2_e > 0");
    require(p1 >= 0.0 && p1 <= 1.0, "p1 in [0, 1]");
    require(omega1 > 0.0 && omega1 <= 1.0, "omega1 in (0, 1]");
    require(omega2 > 0.0 && omega2 <= 1.0, "omega2 in (0, 1]");
    require(rho > 0.0, "rho > 0");
    require(alpha > 0.0, "alpha > 0");
    require(d_br > 0.0, "d_br > 0");
    require(d_rb > 0.0, "d_rb > 0");
    require(d_rc > 0.0, "d_rc > 0");
    require(d_re > 0.0, "d_re > 0");
    require(ceo_omega >= 4.0 && ceo_omega <= 10.0, "ceo_omega in [4, 10]");
    require(ceo_eta > 0.0 && ceo_eta < 1.0, "ceo_eta in (0, 1)");
    require(ceo_chi > 0.0 && ceo_chi < 1.0, "ceo_chi in (0, 1)");
    require(ceo_elite() <= ceo_population(),
            "ceo_eta * ceo_population >= 1 candidate");
    require(subgrad_step > 0.0, "subgrad_step > 0");
    require(tol_outer > 0.0, "tol_outer > 0");
    require(tol_dual > 0.0, "tol_dual > 0");
    require(tol_ceo > 0.0, "tol_ceo > 0");
    require(max_outer >= 1, "max_outer >= 1");
    require(max_dual >= 1, "max_dual >= 1");
    require(max_ceo >= 1, "max_ceo >= 1");
}

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

std::string config_hash(const SystemConfig& cfg) {
    char buf[1024];
    std::snprintf(
        buf, sizeof(buf),
        "n_t=%d;m=%d;lambda_bits=%d;p_tmax=%.17g;sigma2_b=%.17g;"
        "sigma2_c=%.17g;sigma2_e=%.17g;p1=%.17g;omega1=%.17g;omega2=%.17g;"
        "rho=%.17g;alpha=%.17g;d_br=%.17g;d_rb=%.17g;d_rc=%.17g;d_re=%.17g;"
        "ceo_omega=%.17g;ceo_eta=%.17g;ceo_chi=%.17g;subgrad_step=%.17g;"
        "tol_outer=%.17g;tol_dual=%.17g;tol_ceo=%.17g;max_outer=%d;"
        "max_dual=%d;max_ceo=%d;seed=%llu",
        cfg.n_t, cfg.m, cfg.lambda_bits, cfg.p_tmax, cfg.sigma2_b, cfg.sigma2_c,
        cfg.sigma2_e, cfg.p1, cfg.omega1, cfg.omega2, cfg.rho, cfg.alpha,
        cfg.d_br, cfg.d_rb, cfg.d_rc, cfg.d_re, cfg.ceo_omega, cfg.ceo_eta,
        cfg.ceo_chi, cfg.subgrad_step, cfg.tol_outer, cfg.tol_dual, cfg.tol_ceo,
        cfg.max_outer, cfg.max_dual, cfg.max_ceo,
        static_cast<unsigned long long>(cfg.seed));

    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const char* p = buf; *p; ++p) {
        h ^= static_cast<unsigned char>(*p);
        h *= 0x100000001b3ULL;
    }
    char hex[17];
    std::snprintf(hex, sizeof(hex), "%016llx",
                  static_cast<unsigned long long>(h));
    return std::string(hex);
}

}  // namespace starpls
