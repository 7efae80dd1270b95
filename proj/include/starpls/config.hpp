#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace starpls {

// Configuration or sweep-spec problems: bad file, bad key, violated
// invariant. The CLI maps these to exit code 1.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Full description of one problem instance: geometry, radio parameters,
// objective weights and solver controls. All physical quantities are linear
// (watts); dB/dBm conversion happens only when configs are loaded from JSON.
struct SystemConfig {
    int n_t = 4;          // transmit antennas
    int m = 16;           // surface elements
    int lambda_bits = 2;  // phase resolution bits, Q = 2^lambda_bits levels

    double p_tmax = 1.0;      // transmit power cap [W]
    double sigma2_b = 1e-14;  // noise power at the covert user [W]
    double sigma2_c = 1e-14;  // noise power at the public user [W]
    double sigma2_e = 1e-14;  // noise power at the eavesdropper [W]

    double p1 = 0.5;  // probability the eavesdropper sits in the R region

    double omega1 = 0.5;  // weight on the average security rate
    double omega2 = 0.5;  // weight on the public rate

    double rho = 0.01;   // path gain at 1 m (linear)
    double alpha = 2.6;  // path loss exponent
    double d_br = 400.0; // BS to surface distance [m]
    double d_rb = 75.0;  // surface to covert user [m]
    double d_rc = 100.0; // surface to public user [m]
    double d_re = 80.0;  // surface to eavesdropper [m]

    double ceo_omega = 4.0;  // population multiplier, K = ceo_omega * 3M
    double ceo_eta = 0.1;    // elite fraction
    double ceo_chi = 0.55;   // smoothing factor

    double subgrad_step = 0.01;  // dual subgradient base step
    double tol_outer = 1e-3;
    double tol_dual = 1e-5;
    double tol_ceo = 1e-3;
    int max_outer = 30;
    int max_dual = 100;
    int max_ceo = 60;

    std::uint64_t seed = 1;

    int phase_levels() const { return 1 << lambda_bits; }
    double p0() const { return 1.0 - p1; }
    int ceo_population() const;
    int ceo_elite() const;

    // Throws std::invalid_argument naming the violated invariant.
    void validate() const;
};

// 10^(x/10)
double db_to_linear(double db);
// 10^((x-30)/10), dBm to watts
double dbm_to_watts(double dbm);

// FNV-1a hash of the canonical field serialization, as 16 hex digits.
// Embedded in every output artifact so results can be traced to the exact
// configuration that produced them.
std::string config_hash(const SystemConfig& cfg);

}  // namespace starpls
