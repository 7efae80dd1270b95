#include "starpls/ceo.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "starpls/parallel.hpp"

namespace starpls {

namespace {

// Same inverse-CDF rule as sample_phase, reading the matrix row in place.
int sample_phase_row(const Eigen::MatrixXd& p, Eigen::Index row,
                     Xoshiro256ss& eng) {
    const Eigen::Index q = p.cols();
    const double a = eng.uniform_open01();
    double cum = 0.0;
    for (Eigen::Index k = 0; k < q; ++k) {
        cum += p(row, k);
        if (cum >= a) return static_cast<int>(k) + 1;
    }
    return static_cast<int>(q);
}

StarCoefficients draw_coefficients(const TiltingParams& params, int m, int q,
                                   Xoshiro256ss& eng) {
    StarCoefficients c;
    c.q = q;
    c.beta_r.resize(m);
    c.phase_idx_r.resize(m);
    c.phase_idx_t.resize(m);
    for (int i = 0; i < m; ++i)
        c.phase_idx_r(i) = sample_phase_row(params.p, i, eng);
    for (int i = 0; i < m; ++i)
        c.phase_idx_t(i) = sample_phase_row(params.p, m + i, eng);
    for (int i = 0; i < m; ++i)
        c.beta_r(i) = sample_amplitude(params.mu(i), params.sigma(i), eng);
    return c;
}

void check_dims(const TiltingParams& params, int m, int q) {
    if (params.p.rows() != 2 * m || params.p.cols() != q ||
        params.mu.size() != m || params.sigma.size() != m) {
        throw std::invalid_argument(
            "tilting parameters sized inconsistently with the configuration");
    }
}

Candidate score(StarCoefficients&& coeffs, const ChannelSet& ch,
                const BeamformerPair& bf, const SystemConfig& cfg) {
    Candidate cand;
    cand.coeffs = std::move(coeffs);
    detail::RateWorkspace ws(ch, cand.coeffs, bf);
    cand.objective = detail::weighted_objective_ws(ws, cand.coeffs, ch, cfg);
    return cand;
}

}  // namespace

TiltingParams init_tilting(int m, int q) {
    if (m < 1 || q < 2)
        throw std::invalid_argument("init_tilting: need m >= 1 and q >= 2");
    TiltingParams params;
    params.p = Eigen::MatrixXd::Constant(2 * m, q, 1.0 / q);
    params.mu = Eigen::VectorXd::Constant(m, 0.5);
    params.sigma = Eigen::VectorXd::Ones(m);
    return params;
}

int sample_phase(const Eigen::RowVectorXd& pmf, Xoshiro256ss& eng) {
    const int q = static_cast<int>(pmf.size());
    if (q < 1) throw std::invalid_argument("sample_phase: empty pmf");
    const double a = eng.uniform_open01();
    double cum = 0.0;
    for (int k = 0; k < q; ++k) {
        cum += pmf(k);
        if (cum >= a) return k + 1;
    }
    return q;  // cumulative sum fell short of 1 by rounding
}

double sample_amplitude(double mu, double sigma, Xoshiro256ss& eng) {
    for (int attempt = 0; attempt < 64; ++attempt) {
        const double x = mu + sigma * eng.normal();
        if (x > 0.0 && x <= 1.0) return x;
    }
    return eng.uniform_open01();
}

Candidate sample_candidate(const TiltingParams& params, const ChannelSet& ch,
                           const BeamformerPair& bf, const SystemConfig& cfg,
                           Xoshiro256ss& eng) {
    check_dims(params, cfg.m, cfg.phase_levels());
    return score(draw_coefficients(params, cfg.m, cfg.phase_levels(), eng), ch,
                 bf, cfg);
}

TiltingParams update_tilting(const std::vector<Candidate>& ranked, int k_elite) {
    if (ranked.empty()) throw std::invalid_argument("update_tilting: empty population");
    if (k_elite < 1 || k_elite > static_cast<int>(ranked.size()))
        throw std::invalid_argument("update_tilting: k_elite out of range");
    const int m = static_cast<int>(ranked[0].coeffs.beta_r.size());
    const int q = ranked[0].coeffs.q;

    TiltingParams params;
    params.p = Eigen::MatrixXd::Zero(2 * m, q);
    params.mu = Eigen::VectorXd::Zero(m);
    params.sigma = Eigen::VectorXd::Zero(m);

    const double inv_k = 1.0 / k_elite;
    for (int k = 0; k < k_elite; ++k) {
        const StarCoefficients& c = ranked[k].coeffs;
        for (int i = 0; i < m; ++i) {
            params.p(i, c.phase_idx_r(i) - 1) += inv_k;
            params.p(m + i, c.phase_idx_t(i) - 1) += inv_k;
        }
        params.mu += inv_k * c.beta_r;
    }
    for (int k = 0; k < k_elite; ++k) {
        const Eigen::ArrayXd dev =
            ranked[k].coeffs.beta_r.array() - params.mu.array();
        params.sigma.array() += inv_k * dev.square();
    }
    params.sigma = params.sigma.array().sqrt();
    return params;
}

TiltingParams smooth(const TiltingParams& fresh, const TiltingParams& old_params,
                     double chi) {
    if (fresh.p.rows() != old_params.p.rows() ||
        fresh.p.cols() != old_params.p.cols() ||
        fresh.mu.size() != old_params.mu.size() ||
        fresh.sigma.size() != old_params.sigma.size()) {
        throw std::invalid_argument("smooth: parameter shapes differ");
    }
    TiltingParams out;
    out.p = old_params.p + chi * (fresh.p - old_params.p);
    out.mu = old_params.mu + chi * (fresh.mu - old_params.mu);
    out.sigma = old_params.sigma + chi * (fresh.sigma - old_params.sigma);
    for (Eigen::Index r = 0; r < out.p.rows(); ++r) {
        const double s = out.p.row(r).sum();
        if (std::abs(s - 1.0) > 1e-12 && s > 0.0) out.p.row(r) /= s;
    }
    return out;
}

PassiveResult solve_passive(const ChannelSet& ch, const BeamformerPair& bf,
                            const StarCoefficients& coeffs_init,
                            const SystemConfig& cfg, const RngStream& rng,
                            const CoeffProjection& projection) {
    const int m = cfg.m;
    const int q = cfg.phase_levels();
    const int k_pop = cfg.ceo_population();
    const int k_elite = cfg.ceo_elite();

    StarCoefficients init = coeffs_init;
    if (projection) projection(init);
    init.validate();

    TiltingParams params = init_tilting(m, q);
    Candidate best = score(StarCoefficients(init), ch, bf, cfg);

    PassiveResult res;
    std::vector<Candidate> pop(k_pop);
    std::vector<int> order(k_pop);

    int iter = 0;
    double prev_pop_best = 0.0;
    while (iter < cfg.max_ceo) {
        parallel_for(static_cast<std::size_t>(k_pop), [&](std::size_t k) {
            if (iter == 0 && k == 0) {
                pop[0] = Candidate{init, best.objective};
                return;
            }
            Xoshiro256ss eng(rng.substream(static_cast<std::uint64_t>(iter),
                                           static_cast<std::uint64_t>(k)));
            StarCoefficients c = draw_coefficients(params, m, q, eng);
            if (projection) projection(c);
            pop[k] = score(std::move(c), ch, bf, cfg);
        });

        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
            return pop[a].objective > pop[b].objective;
        });

        std::vector<Candidate> elites;
        elites.reserve(k_elite);
        for (int k = 0; k < k_elite; ++k) elites.push_back(pop[order[k]]);
        params = smooth(update_tilting(elites, k_elite), params, cfg.ceo_chi);

        if (pop[order[0]].objective > best.objective) best = pop[order[0]];
        res.trajectory.push_back(best.objective);
        ++iter;
        // Stall on successive population bests, not the running best: the
        // running best ties with positive probability every iteration, which
        // would abort the search long before the tilting distribution
        // concentrates. Population bests keep fluctuating until it does.
        const double pop_best = pop[order[0]].objective;
        if (iter >= 2 && std::abs(pop_best - prev_pop_best) < cfg.tol_ceo) break;
        prev_pop_best = pop_best;
    }

    res.coeffs = std::move(best.coeffs);
    res.objective = best.objective;
    res.iterations = iter;
    return res;
}

}  // namespace starpls
