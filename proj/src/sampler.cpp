#include "phasespace/sampler.hpp"

#include <cmath>

#include "phasespace/parallel.hpp"

namespace phasespace {

double SampleSet::sign_mean() const {
    if (signs.empty()) return 0.0;
    long acc = 0;
    for (int8_t s : signs) acc += s;
    return static_cast<double>(acc) / signs.size();
}

MetropolisSampler::MetropolisSampler(const Ansatz& ansatz, const SamplerConfig& cfg)
    : cfg_(cfg), dim_(ansatz.dim()) {
    if (cfg_.n_chains < 1 || cfg_.samples_per_chain < 1)
        throw ConfigError("sampler needs at least one chain and one sample per chain");
    if (cfg_.r != 1 && cfg_.r != 2) throw ConfigError("sampler exponent r must be 1 or 2");
    if (cfg_.proposal_sigma <= 0) throw ConfigError("proposal_sigma must be positive");
    rng_.reserve(cfg_.n_chains);
    for (int c = 0; c < cfg_.n_chains; ++c) rng_.emplace_back(cfg_.seed, 1000 + c);
    reset(ansatz);
}

void MetropolisSampler::reset(const Ansatz& ansatz) {
    pos_.assign(cfg_.n_chains, Eigen::VectorXd::Zero(dim_));
    lp_.assign(cfg_.n_chains, LogDensity{});

    std::vector<Eigen::VectorXd> centers;
    if (const auto* g = dynamic_cast<const GaussianMixture*>(&ansatz))
        centers = g->component_centers();
    if (centers.empty()) centers.push_back(Eigen::VectorXd::Zero(dim_));

    for (int c = 0; c < cfg_.n_chains; ++c) {
        bool placed = false;
        for (int attempt = 0; attempt < 64 && !placed; ++attempt) {
            Eigen::VectorXd x = centers[c % centers.size()];
            for (int i = 0; i < dim_; ++i) x[i] += cfg_.init_spread * rng_[c].normal();
            LogDensity ld = ansatz.log_density(x.data());
            if (ld.sign != 0 && std::isfinite(ld.log_abs)) {
                pos_[c] = x;
                lp_[c] = ld;
                placed = true;
            }
        }
        if (!placed)
            throw SamplerError("could not place chain " + std::to_string(c) +
                               " on nonzero density after 64 draws");
    }
    fresh_ = true;
}

void MetropolisSampler::sweep(const Ansatz& ansatz, int c, long* accept_tally) {
    thread_local Eigen::VectorXd prop;
    prop.resize(dim_);
    Rng& rng = rng_[c];
    for (int k = 0; k < dim_; ++k) {
        for (int i = 0; i < dim_; ++i) prop[i] = pos_[c][i] + cfg_.proposal_sigma * rng.normal();
        LogDensity cand = ansatz.log_density(prop.data());
        if (std::isnan(cand.log_abs))
            throw SamplerError("log-density evaluated to NaN during sampling");
        bool accept = false;
        if (cand.sign != 0) {
            double dl = cfg_.r * (cand.log_abs - lp_[c].log_abs);
            accept = dl >= 0.0 || rng.uniform_pos() < std::exp(dl);
        }
        if (accept) {
            pos_[c] = prop;
            lp_[c] = cand;
        }
        if (accept_tally && accept) *accept_tally += 1;
    }
}

SampleSet MetropolisSampler::collect(const Ansatz& ansatz) {
    const int warm = fresh_ ? cfg_.burn_in : cfg_.refresh_sweeps;
    fresh_ = false;

    // Positions may be stale if theta changed since the last collection.
    for (int c = 0; c < cfg_.n_chains; ++c) {
        lp_[c] = ansatz.log_density(pos_[c].data());
        if (lp_[c].sign == 0 || !std::isfinite(lp_[c].log_abs)) {
            reset(ansatz);
            break;
        }
    }

    SampleSet out;
    out.n_chains = cfg_.n_chains;
    out.r = cfg_.r;
    const int per = cfg_.samples_per_chain;
    out.positions.resize(static_cast<long>(cfg_.n_chains) * per, dim_);
    out.signs.assign(static_cast<size_t>(cfg_.n_chains) * per, 0);

    std::vector<long> accepted(cfg_.n_chains, 0);

    parallel_for(cfg_.n_chains, [&](size_t b, size_t e, int) {
        for (size_t c = b; c < e; ++c) {
            for (int k = 0; k < warm; ++k) sweep(ansatz, static_cast<int>(c), nullptr);
            for (int k = 0; k < per; ++k) {
                sweep(ansatz, static_cast<int>(c), &accepted[c]);
                long row = static_cast<long>(c) * per + k;
                out.positions.row(row) = pos_[c].transpose();
                out.signs[row] = static_cast<int8_t>(lp_[c].sign);
            }
        }
    });

    long total_acc = 0;
    for (long a : accepted) total_acc += a;
    const long total_prop = static_cast<long>(cfg_.n_chains) * per * dim_;
    out.acceptance = static_cast<double>(total_acc) / total_prop;
    if (total_acc == 0)
        throw SamplerError("sampler rejected every proposal in a collection window");
    return out;
}

SampleSet sample_density(const Ansatz& ansatz, const SamplerConfig& cfg) {
    MetropolisSampler s(ansatz, cfg);
    return s.collect(ansatz);
}

MeanErr expectation(const SampleSet& s, const Eigen::VectorXd& f) {
    const int n = s.size();
    if (f.size() != n) throw ConfigError("expectation: value vector length mismatch");
    const bool signed_w = (s.r % 2) == 1;

    double num = 0.0, den = 0.0;
    for (int i = 0; i < n; ++i) {
        double w = signed_w ? static_cast<double>(s.signs[i]) : 1.0;
        num += w * f[i];
        den += w;
    }
    if (den == 0.0) throw SamplerError("expectation: sign weights sum to zero");
    MeanErr out;
    out.value = num / den;

    // chain-blocked error: spread of per-chain ratio estimates
    int blocks = s.n_chains >= 2 ? s.n_chains : std::min(16, n);
    int per = n / blocks;
    if (per < 1) {
        out.std_error = 0.0;
        return out;
    }
    double mean_acc = 0.0, sq_acc = 0.0;
    int used = 0;
    for (int b = 0; b < blocks; ++b) {
        double bn = 0.0, bd = 0.0;
        for (int i = b * per; i < (b + 1) * per; ++i) {
            double w = signed_w ? static_cast<double>(s.signs[i]) : 1.0;
            bn += w * f[i];
            bd += w;
        }
        if (bd == 0.0) continue;
        double r = bn / bd;
        mean_acc += r;
        sq_acc += r * r;
        ++used;
    }
    if (used >= 2) {
        double m = mean_acc / used;
        double var = std::max(0.0, sq_acc / used - m * m);
        out.std_error = std::sqrt(var / used);
    }
    return out;
}

}  // namespace phasespace
