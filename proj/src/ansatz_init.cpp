#include <cmath>

#include "phasespace/ansatz.hpp"
#include "phasespace/rng.hpp"

namespace phasespace {

namespace {

// Phase-space variance of a coherent state in the chosen representation per
// real coordinate.
double rep_sigma2(Qpd qpd) {
    double s = qpd_s(qpd);
    double v = (1.0 - s) / 4.0;
    if (v <= 0.0)
        throw ConfigError("the glauber representation has no finite-width coherent Gaussian");
    return v;
}

}  // namespace

std::unique_ptr<GaussianMixture> init_coherent_mixture(int n_modes,
                                                       const std::vector<cplx>& alphas, Qpd qpd,
                                                       int n_components, double jitter,
                                                       uint64_t seed) {
    if (static_cast<int>(alphas.size()) != n_modes)
        throw ConfigError("need one amplitude per mode");
    const int n = 2 * n_modes;
    const double s2 = rep_sigma2(qpd);
    // each mode contributes a normalization 1/(2 pi s2)
    const double norm = std::pow(2.0 * kPi * s2, -n_modes);

    auto out = std::make_unique<GaussianMixture>(n_modes, n_components);
    Eigen::VectorXd th = Eigen::VectorXd::Zero(out->n_params());
    Rng rng(seed, 0x1a2b);
    for (int r = 0; r < n_components; ++r) {
        GaussianMixture::weight(th, r, n) = norm / n_components;
        for (int m = 0; m < n_modes; ++m) {
            double dx = (r == 0 || jitter == 0.0) ? 0.0 : jitter * rng.normal();
            double dy = (r == 0 || jitter == 0.0) ? 0.0 : jitter * rng.normal();
            GaussianMixture::mu(th, r, n, 2 * m, false) = alphas[m].real() + dx;
            GaussianMixture::mu(th, r, n, 2 * m + 1, false) = alphas[m].imag() + dy;
        }
        for (int i = 0; i < n; ++i) GaussianMixture::sigma(th, r, n, i, i, false) = s2;
    }
    out->set_theta(th);
    return out;
}

std::unique_ptr<GaussianMixture> init_cat_mixture(cplx alpha, int parity, Qpd qpd,
                                                  int n_components, double jitter,
                                                  uint64_t seed) {
    if (parity != 1 && parity != -1) throw ConfigError("cat parity must be +1 or -1");
    if (n_components < 4)
        throw ConfigError("cat initial state needs at least four mixture components");
    const int n = 2;
    const double s2 = rep_sigma2(qpd);
    const double norm = 1.0 / (2.0 * kPi * s2);
    const double overlap = std::exp(-2.0 * std::norm(alpha));
    const double denom = 2.0 * (1.0 + parity * overlap);
    if (denom <= 0.0) throw ConfigError("cat state norm vanishes");

    // base components: two lobes at +/- alpha, plus an interference pair at
    // conjugate imaginary means carrying weight parity * overlap
    struct Base {
        double c;
        double re1, re2, im1, im2;  // complex mean, coordinates (x1, x2)
    };
    const double ar = alpha.real(), ai = alpha.imag();
    const Base bases[4] = {
        {norm / denom, ar, ai, 0.0, 0.0},
        {norm / denom, -ar, -ai, 0.0, 0.0},
        {parity * overlap * norm / denom, 0.0, 0.0, ai, -ar},
        {parity * overlap * norm / denom, 0.0, 0.0, -ai, ar},
    };

    auto out = std::make_unique<GaussianMixture>(1, n_components);
    Eigen::VectorXd th = Eigen::VectorXd::Zero(out->n_params());
    int copies[4] = {0, 0, 0, 0};
    for (int r = 0; r < n_components; ++r) copies[r % 4] += 1;

    Rng rng(seed, 0xca7);
    for (int r = 0; r < n_components; ++r) {
        const Base& b = bases[r % 4];
        bool replica = r >= 4;
        GaussianMixture::weight(th, r, n) = b.c / copies[r % 4];
        double j1 = (replica && jitter != 0.0) ? jitter * rng.normal() : 0.0;
        double j2 = (replica && jitter != 0.0) ? jitter * rng.normal() : 0.0;
        GaussianMixture::mu(th, r, n, 0, false) = b.re1 + j1;
        GaussianMixture::mu(th, r, n, 1, false) = b.re2 + j2;
        GaussianMixture::mu(th, r, n, 0, true) = b.im1;
        GaussianMixture::mu(th, r, n, 1, true) = b.im2;
        for (int i = 0; i < n; ++i) GaussianMixture::sigma(th, r, n, i, i, false) = s2;
    }
    out->set_theta(th);
    return out;
}

std::unique_ptr<Rbm> init_rbm_coherent(int n_modes, const std::vector<cplx>& alphas, Qpd qpd,
                                       int hidden_per_unit, double perturb, uint64_t seed) {
    if (static_cast<int>(alphas.size()) != n_modes)
        throw ConfigError("need one amplitude per mode");
    const int n = 2 * n_modes;
    const double s2 = rep_sigma2(qpd);

    auto out = std::make_unique<Rbm>(n_modes, hidden_per_unit);
    const int k = out->n_hidden();
    Eigen::VectorXd th = Eigen::VectorXd::Zero(out->n_params());

    for (int i = 0; i < n; ++i) th[i] = 1.0 / std::sqrt(2.0 * s2);

    Eigen::VectorXd mu(n);
    for (int m = 0; m < n_modes; ++m) {
        mu[2 * m] = alphas[m].real();
        mu[2 * m + 1] = alphas[m].imag();
    }
    Eigen::VectorXd w0 = mu / s2;

    // One hidden unit saturated deep in its linear regime carries the
    // displacement term exp(mu . x / s2); bias chosen so tanh stays within
    // 1e-20 of one over the sampled region.
    double reach = w0.norm() * (mu.norm() + 10.0);
    th[n + 0] = 25.0 + reach;
    for (int i = 0; i < n; ++i) th[n + k + i] = w0[i];

    Rng rng(seed, 0xb0b);
    if (perturb != 0.0) {
        for (int j = 1; j < k; ++j) {
            th[n + j] = perturb * rng.normal();
            for (int i = 0; i < n; ++i)
                th[n + k + static_cast<long>(j) * n + i] = perturb * rng.normal();
        }
    }
    out->set_theta(th);
    return out;
}

}  // namespace phasespace
