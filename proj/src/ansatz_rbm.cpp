#include <cmath>
#include <limits>

#include "phasespace/ansatz.hpp"
#include "phasespace/simd.hpp"

namespace phasespace {

Rbm::Rbm(int n_modes, int hidden_per_unit) : n_modes_(n_modes), beta_(hidden_per_unit) {
    if (n_modes < 1 || hidden_per_unit < 1)
        throw ConfigError("rbm needs at least one mode and one hidden unit per coordinate");
    const int n = 2 * n_modes;
    const int k = n_hidden();
    theta_ = Eigen::VectorXd::Zero(n + k + static_cast<long>(k) * n);
    // unit-width envelope, silent hidden layer
    for (int i = 0; i < n; ++i) theta_[i] = 1.0;
    set_theta(theta_);
}

void Rbm::set_theta(const Eigen::VectorXd& th) {
    const int n = dim();
    const int k = n_hidden();
    if (th.size() != n + k + static_cast<long>(k) * n)
        throw AnsatzError("parameter vector has wrong length");
    if (!th.allFinite()) throw AnsatzError("parameter vector has non-finite entries");
    theta_ = th;
    lambda_ = th.head(n);
    bias_ = th.segment(n, k);
    w_.resize(k, n);
    for (int j = 0; j < k; ++j)
        for (int i = 0; i < n; ++i) w_(j, i) = th[n + k + static_cast<long>(j) * n + i];
}

namespace {
struct RbmScratch {
    Eigen::VectorXd u, lc, th, s2;
};
}  // namespace

LogDensity Rbm::log_density(const double* x) const {
    const int n = dim();
    const int k = n_hidden();
    thread_local RbmScratch s;
    s.u.resize(k);
    s.lc.resize(k);
    Eigen::Map<const Eigen::VectorXd> xv(x, n);
    s.u.noalias() = w_ * xv;
    s.u += bias_;
    simd::ops().logcosh_batch(s.u.data(), s.lc.data(), k);
    double lp = s.lc.sum();
    for (int i = 0; i < n; ++i) lp -= lambda_[i] * lambda_[i] * x[i] * x[i];
    return {lp, 1};
}

double Rbm::density(const double* x) const { return std::exp(log_density(x).log_abs); }

void Rbm::eval_all(const double* x, LogDensity* ld, double* gparams, double* gx,
                   double* hx) const {
    const int n = dim();
    const int k = n_hidden();
    thread_local RbmScratch s;
    s.u.resize(k);
    s.th.resize(k);
    s.s2.resize(k);
    Eigen::Map<const Eigen::VectorXd> xv(x, n);
    s.u.noalias() = w_ * xv;
    s.u += bias_;

    if (ld) {
        s.lc.resize(k);
        simd::ops().logcosh_batch(s.u.data(), s.lc.data(), k);
        double lp = s.lc.sum();
        for (int i = 0; i < n; ++i) lp -= lambda_[i] * lambda_[i] * x[i] * x[i];
        *ld = {lp, 1};
    }

    bool need_tanh = gparams || gx || hx;
    if (!need_tanh) return;
    if (hx)
        simd::ops().tanh_sech2_batch(s.u.data(), s.th.data(), s.s2.data(), k);
    else
        simd::ops().tanh_batch(s.u.data(), s.th.data(), k);

    if (gparams) {
        for (int i = 0; i < n; ++i) gparams[i] = -2.0 * lambda_[i] * x[i] * x[i];
        for (int j = 0; j < k; ++j) gparams[n + j] = s.th[j];
        double* wout = gparams + n + k;
        for (int j = 0; j < k; ++j)
            for (int i = 0; i < n; ++i) wout[static_cast<long>(j) * n + i] = s.th[j] * x[i];
    }
    if (gx) {
        Eigen::Map<Eigen::VectorXd> g(gx, n);
        g.noalias() = w_.transpose() * s.th;
        for (int i = 0; i < n; ++i) g[i] -= 2.0 * lambda_[i] * lambda_[i] * x[i];
    }
    if (hx) {
        Eigen::Map<Eigen::MatrixXd> h(hx, n, n);
        h.setZero();
        for (int j = 0; j < k; ++j)
            h.noalias() += s.s2[j] * (w_.row(j).transpose() * w_.row(j));
        for (int i = 0; i < n; ++i) h(i, i) -= 2.0 * lambda_[i] * lambda_[i];
    }
}

void Rbm::grad_params(const double* x, double* out) const {
    eval_all(x, nullptr, out, nullptr, nullptr);
}

void Rbm::grad_params_density(const double* x, double* out) const {
    LogDensity ld;
    eval_all(x, &ld, out, nullptr, nullptr);
    double p = std::exp(ld.log_abs);
    for (int i = 0; i < n_params(); ++i) out[i] *= p;
}

void Rbm::grad_x(const double* x, double* out) const {
    eval_all(x, nullptr, nullptr, out, nullptr);
}

void Rbm::hess_x(const double* x, double* out) const {
    eval_all(x, nullptr, nullptr, nullptr, out);
}

void Rbm::set_quadrature(double half_width, int points) {
    if (half_width <= 0 || points < 3) throw ConfigError("bad quadrature window");
    quad_half_width_ = half_width;
    quad_points_ = points;
}

Normalization Rbm::normalization() const {
    const int n = dim();
    if (n > 4) return {0.0, false};
    int pts = (n == 2) ? quad_points_ : std::min(quad_points_, 41);
    double step = 2.0 * quad_half_width_ / (pts - 1);
    long total = 1;
    for (int i = 0; i < n; ++i) total *= pts;
    double shift = -std::numeric_limits<double>::infinity();
    std::vector<double> lps(total);
    std::vector<double> x(n);
    for (long f = 0; f < total; ++f) {
        long rem = f;
        for (int i = n - 1; i >= 0; --i) {
            x[i] = -quad_half_width_ + step * (rem % pts);
            rem /= pts;
        }
        lps[f] = log_density(x.data()).log_abs;
        shift = std::max(shift, lps[f]);
    }
    double acc = 0.0;
    for (long f = 0; f < total; ++f) acc += std::exp(lps[f] - shift);
    double logz = shift + std::log(acc) + n * std::log(step);
    return {logz, true};
}

std::unique_ptr<Ansatz> Rbm::clone() const { return std::make_unique<Rbm>(*this); }

}  // namespace phasespace
