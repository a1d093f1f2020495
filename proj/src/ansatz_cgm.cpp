#include <Eigen/Eigenvalues>
#include <cmath>
#include <limits>

#include "phasespace/ansatz.hpp"

namespace phasespace {

void Ansatz::eval_all(const double* x, LogDensity* ld, double* gparams, double* gx,
                      double* hx) const {
    if (ld) *ld = log_density(x);
    if (gparams) grad_params(x, gparams);
    if (gx) grad_x(x, gx);
    if (hx) hess_x(x, hx);
}

GaussianMixture::GaussianMixture(int n_modes, int n_components)
    : n_modes_(n_modes), n_components_(n_components) {
    if (n_modes < 1 || n_components < 1)
        throw ConfigError("gaussian mixture needs at least one mode and one component");
    const int n = 2 * n_modes;
    theta_ = Eigen::VectorXd::Zero(
        static_cast<long>(n_components) * params_per_component(n_modes));
    // identity covariances, zero means, equal weights: a valid default
    for (int r = 0; r < n_components; ++r) {
        weight(theta_, r, n) = 1.0 / n_components;
        for (int i = 0; i < n; ++i) sigma(theta_, r, n, i, i, false) = 1.0;
    }
    rebuild(theta_, comps_);
}

double& GaussianMixture::weight(Eigen::VectorXd& th, int r, int n) {
    long stride = 1 + 2 * n + 2 * n * n;
    return th[r * stride];
}

double& GaussianMixture::mu(Eigen::VectorXd& th, int r, int n, int i, bool imag) {
    long stride = 1 + 2 * n + 2 * n * n;
    return th[r * stride + 1 + (imag ? n : 0) + i];
}

double& GaussianMixture::sigma(Eigen::VectorXd& th, int r, int n, int i, int j, bool imag) {
    long stride = 1 + 2 * n + 2 * n * n;
    return th[r * stride + 1 + 2 * n + (imag ? n * n : 0) + i * n + j];
}

void GaussianMixture::rebuild(const Eigen::VectorXd& th, std::vector<Component>& comps) const {
    const int n = dim();
    const long stride = params_per_component(n_modes_);
    if (th.size() != static_cast<long>(n_components_) * stride)
        throw AnsatzError("parameter vector has wrong length");
    if (!th.allFinite()) throw AnsatzError("parameter vector has non-finite entries");

    comps.clear();
    comps.reserve(n_components_);
    for (int r = 0; r < n_components_; ++r) {
        const double* base = th.data() + r * stride;
        Component c;
        c.c = base[0];
        c.mu.resize(n);
        for (int i = 0; i < n; ++i) c.mu[i] = cplx(base[1 + i], base[1 + n + i]);
        Eigen::MatrixXcd sig(n, n);
        const double* sre = base + 1 + 2 * n;
        const double* sim = sre + n * n;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) sig(i, j) = cplx(sre[i * n + j], sim[i * n + j]);
        Eigen::MatrixXcd sym = 0.5 * (sig + sig.transpose());

        Eigen::JacobiSVD<Eigen::MatrixXcd> svd(sym);
        double smax = svd.singularValues()(0);
        double smin = svd.singularValues()(n - 1);
        if (!(smin > 0.0) || smax / smin > 1e12)
            throw AnsatzError("component " + std::to_string(r + 1) +
                              ": covariance is singular or condition number exceeds 1e12");
        c.max_cond = smax / smin;
        c.a = sym.partialPivLu().inverse();

        Eigen::LLT<Eigen::MatrixXd> llt(
            Eigen::MatrixXd(0.5 * (c.a.real() + c.a.real().transpose())));
        if (llt.info() != Eigen::Success)
            throw AnsatzError("component " + std::to_string(r + 1) +
                              ": real part of inverse covariance is not positive definite; "
                              "density is not normalizable");
        comps.push_back(std::move(c));
    }
}

void GaussianMixture::set_theta(const Eigen::VectorXd& th) {
    std::vector<Component> next;
    rebuild(th, next);
    comps_ = std::move(next);
    theta_ = th;
}

void GaussianMixture::core(const double* x, Scratch& s) const {
    const int n = dim();
    const int rn = n_components_;
    s.e_hat.resize(rn);
    s.ce_hat.resize(rn);
    if (static_cast<int>(s.g.size()) != rn) s.g.assign(rn, Eigen::VectorXcd(n));

    thread_local Eigen::VectorXcd d;
    thread_local std::vector<cplx> q;
    d.resize(n);
    q.resize(rn);

    s.shift = -std::numeric_limits<double>::infinity();
    for (int r = 0; r < rn; ++r) {
        const Component& comp = comps_[r];
        for (int i = 0; i < n; ++i) d[i] = cplx(x[i], 0.0) - comp.mu[i];
        s.g[r].noalias() = comp.a * d;
        cplx qr = 0.0;
        for (int i = 0; i < n; ++i) qr += d[i] * s.g[r][i];
        q[r] = -0.5 * qr;
        if (comp.c != 0.0)
            s.shift = std::max(s.shift, q[r].real() + std::log(std::abs(comp.c)));
    }
    if (!std::isfinite(s.shift)) s.shift = 0.0;
    s.psum = 0.0;
    for (int r = 0; r < rn; ++r) {
        double mag = std::exp(q[r].real() - s.shift);
        cplx eh = mag * cplx(std::cos(q[r].imag()), std::sin(q[r].imag()));
        s.e_hat[r] = eh;
        s.ce_hat[r] = comps_[r].c * eh;
        s.psum += s.ce_hat[r].real();
    }
}

LogDensity GaussianMixture::log_density(const double* x) const {
    thread_local Scratch s;
    core(x, s);
    LogDensity out;
    if (s.psum == 0.0) {
        out.sign = 0;
        out.log_abs = -std::numeric_limits<double>::infinity();
    } else {
        out.sign = s.psum > 0 ? 1 : -1;
        out.log_abs = s.shift + std::log(std::abs(s.psum));
    }
    return out;
}

double GaussianMixture::density(const double* x) const {
    thread_local Scratch s;
    core(x, s);
    return s.psum * std::exp(s.shift);
}

std::unique_ptr<Ansatz> GaussianMixture::clone() const {
    return std::make_unique<GaussianMixture>(*this);
}

std::vector<Eigen::VectorXd> GaussianMixture::component_centers() const {
    std::vector<Eigen::VectorXd> out;
    for (const auto& c : comps_) out.push_back(c.mu.real());
    return out;
}

void GaussianMixture::eval_all(const double* x, LogDensity* ld, double* gparams, double* gx,
                               double* hx) const {
    const int n = dim();
    const int rn = n_components_;
    thread_local Scratch s;
    core(x, s);

    if (ld) {
        if (s.psum == 0.0) {
            ld->sign = 0;
            ld->log_abs = -std::numeric_limits<double>::infinity();
        } else {
            ld->sign = s.psum > 0 ? 1 : -1;
            ld->log_abs = s.shift + std::log(std::abs(s.psum));
        }
    }

    // At an exact node the log-derivatives diverge; emit zeros there (the
    // point has measure zero and the sign weighting owns it).
    double inv = (s.psum != 0.0) ? 1.0 / s.psum : 0.0;

    if (gparams) {
        const long stride = params_per_component(n_modes_);
        for (int r = 0; r < rn; ++r) {
            double* o = gparams + r * stride;
            o[0] = s.e_hat[r].real() * inv;
            const cplx gc = s.ce_hat[r];
            const Eigen::VectorXcd& gr = s.g[r];
            for (int i = 0; i < n; ++i) {
                cplx t = gc * gr[i];
                o[1 + i] = t.real() * inv;
                o[1 + n + i] = -t.imag() * inv;
            }
            double* ore = o + 1 + 2 * n;
            double* oim = ore + n * n;
            for (int i = 0; i < n; ++i) {
                cplx half_gi = 0.5 * gr[i];
                for (int j = 0; j < n; ++j) {
                    cplx t = gc * (half_gi * gr[j]);
                    ore[i * n + j] = t.real() * inv;
                    oim[i * n + j] = -t.imag() * inv;
                }
            }
        }
    }

    if (gx || hx) {
        thread_local Eigen::VectorXcd acc;
        acc.setZero(n);
        for (int r = 0; r < rn; ++r) acc -= s.ce_hat[r] * s.g[r];
        if (gx)
            for (int i = 0; i < n; ++i) gx[i] = acc[i].real() * inv;
        if (hx) {
            thread_local Eigen::MatrixXcd h;
            h.setZero(n, n);
            for (int r = 0; r < rn; ++r) {
                h.noalias() += s.ce_hat[r] * (s.g[r] * s.g[r].transpose());
                h.noalias() -= s.ce_hat[r] * comps_[r].a;
            }
            for (int i = 0; i < n; ++i) {
                double gi = acc[i].real() * inv;
                for (int j = 0; j < n; ++j) {
                    double gj = acc[j].real() * inv;
                    hx[i * n + j] = h(i, j).real() * inv - gi * gj;
                }
            }
        }
    }
}

void GaussianMixture::grad_params(const double* x, double* out) const {
    eval_all(x, nullptr, out, nullptr, nullptr);
}

void GaussianMixture::grad_x(const double* x, double* out) const {
    eval_all(x, nullptr, nullptr, out, nullptr);
}

void GaussianMixture::hess_x(const double* x, double* out) const {
    eval_all(x, nullptr, nullptr, nullptr, out);
}

void GaussianMixture::grad_params_density(const double* x, double* out) const {
    const int n = dim();
    const int rn = n_components_;
    thread_local Scratch s;
    core(x, s);
    double scale = std::exp(s.shift);
    const long stride = params_per_component(n_modes_);
    for (int r = 0; r < rn; ++r) {
        double* o = out + r * stride;
        o[0] = s.e_hat[r].real() * scale;
        const cplx gc = s.ce_hat[r];
        const Eigen::VectorXcd& gr = s.g[r];
        for (int i = 0; i < n; ++i) {
            cplx t = gc * gr[i];
            o[1 + i] = t.real() * scale;
            o[1 + n + i] = -t.imag() * scale;
        }
        double* ore = o + 1 + 2 * n;
        double* oim = ore + n * n;
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                cplx t = gc * (0.5 * gr[i] * gr[j]);
                ore[i * n + j] = t.real() * scale;
                oim[i * n + j] = -t.imag() * scale;
            }
        }
    }
}

Normalization GaussianMixture::normalization() const {
    const int n = dim();
    cplx z = 0.0;
    for (const auto& comp : comps_) {
        // integral of exp(-d^T A d / 2) = (2 pi)^{n/2} / sqrt(det A), branch
        // fixed per eigenvalue (all eigenvalues lie in the right half-plane
        // because Re A is positive definite).
        Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(comp.a);
        cplx root = 1.0;
        for (int i = 0; i < n; ++i) root *= std::sqrt(es.eigenvalues()[i]);
        z += comp.c * std::pow(2.0 * kPi, n / 2.0) / root;
    }
    if (!(z.real() > 0.0))
        throw AnsatzError("mixture integrates to a non-positive value; not a density");
    return {std::log(z.real()), true};
}

}  // namespace phasespace
