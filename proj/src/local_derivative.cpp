#include "phasespace/local_derivative.hpp"

namespace phasespace {

LocalDerivative::LocalDerivative(const DriftDiffusion& dd) : dim_(dd.dim()) {
    for (int i = 0; i < dim_; ++i) {
        const PolyExpr& nu = dd.drift[i];
        if (nu.is_zero()) continue;
        drift_.push_back({i, nu, nu.derivative(i)});
    }
    for (auto [i, j] : dd.diffusion_support()) {
        DiffEntry e;
        e.i = i;
        e.j = j;
        e.mult = i == j ? 1.0 : 2.0;
        e.d = dd.diffusion(i, j);
        e.di = e.d.derivative(i);
        e.dj = e.d.derivative(j);
        e.dij = e.di.derivative(j);
        diff_.push_back(std::move(e));
    }
}

double LocalDerivative::operator()(const double* x, const double* grad,
                                   const double* hess) const {
    double out = 0.0;
    for (const DriftEntry& e : drift_)
        out -= e.dnu.eval(x) + e.nu.eval(x) * grad[e.i];
    for (const DiffEntry& e : diff_) {
        double d = e.d.eval(x);
        double term = e.dij.eval(x) + e.di.eval(x) * grad[e.j] + e.dj.eval(x) * grad[e.i] +
                      d * (hess[e.i * dim_ + e.j] + grad[e.i] * grad[e.j]);
        out += e.mult * term;
    }
    return out;
}

double LocalDerivative::eval(const Ansatz& ansatz, const double* x) const {
    Eigen::VectorXd grad(dim_);
    Eigen::MatrixXd hess(dim_, dim_);
    ansatz.grad_x(x, grad.data());
    ansatz.hess_x(x, hess.data());
    return (*this)(x, grad.data(), hess.data());
}

}  // namespace phasespace
