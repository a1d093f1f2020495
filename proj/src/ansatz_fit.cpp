#include <cmath>

#include "phasespace/ansatz.hpp"
#include "phasespace/parallel.hpp"

namespace phasespace {

namespace {

struct Objective {
    const std::vector<Eigen::VectorXd>& xs;
    const std::vector<double>& targets;
    bool scale_free;

    // Returns mse and accumulates the gradient; scale is the current optimal
    // multiplier when scale_free, else 1.
    double eval(Ansatz& ans, Eigen::VectorXd& grad, double& scale) const {
        const size_t np = xs.size();
        const int n_params = ans.n_params();
        grad.setZero(n_params);

        thread_local std::vector<double> gp;
        gp.resize(n_params);

        std::vector<double> p(np);
        for (size_t i = 0; i < np; ++i) p[i] = ans.density(xs[i].data());

        if (scale_free) {
            double pt = 0.0, pp = 0.0;
            for (size_t i = 0; i < np; ++i) {
                pt += p[i] * targets[i];
                pp += p[i] * p[i];
            }
            scale = (pp > 0.0) ? pt / pp : 1.0;
        } else {
            scale = 1.0;
        }

        double mse = 0.0;
        for (size_t i = 0; i < np; ++i) {
            double resid = scale * p[i] - targets[i];
            mse += resid * resid;
            ans.grad_params_density(xs[i].data(), gp.data());
            double f = 2.0 * scale * resid / np;
            for (int k = 0; k < n_params; ++k) grad[k] += f * gp[k];
        }
        return mse / np;
    }
};

FitReport adam_fit(Ansatz& ans, const Objective& obj, const FitOptions& opt) {
    const int n = ans.n_params();
    Eigen::VectorXd th = ans.theta();
    Eigen::VectorXd m = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd v = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd grad(n);
    const double b1 = 0.9, b2 = 0.999, eps = 1e-8;

    double scale = 1.0;
    double mse = obj.eval(ans, grad, scale);
    double best_mse = mse;
    Eigen::VectorXd best_th = th;
    double best_scale = scale;
    int it = 0;
    double last_check = mse;

    for (it = 1; it <= opt.iterations; ++it) {
        m = b1 * m + (1.0 - b1) * grad;
        v = b2 * v + (1.0 - b2) * grad.cwiseProduct(grad);
        double c1 = 1.0 - std::pow(b1, it);
        double c2 = 1.0 - std::pow(b2, it);
        Eigen::VectorXd step =
            (m / c1).cwiseQuotient(((v / c2).cwiseSqrt().array() + eps).matrix());
        Eigen::VectorXd cand = th - opt.learning_rate * step;
        try {
            ans.set_theta(cand);
        } catch (const AnsatzError&) {
            // halve the step until the parameters are admissible again
            double f = 0.5;
            bool ok = false;
            for (int tries = 0; tries < 20 && !ok; ++tries, f *= 0.5) {
                try {
                    ans.set_theta(th - (opt.learning_rate * f) * step);
                    ok = true;
                } catch (const AnsatzError&) {
                }
            }
            if (!ok) {
                ans.set_theta(th);
                break;
            }
            cand = ans.theta();
        }
        th = cand;
        mse = obj.eval(ans, grad, scale);
        if (mse < best_mse) {
            best_mse = mse;
            best_th = th;
            best_scale = scale;
        }
        if (opt.tolerance > 0.0 && it % 50 == 0) {
            if (std::abs(last_check - mse) < opt.tolerance * std::max(1e-300, last_check)) break;
            last_check = mse;
        }
    }
    ans.set_theta(best_th);
    return {best_mse, best_scale, it};
}

}  // namespace

FitReport fit_to_points(Ansatz& ans, const std::vector<Eigen::VectorXd>& xs,
                        const std::vector<double>& targets, const FitOptions& opt) {
    if (xs.size() != targets.size() || xs.empty())
        throw ConfigError("fit needs matching, non-empty point and target lists");
    Objective obj{xs, targets, opt.scale_free};
    return adam_fit(ans, obj, opt);
}

FitReport fit_to_grid(Ansatz& ans, const GridField& target, const FitOptions& opt) {
    if (target.dim() != ans.dim())
        throw ConfigError("grid dimension does not match the ansatz");
    const int total = target.spec.total_points();
    std::vector<Eigen::VectorXd> xs(total, Eigen::VectorXd(target.dim()));
    std::vector<double> vals(total);
    for (int i = 0; i < total; ++i) {
        target.point(i, xs[i].data());
        vals[i] = target.values[i];
    }
    return fit_to_points(ans, xs, vals, opt);
}

}  // namespace phasespace
