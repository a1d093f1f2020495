#include "phasespace/fock_oracle.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>

namespace phasespace {

namespace {
constexpr int kMaxTotalDim = 4096;
using Triplet = Eigen::Triplet<cplx>;
}  // namespace

FockOracle::FockOracle(const ModelSpec& model, std::vector<int> cutoffs)
    : model_(model), cutoffs_(std::move(cutoffs)) {
    model_.validate();
    if (static_cast<int>(cutoffs_.size()) == 1 && model_.n_modes > 1)
        cutoffs_.assign(model_.n_modes, cutoffs_[0]);
    if (static_cast<int>(cutoffs_.size()) != model_.n_modes)
        throw ConfigError("oracle cutoffs must have 1 or n_modes entries");
    long dim = 1;
    for (int c : cutoffs_) {
        if (c < 2) throw ConfigError("oracle cutoff must be at least 2");
        dim *= c;
        if (dim > kMaxTotalDim)
            throw ConfigError("oracle dimension " + std::to_string(dim) + " exceeds cap " +
                              std::to_string(kMaxTotalDim) +
                              "; reduce cutoffs or mode count");
    }
    total_dim_ = static_cast<int>(dim);

    const int m = model_.n_modes;
    strides_.assign(m, 1);
    for (int k = m - 2; k >= 0; --k) strides_[k] = strides_[k + 1] * cutoffs_[k + 1];

    auto level = [&](int flat, int mode) { return (flat / strides_[mode]) % cutoffs_[mode]; };

    // Hamiltonian: detuning and kerr on the diagonal, drives and hops off it.
    std::vector<Triplet> ht;
    for (int f = 0; f < total_dim_; ++f) {
        double diag = 0.0;
        for (int k = 0; k < m; ++k) {
            double nk = level(f, k);
            diag += model_.detuning[k] * nk - model_.kerr[k] * nk * (nk - 1.0);
        }
        if (diag != 0.0) ht.emplace_back(f, f, cplx(diag, 0.0));
    }
    for (int k = 0; k < m; ++k) {
        if (model_.drive1[k] != 0.0) {
            for (int f = 0; f < total_dim_; ++f) {
                int nk = level(f, k);
                if (nk >= 1) {
                    cplx v(model_.drive1[k] * std::sqrt(static_cast<double>(nk)), 0.0);
                    ht.emplace_back(f - strides_[k], f, v);  // F a
                    ht.emplace_back(f, f - strides_[k], v);  // F a^dag
                }
            }
        }
        if (model_.drive2[k] != 0.0) {
            for (int f = 0; f < total_dim_; ++f) {
                int nk = level(f, k);
                if (nk >= 2) {
                    cplx v(model_.drive2[k] * std::sqrt(nk * (nk - 1.0)), 0.0);
                    ht.emplace_back(f - 2 * strides_[k], f, v);
                    ht.emplace_back(f, f - 2 * strides_[k], v);
                }
            }
        }
    }
    for (const auto& h : model_.hops) {
        if (h.coupling == 0.0) continue;
        for (int f = 0; f < total_dim_; ++f) {
            int nb = level(f, h.b);
            int na = level(f, h.a);
            if (nb >= 1 && na <= cutoffs_[h.a] - 2) {
                // a_adag a_b |f> with amplitude sqrt((na+1) nb)
                int g = f + strides_[h.a] - strides_[h.b];
                cplx v(h.coupling * std::sqrt((na + 1.0) * nb), 0.0);
                ht.emplace_back(g, f, v);
                ht.emplace_back(f, g, v);
            }
        }
    }
    hamiltonian_.resize(total_dim_, total_dim_);
    hamiltonian_.setFromTriplets(ht.begin(), ht.end());

    auto add_jump = [&](const std::vector<Triplet>& t) {
        Jump j;
        Eigen::SparseMatrix<cplx> op(total_dim_, total_dim_);
        op.setFromTriplets(t.begin(), t.end());
        j.op = op;
        j.cdc_diag = Eigen::VectorXd::Zero(total_dim_);
        for (int c = 0; c < op.outerSize(); ++c)
            for (Eigen::SparseMatrix<cplx>::InnerIterator it(op, c); it; ++it)
                j.cdc_diag[it.col()] += std::norm(it.value());
        jumps_.push_back(std::move(j));
    };

    for (int k = 0; k < m; ++k) {
        if (model_.loss1[k] > 0.0) {
            std::vector<Triplet> t;
            double root = std::sqrt(model_.loss1[k]);
            for (int f = 0; f < total_dim_; ++f) {
                int nk = level(f, k);
                if (nk >= 1)
                    t.emplace_back(f - strides_[k], f, cplx(root * std::sqrt((double)nk), 0.0));
            }
            add_jump(t);
        }
        if (model_.gain[k] > 0.0) {
            std::vector<Triplet> t;
            double root = std::sqrt(model_.gain[k]);
            for (int f = 0; f < total_dim_; ++f) {
                int nk = level(f, k);
                if (nk <= cutoffs_[k] - 2)
                    t.emplace_back(f + strides_[k], f, cplx(root * std::sqrt(nk + 1.0), 0.0));
            }
            add_jump(t);
        }
        if (model_.loss2[k] > 0.0) {
            std::vector<Triplet> t;
            double root = std::sqrt(model_.loss2[k]);
            for (int f = 0; f < total_dim_; ++f) {
                int nk = level(f, k);
                if (nk >= 2)
                    t.emplace_back(f - 2 * strides_[k], f,
                                   cplx(root * std::sqrt(nk * (nk - 1.0)), 0.0));
            }
            add_jump(t);
        }
    }
    for (auto& j : jumps_) j.op.makeCompressed();
    hamiltonian_.makeCompressed();
}

void FockOracle::apply_generator(const Dense& rho, Dense& out) const {
    const cplx mi(0.0, -1.0);
    out.noalias() = mi * (hamiltonian_ * rho);
    out.noalias() -= mi * (rho * hamiltonian_);
    for (const auto& j : jumps_) {
        Dense tmp = j.op * rho;
        out.noalias() += tmp * j.op.adjoint();
        out.noalias() -= 0.5 * (j.cdc_diag.asDiagonal() * rho).eval();
        out.noalias() -= 0.5 * (rho * j.cdc_diag.asDiagonal()).eval();
    }
}

FockOracle::Dense FockOracle::generator(const Dense& rho) const {
    Dense out(total_dim_, total_dim_);
    apply_generator(rho, out);
    return out;
}

void FockOracle::rk4_step(Dense& rho, double dt) const {
    Dense k(total_dim_, total_dim_), stage(total_dim_, total_dim_), acc(total_dim_, total_dim_);
    apply_generator(rho, k);
    acc = rho + (dt / 6.0) * k;
    stage = rho + (dt / 2.0) * k;
    apply_generator(stage, k);
    acc += (dt / 3.0) * k;
    stage = rho + (dt / 2.0) * k;
    apply_generator(stage, k);
    acc += (dt / 3.0) * k;
    stage = rho + dt * k;
    apply_generator(stage, k);
    rho = acc + (dt / 6.0) * k;
}

void FockOracle::evolve(Dense& rho, double t_max, double dt, int output_stride,
                        const std::function<void(double, const Dense&)>& on_output) const {
    long steps = std::lround(t_max / dt);
    if (output_stride < 1) output_stride = 1;
    if (on_output) on_output(0.0, rho);
    for (long k = 1; k <= steps; ++k) {
        rk4_step(rho, dt);
        if (k % output_stride == 0 || k == steps) {
            rho = 0.5 * (rho + rho.adjoint().eval());
            double terr = trace_error(rho);
            double t = k * dt;
            if (terr > 1e-8 * std::max(1.0, t))
                throw std::runtime_error("oracle trace drift " + format_double(terr) +
                                         " at t = " + format_double(t) +
                                         "; reduce dt or raise cutoffs");
            if (on_output) on_output(t, rho);
        }
    }
}

FockOracle::Dense FockOracle::steady_state(Dense rho, double dt, double tol, double t_max,
                                           bool* converged) const {
    long steps = std::lround(t_max / dt);
    int check_every = std::max(1, static_cast<int>(std::lround(0.1 / dt)));
    if (converged) *converged = false;
    for (long k = 1; k <= steps; ++k) {
        rk4_step(rho, dt);
        if (k % check_every == 0) {
            rho = 0.5 * (rho + rho.adjoint().eval());
            double resid = generator(rho).norm();
            if (resid < tol) {
                if (converged) *converged = true;
                break;
            }
        }
    }
    return rho;
}

Eigen::VectorXcd FockOracle::coherent_vector(cplx alpha, int dim) {
    Eigen::VectorXcd v(dim);
    v[0] = std::exp(-0.5 * std::norm(alpha));
    for (int n = 1; n < dim; ++n) v[n] = v[n - 1] * alpha / std::sqrt(static_cast<double>(n));
    v.normalize();
    return v;
}

FockOracle::Dense FockOracle::coherent_state(const std::vector<cplx>& alphas) const {
    if (static_cast<int>(alphas.size()) != model_.n_modes)
        throw ConfigError("coherent_state needs one amplitude per mode");
    Eigen::VectorXcd v = Eigen::VectorXcd::Ones(1);
    for (int k = 0; k < model_.n_modes; ++k) {
        Eigen::VectorXcd vk = coherent_vector(alphas[k], cutoffs_[k]);
        Eigen::VectorXcd next(v.size() * vk.size());
        for (int i = 0; i < v.size(); ++i) next.segment(i * vk.size(), vk.size()) = v[i] * vk;
        v = std::move(next);
    }
    return v * v.adjoint();
}

FockOracle::Dense FockOracle::cat_state(cplx alpha, int parity) const {
    if (model_.n_modes != 1) throw ConfigError("cat_state is single-mode");
    if (parity != 1 && parity != -1) throw ConfigError("cat parity must be +1 or -1");
    Eigen::VectorXcd v = coherent_vector(alpha, total_dim_) +
                         static_cast<double>(parity) * coherent_vector(-alpha, total_dim_);
    double nrm = v.norm();
    if (nrm < 1e-14) throw ConfigError("cat state has vanishing norm for this amplitude");
    v /= nrm;
    return v * v.adjoint();
}

cplx FockOracle::expval_a(const Dense& rho, int mode) const {
    cplx acc = 0.0;
    for (int f = 0; f < total_dim_; ++f) {
        int nk = (f / strides_[mode]) % cutoffs_[mode];
        if (nk >= 1) acc += std::sqrt(static_cast<double>(nk)) * rho(f, f - strides_[mode]);
    }
    return acc;
}

double FockOracle::expval_n(const Dense& rho, int mode) const {
    double acc = 0.0;
    for (int f = 0; f < total_dim_; ++f) {
        int nk = (f / strides_[mode]) % cutoffs_[mode];
        acc += nk * rho(f, f).real();
    }
    return acc;
}

double FockOracle::trace_error(const Dense& rho) const {
    return std::abs(rho.trace() - cplx(1.0, 0.0));
}

double FockOracle::hermiticity_error(const Dense& rho) const {
    return (rho - rho.adjoint().eval()).cwiseAbs().maxCoeff();
}

double FockOracle::min_eigenvalue(const Dense& rho) const {
    Eigen::SelfAdjointEigenSolver<Dense> es(0.5 * (rho + rho.adjoint().eval()),
                                            Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

double FockOracle::edge_occupation(const Dense& rho) const {
    double worst = 0.0;
    for (int k = 0; k < model_.n_modes; ++k) {
        double pop = 0.0;
        for (int f = 0; f < total_dim_; ++f) {
            int nk = (f / strides_[k]) % cutoffs_[k];
            if (nk == cutoffs_[k] - 1) pop += rho(f, f).real();
        }
        worst = std::max(worst, pop);
    }
    return worst;
}

FockOracle::Dense FockOracle::partial_trace(const Dense& rho, int keep) const {
    int d = cutoffs_[keep];
    int stride = strides_[keep];
    Dense out = Dense::Zero(d, d);
    for (int f = 0; f < total_dim_; ++f) {
        int i = (f / stride) % d;
        int rest = f - i * stride;
        for (int j = 0; j < d; ++j) out(i, j) += rho(f, rest + j * stride);
    }
    return out;
}

GridField FockOracle::qpd_grid(const Dense& rho1, Qpd qpd, const GridSpec& spec) const {
    if (qpd == Qpd::glauber)
        throw ConfigError("glauber representation has no sampleable grid here");
    const int d = static_cast<int>(rho1.rows());
    GridField out;
    out.spec = spec;
    out.qpd = qpd_name(qpd);
    out.model_hash = model_.content_hash();
    int total = spec.total_points();
    out.values.resize(total);

    std::vector<double> x(2);
    if (qpd == Qpd::husimi) {
        Eigen::VectorXcd v(d);
        for (int g = 0; g < total; ++g) {
            out.point(g, x.data());
            cplx beta(x[0], x[1]);
            v[0] = std::exp(-0.5 * std::norm(beta));
            for (int n = 1; n < d; ++n)
                v[n] = v[n - 1] * beta / std::sqrt(static_cast<double>(n));
            out.values[g] = (v.adjoint() * rho1 * v)(0).real() / kPi;
        }
        return out;
    }

    // Wigner: (2/pi) sum_{mn} rho_mn (-1)^m D(2 beta)_{nm} with the
    // displacement matrix elements in Laguerre closed form; exact for a
    // truncated density matrix.
    std::vector<double> lag(d);
    for (int g = 0; g < total; ++g) {
        out.point(g, x.data());
        cplx gamma(2.0 * x[0], 2.0 * x[1]);
        double t = std::norm(gamma);
        double ag = std::abs(gamma);
        double w = 0.0;
        for (int diff = 0; diff < d; ++diff) {
            int kmax = d - diff;
            // c_k = |gamma|^diff sqrt(k!/(k+diff)!) e^{-t/2}; phase handled below
            double c = (diff == 0)
                           ? std::exp(-0.5 * t)
                           : std::exp(diff * std::log(ag) - 0.5 * std::lgamma(diff + 1.0) -
                                      0.5 * t);
            if (!(c > 1e-280)) continue;
            // generalized Laguerre L_k^{(diff)}(t), k = 0..kmax-1
            lag[0] = 1.0;
            if (kmax > 1) lag[1] = 1.0 + diff - t;
            for (int k = 1; k + 1 < kmax; ++k)
                lag[k + 1] = ((2.0 * k + 1.0 + diff - t) * lag[k] - (k + diff) * lag[k - 1]) /
                             (k + 1.0);
            if (diff == 0) {
                double acc = 0.0;
                for (int k = 0; k < kmax; ++k) {
                    double sign = (k % 2 == 0) ? 1.0 : -1.0;
                    acc += sign * c * lag[k] * rho1(k, k).real();
                }
                w += acc;
            } else {
                cplx phase = std::pow(gamma / ag, diff);
                cplx acc = 0.0;
                double ck = c;
                for (int k = 0; k < kmax; ++k) {
                    double sign = (k % 2 == 0) ? 1.0 : -1.0;
                    acc += sign * ck * lag[k] * rho1(k, k + diff);
                    ck *= std::sqrt((k + 1.0) / (k + 1.0 + diff));
                }
                w += 2.0 * (phase * acc).real();
            }
        }
        out.values[g] = (2.0 / kPi) * w;
    }
    return out;
}

std::vector<std::vector<cplx>> linear_meanfield(const ModelSpec& model,
                                                const std::vector<cplx>& alpha0,
                                                const std::vector<double>& times) {
    model.validate();
    const int m = model.n_modes;
    for (int k = 0; k < m; ++k)
        if (model.kerr[k] != 0.0 || model.drive2[k] != 0.0 || model.loss2[k] != 0.0)
            throw ConfigError(
                "linear_meanfield requires a linear model (no kerr, drive2, or loss2)");
    if (static_cast<int>(alpha0.size()) != m)
        throw ConfigError("linear_meanfield needs one initial amplitude per mode");

    Eigen::MatrixXcd gen = Eigen::MatrixXcd::Zero(m + 1, m + 1);
    const cplx mi(0.0, -1.0);
    for (int k = 0; k < m; ++k) {
        gen(k, k) = mi * model.detuning[k] - 0.5 * (model.loss1[k] - model.gain[k]);
        gen(k, m) = mi * model.drive1[k];
    }
    for (const auto& h : model.hops) {
        gen(h.a, h.b) += mi * h.coupling;
        gen(h.b, h.a) += mi * h.coupling;
    }

    std::vector<std::vector<cplx>> out;
    out.reserve(times.size());
    Eigen::VectorXcd aug(m + 1);
    for (double t : times) {
        Eigen::MatrixXcd prop = (gen * t).exp();
        for (int k = 0; k < m; ++k) aug[k] = alpha0[k];
        aug[m] = 1.0;
        Eigen::VectorXcd res = prop * aug;
        std::vector<cplx> row(m);
        for (int k = 0; k < m; ++k) row[k] = res[k];
        out.push_back(std::move(row));
    }
    return out;
}

}  // namespace phasespace
