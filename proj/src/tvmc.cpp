#include "phasespace/tvmc.hpp"

#include <cmath>

#include "phasespace/parallel.hpp"
#include "phasespace/simd.hpp"

namespace phasespace {
namespace {

Eigen::VectorXd sample_weights(const SampleSet& s) {
    const int n = s.size();
    Eigen::VectorXd w(n);
    const bool signed_w = (s.r % 2) == 1;
    for (int i = 0; i < n; ++i) w[i] = signed_w ? static_cast<double>(s.signs[i]) : 1.0;
    return w;
}

void validate_batch(const SampleSet& s, const RowMat& O) {
    if (O.rows() != s.size()) throw ConfigError("estimator: O rows must match sample count");
}

}  // namespace

Eigen::MatrixXd estimate_S(const SampleSet& s, const RowMat& O, bool centering) {
    validate_batch(s, O);
    const int n = s.size();
    const int p = static_cast<int>(O.cols());
    Eigen::VectorXd w = sample_weights(s);
    const double wsum = w.sum();
    if (wsum == 0.0) throw SamplerError("estimate_S: sign weights sum to zero");

    thread_local RowMat oc;
    oc = O;
    if (centering) {
        Eigen::RowVectorXd mean = (O.transpose() * w).transpose() / wsum;
        oc.rowwise() -= mean;
    }

    Eigen::MatrixXd S = Eigen::MatrixXd::Zero(p, p);
    // The kernel accumulates the row-major lower triangle, which aliases the
    // upper triangle of the column-major S.
    simd::ops().sym_rank_update(S.data(), p, oc.data(), w.data(), n);
    S /= wsum;
    S = S.selfadjointView<Eigen::Upper>();
    return S;
}

Eigen::VectorXd estimate_F(const SampleSet& s, const RowMat& O, const Eigen::VectorXd& L,
                           bool centering) {
    validate_batch(s, O);
    if (L.size() != s.size()) throw ConfigError("estimate_F: L length must match sample count");
    Eigen::VectorXd w = sample_weights(s);
    const double wsum = w.sum();
    if (wsum == 0.0) throw SamplerError("estimate_F: sign weights sum to zero");

    Eigen::VectorXd wl = w.cwiseProduct(L);
    Eigen::VectorXd f = O.transpose() * wl / wsum;
    if (centering) {
        Eigen::VectorXd omean = O.transpose() * w / wsum;
        const double lmean = wl.sum() / wsum;
        f -= lmean * omean;
    }
    return f;
}

SolveResult solve_update(const Eigen::MatrixXd& S, const Eigen::VectorXd& F, double svd_cutoff,
                         double diag_shift) {
    const int p = static_cast<int>(S.rows());
    if (S.cols() != p || F.size() != p) throw ConfigError("solve_update: shape mismatch");
    if (svd_cutoff < 0.0 || svd_cutoff >= 1.0) throw ConfigError("svd_cutoff must be in [0, 1)");
    if (diag_shift < 0.0) throw ConfigError("diag_shift must be nonnegative");

    SolveResult out;
    if (svd_cutoff == 0.0 && diag_shift > 0.0) {
        Eigen::MatrixXd A = S;
        A.diagonal().array() += diag_shift;
        Eigen::LDLT<Eigen::MatrixXd> ldlt(A);
        if (ldlt.info() != Eigen::Success)
            throw RankCollapse("factorization of the shifted system failed");
        out.theta_dot = ldlt.solve(F);
        out.rank = p;
        out.eig_min = ldlt.vectorD().minCoeff();
        out.eig_max = ldlt.vectorD().maxCoeff();
    } else {
        Eigen::MatrixXd A = S;
        if (diag_shift > 0.0) A.diagonal().array() += diag_shift;
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A);
        if (es.info() != Eigen::Success) throw RankCollapse("eigendecomposition failed");
        const Eigen::VectorXd& ev = es.eigenvalues();
        out.eig_min = ev.minCoeff();
        out.eig_max = ev.maxCoeff();
        const double amax = ev.cwiseAbs().maxCoeff();
        if (amax == 0.0) throw RankCollapse("S vanished entirely");
        const double thresh = svd_cutoff * amax;
        Eigen::VectorXd proj = es.eigenvectors().transpose() * F;
        int rank = 0;
        for (int i = 0; i < p; ++i) {
            if (std::abs(ev[i]) <= thresh || ev[i] == 0.0) {
                proj[i] = 0.0;
            } else {
                proj[i] /= ev[i];
                ++rank;
            }
        }
        if (rank == 0) throw RankCollapse("all spectral directions below cutoff");
        out.theta_dot = es.eigenvectors() * proj;
        out.rank = rank;
    }
    out.residual = (S * out.theta_dot - F).norm();
    return out;
}

TvmcEngine::TvmcEngine(const ModelSpec& model, Qpd qpd, std::unique_ptr<Ansatz> ansatz,
                       const SamplerConfig& scfg, const TvmcConfig& tcfg)
    : TvmcEngine(compile_generator(model, qpd), std::move(ansatz), scfg, tcfg) {}

TvmcEngine::TvmcEngine(DriftDiffusion dd, std::unique_ptr<Ansatz> ansatz,
                       const SamplerConfig& scfg, const TvmcConfig& tcfg)
    : dd_(std::move(dd)), local_(dd_), ansatz_(std::move(ansatz)), scfg_(scfg), tcfg_(tcfg) {
    if (dd_.qpd == Qpd::glauber)
        throw ConfigError("the glauber representation compiles but cannot be sampled");
    if (!ansatz_ || ansatz_->dim() != dd_.dim())
        throw ConfigError("ansatz dimension does not match the compiled generator");
    if (tcfg_.dt <= 0.0) throw ConfigError("dt must be positive");
    if (tcfg_.total_time < 0.0) throw ConfigError("total_time must be nonnegative");
    if (tcfg_.output_stride < 1) throw ConfigError("output_stride must be at least 1");
    if (tcfg_.svd_cutoff < 0.0 || tcfg_.svd_cutoff >= 1.0)
        throw ConfigError("svd_cutoff must be in [0, 1)");
    if (tcfg_.diag_shift < 0.0) throw ConfigError("diag_shift must be nonnegative");
    if (tcfg_.trust_threshold <= 0.0) throw ConfigError("trust_threshold must be positive");

    if (tcfg_.obs_samples_per_chain < 0 || tcfg_.obs_proposal_sigma < 0.0 ||
        tcfg_.obs_refresh_sweeps < 0)
        throw ConfigError("observable sampler overrides must be nonnegative");

    scfg_.r = qpd_r(dd_.qpd);
    sampler_ = std::make_unique<MetropolisSampler>(*ansatz_, scfg_);

    SamplerConfig oc = scfg_;
    oc.r = 1;
    oc.seed = scfg_.seed + 0x9e37;
    if (tcfg_.obs_samples_per_chain > 0) oc.samples_per_chain = tcfg_.obs_samples_per_chain;
    if (tcfg_.obs_proposal_sigma > 0.0) oc.proposal_sigma = tcfg_.obs_proposal_sigma;
    if (tcfg_.obs_refresh_sweeps > 0) oc.refresh_sweeps = tcfg_.obs_refresh_sweeps;
    obs_sampler_ = std::make_unique<MetropolisSampler>(*ansatz_, oc);
}

void TvmcEngine::fill_o_l(const SampleSet& batch, RowMat& O, Eigen::VectorXd& L) const {
    const int n = batch.size();
    const int p = ansatz_->n_params();
    const int d = dd_.dim();
    O.resize(n, p);
    L.resize(n);
    const Ansatz& a = *ansatz_;
    parallel_for(n, [&](size_t b, size_t e, int) {
        thread_local Eigen::VectorXd gx;
        thread_local Eigen::MatrixXd hx;
        gx.resize(d);
        hx.resize(d, d);
        for (size_t i = b; i < e; ++i) {
            const double* x = batch.positions.row(static_cast<long>(i)).data();
            a.eval_all(x, nullptr, O.row(static_cast<long>(i)).data(), gx.data(), hx.data());
            L[static_cast<long>(i)] = local_(x, gx.data(), hx.data());
        }
    });
}

TvmcStep TvmcEngine::assemble() { return assemble(sampler_->collect(*ansatz_)); }

TvmcStep TvmcEngine::assemble(const SampleSet& batch) const {
    RowMat O;
    Eigen::VectorXd L;
    fill_o_l(batch, O, L);

    TvmcStep st;
    st.S = estimate_S(batch, O, tcfg_.centering);
    st.F = estimate_F(batch, O, L, tcfg_.centering);
    st.diag.sign_mean = batch.sign_mean();
    st.diag.acceptance = batch.acceptance;
    if (!st.S.allFinite() || !st.F.allFinite())
        throw SamplerError("non-finite S or F estimate");

    SolveResult sol = solve_update(st.S, st.F, tcfg_.svd_cutoff, tcfg_.diag_shift);
    st.theta_dot = std::move(sol.theta_dot);
    st.diag.residual = sol.residual;
    st.diag.rank = sol.rank;
    st.diag.eig_min = sol.eig_min;
    st.diag.eig_max = sol.eig_max;
    st.diag.theta_dot_norm = st.theta_dot.norm();
    return st;
}

ObservableRecord TvmcEngine::observe(double t) {
    SampleSet batch = obs_sampler_->collect(*ansatz_);
    ObservableRecord rec = measure_basic(batch, dd_.qpd, t);
    if (tcfg_.track_wehrl && dd_.qpd == Qpd::husimi && ansatz_->normalization().known)
        rec.wehrl = wehrl_entropy(*ansatz_, batch);
    if (tcfg_.track_negativity && dd_.qpd == Qpd::wigner) rec.neg_volume = negative_volume(batch);
    return rec;
}

Trajectory TvmcEngine::run(const OutputHook& on_output) {
    Trajectory traj;
    traj.qpd = dd_.qpd;
    const long n_steps = std::lround(tcfg_.total_time / tcfg_.dt);
    double t = 0.0;

    auto record = [&](double tt) {
        ObservableRecord rec = observe(tt);
        traj.times.push_back(tt);
        traj.records.push_back(rec);
        traj.thetas.push_back(ansatz_->theta());
        if (on_output) on_output(tt, rec);
    };
    auto fail = [&](const std::string& why) {
        traj.unstable = true;
        traj.breakdown_reason = why;
    };

    try {
        record(0.0);
        for (long step = 0; step < n_steps; ++step) {
            SampleSet batch = sampler_->collect(*ansatz_);
            if (batch.acceptance < tcfg_.min_acceptance) {
                fail("acceptance collapse: " + format_double(batch.acceptance));
                break;
            }
            if (batch.r % 2 == 1 && std::abs(batch.sign_mean()) < 0.01) {
                fail("sign collapse: mean sign " + format_double(batch.sign_mean()));
                break;
            }
            TvmcStep st = assemble(batch);
            st.diag.t = t;
            traj.step_diags.push_back(st.diag);
            if (!st.theta_dot.allFinite()) {
                fail("non-finite parameter update");
                break;
            }
            if (st.diag.theta_dot_norm * tcfg_.dt > tcfg_.trust_threshold) {
                fail("trust region exceeded: |dtheta| = " +
                     format_double(st.diag.theta_dot_norm * tcfg_.dt));
                break;
            }
            try {
                ansatz_->set_theta(ansatz_->theta() + tcfg_.dt * st.theta_dot);
            } catch (const AnsatzError& e) {
                fail(std::string("degenerate parameters: ") + e.what());
                break;
            }
            t = static_cast<double>(step + 1) * tcfg_.dt;
            ++traj.steps;
            if ((step + 1) % tcfg_.output_stride == 0 || step + 1 == n_steps) record(t);
        }
    } catch (const RankCollapse& e) {
        fail(std::string("rank collapse: ") + e.what());
    } catch (const SamplerError& e) {
        fail(std::string("sampler failure: ") + e.what());
    }
    traj.end_time = t;
    return traj;
}

}  // namespace phasespace
