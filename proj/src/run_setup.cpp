#include "phasespace/run_setup.hpp"

namespace phasespace {
namespace {

// Exact parameter replicas make S singular; give unjittered configs a small
// default spread wherever copies would otherwise coincide.
double effective_jitter(double requested) { return requested > 0.0 ? requested : 0.01; }

std::unique_ptr<Ansatz> fresh_ansatz(const RunConfig& rc) {
    const AnsatzConfig& ac = rc.ansatz;
    std::vector<cplx> alphas = rc.alpha_per_mode();
    const uint64_t seed = rc.sampler.seed;

    if (ac.init == "cat") {
        if (ac.kind != "gaussian-mixture")
            throw ConfigError("cat init needs the gaussian-mixture ansatz");
        if (rc.model.n_modes != 1) throw ConfigError("cat init supports a single mode only");
        return init_cat_mixture(alphas[0], ac.cat_parity, rc.qpd, ac.components,
                                effective_jitter(ac.jitter), seed);
    }
    if (ac.kind == "gaussian-mixture")
        return init_coherent_mixture(rc.model.n_modes, alphas, rc.qpd, ac.components,
                                     effective_jitter(ac.jitter), seed);
    return init_rbm_coherent(rc.model.n_modes, alphas, rc.qpd, ac.hidden_per_unit,
                             effective_jitter(ac.jitter), seed);
}

}  // namespace

std::unique_ptr<Ansatz> build_initial_ansatz(const RunConfig& rc) {
    const AnsatzConfig& ac = rc.ansatz;

    if (ac.init == "from-file") {
        if (ac.file.empty()) throw ConfigError("init = from-file needs 'file'");
        std::unique_ptr<Ansatz> a = load_ansatz(ac.file);
        if (a->n_modes() != rc.model.n_modes)
            throw ConfigError("ansatz file has " + std::to_string(a->n_modes()) +
                              " modes, model has " + std::to_string(rc.model.n_modes));
        return a;
    }

    if (ac.init == "fit-from-grid") {
        if (ac.file.empty()) throw ConfigError("init = fit-from-grid needs 'file'");
        GridField target = GridField::load(ac.file);
        if (target.dim() != 2 * rc.model.n_modes)
            throw ConfigError("fit target grid dimension does not match the model");
        std::unique_ptr<Ansatz> a = fresh_ansatz(rc);
        FitOptions opt;
        opt.iterations = ac.fit_iterations;
        opt.learning_rate = ac.fit_learning_rate;
        opt.seed = rc.sampler.seed;
        fit_to_grid(*a, target, opt);
        return a;
    }

    return fresh_ansatz(rc);
}

std::unique_ptr<TvmcEngine> build_engine(const RunConfig& rc) {
    return std::make_unique<TvmcEngine>(rc.model, rc.qpd, build_initial_ansatz(rc), rc.sampler,
                                        rc.tvmc);
}

}  // namespace phasespace
