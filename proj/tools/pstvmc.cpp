#include <chrono>
#include <iostream>

#include "CLI11.hpp"
#include "phasespace/artifacts.hpp"
#include "phasespace/compare.hpp"
#include "phasespace/config.hpp"
#include "phasespace/fock_oracle.hpp"
#include "phasespace/observables.hpp"
#include "phasespace/plot.hpp"
#include "phasespace/run_setup.hpp"
#include "phasespace/simd.hpp"

#include <filesystem>
#include <fstream>

namespace {

using namespace phasespace;
namespace fs = std::filesystem;

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string pad6(size_t i) {
    std::string s = std::to_string(i);
    return std::string(s.size() < 6 ? 6 - s.size() : 0, '0') + s;
}

void progress_line(double t, const ObservableRecord& r) {
    double n = 0.0;
    for (const MeanErr& m : r.n_mean) n += m.value;
    std::cerr << "t=" << format_double(t) << " n=" << format_double(n)
              << " sign=" << format_double(r.sign_mean)
              << " acc=" << format_double(r.acceptance) << "\n";
}

int cmd_build_fp(const std::string& config_path, const std::string& qpd_override,
                 const std::string& out_file) {
    RunConfig rc = load_config(config_path);
    Qpd qpd = qpd_override.empty() ? rc.qpd : qpd_from_name(qpd_override);
    DriftDiffusion dd = compile_generator(rc.model, qpd);
    std::string desc = dd.describe();
    std::cout << desc;
    for (const TruncatedTerm& tt : dd.truncated)
        std::cout << "dropped: order-" << tt.order << " contribution from " << tt.source << " ("
                  << tt.n_monomials << " monomials, max |coeff| "
                  << format_double(tt.max_abs_coeff) << ")\n";
    if (!out_file.empty()) {
        std::ofstream f(out_file);
        if (!f) throw IoError("cannot open '" + out_file + "'");
        f << desc;
    }
    return 0;
}

int cmd_init(const std::string& config_path, const std::string& out_path) {
    RunConfig rc = load_config(config_path);
    std::unique_ptr<Ansatz> a = build_initial_ansatz(rc);
    save_ansatz(*a, out_path);
    std::cout << a->kind() << " with " << a->n_params() << " parameters -> " << out_path << "\n";
    return 0;
}

int cmd_evolve(const std::string& config_path, const std::string& dir_override,
               uint64_t seed_override, bool seed_set) {
    RunConfig rc = load_config(config_path);
    if (!dir_override.empty()) rc.outputs.directory = dir_override;
    if (seed_set) rc.sampler.seed = seed_override;

    auto t0 = std::chrono::steady_clock::now();
    std::unique_ptr<TvmcEngine> engine = build_engine(rc);
    std::cerr << "evolving " << engine->ansatz().kind() << " (" << engine->ansatz().n_params()
              << " parameters, " << qpd_name(rc.qpd) << ", simd " << simd::active_name()
              << ")\n";
    Trajectory traj = engine->run(progress_line);
    double wall = seconds_since(t0);

    std::string dir = write_run_artifacts(rc, engine->ansatz(), traj, wall);
    if (rc.outputs.plots) plot::render_plots(dir);
    if (traj.unstable) {
        std::cerr << "unstable at t=" << format_double(traj.end_time) << ": "
                  << traj.breakdown_reason << "\n";
        return 2;
    }
    std::cerr << "completed t=" << format_double(traj.end_time) << " in "
              << format_double(wall) << "s -> " << dir << "\n";
    return 0;
}

int cmd_oracle(const std::string& config_path, const std::string& dir_override) {
    RunConfig rc = load_config(config_path);
    if (!dir_override.empty()) rc.outputs.directory = dir_override;
    const int m = rc.model.n_modes;

    FockOracle oracle(rc.model, rc.oracle.cutoff);
    std::vector<cplx> alphas = rc.alpha_per_mode();
    FockOracle::Dense rho;
    if (rc.ansatz.init == "cat") {
        if (m != 1) throw ConfigError("cat initial state supports a single mode only");
        rho = oracle.cat_state(alphas[0], rc.ansatz.cat_parity);
    } else {
        rho = oracle.coherent_state(alphas);
    }

    fs::create_directories(rc.outputs.directory);
    std::ofstream csv(rc.outputs.directory + "/oracle_observables.csv");
    if (!csv) throw IoError("cannot open oracle_observables.csv");
    csv << "# oracle-observables-v1\nt";
    for (int k = 0; k < m; ++k) csv << ",re_a" << k << ",im_a" << k << ",n" << k;
    csv << "\n";

    const double out_every = rc.tvmc.output_stride * rc.tvmc.dt;
    int stride = std::max(1, static_cast<int>(std::lround(out_every / rc.oracle.dt)));
    const std::string model_hash = rc.model.content_hash();
    size_t frame = 0;
    oracle.evolve(rho, rc.tvmc.total_time, rc.oracle.dt, stride, [&](double t, const FockOracle::Dense& r) {
        csv << format_double(t);
        for (int k = 0; k < m; ++k) {
            cplx a = oracle.expval_a(r, k);
            csv << "," << format_double(a.real()) << "," << format_double(a.imag()) << ","
                << format_double(oracle.expval_n(r, k));
        }
        csv << "\n";
        if (rc.outputs.grid_snapshots && m == 1) {
            GridSpec gs = GridSpec::square2d(rc.outputs.grid_half_width, rc.outputs.grid_points);
            GridField f = oracle.qpd_grid(r, rc.qpd, gs);
            f.model_hash = model_hash;
            f.time = t;
            f.save(rc.outputs.directory + "/oracle_grid_" + pad6(frame) + ".field");
        }
        ++frame;
    });

    double edge = oracle.edge_occupation(rho);
    if (edge > 1e-6)
        std::cerr << "warning: top-level occupation " << format_double(edge)
                  << "; consider a larger cutoff\n";
    std::cerr << "oracle run complete -> " << rc.outputs.directory << "\n";
    return 0;
}

int cmd_compare(const std::string& a_path, const std::string& b_path,
                const std::string& out_path) {
    GridField a = GridField::load(a_path);
    GridField b = GridField::load(b_path);
    if (!a.model_hash.empty() && !b.model_hash.empty() && a.model_hash != b.model_hash)
        throw ConfigError("fields come from different models (" + a.model_hash + " vs " +
                          b.model_hash + ")");
    for (const auto* f : {&a, &b}) {
        double bm = boundary_mass_fraction(*f);
        if (bm > 1e-6)
            std::cerr << "warning: " << format_double(bm)
                      << " of the mass sits on the window boundary\n";
    }
    CompareReport r = compare_fields(a, b);
    std::cout << r.to_json() << "\n";
    if (!out_path.empty()) {
        std::ofstream f(out_path);
        if (!f) throw IoError("cannot open '" + out_path + "'");
        f << r.to_json() << "\n";
    }
    return 0;
}

int cmd_observables(const std::string& ansatz_path, const std::string& qpd_name_arg,
                    int chains, int samples, uint64_t seed, bool wehrl) {
    std::unique_ptr<Ansatz> a = load_ansatz(ansatz_path);
    Qpd qpd = qpd_from_name(qpd_name_arg);
    SamplerConfig scfg;
    scfg.n_chains = chains;
    scfg.samples_per_chain = samples;
    scfg.seed = seed;
    scfg.r = 1;  // direct sampling of |p| regardless of representation
    SampleSet batch = sample_density(*a, scfg);
    ObservableRecord rec = measure_basic(batch, qpd, 0.0);

    std::cout << "{\"a\": [";
    for (size_t k = 0; k < rec.a_mean.size(); ++k) {
        const auto& am = rec.a_mean[k];
        std::cout << (k ? ", " : "") << "[" << format_double(am.value.real()) << ", "
                  << format_double(am.value.imag()) << "]";
    }
    std::cout << "], \"n\": [";
    for (size_t k = 0; k < rec.n_mean.size(); ++k)
        std::cout << (k ? ", " : "") << format_double(rec.n_mean[k].value);
    std::cout << "], \"n_err\": [";
    for (size_t k = 0; k < rec.n_mean.size(); ++k)
        std::cout << (k ? ", " : "") << format_double(rec.n_mean[k].std_error);
    std::cout << "], \"sign_mean\": " << format_double(rec.sign_mean)
              << ", \"acceptance\": " << format_double(rec.acceptance);
    if (qpd == Qpd::wigner) {
        MeanErr nv = negative_volume(batch);
        std::cout << ", \"neg_volume\": " << format_double(nv.value);
    }
    if (wehrl) {
        MeanErr w = wehrl_entropy(*a, batch);
        std::cout << ", \"wehrl\": " << format_double(w.value)
                  << ", \"wehrl_err\": " << format_double(w.std_error);
    }
    std::cout << "}\n";
    return 0;
}

int cmd_plot(const std::string& dir) {
    int n = plot::render_plots(dir);
    if (n == 0)
        std::cerr << "nothing to plot in '" << dir << "'\n";
    else
        std::cerr << "wrote " << n << " image(s)\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"variational phase-space dynamics of driven-dissipative bosonic lattices"};
    app.require_subcommand(1);
    int exit_code = 0;

    std::string config_path, qpd_arg, out_path, dir_arg, a_path, b_path, ansatz_path;
    uint64_t seed = 1;
    bool wehrl = false;
    int chains = 16, samples = 630;

    auto* build = app.add_subcommand("build-fp", "compile a model into drift-diffusion form");
    build->add_option("--config", config_path, "run configuration")->required();
    build->add_option("--qpd", qpd_arg, "representation override");
    build->add_option("--out", out_path, "also write the description here");
    build->callback([&] { exit_code = cmd_build_fp(config_path, qpd_arg, out_path); });

    auto* init = app.add_subcommand("init", "build and save the initial variational state");
    init->add_option("--config", config_path)->required();
    init->add_option("--out", out_path, "ansatz json destination")->required();
    init->callback([&] { exit_code = cmd_init(config_path, out_path); });

    auto* evolve = app.add_subcommand("evolve", "run the variational time evolution");
    evolve->add_option("--config", config_path)->required();
    evolve->add_option("--out-dir", dir_arg, "override the output directory");
    auto* seed_opt = evolve->add_option("--seed", seed, "override the run seed");
    evolve->callback(
        [&] { exit_code = cmd_evolve(config_path, dir_arg, seed, seed_opt->count() > 0); });

    auto* oracle = app.add_subcommand("oracle", "integrate the same model in the number basis");
    oracle->add_option("--config", config_path)->required();
    oracle->add_option("--out-dir", dir_arg, "override the output directory");
    oracle->callback([&] { exit_code = cmd_oracle(config_path, dir_arg); });

    auto* compare = app.add_subcommand("compare", "fidelity and mse between two saved fields");
    compare->add_option("--a", a_path)->required();
    compare->add_option("--b", b_path)->required();
    compare->add_option("--out", out_path, "also write the report here");
    compare->callback([&] { exit_code = cmd_compare(a_path, b_path, out_path); });

    auto* obs = app.add_subcommand("observables", "sample observables from a saved ansatz");
    obs->add_option("--ansatz", ansatz_path)->required();
    obs->add_option("--qpd", qpd_arg, "husimi or wigner")->required();
    obs->add_option("--chains", chains);
    obs->add_option("--samples", samples, "samples per chain");
    obs->add_option("--seed", seed);
    obs->add_flag("--wehrl", wehrl, "also estimate the entropy (needs a normalizable ansatz)");
    obs->callback(
        [&] { exit_code = cmd_observables(ansatz_path, qpd_arg, chains, samples, seed, wehrl); });

    auto* plot_cmd = app.add_subcommand("plot", "render pngs for a run directory");
    plot_cmd->add_option("--dir", dir_arg)->required();
    plot_cmd->callback([&] { exit_code = cmd_plot(dir_arg); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return exit_code;
}
