#include "phasespace/artifacts.hpp"

#include <filesystem>
#include <fstream>
#include <limits>
#include <nlohmann/json.hpp>
#include <sstream>

#include "phasespace/compare.hpp"
#include "phasespace/simd.hpp"

namespace phasespace {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string pad6(size_t i) {
    std::string s = std::to_string(i);
    return std::string(s.size() < 6 ? 6 - s.size() : 0, '0') + s;
}

void put(std::ostream& os, double v) { os << format_double(v); }

void put_opt(std::ostream& os, const std::optional<MeanErr>& v) {
    if (v) {
        os << format_double(v->value) << "," << format_double(v->std_error);
    } else {
        os << ",";
    }
}

}  // namespace

void write_observables_csv(const std::string& path, const Trajectory& traj, int n_modes) {
    std::ofstream f(path);
    if (!f) throw IoError("cannot open '" + path + "' for writing");
    f << "# observables-v1\n";
    f << "t";
    for (int m = 0; m < n_modes; ++m) {
        f << ",re_a" << m << ",re_a" << m << "_err";
        f << ",im_a" << m << ",im_a" << m << "_err";
        f << ",n" << m << ",n" << m << "_err";
    }
    f << ",wehrl,wehrl_err,neg_volume,neg_volume_err,sign_mean,acceptance\n";
    for (size_t k = 0; k < traj.records.size(); ++k) {
        const ObservableRecord& r = traj.records[k];
        put(f, traj.times[k]);
        for (int m = 0; m < n_modes; ++m) {
            const ComplexMeanErr& a = r.a_mean.at(m);
            f << ",";
            put(f, a.value.real());
            f << ",";
            put(f, a.re_err);
            f << ",";
            put(f, a.value.imag());
            f << ",";
            put(f, a.im_err);
            f << ",";
            put(f, r.n_mean.at(m).value);
            f << ",";
            put(f, r.n_mean.at(m).std_error);
        }
        f << ",";
        put_opt(f, r.wehrl);
        f << ",";
        put_opt(f, r.neg_volume);
        f << ",";
        put(f, r.sign_mean);
        f << ",";
        put(f, r.acceptance);
        f << "\n";
    }
    if (!f) throw IoError("write to '" + path + "' failed");
}

void write_diagnostics_csv(const std::string& path, const Trajectory& traj) {
    std::ofstream f(path);
    if (!f) throw IoError("cannot open '" + path + "' for writing");
    f << "# diagnostics-v1\n";
    f << "t,theta_dot_norm,residual,rank,eig_min,eig_max,sign_mean,acceptance\n";
    for (const StepDiag& d : traj.step_diags) {
        put(f, d.t);
        f << ",";
        put(f, d.theta_dot_norm);
        f << ",";
        put(f, d.residual);
        f << "," << d.rank << ",";
        put(f, d.eig_min);
        f << ",";
        put(f, d.eig_max);
        f << ",";
        put(f, d.sign_mean);
        f << ",";
        put(f, d.acceptance);
        f << "\n";
    }
}

std::string write_run_artifacts(const RunConfig& rc, const Ansatz& prototype,
                                const Trajectory& traj, double wall_seconds) {
    const std::string dir = rc.outputs.directory;
    fs::create_directories(dir);

    write_observables_csv(dir + "/observables.csv", traj, rc.model.n_modes);
    write_diagnostics_csv(dir + "/diagnostics.csv", traj);

    const std::string model_hash = rc.model.content_hash();
    std::unique_ptr<Ansatz> render = prototype.clone();
    for (size_t k = 0; k < traj.thetas.size(); ++k) {
        render->set_theta(traj.thetas[k]);
        save_ansatz(*render, dir + "/theta_" + pad6(k) + ".json");
        if (rc.outputs.grid_snapshots && rc.model.n_modes == 1) {
            GridSpec gs = GridSpec::square2d(rc.outputs.grid_half_width, rc.outputs.grid_points);
            GridField field = ansatz_to_grid(*render, rc.qpd, gs, model_hash, traj.times[k]);
            field.save(dir + "/grid_" + pad6(k) + ".field");
        }
    }

    json meta;
    meta["format"] = "run-v1";
    meta["model_hash"] = model_hash;
    meta["qpd"] = qpd_name(rc.qpd);
    meta["seed"] = rc.sampler.seed;
    meta["simd"] = simd::active_name();
    meta["wall_seconds"] = wall_seconds;
    meta["steps"] = traj.steps;
    meta["end_time"] = traj.end_time;
    meta["unstable"] = traj.unstable;
    meta["breakdown_reason"] = traj.breakdown_reason;
    meta["times"] = traj.times;
    meta["n_params"] = prototype.n_params();
    meta["config"] = rc.source_text;
    std::ofstream mf(dir + "/run.json");
    if (!mf) throw IoError("cannot open '" + dir + "/run.json' for writing");
    mf << meta.dump(2) << "\n";
    return dir;
}

int CsvTable::column(const std::string& name) const {
    for (size_t i = 0; i < columns.size(); ++i)
        if (columns[i] == name) return static_cast<int>(i);
    return -1;
}

CsvTable read_csv(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw IoError("cannot open '" + path + "'");
    CsvTable t;
    std::string line;
    bool have_header = false;
    while (std::getline(f, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::vector<std::string> cells;
        std::string cell;
        std::istringstream ls(line);
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        if (!line.empty() && line.back() == ',') cells.push_back("");
        if (!have_header) {
            t.columns = cells;
            have_header = true;
            continue;
        }
        std::vector<double> row;
        row.reserve(cells.size());
        for (const std::string& c : cells) {
            if (c.empty()) {
                row.push_back(std::numeric_limits<double>::quiet_NaN());
            } else {
                try {
                    row.push_back(std::stod(c));
                } catch (const std::exception&) {
                    throw IoError("bad numeric cell '" + c + "' in " + path);
                }
            }
        }
        row.resize(t.columns.size(), std::numeric_limits<double>::quiet_NaN());
        t.rows.push_back(std::move(row));
    }
    if (!have_header) throw IoError("no header row in " + path);
    return t;
}

}  // namespace phasespace
