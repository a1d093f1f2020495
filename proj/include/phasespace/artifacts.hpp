#pragma once

#include <string>

#include "phasespace/config.hpp"
#include "phasespace/tvmc.hpp"

namespace phasespace {

/// Column order of observables.csv, fixed by the observables-v1 header:
/// t, per mode (re_a, re_a_err, im_a, im_a_err, n, n_err), wehrl, wehrl_err,
/// neg_volume, neg_volume_err, sign_mean, acceptance. Missing optional
/// columns are left empty.
void write_observables_csv(const std::string& path, const Trajectory& traj, int n_modes);

/// Per-step solver diagnostics (diagnostics-v1).
void write_diagnostics_csv(const std::string& path, const Trajectory& traj);

/// Writes the full artifact set into rc.outputs.directory: observables.csv,
/// diagnostics.csv, theta_NNNNNN.json snapshots, optional grid_NNNNNN.field
/// renders (single mode only), and run.json metadata. `prototype` supplies
/// the parameter layout for snapshot rendering. Returns the directory.
std::string write_run_artifacts(const RunConfig& rc, const Ansatz& prototype,
                                const Trajectory& traj, double wall_seconds);

/// Reads back an observables.csv produced by write_observables_csv.
/// Returns rows of raw column values (NaN for empty cells) plus the header.
struct CsvTable {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    int column(const std::string& name) const;  // -1 when absent
};
CsvTable read_csv(const std::string& path);

}  // namespace phasespace
