#pragma once

#include <string>
#include <vector>

#include "phasespace/common.hpp"
#include "phasespace/model.hpp"
#include "phasespace/sampler.hpp"
#include "phasespace/tvmc.hpp"

namespace phasespace {

struct AnsatzConfig {
    std::string kind = "gaussian-mixture";  // gaussian-mixture | rbm
    int components = 1;                     // mixture size R
    int hidden_per_unit = 1;                // rbm beta
    std::string init = "coherent";          // coherent | cat | from-file | fit-from-grid
    std::vector<cplx> alpha;                // initial amplitude per mode (broadcast if one)
    int cat_parity = 1;                     // +1 even, -1 odd
    double jitter = 0.0;                    // replica / hidden-unit perturbation scale
    std::string file;                       // ansatz file or fit target grid
    int fit_iterations = 2000;
    double fit_learning_rate = 0.02;
};

struct OracleConfig {
    std::vector<int> cutoff = {32};  // Fock cutoff per mode (broadcast if one)
    double dt = 1e-3;
};

struct OutputsConfig {
    std::string directory = "out";
    bool grid_snapshots = false;
    double grid_half_width = 5.0;
    int grid_points = 101;
    bool plots = false;
};

struct RunConfig {
    ModelSpec model;
    Qpd qpd = Qpd::husimi;
    AnsatzConfig ansatz;
    SamplerConfig sampler;
    TvmcConfig tvmc;
    OracleConfig oracle;
    OutputsConfig outputs;
    std::string source_text;  // raw config echo for run metadata

    std::vector<cplx> alpha_per_mode() const;  // broadcast-validated
};

/// Parses the declarative run configuration: '#'/';' comments, [section]
/// headers, key = value lines. Unknown sections or keys, duplicates, and
/// malformed values are rejected with line-numbered diagnostics.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

/// Accepts "1.5", "2+0.5i", "-i", "3i"; used for alpha lists.
cplx parse_complex(const std::string& token);

}  // namespace phasespace
