#pragma once

#include <functional>
#include <string>
#include <vector>

#include "phasespace/common.hpp"
#include "phasespace/model.hpp"

namespace phasespace {

struct GridAxis {
    double min = -5.0;
    double max = 5.0;
    int n = 101;

    double step() const { return n > 1 ? (max - min) / (n - 1) : 0.0; }
    double coord(int i) const { return min + step() * i; }
};

struct GridSpec {
    std::vector<GridAxis> axes;

    static GridSpec square2d(double half_width, int n);
    int total_points() const;
    double cell_volume() const;
};

/// Scalar field sampled on a Cartesian product of uniform axes. Values are
/// stored row-major: the first axis is the slowest index.
struct GridField {
    GridSpec spec;
    std::string qpd;         // representation tag, informational
    std::string model_hash;  // producer content hash, informational
    double time = 0.0;
    std::vector<double> values;

    int dim() const { return static_cast<int>(spec.axes.size()); }
    double& at(const std::vector<int>& idx);
    double value_at(const std::vector<int>& idx) const;
    void point(int flat, double* x) const;

    /// Riemann sum of the values times the cell volume.
    double integral() const;
    double abs_integral() const;
    double min_value() const;
    double max_value() const;

    bool compatible_with(const GridField& o, double tol = 1e-12) const;

    std::string content_hash() const;

    /// One-line JSON header followed by CSV value rows (last axis varies
    /// fastest, one line per next-to-last axis block).
    void save(const std::string& path) const;
    static GridField load(const std::string& path);
};

/// Evaluates f at every grid point (f receives the coordinate vector).
GridField tabulate(const GridSpec& spec, const std::function<double(const double*)>& f);

}  // namespace phasespace
