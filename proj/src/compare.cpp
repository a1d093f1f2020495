#include "phasespace/compare.hpp"

#include <cmath>
#include <sstream>

namespace phasespace {
namespace {

void require_same_grid(const GridField& a, const GridField& b) {
    if (!a.compatible_with(b)) throw ConfigError("compare: grids differ in geometry");
}

double abs_sum(const GridField& f) {
    double s = 0.0;
    for (double v : f.values) s += std::abs(v);
    return s;
}

}  // namespace

std::string grid_spec_hash(const GridSpec& spec) {
    Fnv1a h;
    h.feed(static_cast<int>(spec.axes.size()));
    for (const GridAxis& ax : spec.axes) {
        h.feed(ax.min);
        h.feed(ax.max);
        h.feed(ax.n);
    }
    return h.hex();
}

double hellinger_fidelity(const GridField& a, const GridField& b) {
    require_same_grid(a, b);
    const double sa = abs_sum(a), sb = abs_sum(b);
    if (sa == 0.0 || sb == 0.0) throw ConfigError("compare: field is identically zero");
    double acc = 0.0;
    for (size_t i = 0; i < a.values.size(); ++i)
        acc += std::sqrt(std::abs(a.values[i]) * std::abs(b.values[i]));
    double f = acc / std::sqrt(sa * sb);
    return f > 1.0 ? 1.0 : f;  // clip roundoff
}

double mse(const GridField& a, const GridField& b) {
    require_same_grid(a, b);
    const double sa = abs_sum(a), sb = abs_sum(b);
    if (sa == 0.0 || sb == 0.0) throw ConfigError("compare: field is identically zero");
    double acc = 0.0;
    for (size_t i = 0; i < a.values.size(); ++i) {
        double d = std::abs(a.values[i]) / sa - std::abs(b.values[i]) / sb;
        acc += d * d;
    }
    return acc / a.values.size();
}

CompareReport compare_fields(const GridField& a, const GridField& b) {
    CompareReport r;
    r.f_h = hellinger_fidelity(a, b);
    r.mse = mse(a, b);
    r.grid_hash = grid_spec_hash(a.spec);
    r.abs_sum_a = abs_sum(a);
    r.abs_sum_b = abs_sum(b);
    return r;
}

std::string CompareReport::to_json() const {
    std::ostringstream os;
    os << "{\"f_h\": " << format_double(f_h) << ", \"mse\": " << format_double(mse)
       << ", \"grid_hash\": \"" << grid_hash << "\", \"abs_sum_a\": " << format_double(abs_sum_a)
       << ", \"abs_sum_b\": " << format_double(abs_sum_b) << "}";
    return os.str();
}

double boundary_mass_fraction(const GridField& f) {
    const int d = f.dim();
    double total = 0.0, edge = 0.0;
    std::vector<int> idx(d);
    const int n = f.spec.total_points();
    std::vector<double> x(d);
    for (int flat = 0; flat < n; ++flat) {
        int rem = flat;
        bool on_edge = false;
        for (int k = d - 1; k >= 0; --k) {
            int i = rem % f.spec.axes[k].n;
            rem /= f.spec.axes[k].n;
            if (i == 0 || i == f.spec.axes[k].n - 1) on_edge = true;
        }
        double v = std::abs(f.values[flat]);
        total += v;
        if (on_edge) edge += v;
    }
    return total > 0.0 ? edge / total : 0.0;
}

GridField ansatz_to_grid(const Ansatz& ansatz, Qpd qpd, const GridSpec& spec,
                         const std::string& model_hash, double time) {
    if (static_cast<int>(spec.axes.size()) != ansatz.dim())
        throw ConfigError("ansatz_to_grid: grid dimension must equal 2M");
    GridField f = tabulate(spec, [&](const double* x) { return ansatz.density(x); });
    f.qpd = qpd_name(qpd);
    f.model_hash = model_hash;
    f.time = time;
    return f;
}

}  // namespace phasespace
