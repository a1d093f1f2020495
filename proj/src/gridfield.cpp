#include "phasespace/gridfield.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

namespace phasespace {

using nlohmann::json;

GridSpec GridSpec::square2d(double half_width, int n) {
    GridSpec s;
    s.axes = {{-half_width, half_width, n}, {-half_width, half_width, n}};
    return s;
}

int GridSpec::total_points() const {
    int t = 1;
    for (const auto& a : axes) t *= a.n;
    return t;
}

double GridSpec::cell_volume() const {
    double v = 1.0;
    for (const auto& a : axes) v *= a.step();
    return v;
}

double& GridField::at(const std::vector<int>& idx) {
    int flat = 0;
    for (size_t d = 0; d < idx.size(); ++d) flat = flat * spec.axes[d].n + idx[d];
    return values[flat];
}

double GridField::value_at(const std::vector<int>& idx) const {
    int flat = 0;
    for (size_t d = 0; d < idx.size(); ++d) flat = flat * spec.axes[d].n + idx[d];
    return values[flat];
}

void GridField::point(int flat, double* x) const {
    for (int d = dim() - 1; d >= 0; --d) {
        int n = spec.axes[d].n;
        x[d] = spec.axes[d].coord(flat % n);
        flat /= n;
    }
}

double GridField::integral() const {
    double s = 0.0;
    for (double v : values) s += v;
    return s * spec.cell_volume();
}

double GridField::abs_integral() const {
    double s = 0.0;
    for (double v : values) s += std::abs(v);
    return s * spec.cell_volume();
}

double GridField::min_value() const {
    return *std::min_element(values.begin(), values.end());
}

double GridField::max_value() const {
    return *std::max_element(values.begin(), values.end());
}

bool GridField::compatible_with(const GridField& o, double tol) const {
    if (dim() != o.dim()) return false;
    for (int d = 0; d < dim(); ++d) {
        const auto& a = spec.axes[d];
        const auto& b = o.spec.axes[d];
        if (a.n != b.n || std::abs(a.min - b.min) > tol || std::abs(a.max - b.max) > tol)
            return false;
    }
    return true;
}

std::string GridField::content_hash() const {
    Fnv1a h;
    for (const auto& a : spec.axes) {
        h.feed(a.min);
        h.feed(a.max);
        h.feed(a.n);
    }
    for (double v : values) h.feed(v);
    return h.hex();
}

void GridField::save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    json header;
    header["format"] = "field-v1";
    header["axes"] = json::array();
    for (const auto& a : spec.axes)
        header["axes"].push_back({{"min", a.min}, {"max", a.max}, {"n", a.n}});
    header["qpd"] = qpd;
    header["model_hash"] = model_hash;
    header["time"] = time;
    out << header.dump() << "\n";

    int inner = spec.axes.back().n;
    int rows = spec.total_points() / inner;
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < inner; ++c) {
            if (c) out << ",";
            out << format_double(values[r * inner + c]);
        }
        out << "\n";
    }
    if (!out) throw IoError("write to '" + path + "' failed");
}

GridField GridField::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "'");
    std::string line;
    if (!std::getline(in, line)) throw IoError(path + ": missing header line");
    json header;
    try {
        header = json::parse(line);
    } catch (const json::exception& e) {
        throw IoError(path + ": bad header: " + e.what());
    }
    if (header.value("format", "") != "field-v1")
        throw IoError(path + ": unknown format tag '" + header.value("format", "") + "'");

    GridField f;
    for (const auto& a : header.at("axes"))
        f.spec.axes.push_back({a.at("min").get<double>(), a.at("max").get<double>(),
                               a.at("n").get<int>()});
    f.qpd = header.value("qpd", "");
    f.model_hash = header.value("model_hash", "");
    f.time = header.value("time", 0.0);

    int expected = f.spec.total_points();
    f.values.reserve(expected);
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            size_t pos = 0;
            double v;
            try {
                v = std::stod(cell, &pos);
            } catch (const std::exception&) {
                throw IoError(path + ":" + std::to_string(lineno) + ": bad number '" + cell + "'");
            }
            f.values.push_back(v);
        }
    }
    if (static_cast<int>(f.values.size()) != expected)
        throw IoError(path + ": got " + std::to_string(f.values.size()) + " values, header says " +
                      std::to_string(expected));
    return f;
}

GridField tabulate(const GridSpec& spec, const std::function<double(const double*)>& f) {
    GridField out;
    out.spec = spec;
    int total = spec.total_points();
    out.values.resize(total);
    std::vector<double> x(spec.axes.size());
    for (int i = 0; i < total; ++i) {
        out.point(i, x.data());
        out.values[i] = f(x.data());
    }
    return out;
}

}  // namespace phasespace
