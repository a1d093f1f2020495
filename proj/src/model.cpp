#include "phasespace/model.hpp"

#include <algorithm>
#include <cmath>

namespace phasespace {

std::string qpd_name(Qpd q) {
    switch (q) {
        case Qpd::husimi: return "husimi";
        case Qpd::wigner: return "wigner";
        case Qpd::glauber: return "glauber";
    }
    return "?";
}

Qpd qpd_from_name(const std::string& name) {
    if (name == "husimi" || name == "q") return Qpd::husimi;
    if (name == "wigner" || name == "w") return Qpd::wigner;
    if (name == "glauber" || name == "p") return Qpd::glauber;
    throw ConfigError("unknown quasiprobability representation: '" + name +
                      "' (expected husimi, wigner, or glauber)");
}

std::vector<std::string> ModelSpec::validate() const {
    if (n_modes < 1) throw ConfigError("model must have at least one mode");
    auto check_size = [&](const std::vector<double>& v, const char* what) {
        if (static_cast<int>(v.size()) != n_modes)
            throw ConfigError(std::string("model parameter '") + what + "' has " +
                              std::to_string(v.size()) + " entries, expected " +
                              std::to_string(n_modes));
    };
    check_size(detuning, "detuning");
    check_size(kerr, "kerr");
    check_size(drive1, "drive1");
    check_size(drive2, "drive2");
    check_size(loss1, "loss1");
    check_size(gain, "gain");
    check_size(loss2, "loss2");

    std::vector<std::string> warnings;
    for (int m = 0; m < n_modes; ++m) {
        if (loss1[m] < 0)
            throw ConfigError("loss1[" + std::to_string(m) + "] is negative; rates must be >= 0");
        if (gain[m] < 0)
            throw ConfigError("gain[" + std::to_string(m) + "] is negative; rates must be >= 0");
        if (loss2[m] < 0)
            throw ConfigError("loss2[" + std::to_string(m) + "] is negative; rates must be >= 0");
        if (kerr[m] < 0)
            warnings.push_back("kerr[" + std::to_string(m) +
                               "] < 0 (attractive interaction); dynamics may be unstable");
        if (gain[m] > 0 && loss1[m] <= gain[m] && loss2[m] == 0)
            warnings.push_back("gain[" + std::to_string(m) +
                               "] >= loss1 with no two-photon loss; occupation may diverge");
    }
    for (const auto& h : hops) {
        if (h.a < 0 || h.a >= n_modes || h.b < 0 || h.b >= n_modes)
            throw ConfigError("hop references mode outside [0, " + std::to_string(n_modes) + ")");
        if (h.a == h.b) throw ConfigError("hop connects a mode to itself");
    }
    return warnings;
}

std::string ModelSpec::content_hash() const {
    Fnv1a h;
    h.feed(n_modes);
    auto feed_vec = [&](const std::vector<double>& v) {
        for (double x : v) h.feed(x);
    };
    feed_vec(detuning);
    feed_vec(kerr);
    feed_vec(drive1);
    feed_vec(drive2);
    feed_vec(loss1);
    feed_vec(gain);
    feed_vec(loss2);
    for (const auto& e : hops) {
        h.feed(e.a);
        h.feed(e.b);
        h.feed(e.coupling);
    }
    return h.hex();
}

ModelSpec ModelSpec::single_mode(double delta, double u, double f, double g, double kappa_a,
                                 double kappa_b, double eta) {
    ModelSpec m;
    m.n_modes = 1;
    m.detuning = {delta};
    m.kerr = {u};
    m.drive1 = {f};
    m.drive2 = {g};
    m.loss1 = {kappa_a};
    m.gain = {kappa_b};
    m.loss2 = {eta};
    return m;
}

ModelSpec ModelSpec::chain(int n, double delta, double u, const std::vector<double>& f, double j,
                           double kappa_a, double kappa_b, bool periodic) {
    ModelSpec m;
    m.n_modes = n;
    m.detuning.assign(n, delta);
    m.kerr.assign(n, u);
    if (static_cast<int>(f.size()) == 1)
        m.drive1.assign(n, f[0]);
    else if (static_cast<int>(f.size()) == n)
        m.drive1 = f;
    else
        throw ConfigError("chain drive must have 1 or n_modes entries");
    m.drive2.assign(n, 0.0);
    m.loss1.assign(n, kappa_a);
    m.gain.assign(n, kappa_b);
    m.loss2.assign(n, 0.0);
    for (int k = 0; k + 1 < n; ++k) m.hops.push_back({k, k + 1, j});
    if (periodic && n > 2) m.hops.push_back({n - 1, 0, j});
    return m;
}

}  // namespace phasespace
