#include "phasespace/observables.hpp"

#include <cmath>

namespace phasespace {
namespace {

MeanErr blocked_mean(const SampleSet& s, const Eigen::VectorXd& f, bool signed_w) {
    const int n = s.size();
    if (f.size() != n) throw ConfigError("observable value vector length mismatch");

    double num = 0.0, den = 0.0;
    for (int i = 0; i < n; ++i) {
        double w = signed_w ? static_cast<double>(s.signs[i]) : 1.0;
        num += w * f[i];
        den += w;
    }
    if (den == 0.0) throw SamplerError("sign weights sum to zero");
    MeanErr out;
    out.value = num / den;

    int blocks = s.n_chains >= 2 ? s.n_chains : std::min(16, n);
    int per = n / blocks;
    if (per < 1) return out;
    double mean_acc = 0.0, sq_acc = 0.0;
    int used = 0;
    for (int b = 0; b < blocks; ++b) {
        double bn = 0.0, bd = 0.0;
        for (int i = b * per; i < (b + 1) * per; ++i) {
            double w = signed_w ? static_cast<double>(s.signs[i]) : 1.0;
            bn += w * f[i];
            bd += w;
        }
        if (bd == 0.0) continue;
        double r = bn / bd;
        mean_acc += r;
        sq_acc += r * r;
        ++used;
    }
    if (used >= 2) {
        double m = mean_acc / used;
        double var = std::max(0.0, sq_acc / used - m * m);
        out.std_error = std::sqrt(var / used);
    }
    return out;
}

bool weights_signed(const SampleSet& s) { return (s.r % 2) == 1; }

}  // namespace

MeanErr plain_mean(const SampleSet& s, const Eigen::VectorXd& f) {
    return blocked_mean(s, f, false);
}

ComplexMeanErr expval_field(const SampleSet& s, int mode) {
    if (mode < 0 || 2 * mode + 1 >= s.dim()) throw ConfigError("expval_field: mode out of range");
    const bool sw = weights_signed(s);
    MeanErr re = blocked_mean(s, s.positions.col(2 * mode), sw);
    MeanErr im = blocked_mean(s, s.positions.col(2 * mode + 1), sw);
    ComplexMeanErr out;
    out.value = cplx(re.value, im.value);
    out.re_err = re.std_error;
    out.im_err = im.std_error;
    return out;
}

MeanErr expval_number(const SampleSet& s, Qpd qpd, int mode) {
    if (mode < 0 || 2 * mode + 1 >= s.dim()) throw ConfigError("expval_number: mode out of range");
    const double offset = qpd == Qpd::husimi ? 1.0 : 0.5;
    Eigen::VectorXd f =
        s.positions.col(2 * mode).array().square() + s.positions.col(2 * mode + 1).array().square();
    MeanErr out = blocked_mean(s, f, weights_signed(s));
    out.value -= offset;
    return out;
}

MeanErr total_number(const SampleSet& s, Qpd qpd) {
    const int modes = s.dim() / 2;
    const double offset = qpd == Qpd::husimi ? 1.0 : 0.5;
    Eigen::VectorXd f = s.positions.array().square().rowwise().sum();
    MeanErr out = blocked_mean(s, f, weights_signed(s));
    out.value -= offset * modes;
    return out;
}

MeanErr wehrl_entropy(const Ansatz& ansatz, const SampleSet& s) {
    Normalization norm = ansatz.normalization();
    if (!norm.known)
        throw AnsatzError("entropy needs a normalization, which this ansatz cannot provide");
    const int n = s.size();
    if (s.dim() != ansatz.dim()) throw ConfigError("entropy: sample dimension mismatch");
    Eigen::VectorXd logp(n);
    for (int i = 0; i < n; ++i) logp[i] = ansatz.log_density(s.positions.row(i).data()).log_abs;
    MeanErr out = blocked_mean(s, logp, weights_signed(s));
    out.value = -out.value + norm.log_z;
    return out;
}

MeanErr negative_volume(const SampleSet& s) {
    const int n = s.size();
    Eigen::VectorXd f(n);
    for (int i = 0; i < n; ++i) f[i] = s.signs[i] < 0 ? 1.0 : 0.0;
    return blocked_mean(s, f, false);
}

ObservableRecord measure_basic(const SampleSet& s, Qpd qpd, double t) {
    ObservableRecord rec;
    rec.t = t;
    const int modes = s.dim() / 2;
    rec.a_mean.reserve(modes);
    rec.n_mean.reserve(modes);
    for (int m = 0; m < modes; ++m) {
        rec.a_mean.push_back(expval_field(s, m));
        rec.n_mean.push_back(expval_number(s, qpd, m));
    }
    rec.sign_mean = s.sign_mean();
    rec.acceptance = s.acceptance;
    return rec;
}

}  // namespace phasespace
