#include "phasespace/poly.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace phasespace {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    double back = std::strtod(buf, nullptr);
    if (back == v) {
        // try shorter forms for readability
        for (int prec = 1; prec < 17; ++prec) {
            char shorter[40];
            std::snprintf(shorter, sizeof shorter, "%.*g", prec, v);
            if (std::strtod(shorter, nullptr) == v) return shorter;
        }
    }
    return buf;
}

PolyExpr PolyExpr::constant(int n_vars, double c) {
    PolyExpr p(n_vars);
    p.add_term(std::vector<uint8_t>(n_vars, 0), c);
    p.canonicalize();
    return p;
}

PolyExpr PolyExpr::monomial(int n_vars, const std::vector<std::pair<int, int>>& ve, double c) {
    std::vector<uint8_t> e(n_vars, 0);
    for (auto& [v, k] : ve) e.at(v) = static_cast<uint8_t>(e.at(v) + k);
    PolyExpr p(n_vars);
    p.add_term(e, c);
    p.canonicalize();
    return p;
}

void PolyExpr::add_term(const std::vector<uint8_t>& exps, double coeff) {
    Term t;
    t.exps = exps;
    t.coeff = coeff;
    terms_.push_back(std::move(t));
}

void PolyExpr::canonicalize(double prune_rel) {
    std::sort(terms_.begin(), terms_.end(),
              [](const Term& a, const Term& b) { return a.exps < b.exps; });
    std::vector<Term> merged;
    for (auto& t : terms_) {
        if (!merged.empty() && merged.back().exps == t.exps)
            merged.back().coeff += t.coeff;
        else
            merged.push_back(t);
    }
    double scale = 0.0;
    for (auto& t : merged) scale = std::max(scale, std::abs(t.coeff));
    std::vector<Term> kept;
    for (auto& t : merged)
        if (std::abs(t.coeff) > prune_rel * scale && t.coeff != 0.0) kept.push_back(t);
    terms_ = std::move(kept);
}

double PolyExpr::eval(const double* x) const {
    double acc = 0.0;
    for (const auto& t : terms_) {
        double m = t.coeff;
        for (int v = 0; v < n_vars_; ++v) {
            switch (t.exps[v]) {
                case 0: break;
                case 1: m *= x[v]; break;
                case 2: m *= x[v] * x[v]; break;
                default: {
                    double p = x[v];
                    for (int k = 1; k < t.exps[v]; ++k) p *= x[v];
                    m *= p;
                }
            }
        }
        acc += m;
    }
    return acc;
}

PolyExpr PolyExpr::derivative(int var) const {
    PolyExpr out(n_vars_);
    for (const auto& t : terms_) {
        if (t.exps[var] == 0) continue;
        Term d = t;
        d.coeff *= d.exps[var];
        d.exps[var] -= 1;
        out.terms_.push_back(std::move(d));
    }
    out.canonicalize();
    return out;
}

int PolyExpr::degree() const {
    int deg = 0;
    for (const auto& t : terms_) {
        int d = 0;
        for (auto e : t.exps) d += e;
        deg = std::max(deg, d);
    }
    return deg;
}

PolyExpr PolyExpr::operator+(const PolyExpr& o) const {
    PolyExpr out(n_vars_);
    out.terms_ = terms_;
    out.terms_.insert(out.terms_.end(), o.terms_.begin(), o.terms_.end());
    out.canonicalize();
    return out;
}

PolyExpr PolyExpr::operator-(const PolyExpr& o) const { return *this + o.scaled(-1.0); }

PolyExpr PolyExpr::operator*(const PolyExpr& o) const {
    PolyExpr out(n_vars_);
    for (const auto& a : terms_) {
        for (const auto& b : o.terms_) {
            Term t;
            t.exps.resize(n_vars_);
            for (int v = 0; v < n_vars_; ++v)
                t.exps[v] = static_cast<uint8_t>(a.exps[v] + b.exps[v]);
            t.coeff = a.coeff * b.coeff;
            out.terms_.push_back(std::move(t));
        }
    }
    out.canonicalize();
    return out;
}

PolyExpr PolyExpr::scaled(double c) const {
    PolyExpr out = *this;
    for (auto& t : out.terms_) t.coeff *= c;
    out.canonicalize();
    return out;
}

bool PolyExpr::same_as(const PolyExpr& o, double tol) const {
    PolyExpr d = *this - o;
    double scale = std::max(max_abs_coeff(), o.max_abs_coeff());
    if (scale == 0.0) return d.terms_.empty();
    for (const auto& t : d.terms_)
        if (std::abs(t.coeff) > tol * scale) return false;
    return true;
}

double PolyExpr::max_abs_coeff() const {
    double m = 0.0;
    for (const auto& t : terms_) m = std::max(m, std::abs(t.coeff));
    return m;
}

std::string PolyExpr::to_string(const std::string& var_prefix) const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& t : terms_) {
        double c = t.coeff;
        if (first) {
            if (c < 0) os << "-";
        } else {
            os << (c < 0 ? " - " : " + ");
        }
        first = false;
        double mag = std::abs(c);
        bool hasvars = false;
        for (int v = 0; v < n_vars_; ++v) hasvars = hasvars || t.exps[v] > 0;
        if (mag != 1.0 || !hasvars) os << format_double(mag);
        bool needspace = mag != 1.0 || !hasvars;
        for (int v = 0; v < n_vars_; ++v) {
            if (t.exps[v] == 0) continue;
            if (needspace) os << " ";
            os << var_prefix << (v + 1);
            if (t.exps[v] > 1) os << "^" << static_cast<int>(t.exps[v]);
            needspace = true;
        }
    }
    return os.str();
}

void PolyExpr::hash_into(Fnv1a& h) const {
    h.feed(n_vars_);
    for (const auto& t : terms_) {
        h.feed(t.exps.data(), t.exps.size());
        h.feed(t.coeff);
    }
}

}  // namespace phasespace
