#include "phasespace/fp_compiler.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

namespace phasespace {

int DriftDiffusion::upper_index(int i, int j) const {
    int n = dim();
    return i * n - i * (i - 1) / 2 + (j - i);
}

const PolyExpr& DriftDiffusion::diffusion(int i, int j) const {
    if (i > j) std::swap(i, j);
    return diffusion_upper[upper_index(i, j)];
}

void DriftDiffusion::eval_drift(const double* x, double* nu) const {
    for (int i = 0; i < dim(); ++i) nu[i] = drift[i].eval(x);
}

void DriftDiffusion::eval_diffusion(const double* x, double* d) const {
    int n = dim();
    for (int i = 0; i < n; ++i) {
        for (int j = i; j < n; ++j) {
            double v = diffusion_upper[upper_index(i, j)].eval(x);
            d[i * n + j] = v;
            d[j * n + i] = v;
        }
    }
}

std::vector<std::pair<int, int>> DriftDiffusion::diffusion_support() const {
    std::vector<std::pair<int, int>> out;
    for (int i = 0; i < dim(); ++i)
        for (int j = i; j < dim(); ++j)
            if (!diffusion_upper[upper_index(i, j)].is_zero()) out.push_back({i, j});
    return out;
}

std::string DriftDiffusion::describe() const {
    std::ostringstream os;
    os << "representation: " << qpd_name(qpd) << ", modes: " << n_modes << "\n";
    os << "drift:\n";
    for (int i = 0; i < dim(); ++i)
        os << "  nu[" << (i + 1) << "] = " << drift[i].to_string() << "\n";
    os << "diffusion (symmetric, upper triangle):\n";
    bool any = false;
    for (int i = 0; i < dim(); ++i) {
        for (int j = i; j < dim(); ++j) {
            const PolyExpr& p = diffusion_upper[upper_index(i, j)];
            if (p.is_zero()) continue;
            any = true;
            os << "  D[" << (i + 1) << "][" << (j + 1) << "] = " << p.to_string() << "\n";
        }
    }
    if (!any) os << "  (none)\n";
    if (!truncated.empty()) {
        os << "dropped higher-order terms:\n";
        for (const auto& t : truncated)
            os << "  " << t.source << ": order " << t.order << ", " << t.n_monomials
               << " monomial(s), max |coeff| = " << format_double(t.max_abs_coeff) << "\n";
    }
    return os.str();
}

std::string DriftDiffusion::content_hash() const {
    Fnv1a h;
    h.feed(n_modes);
    h.feed(static_cast<int>(qpd));
    for (const auto& p : drift) p.hash_into(h);
    for (const auto& p : diffusion_upper) p.hash_into(h);
    return h.hex();
}

namespace {

// One additive piece of the generator image in Wirtinger form:
//   c * prod_m da_m^{der_a} dac_m^{der_ac} [ prod_m a_m^{mono_a} ac_m^{mono_ac} * p ]
// where a_m / ac_m are the complex coordinate and its conjugate and the
// derivatives stand outside the bracket.
struct WTerm {
    cplx c;
    std::vector<uint8_t> mono_a, mono_ac, der_a, der_ac;
};

using WExpr = std::vector<WTerm>;

WExpr base_term(int m) {
    WTerm t;
    t.c = 1.0;
    t.mono_a.assign(m, 0);
    t.mono_ac.assign(m, 0);
    t.der_a.assign(m, 0);
    t.der_ac.assign(m, 0);
    return {t};
}

void append_scaled(WExpr& dst, const WExpr& src, cplx f) {
    for (const auto& t : src) {
        dst.push_back(t);
        dst.back().c *= f;
    }
}

// Left-multiplies every term by a_m (conj=false) or ac_m (conj=true),
// commuting it through the derivative of the same variable:
//   a d^g [..] = d^g [ a .. ] - g d^{g-1} [..]
WExpr mul_coord(const WExpr& in, int mode, bool conj) {
    WExpr out;
    out.reserve(in.size() * 2);
    for (const auto& t : in) {
        WTerm main = t;
        auto& mono = conj ? main.mono_ac : main.mono_a;
        mono[mode] += 1;
        out.push_back(main);
        uint8_t g = conj ? t.der_ac[mode] : t.der_a[mode];
        if (g > 0) {
            WTerm comm = t;
            comm.c *= -static_cast<double>(g);
            (conj ? comm.der_ac : comm.der_a)[mode] -= 1;
            out.push_back(comm);
        }
    }
    return out;
}

WExpr apply_deriv(const WExpr& in, int mode, bool conj) {
    WExpr out = in;
    for (auto& t : out) (conj ? t.der_ac : t.der_a)[mode] += 1;
    return out;
}

struct Token {
    int mode;
    bool dag;
};
using OpProduct = std::vector<Token>;

OpProduct dagger(const OpProduct& p) {
    OpProduct out(p.rbegin(), p.rend());
    for (auto& t : out) t.dag = !t.dag;
    return out;
}

struct Mapper {
    double cm, cp;  // (1-s)/2 and (1+s)/2

    WExpr left(const Token& tk, const WExpr& w) const {
        WExpr out;
        if (!tk.dag) {
            out = mul_coord(w, tk.mode, false);
            append_scaled(out, apply_deriv(w, tk.mode, true), cm);
        } else {
            out = mul_coord(w, tk.mode, true);
            append_scaled(out, apply_deriv(w, tk.mode, false), -cp);
        }
        return out;
    }

    WExpr right(const Token& tk, const WExpr& w) const {
        WExpr out;
        if (!tk.dag) {
            out = mul_coord(w, tk.mode, false);
            append_scaled(out, apply_deriv(w, tk.mode, true), -cp);
        } else {
            out = mul_coord(w, tk.mode, true);
            append_scaled(out, apply_deriv(w, tk.mode, false), cm);
        }
        return out;
    }

    // Image of (prod) rho: rightmost factor acts on p first.
    WExpr image_left(const OpProduct& prod, int m) const {
        WExpr w = base_term(m);
        for (auto it = prod.rbegin(); it != prod.rend(); ++it) w = left(*it, w);
        return w;
    }

    // Image of rho (prod): leftmost factor acts on p first.
    WExpr image_right(const OpProduct& prod, int m) const {
        WExpr w = base_term(m);
        for (const auto& tk : prod) w = right(tk, w);
        return w;
    }

    // -i h ([prod, .]) for one Hamiltonian product.
    WExpr hamiltonian(const OpProduct& prod, double h, int m) const {
        WExpr out;
        append_scaled(out, image_left(prod, m), cplx(0.0, -h));
        append_scaled(out, image_right(prod, m), cplx(0.0, h));
        return out;
    }

    // gamma ( C p C^dag - 1/2 {C^dag C, p} )
    WExpr dissipator(const OpProduct& c, double gamma, int m) const {
        OpProduct cd = dagger(c);
        WExpr mid = image_right(cd, m);
        for (auto it = c.rbegin(); it != c.rend(); ++it) mid = left(*it, mid);

        OpProduct cdc = cd;
        cdc.insert(cdc.end(), c.begin(), c.end());

        WExpr out;
        append_scaled(out, mid, gamma);
        append_scaled(out, image_left(cdc, m), -0.5 * gamma);
        append_scaled(out, image_right(cdc, m), -0.5 * gamma);
        return out;
    }
};

// Sparse complex polynomial over the 2M real coordinates (or over the 2M
// derivative symbols; same structure).
using CPoly = std::map<std::vector<uint8_t>, cplx>;

CPoly mul_linear(const CPoly& p, int v1, cplx c1, int v2, cplx c2) {
    CPoly out;
    for (const auto& [e, c] : p) {
        auto e1 = e;
        e1[v1] += 1;
        out[e1] += c * c1;
        auto e2 = e;
        e2[v2] += 1;
        out[e2] += c * c2;
    }
    return out;
}

struct RealAccum {
    // key: (derivative exponents, monomial exponents)
    std::map<std::pair<std::vector<uint8_t>, std::vector<uint8_t>>, cplx> terms;

    void add(const WTerm& t, int m) {
        int n = 2 * m;
        const cplx I(0.0, 1.0);
        CPoly mono{{std::vector<uint8_t>(n, 0), t.c}};
        for (int k = 0; k < m; ++k) {
            for (int r = 0; r < t.mono_a[k]; ++r) mono = mul_linear(mono, 2 * k, 1.0, 2 * k + 1, I);
            for (int r = 0; r < t.mono_ac[k]; ++r)
                mono = mul_linear(mono, 2 * k, 1.0, 2 * k + 1, -I);
        }
        CPoly der{{std::vector<uint8_t>(n, 0), cplx(1.0, 0.0)}};
        for (int k = 0; k < m; ++k) {
            for (int r = 0; r < t.der_a[k]; ++r)
                der = mul_linear(der, 2 * k, 0.5, 2 * k + 1, -0.5 * I);
            for (int r = 0; r < t.der_ac[k]; ++r)
                der = mul_linear(der, 2 * k, 0.5, 2 * k + 1, 0.5 * I);
        }
        for (const auto& [de, dc] : der)
            for (const auto& [me, mc] : mono) terms[{de, me}] += dc * mc;
    }
};

int total(const std::vector<uint8_t>& e) {
    int s = 0;
    for (auto v : e) s += v;
    return s;
}

}  // namespace

DriftDiffusion compile_generator(const ModelSpec& model, Qpd qpd) {
    model.validate();
    const int m = model.n_modes;
    const int n = 2 * m;
    const double s = qpd_s(qpd);
    Mapper map{(1.0 - s) / 2.0, (1.0 + s) / 2.0};

    std::vector<std::pair<std::string, WExpr>> sources;
    auto mode_tag = [](int k) { return std::string("mode ") + std::to_string(k + 1); };

    for (int k = 0; k < m; ++k) {
        Token a{k, false}, ad{k, true};
        if (model.detuning[k] != 0.0)
            sources.push_back({"detuning " + mode_tag(k),
                               map.hamiltonian({ad, a}, model.detuning[k], m)});
        if (model.kerr[k] != 0.0)
            sources.push_back({"kerr " + mode_tag(k),
                               map.hamiltonian({ad, ad, a, a}, -model.kerr[k], m)});
        if (model.drive1[k] != 0.0) {
            WExpr w = map.hamiltonian({ad}, model.drive1[k], m);
            append_scaled(w, map.hamiltonian({a}, model.drive1[k], m), 1.0);
            sources.push_back({"drive1 " + mode_tag(k), std::move(w)});
        }
        if (model.drive2[k] != 0.0) {
            WExpr w = map.hamiltonian({ad, ad}, model.drive2[k], m);
            append_scaled(w, map.hamiltonian({a, a}, model.drive2[k], m), 1.0);
            sources.push_back({"drive2 " + mode_tag(k), std::move(w)});
        }
        if (model.loss1[k] != 0.0)
            sources.push_back({"loss1 " + mode_tag(k), map.dissipator({a}, model.loss1[k], m)});
        if (model.gain[k] != 0.0)
            sources.push_back({"gain " + mode_tag(k), map.dissipator({ad}, model.gain[k], m)});
        if (model.loss2[k] != 0.0)
            sources.push_back({"loss2 " + mode_tag(k), map.dissipator({a, a}, model.loss2[k], m)});
    }
    for (const auto& h : model.hops) {
        if (h.coupling == 0.0) continue;
        Token aj{h.a, false}, adj{h.a, true}, ak{h.b, false}, adk{h.b, true};
        WExpr w = map.hamiltonian({adj, ak}, h.coupling, m);
        append_scaled(w, map.hamiltonian({adk, aj}, h.coupling, m), 1.0);
        sources.push_back({"hop modes " + std::to_string(h.a + 1) + "," +
                               std::to_string(h.b + 1),
                           std::move(w)});
    }

    DriftDiffusion out;
    out.n_modes = m;
    out.qpd = qpd;
    out.drift.assign(n, PolyExpr(n));
    out.diffusion_upper.assign(n * (n + 1) / 2, PolyExpr(n));

    for (const auto& [label, expr] : sources) {
        RealAccum acc;
        for (const auto& t : expr) acc.add(t, m);

        double scale = 0.0;
        for (const auto& [key, c] : acc.terms) scale = std::max(scale, std::abs(c));
        if (scale == 0.0) continue;

        std::map<int, TruncatedTerm> dropped;
        for (const auto& [key, c] : acc.terms) {
            const auto& [de, me] = key;
            if (std::abs(c.imag()) > 1e-14 * scale)
                throw CompileError(label + ": imaginary residue " + format_double(c.imag()) +
                                   " exceeds tolerance; translation table inconsistent");
            double cr = c.real();
            if (std::abs(cr) <= 1e-14 * scale) continue;
            int order = total(de);
            if (order == 0) {
                throw CompileError(label + ": order-zero residue " + format_double(cr) +
                                   " breaks trace preservation");
            } else if (order == 1) {
                int i = 0;
                while (de[i] == 0) ++i;
                out.drift[i].add_term(me, -cr);
            } else if (order == 2) {
                int i = 0;
                while (de[i] == 0) ++i;
                int j;
                if (de[i] == 2) {
                    j = i;
                } else {
                    j = i + 1;
                    while (de[j] == 0) ++j;
                }
                double f = (i == j) ? 1.0 : 0.5;
                out.diffusion_upper[out.upper_index(i, j)].add_term(me, f * cr);
            } else {
                auto& rec = dropped[order];
                rec.source = label;
                rec.order = order;
                rec.n_monomials += 1;
                rec.max_abs_coeff = std::max(rec.max_abs_coeff, std::abs(cr));
            }
        }
        for (auto& [o, rec] : dropped) out.truncated.push_back(rec);
    }

    for (auto& p : out.drift) p.canonicalize();
    for (auto& p : out.diffusion_upper) p.canonicalize();
    return out;
}

}  // namespace phasespace
