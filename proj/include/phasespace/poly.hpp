#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "phasespace/common.hpp"

namespace phasespace {

/// Sparse real polynomial in a fixed number of variables. Terms are kept
/// canonical: exponent tuples sorted lexicographically, merged, and pruned
/// of coefficients that are negligible relative to the largest one.
class PolyExpr {
public:
    struct Term {
        std::vector<uint8_t> exps;  // one exponent per variable
        double coeff = 0.0;
    };

    PolyExpr() = default;
    explicit PolyExpr(int n_vars) : n_vars_(n_vars) {}

    static PolyExpr constant(int n_vars, double c);
    /// Monomial c * prod x_i^e_i from (variable, exponent) pairs.
    static PolyExpr monomial(int n_vars, const std::vector<std::pair<int, int>>& ve, double c);

    int n_vars() const { return n_vars_; }
    bool is_zero() const { return terms_.empty(); }
    const std::vector<Term>& terms() const { return terms_; }

    void add_term(const std::vector<uint8_t>& exps, double coeff);
    void canonicalize(double prune_rel = 1e-14);

    double eval(const double* x) const;
    PolyExpr derivative(int var) const;
    int degree() const;

    PolyExpr operator+(const PolyExpr& o) const;
    PolyExpr operator-(const PolyExpr& o) const;
    PolyExpr operator*(const PolyExpr& o) const;
    PolyExpr scaled(double c) const;

    /// Coefficient-wise comparison of canonicalized forms.
    bool same_as(const PolyExpr& o, double tol) const;
    double max_abs_coeff() const;

    /// Rendering like "2 x1^2 x2 - 0.5 x4" with 1-based variable names.
    std::string to_string(const std::string& var_prefix = "x") const;

    void hash_into(Fnv1a& h) const;

private:
    int n_vars_ = 0;
    std::vector<Term> terms_;
};

}  // namespace phasespace
