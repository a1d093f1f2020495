#pragma once

#include <Eigen/Dense>
#include <memory>
#include <string>
#include <vector>

#include "phasespace/common.hpp"
#include "phasespace/gridfield.hpp"
#include "phasespace/model.hpp"

namespace phasespace {

/// log |p(x)| together with the sign of p(x). sign = 0 marks an exact zero
/// (log_abs is then -inf).
struct LogDensity {
    double log_abs = 0.0;
    int sign = 1;
};

struct Normalization {
    double log_z = 0.0;
    bool known = false;  // false: normalization not available in closed form
};

/// Variational density over the 2M real phase-space coordinates. Parameter
/// derivatives are of log|p|; coordinate derivatives likewise.
class Ansatz {
public:
    virtual ~Ansatz() = default;

    virtual std::string kind() const = 0;
    virtual int n_modes() const = 0;
    int dim() const { return 2 * n_modes(); }
    virtual int n_params() const = 0;

    virtual const Eigen::VectorXd& theta() const = 0;
    /// May throw AnsatzError when the parameters are unusable (degenerate or
    /// non-integrable); the previous state is left unchanged in that case.
    virtual void set_theta(const Eigen::VectorXd& th) = 0;

    virtual LogDensity log_density(const double* x) const = 0;
    virtual double density(const double* x) const = 0;

    /// d log|p| / d theta_k into out[0..n_params).
    virtual void grad_params(const double* x, double* out) const = 0;
    /// d p / d theta_k (plain density derivative; used by grid fits).
    virtual void grad_params_density(const double* x, double* out) const = 0;
    virtual void grad_x(const double* x, double* out) const = 0;
    /// Hessian of log|p|, row-major dim x dim.
    virtual void hess_x(const double* x, double* out) const = 0;

    /// One-pass combined evaluation used by the evolution engine. Outputs may
    /// be null to skip. Default implementation delegates to the parts.
    virtual void eval_all(const double* x, LogDensity* ld, double* gparams, double* gx,
                          double* hx) const;

    virtual Normalization normalization() const = 0;

    virtual std::unique_ptr<Ansatz> clone() const = 0;
};

/// Mixture of complex-parameter Gaussians: p(x) = Re sum_r c_r
/// exp(-(x - mu_r)^T A_r (x - mu_r) / 2) with A_r the inverse of the
/// symmetrized Sigma_r. Means and covariances are complex; only the real
/// part of the sum is the density. Parameters per component are laid out
/// [c, Re mu, Im mu, Re Sigma (row-major), Im Sigma].
class GaussianMixture : public Ansatz {
public:
    GaussianMixture(int n_modes, int n_components);

    static int params_per_component(int n_modes) {
        int n = 2 * n_modes;
        return 1 + 2 * n + 2 * n * n;
    }

    std::string kind() const override { return "gaussian-mixture"; }
    int n_modes() const override { return n_modes_; }
    int n_params() const override { return static_cast<int>(theta_.size()); }
    int n_components() const { return n_components_; }

    const Eigen::VectorXd& theta() const override { return theta_; }
    void set_theta(const Eigen::VectorXd& th) override;

    LogDensity log_density(const double* x) const override;
    double density(const double* x) const override;
    void grad_params(const double* x, double* out) const override;
    void grad_params_density(const double* x, double* out) const override;
    void grad_x(const double* x, double* out) const override;
    void hess_x(const double* x, double* out) const override;
    void eval_all(const double* x, LogDensity* ld, double* gparams, double* gx,
                  double* hx) const override;
    Normalization normalization() const override;
    std::unique_ptr<Ansatz> clone() const override;

    /// Real parts of the component means; sampler chains start near these.
    std::vector<Eigen::VectorXd> component_centers() const;

    // Accessors into a raw parameter vector, shared by builders.
    static double& weight(Eigen::VectorXd& th, int r, int n);
    static double& mu(Eigen::VectorXd& th, int r, int n, int i, bool imag);
    static double& sigma(Eigen::VectorXd& th, int r, int n, int i, int j, bool imag);

private:
    struct Component {
        double c;
        Eigen::VectorXcd mu;
        Eigen::MatrixXcd a;  // inverse of symmetrized covariance
        double max_cond;
    };
    struct Scratch {
        std::vector<cplx> e_hat;   // e^{q_r - shift}
        std::vector<cplx> ce_hat;  // c_r e^{q_r - shift}
        std::vector<Eigen::VectorXcd> g;  // A_r (x - mu_r)
        double shift = 0.0;
        double psum = 0.0;  // p e^{-shift}
    };
    void rebuild(const Eigen::VectorXd& th, std::vector<Component>& comps) const;
    void core(const double* x, Scratch& s) const;

    int n_modes_;
    int n_components_;
    Eigen::VectorXd theta_;
    std::vector<Component> comps_;
};

/// Gaussian-envelope restricted Boltzmann machine:
///   log p = -sum_i lambda_i^2 x_i^2 + sum_j log cosh(w_j . x + b_j).
/// Always positive. Parameters: [lambda (dim), b (n_hidden),
/// W (n_hidden x dim row-major)].
class Rbm : public Ansatz {
public:
    Rbm(int n_modes, int hidden_per_unit);

    std::string kind() const override { return "rbm"; }
    int n_modes() const override { return n_modes_; }
    int n_params() const override { return static_cast<int>(theta_.size()); }
    int hidden_per_unit() const { return beta_; }
    int n_hidden() const { return beta_ * 2 * n_modes_; }

    const Eigen::VectorXd& theta() const override { return theta_; }
    void set_theta(const Eigen::VectorXd& th) override;

    LogDensity log_density(const double* x) const override;
    double density(const double* x) const override;
    void grad_params(const double* x, double* out) const override;
    void grad_params_density(const double* x, double* out) const override;
    void grad_x(const double* x, double* out) const override;
    void hess_x(const double* x, double* out) const override;
    void eval_all(const double* x, LogDensity* ld, double* gparams, double* gx,
                  double* hx) const override;
    /// Grid quadrature for one or two modes; unknown beyond that.
    Normalization normalization() const override;
    std::unique_ptr<Ansatz> clone() const override;

    /// Quadrature window used by normalization(); adjustable for states far
    /// from the origin.
    void set_quadrature(double half_width, int points);

private:
    int n_modes_;
    int beta_;
    Eigen::VectorXd theta_;
    // views rebuilt on set_theta
    Eigen::VectorXd lambda_, bias_;
    Eigen::MatrixXd w_;  // n_hidden x dim
    double quad_half_width_ = 8.0;
    int quad_points_ = 161;
};

// --- initial-state builders ---

/// Product of coherent states at the given amplitudes. For n_components > 1
/// the component is replicated with small seeded jitter on the means and the
/// weight split evenly (degenerate mixtures break the linear solver
/// otherwise).
std::unique_ptr<GaussianMixture> init_coherent_mixture(int n_modes,
                                                       const std::vector<cplx>& alphas, Qpd qpd,
                                                       int n_components, double jitter,
                                                       uint64_t seed);

/// Two-lobe superposition of +/- alpha with parity +1 (even) or -1 (odd):
/// two real lobes and two complex-mean interference components, replicated
/// with jitter if n_components > 4. Single mode.
std::unique_ptr<GaussianMixture> init_cat_mixture(cplx alpha, int parity, Qpd qpd,
                                                  int n_components, double jitter, uint64_t seed);

/// RBM matching a product of coherent states: quadratic envelope plus one
/// saturated linear unit carrying the displacement; remaining units get tiny
/// seeded weights.
std::unique_ptr<Rbm> init_rbm_coherent(int n_modes, const std::vector<cplx>& alphas, Qpd qpd,
                                       int hidden_per_unit, double perturb, uint64_t seed);

struct FitOptions {
    int iterations = 2000;
    double learning_rate = 0.02;
    uint64_t seed = 1;
    bool scale_free = true;   // fit up to overall scale (RBM cannot rescale)
    double tolerance = 0.0;   // stop early when relative mse change stalls
};

struct FitReport {
    double mse = 0.0;         // on normalized values
    double scale = 1.0;       // optimal model multiplier against the target
    int iterations = 0;
};

/// Least-squares fit of the ansatz density to grid values (Adam on the
/// parameters). Used to produce initial conditions from reference fields.
FitReport fit_to_grid(Ansatz& ans, const GridField& target, const FitOptions& opt);

/// Same objective on scattered points.
FitReport fit_to_points(Ansatz& ans, const std::vector<Eigen::VectorXd>& xs,
                        const std::vector<double>& targets, const FitOptions& opt);

// --- serialization ---
void save_ansatz(const Ansatz& a, const std::string& path);
std::unique_ptr<Ansatz> load_ansatz(const std::string& path);
std::string ansatz_to_json(const Ansatz& a);
std::unique_ptr<Ansatz> ansatz_from_json(const std::string& text);

}  // namespace phasespace
