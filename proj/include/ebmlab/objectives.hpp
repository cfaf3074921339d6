#pragma once

#include <Eigen/Dense>
#include <memory>

#include "ebmlab/noise.hpp"

namespace ebmlab {

/// Strongly convex risk with certified constants. The constants are supplied
/// by the construction and validated by sampling in the test layer, not
/// estimated at runtime.
class Objective {
  public:
    virtual ~Objective() = default;
    virtual int dim() const = 0;
    virtual double value(const Eigen::VectorXd& y) const = 0;
    virtual Eigen::VectorXd gradient(const Eigen::VectorXd& y) const = 0;
    virtual Eigen::MatrixXd hessian(const Eigen::VectorXd& y) const = 0;

    /// strong-convexity modulus
    double lambda() const { return lambda_; }
    /// gradient Lipschitz constant
    double smoothness() const { return smoothness_; }
    /// Hessian Hoelder regularity (exponent in (0,1], constant)
    double hess_holder_exponent() const { return hess_holder_exponent_; }
    double hess_holder_constant() const { return hess_holder_constant_; }

  protected:
    void certify(double lambda, double smoothness, double hh_exp, double hh_const);

  private:
    double lambda_ = 0.0;
    double smoothness_ = 0.0;
    double hess_holder_exponent_ = 1.0;
    double hess_holder_constant_ = 0.0;
};

/// R(y) = 1/2 (y - theta*)' kappa (y - theta*), gradient kappa (y - theta*).
class QuadraticObjective : public Objective {
  public:
    QuadraticObjective(Eigen::MatrixXd kappa, Eigen::VectorXd theta_star);
    int dim() const override { return static_cast<int>(kappa_.rows()); }
    double value(const Eigen::VectorXd& y) const override;
    Eigen::VectorXd gradient(const Eigen::VectorXd& y) const override;
    Eigen::MatrixXd hessian(const Eigen::VectorXd&) const override { return kappa_; }
    const Eigen::MatrixXd& kappa() const { return kappa_; }
    const Eigen::VectorXd& theta_star() const { return theta_star_; }

  private:
    Eigen::MatrixXd kappa_;
    Eigen::VectorXd theta_star_;
};

/// R(y) = 1/2 y' kappa y + eps * sum_i cos(freq * y_i); strongly convex for
/// eps * freq^2 < lambda_min(kappa), with Lipschitz Hessian.
class PerturbedQuadratic : public Objective {
  public:
    PerturbedQuadratic(Eigen::MatrixXd kappa, double eps, double freq);
    int dim() const override { return static_cast<int>(kappa_.rows()); }
    double value(const Eigen::VectorXd& y) const override;
    Eigen::VectorXd gradient(const Eigen::VectorXd& y) const override;
    Eigen::MatrixXd hessian(const Eigen::VectorXd& y) const override;

  private:
    Eigen::MatrixXd kappa_;
    double eps_;
    double freq_;
};

std::shared_ptr<Objective> make_perturbed_quadratic(const Eigen::MatrixXd& kappa, double eps,
                                                    double freq);

struct GradInverseFailure : std::runtime_error {
    double residual;
    explicit GradInverseFailure(double r)
        : std::runtime_error("grad_inverse: iteration cap exceeded, residual " +
                             std::to_string(r)),
          residual(r) {}
};

/// Solves grad R(y) = v by damped Newton (gradient-descent fallback), to
/// absolute gradient residual <= tol.
Eigen::VectorXd grad_inverse(const Objective& obj, const Eigen::VectorXd& v, double tol = 1e-10,
                             int max_iterations = 100);

/// The random limit point (grad R)^{-1}(sigma W_T / T).
Eigen::VectorXd predicted_limit(const Objective& obj, const Eigen::MatrixXd& sigma,
                                double period, const Eigen::VectorXd& w_period);
Eigen::VectorXd predicted_limit(const Objective& obj, const Eigen::MatrixXd& sigma,
                                const EbmPath& ebm);

}  // namespace ebmlab
