#pragma once

#include <Eigen/Dense>
#include <functional>
#include <stdexcept>
#include <vector>

#include "ebmlab/schedule.hpp"

namespace ebmlab {

/// Time-indexed solution path.
struct Trajectory {
    std::vector<double> times;
    Eigen::MatrixXd states;  // times.size() x d

    Eigen::VectorXd state(int k) const { return states.row(k).transpose(); }
    Eigen::VectorXd final_state() const { return states.row(states.rows() - 1).transpose(); }
};

/// Thrown when a trajectory leaves the divergence guard |Y| <= 1e8.
struct SolverDivergence : std::runtime_error {
    long step;
    explicit SolverDivergence(long step_index)
        : std::runtime_error("solver diverged at step " + std::to_string(step_index)),
          step(step_index) {}
};

using MatrixPath = std::function<Eigen::MatrixXd(double)>;

/// Left-point Young sum of the integrand against the driver over grid rows
/// [row_begin, row_end]: sum sigma(t_k) (X_{k+1} - X_k).
Eigen::VectorXd young_integral(const MatrixPath& integrand, const std::vector<double>& times,
                               const Eigen::MatrixXd& driver, int row_begin, int row_end);

/// Explicit matrix path sharing the driver's grid (sizes must match).
Eigen::VectorXd young_integral(const std::vector<Eigen::MatrixXd>& integrand,
                               const std::vector<double>& times, const Eigen::MatrixXd& driver);

/// Sewing constant K(alpha,beta) = 1 / (1 - 2^{1-(alpha+beta)}).
double sewing_constant(double alpha, double beta_reg);

struct YoungLoeveResult {
    double defect;  // |integral - sigma_s X_{s,t}|
    double bound;   // K(alpha,beta) (t-s)^{alpha+beta} ||X||_alpha ||sigma||_beta
    double driver_seminorm;
    double integrand_seminorm;
};

/// Defect of the one-term left-point approximation over [times[row_begin], times[row_end-1]],
/// together with the Young-Loeve bound it must respect.
YoungLoeveResult young_loeve_defect(const MatrixPath& integrand, double beta_reg,
                                    const std::vector<double>& times,
                                    const Eigen::MatrixXd& driver, double alpha, int row_begin,
                                    int row_end);

using Drift = std::function<Eigen::VectorXd(double, const Eigen::VectorXd&)>;

/// Explicit left-point (Euler-Young) scheme for
///   dY = f_t(Y) dt + g(t) sigma dX,   Y_0 = y0,
/// stepping on the driver's grid.
Trajectory solve_additive(const Drift& drift, const std::function<double(double)>& noise_scale,
                          const Eigen::MatrixXd& sigma, const std::vector<double>& times,
                          const Eigen::MatrixXd& driver, const Eigen::VectorXd& y0);

struct LinearCoefficients {
    Eigen::MatrixXd kappa;                                // symmetric positive-definite
    std::function<Eigen::VectorXd(double)> offset;        // b_t; may be null (zero)
    Eigen::MatrixXd sigma;                                // d x m
};

/// Fundamental matrix of dY = -u_t kappa Y dt: phi(s,t) = exp(-kappa U(s,t)),
/// evaluated through the spectral decomposition of kappa.
class FundamentalMatrix {
  public:
    FundamentalMatrix(const Eigen::MatrixXd& kappa, const Schedule& schedule);
    Eigen::MatrixXd operator()(double s, double t) const;
    double lambda_min() const { return eigenvalues_.minCoeff(); }
    double lambda_max() const { return eigenvalues_.maxCoeff(); }

  private:
    Eigen::MatrixXd basis_;
    Eigen::VectorXd eigenvalues_;
    Schedule schedule_;
};

/// Variation-of-constants solution of dY = -u_t kappa Y dt + b_t dt + u_t sigma dX
/// (Young sums on the driver grid, propagated stepwise with the exact phi).
Trajectory linear_solution(const LinearCoefficients& coeffs, const Schedule& schedule,
                           const std::vector<double>& times, const Eigen::MatrixXd& driver,
                           const Eigen::VectorXd& y0);

/// Epoch-time reduction: Ytilde_tau = (1/sqrt(T)) sigma^{-1} (Y_{tau T} - m) with
/// m = (grad R)^{-1}(sigma W_T / T). Requires square invertible sigma.
Trajectory transform_reduced(const Trajectory& y, double period, const Eigen::MatrixXd& sigma,
                             const Eigen::VectorXd& limit_point);

/// Inverse of transform_reduced.
Trajectory untransform_reduced(const Trajectory& y_reduced, double period,
                               const Eigen::MatrixXd& sigma, const Eigen::VectorXd& limit_point);

}  // namespace ebmlab
