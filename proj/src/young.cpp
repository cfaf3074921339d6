#include "ebmlab/young.hpp"

#include <cmath>

#include "ebmlab/noise.hpp"

namespace ebmlab {

Eigen::VectorXd young_integral(const MatrixPath& integrand, const std::vector<double>& times,
                               const Eigen::MatrixXd& driver, int row_begin, int row_end) {
    if (static_cast<int>(times.size()) != driver.rows())
        throw std::invalid_argument("young_integral: grid mismatch");
    if (row_end - row_begin < 2)
        throw std::invalid_argument("young_integral: need at least 2 grid points");
    Eigen::VectorXd acc;
    for (int k = row_begin; k + 1 < row_end; ++k) {
        Eigen::VectorXd term =
            integrand(times[k]) * (driver.row(k + 1) - driver.row(k)).transpose();
        if (acc.size() == 0)
            acc = term;
        else
            acc += term;
    }
    return acc;
}

Eigen::VectorXd young_integral(const std::vector<Eigen::MatrixXd>& integrand,
                               const std::vector<double>& times, const Eigen::MatrixXd& driver) {
    if (integrand.size() != times.size() || static_cast<int>(times.size()) != driver.rows())
        throw std::invalid_argument("young_integral: grid mismatch");
    Eigen::VectorXd acc = Eigen::VectorXd::Zero(integrand.front().rows());
    for (size_t k = 0; k + 1 < times.size(); ++k)
        acc += integrand[k] *
               (driver.row(static_cast<int>(k) + 1) - driver.row(static_cast<int>(k))).transpose();
    return acc;
}

double sewing_constant(double alpha, double beta_reg) {
    double theta = alpha + beta_reg;
    if (!(theta > 1.0))
        throw std::invalid_argument("sewing_constant: need alpha + beta > 1");
    return 1.0 / (1.0 - std::pow(2.0, 1.0 - theta));
}

YoungLoeveResult young_loeve_defect(const MatrixPath& integrand, double beta_reg,
                                    const std::vector<double>& times,
                                    const Eigen::MatrixXd& driver, double alpha, int row_begin,
                                    int row_end) {
    if (!(alpha + beta_reg > 1.0))
        throw std::invalid_argument("young_loeve_defect: need alpha + beta > 1");
    const double s = times[row_begin];
    const double t = times[row_end - 1];
    Eigen::VectorXd integral = young_integral(integrand, times, driver, row_begin, row_end);
    Eigen::VectorXd one_term =
        integrand(s) * (driver.row(row_end - 1) - driver.row(row_begin)).transpose();

    // grid seminorm of the integrand over the same window
    const int n = row_end - row_begin;
    Eigen::MatrixXd sig_path;  // n x (d*m), rows are flattened sigma(t_k)
    std::vector<double> win_times(times.begin() + row_begin, times.begin() + row_end);
    for (int k = 0; k < n; ++k) {
        Eigen::MatrixXd sk = integrand(win_times[k]);
        if (sig_path.size() == 0) sig_path.resize(n, sk.size());
        sig_path.row(k) = Eigen::Map<Eigen::VectorXd>(sk.data(), sk.size()).transpose();
    }
    // Frobenius-based seminorm upper-bounds the operator-norm one; fine for a bound input.
    double sig_norm = holder_seminorm(win_times, sig_path, beta_reg);
    double drv_norm = holder_seminorm(times, driver, alpha, row_begin, row_end);

    YoungLoeveResult r;
    r.defect = (integral - one_term).norm();
    r.driver_seminorm = drv_norm;
    r.integrand_seminorm = sig_norm;
    r.bound = sewing_constant(alpha, beta_reg) * std::pow(t - s, alpha + beta_reg) * drv_norm *
              sig_norm;
    return r;
}

Trajectory solve_additive(const Drift& drift, const std::function<double(double)>& noise_scale,
                          const Eigen::MatrixXd& sigma, const std::vector<double>& times,
                          const Eigen::MatrixXd& driver, const Eigen::VectorXd& y0) {
    if (static_cast<int>(times.size()) != driver.rows())
        throw std::invalid_argument("solve_additive: grid mismatch");
    const int n = static_cast<int>(times.size());
    Trajectory traj;
    traj.times = times;
    traj.states.resize(n, y0.size());
    Eigen::VectorXd y = y0;
    traj.states.row(0) = y.transpose();
    for (int k = 0; k + 1 < n; ++k) {
        double t = times[k];
        double dt = times[k + 1] - t;
        double g = noise_scale ? noise_scale(t) : 1.0;
        y += drift(t, y) * dt +
             g * (sigma * (driver.row(k + 1) - driver.row(k)).transpose());
        if (!y.allFinite() || y.norm() > 1e8) throw SolverDivergence(k + 1);
        traj.states.row(k + 1) = y.transpose();
    }
    return traj;
}

FundamentalMatrix::FundamentalMatrix(const Eigen::MatrixXd& kappa, const Schedule& schedule)
    : schedule_(schedule) {
    if (kappa.rows() != kappa.cols() ||
        (kappa - kappa.transpose()).cwiseAbs().maxCoeff() > 1e-12)
        throw std::invalid_argument("FundamentalMatrix: kappa must be symmetric");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(kappa);
    basis_ = es.eigenvectors();
    eigenvalues_ = es.eigenvalues();
    if (eigenvalues_.minCoeff() <= 0.0)
        throw std::invalid_argument("FundamentalMatrix: kappa must be positive-definite");
}

Eigen::MatrixXd FundamentalMatrix::operator()(double s, double t) const {
    double u = schedule_.rate_integral(s, t);
    Eigen::VectorXd d = (-eigenvalues_.array() * u).exp();
    return basis_ * d.asDiagonal() * basis_.transpose();
}

Trajectory linear_solution(const LinearCoefficients& coeffs, const Schedule& schedule,
                           const std::vector<double>& times, const Eigen::MatrixXd& driver,
                           const Eigen::VectorXd& y0) {
    if (static_cast<int>(times.size()) != driver.rows())
        throw std::invalid_argument("linear_solution: grid mismatch");
    FundamentalMatrix phi(coeffs.kappa, schedule);
    const int n = static_cast<int>(times.size());
    Trajectory traj;
    traj.times = times;
    traj.states.resize(n, y0.size());
    // Y_{k+1} = phi(t_k,t_{k+1}) (Y_k + b_{t_k} dt + u_{t_k} sigma dX_k); unrolling the
    // recursion reproduces phi_t (Y_0 + sum phi_s^{-1} b ds + sum phi_s^{-1} u sigma dX)
    // without ever forming the exponentially large phi^{-1}.
    Eigen::VectorXd y = y0;
    traj.states.row(0) = y.transpose();
    for (int k = 0; k + 1 < n; ++k) {
        double t = times[k];
        double dt = times[k + 1] - t;
        Eigen::VectorXd incr =
            schedule.rate(t) * (coeffs.sigma * (driver.row(k + 1) - driver.row(k)).transpose());
        if (coeffs.offset) incr += coeffs.offset(t) * dt;
        y = phi(t, times[k + 1]) * (y + incr);
        traj.states.row(k + 1) = y.transpose();
    }
    return traj;
}

Trajectory transform_reduced(const Trajectory& y, double period, const Eigen::MatrixXd& sigma,
                             const Eigen::VectorXd& limit_point) {
    if (sigma.rows() != sigma.cols())
        throw std::invalid_argument("transform_reduced: sigma must be square");
    Eigen::FullPivLU<Eigen::MatrixXd> lu(sigma);
    if (!lu.isInvertible())
        throw std::invalid_argument("transform_reduced: sigma must be invertible");
    Eigen::MatrixXd sigma_inv = lu.inverse();
    const double root_t = std::sqrt(period);
    Trajectory out;
    out.times.resize(y.times.size());
    out.states.resize(y.states.rows(), y.states.cols());
    for (size_t k = 0; k < y.times.size(); ++k) {
        out.times[k] = y.times[k] / period;
        out.states.row(k) =
            ((sigma_inv * (y.states.row(k).transpose() - limit_point)) / root_t).transpose();
    }
    return out;
}

Trajectory untransform_reduced(const Trajectory& y_reduced, double period,
                               const Eigen::MatrixXd& sigma, const Eigen::VectorXd& limit_point) {
    const double root_t = std::sqrt(period);
    Trajectory out;
    out.times.resize(y_reduced.times.size());
    out.states.resize(y_reduced.states.rows(), y_reduced.states.cols());
    for (size_t k = 0; k < y_reduced.times.size(); ++k) {
        out.times[k] = y_reduced.times[k] * period;
        out.states.row(k) =
            (root_t * (sigma * y_reduced.states.row(k).transpose()) + limit_point).transpose();
    }
    return out;
}

}  // namespace ebmlab
