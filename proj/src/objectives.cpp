#include "ebmlab/objectives.hpp"

#include <cmath>
#include <stdexcept>

namespace ebmlab {

void Objective::certify(double lambda, double smoothness, double hh_exp, double hh_const) {
    if (!(lambda > 0.0) || !(smoothness >= lambda))
        throw std::invalid_argument("Objective: need 0 < lambda <= L");
    lambda_ = lambda;
    smoothness_ = smoothness;
    hess_holder_exponent_ = hh_exp;
    hess_holder_constant_ = hh_const;
}

QuadraticObjective::QuadraticObjective(Eigen::MatrixXd kappa, Eigen::VectorXd theta_star)
    : kappa_(std::move(kappa)), theta_star_(std::move(theta_star)) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(kappa_);
    certify(es.eigenvalues().minCoeff(), es.eigenvalues().maxCoeff(), 1.0, 0.0);
}

double QuadraticObjective::value(const Eigen::VectorXd& y) const {
    Eigen::VectorXd r = y - theta_star_;
    return 0.5 * r.dot(kappa_ * r);
}

Eigen::VectorXd QuadraticObjective::gradient(const Eigen::VectorXd& y) const {
    return kappa_ * (y - theta_star_);
}

PerturbedQuadratic::PerturbedQuadratic(Eigen::MatrixXd kappa, double eps, double freq)
    : kappa_(std::move(kappa)), eps_(eps), freq_(freq) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(kappa_);
    double lo = es.eigenvalues().minCoeff() - eps * freq * freq;
    double hi = es.eigenvalues().maxCoeff() + eps * freq * freq;
    if (!(lo > 0.0))
        throw std::invalid_argument(
            "PerturbedQuadratic: eps*freq^2 must stay below lambda_min(kappa)");
    // third derivative of eps*cos(freq y) is bounded by eps*freq^3: Lipschitz Hessian
    certify(lo, hi, 1.0, eps * freq * freq * freq);
}

double PerturbedQuadratic::value(const Eigen::VectorXd& y) const {
    double v = 0.5 * y.dot(kappa_ * y);
    for (int i = 0; i < y.size(); ++i) v += eps_ * std::cos(freq_ * y(i));
    return v;
}

Eigen::VectorXd PerturbedQuadratic::gradient(const Eigen::VectorXd& y) const {
    Eigen::VectorXd g = kappa_ * y;
    for (int i = 0; i < y.size(); ++i) g(i) -= eps_ * freq_ * std::sin(freq_ * y(i));
    return g;
}

Eigen::MatrixXd PerturbedQuadratic::hessian(const Eigen::VectorXd& y) const {
    Eigen::MatrixXd h = kappa_;
    for (int i = 0; i < y.size(); ++i) h(i, i) -= eps_ * freq_ * freq_ * std::cos(freq_ * y(i));
    return h;
}

std::shared_ptr<Objective> make_perturbed_quadratic(const Eigen::MatrixXd& kappa, double eps,
                                                    double freq) {
    return std::make_shared<PerturbedQuadratic>(kappa, eps, freq);
}

Eigen::VectorXd grad_inverse(const Objective& obj, const Eigen::VectorXd& v, double tol,
                             int max_iterations) {
    // initialize at the solution of the curvature-at-zero linearization
    Eigen::VectorXd zero = Eigen::VectorXd::Zero(obj.dim());
    Eigen::VectorXd y = obj.hessian(zero).ldlt().solve(v - obj.gradient(zero));
    Eigen::VectorXd res = obj.gradient(y) - v;
    for (int it = 0; it < max_iterations; ++it) {
        if (res.norm() <= tol) return y;
        Eigen::VectorXd step = obj.hessian(y).ldlt().solve(-res);
        double scale = 1.0;
        for (int bt = 0; bt < 30; ++bt) {
            Eigen::VectorXd cand = y + scale * step;
            Eigen::VectorXd cand_res = obj.gradient(cand) - v;
            if (cand_res.norm() < res.norm()) {
                y = cand;
                res = cand_res;
                break;
            }
            scale *= 0.5;
            if (bt == 29) {
                // gradient step on 1/2 |grad R(y) - v|^2; globally convergent
                // by strong monotonicity
                y -= (1.0 / (obj.smoothness() * obj.smoothness())) *
                     (obj.hessian(y).transpose() * res);
                res = obj.gradient(y) - v;
            }
        }
    }
    if (res.norm() <= tol) return y;
    throw GradInverseFailure(res.norm());
}

Eigen::VectorXd predicted_limit(const Objective& obj, const Eigen::MatrixXd& sigma,
                                double period, const Eigen::VectorXd& w_period) {
    return grad_inverse(obj, sigma * w_period / period);
}

Eigen::VectorXd predicted_limit(const Objective& obj, const Eigen::MatrixXd& sigma,
                                const EbmPath& ebm) {
    // W_T = sqrt(T) V exactly (the bridge vanishes at epoch boundaries)
    Eigen::VectorXd w_t = std::sqrt(ebm.period) * ebm.drift;
    return predicted_limit(obj, sigma, ebm.period, w_t);
}

}  // namespace ebmlab
