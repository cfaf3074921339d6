#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "ebmlab/noise.hpp"
#include "ebmlab/objectives.hpp"
#include "ebmlab/rng.hpp"

using namespace ebmlab;

namespace {

Eigen::VectorXd gaussian_vector(int dim, std::uint64_t seed) {
    GaussianStream g(seed);
    Eigen::VectorXd v(dim);
    for (int k = 0; k < dim; ++k) v(k) = g();
    return v;
}

}  // namespace

TEST_CASE("quadratic objective: certified constants and closed forms") {
    Eigen::MatrixXd kappa = Eigen::Vector2d(1.0, 4.0).asDiagonal();
    Eigen::VectorXd theta(2);
    theta << 0.5, -1.0;
    QuadraticObjective obj(kappa, theta);
    CHECK(obj.lambda() == doctest::Approx(1.0));
    CHECK(obj.smoothness() == doctest::Approx(4.0));
    Eigen::VectorXd y(2);
    y << 2.0, 1.0;
    CHECK(obj.value(y) ==
          doctest::Approx(0.5 * (y - theta).dot(kappa * (y - theta))).epsilon(1e-14));
    CHECK((obj.gradient(y) - kappa * (y - theta)).norm() == 0.0);
    CHECK((obj.hessian(y) - kappa).norm() == 0.0);
}

TEST_CASE("perturbed quadratic: degenerate eps, Hessian at zero, rejection") {
    Eigen::MatrixXd kappa = Eigen::Vector2d(1.0, 2.0).asDiagonal();
    auto plain = make_perturbed_quadratic(kappa, 0.0, 2.0);
    QuadraticObjective quad(kappa, Eigen::VectorXd::Zero(2));
    for (int rep = 0; rep < 20; ++rep) {
        Eigen::VectorXd y = gaussian_vector(2, derive_seed(21, rep));
        CHECK(plain->value(y) == doctest::Approx(quad.value(y)).epsilon(1e-14));
        CHECK((plain->gradient(y) - quad.gradient(y)).norm() <= 1e-14);
    }

    double eps = 0.05, freq = 2.0;
    auto pert = make_perturbed_quadratic(kappa, eps, freq);
    CHECK(pert->lambda() == doctest::Approx(1.0 - eps * freq * freq));
    CHECK(pert->smoothness() == doctest::Approx(2.0 + eps * freq * freq));
    Eigen::MatrixXd h0 = pert->hessian(Eigen::VectorXd::Zero(2));
    CHECK(h0(0, 0) == doctest::Approx(1.0 - eps * freq * freq).epsilon(1e-14));
    CHECK(h0(1, 1) == doctest::Approx(2.0 - eps * freq * freq).epsilon(1e-14));
    CHECK(h0(0, 1) == 0.0);

    // certification must fail when the perturbation destroys convexity
    CHECK_THROWS_AS(make_perturbed_quadratic(kappa, 0.3, 2.0), std::invalid_argument);
}

TEST_CASE("sampled strong monotonicity and gradient Lipschitz bounds") {
    Eigen::MatrixXd kappa = Eigen::Vector2d(1.0, 2.0).asDiagonal();
    auto obj = make_perturbed_quadratic(kappa, 0.05, 2.0);
    for (int rep = 0; rep < 1000; ++rep) {
        Eigen::VectorXd x = 3.0 * gaussian_vector(2, derive_seed(22, rep, 0));
        Eigen::VectorXd y = 3.0 * gaussian_vector(2, derive_seed(22, rep, 1));
        Eigen::VectorXd dg = obj->gradient(x) - obj->gradient(y);
        double d2 = (x - y).squaredNorm();
        CHECK(dg.dot(x - y) >= obj->lambda() * d2 * (1.0 - 1e-12));
        CHECK(dg.norm() <= obj->smoothness() * std::sqrt(d2) * (1.0 + 1e-12));
    }
}

TEST_CASE("gradient matches finite differences of the value, Hessian matches the gradient") {
    Eigen::MatrixXd kappa(2, 2);
    kappa << 2.0, 0.3, 0.3, 1.5;
    auto obj = make_perturbed_quadratic(kappa, 0.04, 3.0);
    const double h = 1e-5;
    for (int rep = 0; rep < 100; ++rep) {
        Eigen::VectorXd y = 2.0 * gaussian_vector(2, derive_seed(23, rep));
        Eigen::VectorXd g = obj->gradient(y);
        Eigen::MatrixXd hess = obj->hessian(y);
        for (int i = 0; i < 2; ++i) {
            Eigen::VectorXd e = Eigen::VectorXd::Unit(2, i);
            double fd_g = (obj->value(y + h * e) - obj->value(y - h * e)) / (2.0 * h);
            CHECK(std::abs(fd_g - g(i)) <= 1e-5 * (1.0 + std::abs(g(i))));
            Eigen::VectorXd fd_h = (obj->gradient(y + h * e) - obj->gradient(y - h * e)) /
                                   (2.0 * h);
            CHECK((fd_h - hess.col(i)).norm() <= 1e-5 * (1.0 + hess.col(i).norm()));
        }
    }
}

TEST_CASE("grad_inverse: quadratic case is kappa^{-1} v") {
    Eigen::MatrixXd kappa(2, 2);
    kappa << 2.0, 0.5, 0.5, 3.0;
    QuadraticObjective obj(kappa, Eigen::VectorXd::Zero(2));
    Eigen::VectorXd v(2);
    v << 1.0, -2.0;
    Eigen::VectorXd y = grad_inverse(obj, v);
    CHECK((kappa * y - v).norm() <= 1e-10);
    CHECK((y - kappa.inverse() * v).norm() <= 1e-10);
}

TEST_CASE("grad_inverse: two-sided inverse on the perturbed quadratic") {
    Eigen::MatrixXd kappa = Eigen::Vector2d(1.5, 2.5).asDiagonal();
    auto obj = make_perturbed_quadratic(kappa, 0.05, 2.0);
    for (int rep = 0; rep < 50; ++rep) {
        Eigen::VectorXd y0 = 2.0 * gaussian_vector(2, derive_seed(24, rep));
        Eigen::VectorXd back = grad_inverse(*obj, obj->gradient(y0), 1e-10);
        CHECK((back - y0).norm() <= 1e-10 / obj->lambda());
        Eigen::VectorXd v = gaussian_vector(2, derive_seed(25, rep));
        Eigen::VectorXd y = grad_inverse(*obj, v, 1e-10, 50);
        CHECK((obj->gradient(y) - v).norm() <= 1e-10);
    }
}

TEST_CASE("predicted limit: zero endpoint gives the minimizer, affine in W_T") {
    Eigen::MatrixXd kappa = Eigen::Vector2d(1.0, 4.0).asDiagonal();
    Eigen::VectorXd theta(2);
    theta << 1.0, -1.0;
    QuadraticObjective obj(kappa, theta);
    Eigen::MatrixXd sigma = 0.7 * Eigen::MatrixXd::Identity(2, 2);

    Eigen::VectorXd at_zero = predicted_limit(obj, sigma, 2.0, Eigen::VectorXd::Zero(2));
    CHECK((at_zero - theta).norm() <= 1e-10);

    // exact linearity on three collinear endpoints
    Eigen::VectorXd w(2);
    w << 0.5, 1.5;
    Eigen::VectorXd l1 = predicted_limit(obj, sigma, 2.0, w);
    Eigen::VectorXd l2 = predicted_limit(obj, sigma, 2.0, 2.0 * w);
    Eigen::VectorXd l3 = predicted_limit(obj, sigma, 2.0, 3.0 * w);
    CHECK(((l3 - l2) - (l2 - l1)).norm() <= 1e-9);
    // closed form theta* + kappa^{-1} sigma w / T
    CHECK((l1 - (theta + kappa.inverse() * sigma * w / 2.0)).norm() <= 1e-9);
}

TEST_CASE("predicted limit from an EBM uses the exact endpoint") {
    Eigen::MatrixXd kappa = Eigen::Vector2d(2.0, 3.0).asDiagonal();
    QuadraticObjective obj(kappa, Eigen::VectorXd::Zero(2));
    Eigen::MatrixXd sigma = Eigen::MatrixXd::Identity(2, 2);
    EpochedBridgePath bridge = sample_epoched_bridge(Scheme::RandomReshuffle, 2, 3, 32, 61);
    EbmPath ebm = assemble_ebm(bridge, 4.0, 62);
    Eigen::VectorXd via_ebm = predicted_limit(obj, sigma, ebm);
    Eigen::VectorXd w_period = ebm.values.row(32).transpose();  // W_T at row m
    Eigen::VectorXd direct = predicted_limit(obj, sigma, 4.0, w_period);
    CHECK((via_ebm - direct).norm() <= 1e-12);
}

TEST_CASE("Monte Carlo: regression-style limit has the OLS-matching moments") {
    // quadratic risk with kappa, T = N h, sigma = sqrt(h sigma_eps^2 kappa):
    // the limit theta* + kappa^{-1} sigma W_T / T with W_T ~ N(0, T I) then
    // has mean theta* and covariance (sigma_eps^2/N) kappa^{-1}.
    const int n = 10000, N = 500;
    const double sigma_eps = 1.0, h = 0.01, period = N * h;
    Eigen::MatrixXd kappa = Eigen::Vector2d(1.0, 2.0).asDiagonal();
    Eigen::VectorXd theta(2);
    theta << 1.0, -1.0;
    QuadraticObjective obj(kappa, theta);
    Eigen::MatrixXd sigma =
        std::sqrt(h * sigma_eps * sigma_eps) * kappa.cwiseSqrt();  // diagonal sqrt
    Eigen::VectorXd mean = Eigen::VectorXd::Zero(2);
    Eigen::MatrixXd second = Eigen::MatrixXd::Zero(2, 2);
    for (int i = 0; i < n; ++i) {
        GaussianStream g(derive_seed(63, i));
        Eigen::VectorXd w(2);
        w << std::sqrt(period) * g(), std::sqrt(period) * g();
        Eigen::VectorXd lim = predicted_limit(obj, sigma, period, w);
        mean += lim;
        second += lim * lim.transpose();
    }
    mean /= n;
    Eigen::MatrixXd cov = second / n - mean * mean.transpose();
    Eigen::MatrixXd target = (sigma_eps * sigma_eps / N) * kappa.inverse();
    // 4 Monte Carlo standard errors; SE of a variance estimate is about
    // var * sqrt(2/n)
    for (int a = 0; a < 2; ++a) {
        CHECK(std::abs(mean(a) - theta(a)) <= 4.0 * std::sqrt(target(a, a) / n));
        CHECK(std::abs(cov(a, a) - target(a, a)) <=
              4.0 * target(a, a) * std::sqrt(2.0 / n));
    }
    CHECK(std::abs(cov(0, 1)) <= 4.0 * std::sqrt(target(0, 0) * target(1, 1) / n));
}

TEST_CASE("Hadamard remainder bound |r(y)| <= C |y|^{1+gamma}") {
    Eigen::MatrixXd kappa = Eigen::Vector2d(1.0, 2.0).asDiagonal();
    auto obj = make_perturbed_quadratic(kappa, 0.05, 2.0);
    Eigen::MatrixXd h0 = obj->hessian(Eigen::VectorXd::Zero(2));
    double c_holder = obj->hess_holder_constant();
    double gamma = obj->hess_holder_exponent();
    CHECK(gamma == doctest::Approx(1.0));
    for (int rep = 0; rep < 200; ++rep) {
        Eigen::VectorXd y = 2.0 * gaussian_vector(2, derive_seed(26, rep));
        Eigen::VectorXd r = obj->gradient(y) - h0 * y;  // grad R(0) = 0 here
        CHECK(r.norm() <= c_holder * std::pow(y.norm(), 1.0 + gamma) * (1.0 + 1e-9));
    }
}

TEST_CASE("grad_inverse failure carries the residual") {
    Eigen::MatrixXd kappa = Eigen::Vector2d(1.0, 2.0).asDiagonal();
    auto obj = make_perturbed_quadratic(kappa, 0.05, 2.0);
    Eigen::VectorXd far = Eigen::VectorXd::Constant(2, 50.0);
    CHECK_THROWS_AS(grad_inverse(*obj, far, 1e-10, 1), GradInverseFailure);
}
