#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <vector>

#include "ebmlab/noise.hpp"
#include "ebmlab/schedule.hpp"

namespace ebmlab {

/// Linear-regression sample: y_n = <x_n, theta*> + eps_n, eps_n ~ N(0, sigma_eps^2).
struct RegressionDataset {
    Eigen::MatrixXd inputs;   // N x d
    Eigen::VectorXd targets;  // N
    Eigen::VectorXd theta_star;
    double sigma_eps = 0.0;
    std::uint64_t seed = 0;

    int count() const { return static_cast<int>(inputs.rows()); }
    int dim() const { return static_cast<int>(inputs.cols()); }
    /// empirical second-moment matrix (1/N) sum x_n x_n'
    Eigen::MatrixXd second_moment() const {
        return inputs.transpose() * inputs / static_cast<double>(count());
    }
};

/// Standard Gaussian inputs (optionally mapped through input_sqrt_cov).
RegressionDataset generate_regression(int count, int dim, const Eigen::VectorXd& theta_star,
                                      double sigma_eps, std::uint64_t seed,
                                      const Eigen::MatrixXd& input_sqrt_cov = Eigen::MatrixXd());

/// Exact normal-equations estimator (sum x x')^{-1} (sum x y).
Eigen::VectorXd ols(const RegressionDataset& data);

/// Per-epoch permutations of {0,...,N-1} under the four schemes; pi^0 = id.
class PermutationStream {
  public:
    PermutationStream(Scheme scheme, int order, std::uint64_t seed);
    std::vector<int> permutation(int epoch) const;
    Scheme scheme() const { return scheme_; }
    int order() const { return order_; }

  private:
    std::vector<int> uniform_permutation(int epoch) const;
    Scheme scheme_;
    int order_;
    std::uint64_t seed_;
};

using SgdObserver = std::function<void(long step, double time, const Eigen::VectorXd& iterate)>;

struct SgdoRun {
    std::vector<long> steps;
    std::vector<double> times;  // t = n h
    Eigen::MatrixXd iterates;   // recorded geometric subsample
    Eigen::VectorXd final_iterate;
};

/// SGD without replacement on the half-squared regression loss, with
/// eta_n = h * u(n h). Iterates are recorded at geometrically spaced steps
/// (ratio record_ratio); the observer, when set, sees every step.
SgdoRun run_sgdo(const RegressionDataset& data, const PermutationStream& stream,
                 const Schedule& schedule, double h, long num_steps,
                 const Eigen::VectorXd& chi0, double record_ratio = 1.1,
                 const SgdObserver& observer = nullptr);

/// One-pass SGD (Eq. of the with-replacement scheme restricted to the first
/// pass): identical index order 0..N-1, same update rule.
SgdoRun run_one_pass(const RegressionDataset& data, const Schedule& schedule, double h,
                     long num_steps, const Eigen::VectorXd& chi0, double record_ratio = 1.1,
                     const SgdObserver& observer = nullptr);

/// CSV in the shared trajectory schema (time, coordinates[, error]).
void write_csv(const std::string& filename, const SgdoRun& run,
               const Eigen::VectorXd* limit = nullptr);

}  // namespace ebmlab
