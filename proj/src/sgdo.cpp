#include "ebmlab/sgdo.hpp"

#include <cmath>
#include <fstream>
#include <numeric>
#include <stdexcept>

#include "ebmlab/rng.hpp"
#include "ebmlab/young.hpp"

namespace ebmlab {

RegressionDataset generate_regression(int count, int dim, const Eigen::VectorXd& theta_star,
                                      double sigma_eps, std::uint64_t seed,
                                      const Eigen::MatrixXd& input_sqrt_cov) {
    if (count <= dim)
        throw std::invalid_argument("generate_regression: need N > d (underparameterized)");
    if (theta_star.size() != dim)
        throw std::invalid_argument("generate_regression: theta_star dimension mismatch");
    RegressionDataset data;
    data.theta_star = theta_star;
    data.sigma_eps = sigma_eps;
    data.seed = seed;
    GaussianStream gx(derive_seed(seed, 1));
    GaussianStream ge(derive_seed(seed, 2));
    data.inputs.resize(count, dim);
    for (int n = 0; n < count; ++n)
        for (int c = 0; c < dim; ++c) data.inputs(n, c) = gx();
    if (input_sqrt_cov.size() != 0)
        data.inputs = data.inputs * input_sqrt_cov.transpose();
    data.targets.resize(count);
    for (int n = 0; n < count; ++n)
        data.targets(n) = data.inputs.row(n).dot(theta_star) + sigma_eps * ge();
    return data;
}

Eigen::VectorXd ols(const RegressionDataset& data) {
    Eigen::MatrixXd gram = data.inputs.transpose() * data.inputs;
    Eigen::FullPivLU<Eigen::MatrixXd> lu(gram);
    if (!lu.isInvertible()) throw std::runtime_error("ols: singular Gram matrix");
    return lu.solve(data.inputs.transpose() * data.targets);
}

PermutationStream::PermutationStream(Scheme scheme, int order, std::uint64_t seed)
    : scheme_(scheme), order_(order), seed_(seed) {
    if (order < 1) throw std::invalid_argument("PermutationStream: order must be >= 1");
}

std::vector<int> PermutationStream::uniform_permutation(int epoch) const {
    std::vector<int> p(order_);
    std::iota(p.begin(), p.end(), 0);
    GaussianStream g(derive_seed(seed_, static_cast<std::uint64_t>(epoch)));
    for (int i = order_ - 1; i > 0; --i)
        std::swap(p[i], p[g.below(static_cast<std::uint64_t>(i) + 1)]);
    return p;
}

std::vector<int> PermutationStream::permutation(int epoch) const {
    if (epoch < 0) throw std::invalid_argument("PermutationStream: epoch must be >= 0");
    std::vector<int> id(order_);
    std::iota(id.begin(), id.end(), 0);
    if (epoch == 0) return id;  // pi^0 = id for every scheme
    auto reversal = [&](std::vector<int> p) {
        // tau(n) = N-1-n on the 0-indexed set, composed as tau o p
        for (auto& v : p) v = order_ - 1 - v;
        return p;
    };
    switch (scheme_) {
        case Scheme::SingleShuffle:
            return id;
        case Scheme::RandomReshuffle:
            return uniform_permutation(epoch);
        case Scheme::FlipFlopSingle:
            return (epoch % 2 == 0) ? id : reversal(id);
        case Scheme::FlipFlopRandom: {
            int even = epoch - (epoch % 2);
            std::vector<int> base =
                (even == 0) ? id : uniform_permutation(even);
            return (epoch % 2 == 0) ? base : reversal(base);
        }
    }
    throw std::invalid_argument("PermutationStream: unknown scheme");
}

namespace {

SgdoRun run_loop(const RegressionDataset& data, const Schedule& schedule, double h,
                 long num_steps, const Eigen::VectorXd& chi0, double record_ratio,
                 const SgdObserver& observer,
                 const std::function<int(long)>& index_of_step) {
    if (chi0.size() != data.dim())
        throw std::invalid_argument("run_sgdo: initial iterate dimension mismatch");
    SgdoRun run;
    Eigen::VectorXd chi = chi0;
    std::vector<Eigen::VectorXd> recorded;
    double next_record = 1.0;
    for (long n = 0; n < num_steps; ++n) {
        int i = index_of_step(n);
        double eta = h * schedule.rate(static_cast<double>(n) * h);
        double residual = data.inputs.row(i).dot(chi) - data.targets(i);
        chi -= eta * residual * data.inputs.row(i).transpose();
        if (!chi.allFinite() || chi.norm() > 1e8) throw SolverDivergence(n + 1);
        if (observer) observer(n + 1, static_cast<double>(n + 1) * h, chi);
        if (static_cast<double>(n + 1) >= next_record || n + 1 == num_steps) {
            run.steps.push_back(n + 1);
            run.times.push_back(static_cast<double>(n + 1) * h);
            recorded.push_back(chi);
            while (next_record <= static_cast<double>(n + 1)) next_record *= record_ratio;
        }
    }
    run.iterates.resize(static_cast<int>(recorded.size()), data.dim());
    for (size_t k = 0; k < recorded.size(); ++k)
        run.iterates.row(static_cast<int>(k)) = recorded[k].transpose();
    run.final_iterate = chi;
    return run;
}

}  // namespace

SgdoRun run_sgdo(const RegressionDataset& data, const PermutationStream& stream,
                 const Schedule& schedule, double h, long num_steps,
                 const Eigen::VectorXd& chi0, double record_ratio,
                 const SgdObserver& observer) {
    if (stream.order() != data.count())
        throw std::invalid_argument("run_sgdo: permutation order must equal N");
    const int n_data = data.count();
    std::vector<int> perm;
    int cached_epoch = -1;
    auto index_of_step = [&](long n) {
        int epoch = static_cast<int>(n / n_data);
        if (epoch != cached_epoch) {
            perm = stream.permutation(epoch);
            cached_epoch = epoch;
        }
        return perm[static_cast<int>(n % n_data)];
    };
    return run_loop(data, schedule, h, num_steps, chi0, record_ratio, observer, index_of_step);
}

SgdoRun run_one_pass(const RegressionDataset& data, const Schedule& schedule, double h,
                     long num_steps, const Eigen::VectorXd& chi0, double record_ratio,
                     const SgdObserver& observer) {
    if (num_steps > data.count())
        throw std::invalid_argument("run_one_pass: cannot exceed one pass over the data");
    auto index_of_step = [&](long n) { return static_cast<int>(n); };
    return run_loop(data, schedule, h, num_steps, chi0, record_ratio, observer, index_of_step);
}

void write_csv(const std::string& filename, const SgdoRun& run, const Eigen::VectorXd* limit) {
    std::ofstream out(filename);
    if (!out) throw std::runtime_error("cannot open " + filename);
    out << "t";
    for (int c = 0; c < run.iterates.cols(); ++c) out << ",x" << c;
    if (limit) out << ",error";
    out << "\n";
    out.precision(17);
    for (size_t k = 0; k < run.times.size(); ++k) {
        out << run.times[k];
        for (int c = 0; c < run.iterates.cols(); ++c)
            out << "," << run.iterates(static_cast<int>(k), c);
        if (limit)
            out << ","
                << (run.iterates.row(static_cast<int>(k)).transpose() - *limit).norm();
        out << "\n";
    }
}

}  // namespace ebmlab
