#include "ebmlab/noise.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include "ebmlab/rng.hpp"

namespace ebmlab {

Scheme scheme_from_string(const std::string& name) {
    if (name == "ss" || name == "single-shuffle" || name == "SingleShuffle")
        return Scheme::SingleShuffle;
    if (name == "rr" || name == "random-reshuffle" || name == "RandomReshuffle")
        return Scheme::RandomReshuffle;
    if (name == "ffs" || name == "flip-flop-single" || name == "FlipFlopSingle")
        return Scheme::FlipFlopSingle;
    if (name == "ffr" || name == "flip-flop-random" || name == "FlipFlopRandom")
        return Scheme::FlipFlopRandom;
    throw std::invalid_argument("unknown scheme: " + name);
}

std::string to_string(Scheme s) {
    switch (s) {
        case Scheme::SingleShuffle: return "single-shuffle";
        case Scheme::RandomReshuffle: return "random-reshuffle";
        case Scheme::FlipFlopSingle: return "flip-flop-single";
        case Scheme::FlipFlopRandom: return "flip-flop-random";
    }
    throw std::invalid_argument("unknown scheme");
}

Eigen::MatrixXd sample_bridge(int dim, int steps, std::uint64_t seed) {
    if (steps < 1) throw std::invalid_argument("sample_bridge: grid needs at least 2 points");
    if (dim < 1) throw std::invalid_argument("sample_bridge: dim must be >= 1");
    GaussianStream g(seed);
    Eigen::MatrixXd w(steps + 1, dim);
    double sd = std::sqrt(1.0 / steps);
    w.row(0).setZero();
    for (int k = 1; k <= steps; ++k)
        for (int c = 0; c < dim; ++c) w(k, c) = w(k - 1, c) + sd * g();
    // B_t = W_t - t W_1; endpoints pinned to exact zeros
    for (int k = 1; k < steps; ++k) {
        double t = static_cast<double>(k) / steps;
        w.row(k) -= t * w.row(steps);
    }
    w.row(steps).setZero();
    return w;
}

namespace {

// B^{j+1}_t = -B^j_{1-t}, exact on the grid (negation of the stored doubles).
Eigen::MatrixXd reverse_negate(const Eigen::MatrixXd& b) {
    return -b.colwise().reverse();
}

}  // namespace

EpochedBridgePath sample_epoched_bridge(Scheme scheme, int dim, int epochs,
                                        int steps_per_epoch, std::uint64_t seed) {
    if (epochs < 1) throw std::invalid_argument("sample_epoched_bridge: epochs must be >= 1");
    const int m = steps_per_epoch;
    EpochedBridgePath path;
    path.scheme = scheme;
    path.dim = dim;
    path.epochs = epochs;
    path.steps_per_epoch = m;
    path.seed = seed;
    path.values.resize(epochs * m + 1, dim);

    Eigen::MatrixXd prev;  // previous epoch, for flip-flop coupling
    Eigen::MatrixXd first; // epoch 0, for single-shuffle copies
    for (int j = 0; j < epochs; ++j) {
        Eigen::MatrixXd b;
        switch (scheme) {
            case Scheme::SingleShuffle:
                if (j == 0) first = sample_bridge(dim, m, derive_seed(seed, 0));
                b = first;
                break;
            case Scheme::RandomReshuffle:
                b = sample_bridge(dim, m, derive_seed(seed, j));
                break;
            case Scheme::FlipFlopSingle:
                if (j == 0) {
                    first = sample_bridge(dim, m, derive_seed(seed, 0));
                    b = first;
                } else {
                    b = (j % 2 == 1) ? reverse_negate(first) : first;
                }
                break;
            case Scheme::FlipFlopRandom:
                b = (j % 2 == 0) ? sample_bridge(dim, m, derive_seed(seed, j))
                                 : reverse_negate(prev);
                break;
        }
        prev = b;
        path.values.block(j * m, 0, m, dim) = b.topRows(m);
    }
    path.values.row(epochs * m).setZero();
    // re-pin every interior epoch boundary to an exact zero
    for (int j = 0; j <= epochs; ++j) path.values.row(j * m).setZero();
    return path;
}

EbmPath assemble_ebm(const EpochedBridgePath& bridge, double period, std::uint64_t seed_v) {
    if (!(period > 0.0)) throw std::invalid_argument("assemble_ebm: period must be positive");
    EbmPath path;
    path.period = period;
    path.bridge = bridge;
    GaussianStream g(derive_seed(seed_v, 0x5eedULL));
    path.drift.resize(bridge.dim);
    for (int c = 0; c < bridge.dim; ++c) path.drift(c) = g();
    const double sqrt_t = std::sqrt(period);
    path.values.resize(bridge.points(), bridge.dim);
    for (int k = 0; k < bridge.points(); ++k) {
        double t = bridge.time(k) * period;
        path.values.row(k) =
            sqrt_t * bridge.values.row(k) + (t / sqrt_t) * path.drift.transpose();
    }
    return path;
}

namespace {

void check_unit_args(double s, double t) {
    if (s < 0.0 || s > 1.0 || t < 0.0 || t > 1.0)
        throw std::invalid_argument("copula: s,t must lie in [0,1]");
}

}  // namespace

double copula(Scheme scheme, int i, int j, double s, double t) {
    check_unit_args(s, t);
    if (i < 0 || j < 0) throw std::invalid_argument("copula: epoch indices must be >= 0");
    if (i == j) return std::min(s, t);
    switch (scheme) {
        case Scheme::SingleShuffle:
            return std::min(s, t);
        case Scheme::RandomReshuffle:
            return s * t;
        case Scheme::FlipFlopSingle:
            // same parity: identical bridges; opposite parity: reverse-negated
            return (i % 2 == j % 2) ? std::min(s, t) : std::max(s + t - 1.0, 0.0);
        case Scheme::FlipFlopRandom: {
            int lo = std::min(i, j);
            int hi = std::max(i, j);
            return (lo % 2 == 0 && hi == lo + 1) ? std::max(s + t - 1.0, 0.0) : s * t;
        }
    }
    throw std::invalid_argument("copula: unknown scheme");
}

double cross_covariance(Scheme scheme, int i, int j, double s, double t) {
    return copula(scheme, i, j, s, t) - s * t;
}

double holder_seminorm(const std::vector<double>& times, const Eigen::MatrixXd& values,
                       double alpha, int row_begin, int row_end) {
    if (!(alpha > 0.0 && alpha <= 1.0))
        throw std::invalid_argument("holder_seminorm: alpha must lie in (0,1]");
    if (row_end - row_begin < 2)
        throw std::invalid_argument("holder_seminorm: need at least 2 grid points");
    const int n = row_end - row_begin;
    double best = 0.0;
    for (int lag = 1; lag < n; ++lag) {
        // uniform grids dominate here; hoist the denominator when spacing is constant
        double max_sq = 0.0;
        bool uniform = true;
        double dt0 = times[row_begin + lag] - times[row_begin];
        for (int k = row_begin; k + lag < row_end; ++k) {
            double dt = times[k + lag] - times[k];
            if (std::abs(dt - dt0) > 1e-12 * (1.0 + std::abs(dt0))) { uniform = false; break; }
            double d2 = (values.row(k + lag) - values.row(k)).squaredNorm();
            if (d2 > max_sq) max_sq = d2;
        }
        if (uniform) {
            double v = std::sqrt(max_sq) / std::pow(dt0, alpha);
            if (v > best) best = v;
        } else {
            for (int k = row_begin; k + lag < row_end; ++k) {
                double dt = times[k + lag] - times[k];
                double v = (values.row(k + lag) - values.row(k)).norm() / std::pow(dt, alpha);
                if (v > best) best = v;
            }
        }
    }
    return best;
}

double holder_seminorm(const std::vector<double>& times, const Eigen::MatrixXd& values,
                       double alpha) {
    return holder_seminorm(times, values, alpha, 0, static_cast<int>(times.size()));
}

double holder_seminorm_dyadic(const std::vector<double>& times, const Eigen::MatrixXd& values,
                              double alpha, int row_begin, int row_end) {
    if (!(alpha > 0.0 && alpha <= 1.0))
        throw std::invalid_argument("holder_seminorm_dyadic: alpha must lie in (0,1]");
    if (row_end - row_begin < 2)
        throw std::invalid_argument("holder_seminorm_dyadic: need at least 2 grid points");
    double best = 0.0;
    for (int lag = 1; row_begin + lag < row_end; lag *= 2) {
        for (int k = row_begin; k + lag < row_end; ++k) {
            double dt = times[k + lag] - times[k];
            double v = (values.row(k + lag) - values.row(k)).norm() / std::pow(dt, alpha);
            if (v > best) best = v;
        }
    }
    return best;
}

double window_max_holder(const EpochedBridgePath& path, double alpha, double t_horizon) {
    if (t_horizon < 0.0) throw std::invalid_argument("window_max_holder: t must be >= 0");
    const int m = path.steps_per_epoch;
    const int last_row =
        std::min(path.points() - 1, static_cast<int>(std::floor(t_horizon * m + 0.5)));
    auto times = bridge_times(path);
    double best = 0.0;
    for (int k = 0; k * m < last_row; ++k) {
        int lo = k * m;
        int hi = std::min(lo + m, last_row);
        best = std::max(best, holder_seminorm(times, path.values, alpha, lo, hi + 1));
    }
    if (last_row == 0)
        throw std::invalid_argument("window_max_holder: horizon shorter than one grid step");
    return best;
}

std::vector<double> bridge_times(const EpochedBridgePath& path) {
    std::vector<double> t(path.points());
    for (int k = 0; k < path.points(); ++k) t[k] = path.time(k);
    return t;
}

std::vector<double> ebm_times(const EbmPath& path) {
    std::vector<double> t(path.points());
    for (int k = 0; k < path.points(); ++k) t[k] = path.time(k);
    return t;
}

namespace {

void write_path_csv(const std::string& filename, const std::string& meta,
                    const std::vector<double>& times, const Eigen::MatrixXd& values) {
    std::ofstream out(filename);
    if (!out) throw std::runtime_error("cannot open " + filename);
    out << "# " << meta << "\n";
    out << "t";
    for (int c = 0; c < values.cols(); ++c) out << ",x" << c;
    out << "\n";
    out.precision(17);
    for (int k = 0; k < values.rows(); ++k) {
        out << times[k];
        for (int c = 0; c < values.cols(); ++c) out << "," << values(k, c);
        out << "\n";
    }
}

}  // namespace

void write_csv(const std::string& filename, const EpochedBridgePath& path) {
    write_path_csv(filename,
                   "epoched-bridge scheme=" + to_string(path.scheme) +
                       " d=" + std::to_string(path.dim) + " J=" + std::to_string(path.epochs) +
                       " seed=" + std::to_string(path.seed),
                   bridge_times(path), path.values);
}

void write_csv(const std::string& filename, const EbmPath& path) {
    write_path_csv(filename,
                   "ebm scheme=" + to_string(path.bridge.scheme) +
                       " d=" + std::to_string(path.bridge.dim) +
                       " J=" + std::to_string(path.bridge.epochs) +
                       " T=" + std::to_string(path.period) +
                       " seed=" + std::to_string(path.bridge.seed),
                   ebm_times(path), path.values);
}

}  // namespace ebmlab
