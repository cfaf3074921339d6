#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

namespace ebmlab {

/// The four shuffling schemes and their bridge-coupling rules.
enum class Scheme { SingleShuffle, RandomReshuffle, FlipFlopSingle, FlipFlopRandom };

Scheme scheme_from_string(const std::string& name);
std::string to_string(Scheme s);

/// Grid-sampled realization of an epoched Brownian bridge on [0, epochs].
/// Row k holds the value at time k / steps_per_epoch; every integer time is a
/// grid point and carries an exact zero vector.
struct EpochedBridgePath {
    Scheme scheme;
    int dim = 1;
    int epochs = 1;
    int steps_per_epoch = 1;
    std::uint64_t seed = 0;
    Eigen::MatrixXd values;  // (epochs*steps_per_epoch + 1) x dim

    int points() const { return epochs * steps_per_epoch + 1; }
    double time(int k) const { return static_cast<double>(k) / steps_per_epoch; }
};

/// Epoched Brownian motion of period T: values(k) = sqrt(T) X(t_k/T) + (t_k/sqrt(T)) V
/// on the scaled grid t_k = k T / steps_per_epoch.
struct EbmPath {
    double period = 1.0;
    EpochedBridgePath bridge;
    Eigen::VectorXd drift;   // V, standard Gaussian, independent of the bridge
    Eigen::MatrixXd values;  // same row layout as the bridge

    int points() const { return bridge.points(); }
    double time(int k) const { return bridge.time(k) * period; }
};

/// Single Brownian bridge from 0 to 0 on [0,1], sampled at k/steps, exact in
/// distribution at grid points (cumulative Gaussian increments minus t*W_1).
Eigen::MatrixXd sample_bridge(int dim, int steps, std::uint64_t seed);

/// Epoched bridge under the given scheme. Epoch j draws from the derived
/// stream (seed, j); coupled epochs are copies or reverse-negations, bit-exact.
EpochedBridgePath sample_epoched_bridge(Scheme scheme, int dim, int epochs,
                                        int steps_per_epoch, std::uint64_t seed);

/// Wraps a bridge into an EBM of period T with an independently drawn V.
EbmPath assemble_ebm(const EpochedBridgePath& bridge, double period, std::uint64_t seed_v);

/// The scheme's 2-copula C^{ij}(s,t); C^{ii}(s,t) = min(s,t) for every scheme.
double copula(Scheme scheme, int i, int j, double s, double t);

/// E[B^i_s B^j_t] = C^{ij}(s,t) - s t, per coordinate.
double cross_covariance(Scheme scheme, int i, int j, double s, double t);

/// Grid alpha-Hoelder seminorm over all point pairs in rows [row_begin, row_end].
double holder_seminorm(const std::vector<double>& times, const Eigen::MatrixXd& values,
                       double alpha, int row_begin, int row_end);
double holder_seminorm(const std::vector<double>& times, const Eigen::MatrixXd& values,
                       double alpha);

/// Faster dyadic-pair restriction of the grid seminorm (an approximation that
/// only inspects pairs whose index distance is a power of two).
double holder_seminorm_dyadic(const std::vector<double>& times, const Eigen::MatrixXd& values,
                              double alpha, int row_begin, int row_end);

/// x*_t = max over unit windows [k, min(k+1,t)] of the grid seminorm.
double window_max_holder(const EpochedBridgePath& path, double alpha, double t_horizon);

std::vector<double> bridge_times(const EpochedBridgePath& path);
std::vector<double> ebm_times(const EbmPath& path);

/// Columnar CSV (time, coordinates) with a one-line metadata header.
void write_csv(const std::string& filename, const EpochedBridgePath& path);
void write_csv(const std::string& filename, const EbmPath& path);

}  // namespace ebmlab
