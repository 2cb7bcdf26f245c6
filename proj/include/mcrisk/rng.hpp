#ifndef MCRISK_RNG_HPP
#define MCRISK_RNG_HPP

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <numbers>

#include <Eigen/Dense>

namespace mcrisk {

// SplitMix64 step (Steele, Lea, Flood 2014). All randomness in the project
// flows through this generator so that results do not depend on the standard
// library's distribution implementations and are identical across runs.
inline std::uint64_t splitmix64_next(std::uint64_t& state) {
    state += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

// Derives a sub-seed from a base seed and a stream index. Used as a
// splittable counter scheme: trial t, stage s gets
// derive_seed(derive_seed(master, t), s), so parallel and serial execution
// see the same streams.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
    std::uint64_t s = base ^ (0xD1B54A32D192ED03ull * (stream + 0x632BE59BD9B4E019ull));
    std::uint64_t a = splitmix64_next(s);
    std::uint64_t b = splitmix64_next(s);
    return a ^ (b >> 1);
}

inline std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> path) {
    std::uint64_t s = base;
    for (std::uint64_t p : path) s = derive_seed(s, p);
    return s;
}

class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() { return splitmix64_next(state_); }

    // uniform on (0,1]: never returns 0, so log() is safe
    double uniform01() {
        return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    // uniform integer in [lo, hi] inclusive
    int uniform_int(int lo, int hi) {
        std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
        return lo + static_cast<int>(next_u64() % span);
    }

    int sign() { return (next_u64() >> 63) ? 1 : -1; }

    // Box-Muller; one value per call, no cached state
    double gaussian() {
        double u1 = uniform01();
        double u2 = uniform01();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

    Eigen::VectorXd gaussian_vector(int dim) {
        Eigen::VectorXd v(dim);
        for (int i = 0; i < dim; ++i) v(i) = gaussian();
        return v;
    }

    // uniform over the solid Euclidean ball of the given radius
    Eigen::VectorXd uniform_ball(int dim, double radius) {
        Eigen::VectorXd dir = gaussian_vector(dim);
        double nrm = dir.norm();
        while (nrm == 0.0) {  // astronomically unlikely; retry keeps the law exact
            dir = gaussian_vector(dim);
            nrm = dir.norm();
        }
        double r = radius * std::pow(uniform01(), 1.0 / dim);
        return dir * (r / nrm);
    }

    // Fisher-Yates over [0, n)
    std::vector<int> permutation(int n) {
        std::vector<int> p(n);
        for (int i = 0; i < n; ++i) p[i] = i;
        for (int i = n - 1; i > 0; --i) {
            int j = uniform_int(0, i);
            std::swap(p[i], p[j]);
        }
        return p;
    }

private:
    std::uint64_t state_;
};

// Random matrix with orthonormal columns: thin Q factor of a Gaussian matrix.
inline Eigen::MatrixXd random_orthonormal(int rows, int cols, Rng& rng) {
    Eigen::MatrixXd g(rows, cols);
    for (int j = 0; j < cols; ++j) g.col(j) = rng.gaussian_vector(rows);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
    return qr.householderQ() * Eigen::MatrixXd::Identity(rows, cols);
}

}  // namespace mcrisk

#endif
