#ifndef JETMORSE_SAMPLING_HPP
#define JETMORSE_SAMPLING_HPP

#include <cmath>
#include <cstdint>
#include <random>

#include <Eigen/Dense>

#include <jetmorse/scalar_jet.hpp>

namespace jetmorse
{

// splitmix64 output function.
constexpr std::uint64_t splitmix64(std::uint64_t z)
{
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// Seed of stream `index` derived from a run seed: splitmix64(seed + (index + 1) * golden gamma).
// Every Monte Carlo block is driven by its own std::mt19937_64 seeded this way.
constexpr std::uint64_t sub_seed(std::uint64_t seed, std::uint64_t index)
{
    return splitmix64(seed + (index + 1) * 0x9E3779B97F4A7C15ULL);
}

using Rng = std::mt19937_64;

// Uniform point on the unit sphere of C^dim: a normalized standard complex Gaussian vector.
template <class Gen>
Eigen::VectorXcd uniform_unit_vector(int dim, Gen &gen, std::normal_distribution<double> &normal)
{
    Eigen::VectorXcd v(dim);
    double sq = 0.0;
    do {
        for (int a = 0; a < dim; ++a) {
            const double re = normal(gen);
            const double im = normal(gen);
            v(a) = cplx{re, im};
        }
        sq = v.squaredNorm();
    } while (sq == 0.0);
    return v / std::sqrt(sq);
}

template <class Gen>
Eigen::VectorXcd uniform_unit_vector(int dim, Gen &gen)
{
    std::normal_distribution<double> normal;
    return uniform_unit_vector(dim, gen, normal);
}

// Welford accumulator with Chan's pairwise merge.
struct RunningStats {
    long long count = 0;
    double mean = 0.0;
    double m2 = 0.0;

    void add(double x)
    {
        ++count;
        const double d = x - mean;
        mean += d / static_cast<double>(count);
        m2 += d * (x - mean);
    }

    void merge(const RunningStats &o)
    {
        if (o.count == 0) {
            return;
        }
        if (count == 0) {
            *this = o;
            return;
        }
        const double na = static_cast<double>(count);
        const double nb = static_cast<double>(o.count);
        const double n = na + nb;
        const double d = o.mean - mean;
        mean += d * nb / n;
        m2 += o.m2 + d * d * na * nb / n;
        count += o.count;
    }

    // Unbiased sample variance; zero below two samples.
    [[nodiscard]] double variance() const
    {
        return count > 1 ? m2 / static_cast<double>(count - 1) : 0.0;
    }

    [[nodiscard]] double std_error() const
    {
        return count > 0 ? std::sqrt(variance() / static_cast<double>(count)) : 0.0;
    }
};

} // namespace jetmorse

#endif
