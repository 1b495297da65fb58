#ifndef JETMORSE_SYM_POWER_HPP
#define JETMORSE_SYM_POWER_HPP

#include <cmath>
#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include <jetmorse/error.hpp>
#include <jetmorse/hermitian.hpp>
#include <jetmorse/jet.hpp>

namespace jetmorse
{

// Largest symmetric-power fiber handled, binomial(r+l-1, l).
inline constexpr long long max_sym_power_dim = 512;

using MultiIndex = std::vector<int>;

inline long long binomial(int n, int k)
{
    if (k < 0 || k > n) {
        return 0;
    }
    long long out = 1;
    for (int i = 1; i <= k; ++i) {
        out = out * (n - k + i) / i;
    }
    return out;
}

inline long long sym_power_dim(int r, int l)
{
    return binomial(r + l - 1, l);
}

// Exponent vectors alpha with |alpha| = l in r variables, lexicographically descending:
// (l,0,...,0) first, (0,...,0,l) last.
inline std::vector<MultiIndex> multi_indices(int r, int l)
{
    std::vector<MultiIndex> out;
    MultiIndex cur(static_cast<std::size_t>(r), 0);
    auto rec = [&](auto &self, int pos, int left) -> void {
        if (pos == r - 1) {
            cur[static_cast<std::size_t>(pos)] = left;
            out.push_back(cur);
            return;
        }
        for (int e = left; e >= 0; --e) {
            cur[static_cast<std::size_t>(pos)] = e;
            self(self, pos + 1, left - e);
        }
    };
    rec(rec, 0, l);
    return out;
}

inline double multi_factorial(const MultiIndex &a)
{
    double f = 1.0;
    for (int e : a) {
        f *= std::tgamma(e + 1.0);
    }
    return f;
}

// Curvature tensor of S^l V in the orthonormal frame e^alpha = sqrt(l!/alpha!) e_1^{alpha_1}...e_r^{alpha_r},
// stored as a CurvatureModel with fiber rank binomial(r+l-1, l).
struct SymPowerCurvature {
    int l = 0;
    std::vector<MultiIndex> frame;
    CurvatureModel C;

    [[nodiscard]] int dim() const noexcept
    {
        return static_cast<int>(frame.size());
    }
};

inline void check_sym_power(int r, int l)
{
    if (l < 1) {
        throw validation_error("symmetric power must be at least 1");
    }
    if (sym_power_dim(r, l) > max_sym_power_dim) {
        throw validation_error("symmetric power fiber dimension " + std::to_string(sym_power_dim(r, l))
                               + " exceeds cap " + std::to_string(max_sym_power_dim));
    }
}

// Expanding <e^alpha, e^beta> multilinearly through S^l V -> V^{(x)l}, the z zbar term collects
// one factor c_{ij lambda mu} per tensor slot. Summing over the words of alpha leaves
//   C_{ij, alpha, beta} = sum_{lambda, mu : beta = alpha - e_lambda + e_mu} sqrt(alpha_lambda * beta_mu) c_{ij lambda mu}.
inline SymPowerCurvature sym_power_curvature(const CurvatureModel &m, int l)
{
    const int r = m.r();
    const int n = m.n();
    check_sym_power(r, l);
    SymPowerCurvature out;
    out.l = l;
    out.frame = multi_indices(r, l);
    const int d = out.dim();
    std::map<MultiIndex, int> position;
    for (int a = 0; a < d; ++a) {
        position[out.frame[static_cast<std::size_t>(a)]] = a;
    }
    out.C = CurvatureModel(n, d);
    for (int a = 0; a < d; ++a) {
        const MultiIndex &alpha = out.frame[static_cast<std::size_t>(a)];
        for (int lam = 0; lam < r; ++lam) {
            const int alpha_lam = alpha[static_cast<std::size_t>(lam)];
            if (alpha_lam == 0) {
                continue;
            }
            for (int mu = 0; mu < r; ++mu) {
                MultiIndex beta = alpha;
                --beta[static_cast<std::size_t>(lam)];
                ++beta[static_cast<std::size_t>(mu)];
                const int b = position.at(beta);
                const double w = std::sqrt(static_cast<double>(alpha_lam) * beta[static_cast<std::size_t>(mu)]);
                for (int i = 0; i < n; ++i) {
                    for (int j = 0; j < n; ++j) {
                        out.C(i, j, a, b) += w * m(i, j, lam, mu);
                    }
                }
            }
        }
    }
    return out;
}

// Words of length l over {0..r-1} above this count make the tensor Gram impractical.
inline constexpr long long max_tensor_words = 1LL << 14;

// Gram matrix <e^alpha, e^beta> at base point z of the frame embedded in V^{(x)l}, where
// <e_lambda, e_mu> = delta - sum_ij c_{ij lambda mu} z_i zbar_j. Exact identity at z = 0.
inline Eigen::MatrixXcd sym_power_gram(const CurvatureModel &m, int l, const Eigen::VectorXcd &z)
{
    const int r = m.r();
    const int n = m.n();
    check_sym_power(r, l);
    if (z.size() != n) {
        throw validation_error("sym_power_gram: base point dimension mismatch");
    }
    long long words = 1;
    for (int t = 0; t < l; ++t) {
        words *= r;
        if (words > max_tensor_words) {
            throw validation_error("sym_power_gram: tensor power too large");
        }
    }
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Identity(r, r);
    for (int lam = 0; lam < r; ++lam) {
        for (int mu = 0; mu < r; ++mu) {
            for (int i = 0; i < n; ++i) {
                for (int j = 0; j < n; ++j) {
                    h(lam, mu) -= m(i, j, lam, mu) * z(i) * std::conj(z(j));
                }
            }
        }
    }

    const auto frame = multi_indices(r, l);
    std::map<MultiIndex, int> position;
    for (std::size_t a = 0; a < frame.size(); ++a) {
        position[frame[a]] = static_cast<int>(a);
    }
    // word -> content class
    std::vector<std::vector<int>> word_list;
    std::vector<int> word_class;
    std::vector<int> class_size(frame.size(), 0);
    std::vector<int> w(static_cast<std::size_t>(l), 0);
    for (long long code = 0; code < words; ++code) {
        long long c = code;
        MultiIndex content(static_cast<std::size_t>(r), 0);
        for (int t = 0; t < l; ++t) {
            w[static_cast<std::size_t>(t)] = static_cast<int>(c % r);
            c /= r;
            ++content[static_cast<std::size_t>(w[static_cast<std::size_t>(t)])];
        }
        const int cls = position.at(content);
        word_list.push_back(w);
        word_class.push_back(cls);
        ++class_size[static_cast<std::size_t>(cls)];
    }

    const int d = static_cast<int>(frame.size());
    Eigen::MatrixXcd sums = Eigen::MatrixXcd::Zero(d, d);
    for (std::size_t x = 0; x < word_list.size(); ++x) {
        for (std::size_t y = 0; y < word_list.size(); ++y) {
            cplx prod = 1.0;
            for (int t = 0; t < l; ++t) {
                prod *= h(word_list[x][static_cast<std::size_t>(t)], word_list[y][static_cast<std::size_t>(t)]);
            }
            sums(word_class[x], word_class[y]) += prod;
        }
    }
    Eigen::MatrixXcd gram(d, d);
    for (int a = 0; a < d; ++a) {
        for (int b = 0; b < d; ++b) {
            const double na = class_size[static_cast<std::size_t>(a)];
            const double nb = class_size[static_cast<std::size_t>(b)];
            gram(a, b) = sums(a, b) / std::sqrt(na * nb);
        }
    }
    return gram;
}

// Dual orthonormal frame of S^l V*: u_alpha(z) = sqrt(l!/alpha!) z^alpha.
inline Polynomial dual_frame_monomial(const MultiIndex &alpha)
{
    int l = 0;
    for (int e : alpha) {
        l += e;
    }
    return {Monomial{alpha, std::sqrt(std::tgamma(l + 1.0) / multi_factorial(alpha))}};
}

} // namespace jetmorse

#endif
