#ifndef JETMORSE_TESTS_ORACLES_HPP
#define JETMORSE_TESTS_ORACLES_HPP

// Independent reference computations used only by the tests. Nothing here calls the
// truncated-series kernels, the action matrix, or the symmetric-power closed form.

#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <numbers>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include <jetmorse/hermitian.hpp>
#include <jetmorse/jet.hpp>
#include <jetmorse/sym_power.hpp>

namespace oracle
{

using jetmorse::cplx;
using Poly = std::vector<cplx>; // dense, index = degree

inline Poly poly_mul(const Poly &a, const Poly &b)
{
    Poly out(a.size() + b.size() - 1, cplx{});
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < b.size(); ++j) {
            out[i + j] += a[i] * b[j];
        }
    }
    return out;
}

inline Poly poly_add(Poly a, const Poly &b)
{
    if (b.size() > a.size()) {
        a.resize(b.size(), cplx{});
    }
    for (std::size_t i = 0; i < b.size(); ++i) {
        a[i] += b[i];
    }
    return a;
}

// Full (untruncated) composition f(g(t)) by Horner's rule.
inline Poly poly_compose(const Poly &f, const Poly &g)
{
    Poly out{f.back()};
    for (std::size_t i = f.size() - 1; i-- > 0;) {
        out = poly_add(poly_mul(out, g), Poly{f[i]});
    }
    return out;
}

inline cplx poly_eval(const Poly &p, cplx t)
{
    cplx acc{};
    for (std::size_t i = p.size(); i-- > 0;) {
        acc = acc * t + p[i];
    }
    return acc;
}

// ScalarJet -> polynomial with zero constant term.
inline Poly to_poly(const jetmorse::ScalarJet &g)
{
    Poly p(static_cast<std::size_t>(g.order() + 1), cplx{});
    for (int s = 1; s <= g.order(); ++s) {
        p[static_cast<std::size_t>(s)] = g.coeff(s);
    }
    return p;
}

inline std::vector<cplx> truncate(const Poly &p, int k)
{
    std::vector<cplx> out(static_cast<std::size_t>(k), cplx{});
    for (int s = 1; s <= k && s < static_cast<int>(p.size()); ++s) {
        out[static_cast<std::size_t>(s - 1)] = p[static_cast<std::size_t>(s)];
    }
    return out;
}

// Jet of f o phi computed by composing every fiber component as a full polynomial.
inline Eigen::MatrixXcd jet_of_composition(const jetmorse::Jet &j, const jetmorse::Reparam &phi)
{
    const int k = j.k();
    const Poly ph = to_poly(phi.series());
    Eigen::MatrixXcd out(k, j.r());
    for (int a = 1; a <= j.r(); ++a) {
        const auto c = truncate(poly_compose(to_poly(j.component(a)), ph), k);
        for (int s = 1; s <= k; ++s) {
            out(s - 1, a - 1) = c[static_cast<std::size_t>(s - 1)];
        }
    }
    return out;
}

// Lagrange inversion: [t^m] g^{-1} = (1/m) [t^{m-1}] (t / g(t))^m.
inline std::vector<cplx> lagrange_inverse(const jetmorse::ScalarJet &g)
{
    const int k = g.order();
    // q(t) = g(t)/t, then 1/q as a power series to order k-1
    Poly q(static_cast<std::size_t>(k), cplx{});
    for (int s = 1; s <= k; ++s) {
        q[static_cast<std::size_t>(s - 1)] = g.coeff(s);
    }
    Poly inv(static_cast<std::size_t>(k), cplx{});
    inv[0] = 1.0 / q[0];
    for (int m = 1; m < k; ++m) {
        cplx acc{};
        for (int i = 1; i <= m; ++i) {
            acc += q[static_cast<std::size_t>(i)] * inv[static_cast<std::size_t>(m - i)];
        }
        inv[static_cast<std::size_t>(m)] = -acc / q[0];
    }
    std::vector<cplx> out(static_cast<std::size_t>(k), cplx{});
    Poly power{1.0};
    for (int m = 1; m <= k; ++m) {
        power = poly_mul(power, inv);
        const cplx c = m - 1 < static_cast<int>(power.size()) ? power[static_cast<std::size_t>(m - 1)] : cplx{};
        out[static_cast<std::size_t>(m - 1)] = c / static_cast<double>(m);
    }
    return out;
}

// Taylor coefficients 1..k at 0 of an entire function of degree < samples, via the discrete
// Cauchy integral on the circle |t| = radius.
inline std::vector<cplx> taylor_by_cauchy(const std::function<cplx(cplx)> &f, int k, int samples = 64,
                                          double radius = 0.5)
{
    std::vector<cplx> vals(static_cast<std::size_t>(samples));
    for (int j = 0; j < samples; ++j) {
        const double th = 2.0 * std::numbers::pi * j / samples;
        vals[static_cast<std::size_t>(j)] = f(std::polar(radius, th));
    }
    std::vector<cplx> out(static_cast<std::size_t>(k));
    for (int m = 1; m <= k; ++m) {
        cplx acc{};
        for (int j = 0; j < samples; ++j) {
            const double th = 2.0 * std::numbers::pi * j / samples;
            acc += vals[static_cast<std::size_t>(j)] * std::polar(1.0, -m * th);
        }
        out[static_cast<std::size_t>(m - 1)] = acc / (static_cast<double>(samples) * std::pow(radius, m));
    }
    return out;
}

// Frame vectors e^alpha embedded in V^{(x)l} (columns), built by explicit symmetrization of
// e_{w_1} (x) ... (x) e_{w_l} over all permutations and scaled by sqrt(l!/alpha!).
inline Eigen::MatrixXd embedded_frame(int r, int l)
{
    const auto frame = jetmorse::multi_indices(r, l);
    long long words = 1;
    for (int t = 0; t < l; ++t) {
        words *= r;
    }
    Eigen::MatrixXd e = Eigen::MatrixXd::Zero(words, static_cast<Eigen::Index>(frame.size()));
    for (std::size_t a = 0; a < frame.size(); ++a) {
        std::vector<int> word;
        for (int v = 0; v < r; ++v) {
            for (int c = 0; c < frame[a][static_cast<std::size_t>(v)]; ++c) {
                word.push_back(v);
            }
        }
        std::vector<int> perm(static_cast<std::size_t>(l));
        for (int t = 0; t < l; ++t) {
            perm[static_cast<std::size_t>(t)] = t;
        }
        double lfact = 1.0;
        for (int t = 2; t <= l; ++t) {
            lfact *= t;
        }
        do {
            long long code = 0;
            for (int t = l - 1; t >= 0; --t) {
                code = code * r + word[static_cast<std::size_t>(perm[static_cast<std::size_t>(t)])];
            }
            e(code, static_cast<Eigen::Index>(a)) += 1.0 / lfact;
        } while (std::next_permutation(perm.begin(), perm.end()));
        e.col(static_cast<Eigen::Index>(a)) *= std::sqrt(lfact / jetmorse::multi_factorial(frame[a]));
    }
    return e;
}

// Gram matrix of the embedded frame under h^{(x)l}, h(z) = I - sum c_ij z_i zbar_j, via Kronecker products.
inline Eigen::MatrixXcd tensor_gram(const jetmorse::CurvatureModel &m, int l, const Eigen::VectorXcd &z)
{
    const int r = m.r();
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Identity(r, r);
    for (int a = 0; a < r; ++a) {
        for (int b = 0; b < r; ++b) {
            for (int i = 0; i < m.n(); ++i) {
                for (int j = 0; j < m.n(); ++j) {
                    h(a, b) -= m(i, j, a, b) * z(i) * std::conj(z(j));
                }
            }
        }
    }
    Eigen::MatrixXcd big = Eigen::MatrixXcd::Ones(1, 1);
    for (int t = 0; t < l; ++t) {
        Eigen::MatrixXcd next(big.rows() * r, big.cols() * r);
        // word code = sum_t w_t r^t: slot t is the slowest-varying factor last
        for (Eigen::Index p = 0; p < r; ++p) {
            for (Eigen::Index q = 0; q < r; ++q) {
                next.block(p * big.rows(), q * big.cols(), big.rows(), big.cols()) = h(p, q) * big;
            }
        }
        big = std::move(next);
    }
    const Eigen::MatrixXd e = embedded_frame(r, l);
    return e.transpose().cast<cplx>() * big * e.cast<cplx>();
}

// Quadratic coefficient Q with G(z) = I + sum Q_ij z_i zbar_j + O(|z|^4), extracted from tensor_gram
// by polynomial extrapolation along rays (G(t w) is a polynomial of degree l in t^2) and polarization.
inline std::vector<Eigen::MatrixXcd> gram_quadratic_part(const jetmorse::CurvatureModel &m, int l, double h = 0.25)
{
    const int n = m.n();
    auto ray_coeff = [&](const Eigen::VectorXcd &w) {
        // Solve for the t^2 coefficient from samples at t_m = m h, m = 1..l.
        Eigen::MatrixXd v(l, l);
        std::vector<Eigen::MatrixXcd> rhs;
        const Eigen::MatrixXcd g0 = tensor_gram(m, l, Eigen::VectorXcd::Zero(n));
        for (int s = 1; s <= l; ++s) {
            const double t2 = std::pow(s * h, 2);
            for (int d = 1; d <= l; ++d) {
                v(s - 1, d - 1) = std::pow(t2, d);
            }
            rhs.push_back(tensor_gram(m, l, (s * h) * w) - g0);
        }
        const Eigen::MatrixXd vinv = v.inverse();
        Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(g0.rows(), g0.cols());
        for (int s = 0; s < l; ++s) {
            out += vinv(0, s) * rhs[static_cast<std::size_t>(s)];
        }
        return out;
    };
    // Q as a list indexed by i*n + j of d x d matrices.
    std::vector<Eigen::MatrixXcd> q(static_cast<std::size_t>(n * n));
    for (int i = 0; i < n; ++i) {
        Eigen::VectorXcd ei = Eigen::VectorXcd::Zero(n);
        ei(i) = 1.0;
        q[static_cast<std::size_t>(i * n + i)] = ray_coeff(ei);
    }
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (i == j) {
                continue;
            }
            Eigen::VectorXcd w1 = Eigen::VectorXcd::Zero(n);
            w1(i) = 1.0;
            w1(j) = 1.0;
            Eigen::VectorXcd w2 = Eigen::VectorXcd::Zero(n);
            w2(i) = 1.0;
            w2(j) = cplx{0.0, 1.0};
            const Eigen::MatrixXcd diag = q[static_cast<std::size_t>(i * n + i)] + q[static_cast<std::size_t>(j * n + j)];
            const Eigen::MatrixXcd a = ray_coeff(w1) - diag; // Q_ij + Q_ji
            const Eigen::MatrixXcd b = ray_coeff(w2) - diag; // -i Q_ij + i Q_ji
            q[static_cast<std::size_t>(i * n + j)] = 0.5 * (a + cplx{0.0, 1.0} * b);
        }
    }
    return q;
}

// ---- random generators ----

inline cplx random_complex(std::mt19937_64 &g, double lo = -1.0, double hi = 1.0)
{
    std::uniform_real_distribution<double> u(lo, hi);
    const double re = u(g);
    const double im = u(g);
    return {re, im};
}

inline jetmorse::Jet random_jet(int k, int r, std::mt19937_64 &g)
{
    Eigen::MatrixXcd xi(k, r);
    for (int s = 0; s < k; ++s) {
        for (int a = 0; a < r; ++a) {
            xi(s, a) = random_complex(g);
        }
    }
    // keep the first coordinate safely immersive
    xi(0, 0) = std::polar(std::uniform_real_distribution<double>(0.5, 1.5)(g),
                          std::uniform_real_distribution<double>(0.0, 6.28)(g));
    return jetmorse::Jet(xi);
}

inline jetmorse::Reparam random_reparam(int k, std::mt19937_64 &g, bool unipotent = false)
{
    std::vector<cplx> a(static_cast<std::size_t>(k));
    for (auto &v : a) {
        v = random_complex(g);
    }
    a[0] = unipotent ? cplx{1.0, 0.0}
                     : std::polar(std::uniform_real_distribution<double>(0.5, 1.5)(g),
                                  std::uniform_real_distribution<double>(0.0, 6.28)(g));
    return jetmorse::Reparam(a);
}

// Hermitian-symmetric tensor with entries of modulus about [-1, 1].
inline jetmorse::CurvatureModel random_model(int n, int r, std::mt19937_64 &g)
{
    jetmorse::CurvatureModel raw(n, r);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            for (int a = 0; a < r; ++a) {
                for (int b = 0; b < r; ++b) {
                    raw(i, j, a, b) = random_complex(g);
                }
            }
        }
    }
    jetmorse::CurvatureModel m(n, r);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            for (int a = 0; a < r; ++a) {
                for (int b = 0; b < r; ++b) {
                    m(i, j, a, b) = 0.5 * (raw(i, j, a, b) + std::conj(raw(j, i, b, a)));
                }
            }
        }
    }
    return m;
}

inline Eigen::MatrixXcd random_unitary(int r, std::mt19937_64 &g)
{
    Eigen::MatrixXcd a(r, r);
    for (int i = 0; i < r; ++i) {
        for (int j = 0; j < r; ++j) {
            a(i, j) = random_complex(g);
        }
    }
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(a);
    return qr.householderQ() * Eigen::MatrixXcd::Identity(r, r);
}

inline double max_rel_error(const Eigen::MatrixXcd &a, const Eigen::MatrixXcd &b)
{
    const double scale = std::max(1.0, b.cwiseAbs().maxCoeff());
    return (a - b).cwiseAbs().maxCoeff() / scale;
}

} // namespace oracle

#endif
