#ifndef JETMORSE_HERMITIAN_HPP
#define JETMORSE_HERMITIAN_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include <jetmorse/error.hpp>
#include <jetmorse/scalar_jet.hpp>

namespace jetmorse
{

// Default threshold for classifying an eigenvalue as zero.
inline constexpr double default_eigen_tol = 1e-9;

// An n x n hermitian matrix standing for a real (1,1)-form sum A_ij dz_i ^ dzbar_j.
class HermitianForm
{
public:
    HermitianForm() = default;

    // Checks A == A^* to `tol` (absolute, scaled by max(1, max|A_ij|)).
    explicit HermitianForm(Eigen::MatrixXcd a, double tol = 1e-12) : a_(std::move(a))
    {
        if (a_.rows() != a_.cols()) {
            throw validation_error("hermitian form must be square");
        }
        if (a_.size() == 0) {
            return;
        }
        const double scale = std::max(1.0, a_.cwiseAbs().maxCoeff());
        if ((a_ - a_.adjoint()).cwiseAbs().maxCoeff() > tol * scale) {
            throw validation_error("matrix is not hermitian");
        }
    }

    // Takes the hermitian part (A + A^*)/2 without checking.
    static HermitianForm symmetrized(const Eigen::MatrixXcd &a)
    {
        HermitianForm h;
        h.a_ = 0.5 * (a + a.adjoint());
        return h;
    }

    static HermitianForm identity(int n)
    {
        return HermitianForm(Eigen::MatrixXcd::Identity(n, n));
    }

    static HermitianForm zero(int n)
    {
        return HermitianForm(Eigen::MatrixXcd::Zero(n, n));
    }

    [[nodiscard]] int n() const noexcept
    {
        return static_cast<int>(a_.rows());
    }

    [[nodiscard]] const Eigen::MatrixXcd &matrix() const noexcept
    {
        return a_;
    }

    HermitianForm &operator+=(const HermitianForm &o)
    {
        a_ += o.a_;
        return *this;
    }

    HermitianForm &operator-=(const HermitianForm &o)
    {
        a_ -= o.a_;
        return *this;
    }

    HermitianForm &operator*=(double s)
    {
        a_ *= s;
        return *this;
    }

    friend HermitianForm operator+(HermitianForm a, const HermitianForm &b)
    {
        return a += b;
    }

    friend HermitianForm operator-(HermitianForm a, const HermitianForm &b)
    {
        return a -= b;
    }

    friend HermitianForm operator*(double s, HermitianForm a)
    {
        return a *= s;
    }

private:
    Eigen::MatrixXcd a_;
};

// Coefficients c_{ij ab} of the metric expansion h(e_a, e_b) = delta_ab - sum c_{ij ab} z_i zbar_j
// on a rank-r bundle over an n-dimensional base. Indices are 0-based in the API.
class CurvatureModel
{
public:
    CurvatureModel() = default;

    CurvatureModel(int n, int r) : n_(n), r_(r), c_(static_cast<std::size_t>(n * n * r * r), cplx{})
    {
        if (n < 1 || r < 1) {
            throw validation_error("curvature model needs n >= 1 and r >= 1");
        }
    }

    // c_{ij ab} = delta_ij * delta_ab * mu[i][a].
    static CurvatureModel diagonal(const std::vector<std::vector<double>> &mu)
    {
        const int n = static_cast<int>(mu.size());
        const int r = n > 0 ? static_cast<int>(mu.front().size()) : 0;
        CurvatureModel m(n, r);
        for (int i = 0; i < n; ++i) {
            for (int a = 0; a < r; ++a) {
                m(i, i, a, a) = mu[static_cast<std::size_t>(i)].at(static_cast<std::size_t>(a));
            }
        }
        return m;
    }

    // c_{ij ab} = mu * delta_ij * delta_ab: gamma(u) = mu * I for every unit u.
    static CurvatureModel isotropic(int n, int r, double mu)
    {
        return diagonal(std::vector<std::vector<double>>(static_cast<std::size_t>(n),
                                                         std::vector<double>(static_cast<std::size_t>(r), mu)));
    }

    [[nodiscard]] int n() const noexcept
    {
        return n_;
    }

    [[nodiscard]] int r() const noexcept
    {
        return r_;
    }

    cplx &operator()(int i, int j, int a, int b)
    {
        return c_[index(i, j, a, b)];
    }

    [[nodiscard]] cplx operator()(int i, int j, int a, int b) const
    {
        return c_[index(i, j, a, b)];
    }

    // First (i,j,a,b), 0-based, with |c_{ijab} - conj(c_{jiba})| > tol.
    [[nodiscard]] std::optional<std::array<int, 4>> hermitian_violation(double tol = 1e-12) const
    {
        for (int i = 0; i < n_; ++i) {
            for (int j = 0; j < n_; ++j) {
                for (int a = 0; a < r_; ++a) {
                    for (int b = 0; b < r_; ++b) {
                        if (std::abs((*this)(i, j, a, b) - std::conj((*this)(j, i, b, a))) > tol) {
                            return std::array<int, 4>{i, j, a, b};
                        }
                    }
                }
            }
        }
        return std::nullopt;
    }

    CurvatureModel &operator+=(const CurvatureModel &o)
    {
        if (o.n_ != n_ || o.r_ != r_) {
            throw validation_error("curvature model dimensions differ");
        }
        for (std::size_t t = 0; t < c_.size(); ++t) {
            c_[t] += o.c_[t];
        }
        return *this;
    }

    CurvatureModel &operator*=(double s)
    {
        for (auto &v : c_) {
            v *= s;
        }
        return *this;
    }

    friend CurvatureModel operator+(CurvatureModel a, const CurvatureModel &b)
    {
        return a += b;
    }

    friend CurvatureModel operator*(double s, CurvatureModel a)
    {
        return a *= s;
    }

    friend bool operator==(const CurvatureModel &, const CurvatureModel &) = default;

private:
    [[nodiscard]] std::size_t index(int i, int j, int a, int b) const
    {
        return static_cast<std::size_t>(((i * n_ + j) * r_ + a) * r_ + b);
    }

    int n_ = 0;
    int r_ = 0;
    std::vector<cplx> c_;
};

// Fiber unitary change of frame: the model c' with gamma(c', U u) == gamma(c, u).
inline CurvatureModel rotate_fiber(const CurvatureModel &m, const Eigen::MatrixXcd &unitary)
{
    const int n = m.n();
    const int r = m.r();
    CurvatureModel out(n, r);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            for (int a = 0; a < r; ++a) {
                for (int b = 0; b < r; ++b) {
                    cplx acc{};
                    for (int g = 0; g < r; ++g) {
                        for (int d = 0; d < r; ++d) {
                            acc += std::conj(unitary(a, g)) * m(i, j, g, d) * unitary(b, d);
                        }
                    }
                    out(i, j, a, b) = acc;
                }
            }
        }
    }
    return out;
}

inline constexpr double unit_tol = 1e-10;

inline void check_unit(const Eigen::VectorXcd &u, int dim, const char *what)
{
    if (u.size() != dim) {
        throw validation_error(std::string(what) + ": vector has dimension " + std::to_string(u.size())
                               + ", expected " + std::to_string(dim));
    }
    if (std::abs(u.norm() - 1.0) > unit_tol) {
        throw validation_error(std::string(what) + ": vector is not a unit vector");
    }
}

namespace detail
{

// A_ij += scale * sum_ab c_{ijab} u_a conj(u_b), no validation.
inline void accumulate_gamma(const CurvatureModel &m, const Eigen::VectorXcd &u, double scale, Eigen::MatrixXcd &acc)
{
    const int n = m.n();
    const int r = m.r();
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            cplx s{};
            for (int a = 0; a < r; ++a) {
                const cplx ua = u(a);
                for (int b = 0; b < r; ++b) {
                    s += m(i, j, a, b) * ua * std::conj(u(b));
                }
            }
            acc(i, j) += scale * s;
        }
    }
}

} // namespace detail

// gamma(u)_ij = sum_ab c_{ijab} u_a conj(u_b) for a unit fiber vector u.
inline HermitianForm gamma_of_vector(const CurvatureModel &m, const Eigen::VectorXcd &u)
{
    check_unit(u, m.r(), "gamma_of_vector");
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(m.n(), m.n());
    detail::accumulate_gamma(m, u, 1.0, a);
    return HermitianForm::symmetrized(a);
}

// T_ij = sum_a c_{ijaa}.
inline HermitianForm fiber_trace(const CurvatureModel &m)
{
    Eigen::MatrixXcd t = Eigen::MatrixXcd::Zero(m.n(), m.n());
    for (int i = 0; i < m.n(); ++i) {
        for (int j = 0; j < m.n(); ++j) {
            for (int a = 0; a < m.r(); ++a) {
                t(i, j) += m(i, j, a, a);
            }
        }
    }
    return HermitianForm::symmetrized(t);
}

struct BaseSample {
    double weight = 0.0;
    CurvatureModel model;
};

// Weighted finite sample of base points with an ample twist curvature theta_L and a twist strength delta.
struct BaseScenario {
    int n = 0;
    int r = 0;
    std::vector<BaseSample> samples;
    HermitianForm theta_L;
    double delta = 0.0;

    [[nodiscard]] BaseScenario with_delta(double d) const
    {
        BaseScenario s = *this;
        s.delta = d;
        return s;
    }
};

// Validates every scenario invariant; the message names the offending field or index.
inline void validate_scenario(const BaseScenario &sc, double weight_tol = 1e-9, double herm_tol = 1e-12)
{
    if (sc.n < 1 || sc.r < 1) {
        throw validation_error("scenario: n and r must be positive");
    }
    if (sc.samples.empty()) {
        throw validation_error("scenario: samples is empty");
    }
    double total = 0.0;
    for (std::size_t s = 0; s < sc.samples.size(); ++s) {
        const auto &smp = sc.samples[s];
        if (!(smp.weight > 0.0) || !std::isfinite(smp.weight)) {
            throw validation_error("scenario: weights: sample " + std::to_string(s) + " has non-positive weight");
        }
        total += smp.weight;
        if (smp.model.n() != sc.n || smp.model.r() != sc.r) {
            throw validation_error("scenario: samples[" + std::to_string(s) + "].c has wrong dimensions");
        }
        if (auto v = smp.model.hermitian_violation(herm_tol)) {
            const auto &ix = *v;
            throw validation_error("scenario: samples[" + std::to_string(s)
                                   + "].c violates c_{ijab} = conj(c_{jiba}) at (i,j,a,b) = ("
                                   + std::to_string(ix[0] + 1) + "," + std::to_string(ix[1] + 1) + ","
                                   + std::to_string(ix[2] + 1) + "," + std::to_string(ix[3] + 1) + ")");
        }
    }
    if (std::abs(total - 1.0) > weight_tol) {
        throw validation_error("scenario: weights sum to " + std::to_string(total) + ", expected 1");
    }
    if (sc.theta_L.n() != sc.n) {
        throw validation_error("scenario: theta_L has wrong dimension");
    }
    const Eigen::MatrixXcd &t = sc.theta_L.matrix();
    if ((t - t.adjoint()).cwiseAbs().maxCoeff() > herm_tol * std::max(1.0, t.cwiseAbs().maxCoeff())) {
        throw validation_error("scenario: theta_L is not hermitian");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(t, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() <= 0.0) {
        throw validation_error("scenario: theta_L is not positive definite");
    }
    if (!(sc.delta >= 0.0) || !std::isfinite(sc.delta)) {
        throw validation_error("scenario: delta must be a nonnegative number");
    }
}

// eta = Theta_{det V*} + Theta_L twisted by L^{-delta} = -fiber_trace(c) + (1 - delta) theta_L.
inline HermitianForm eta_form(const BaseScenario &sc, std::size_t index)
{
    if (index >= sc.samples.size()) {
        throw validation_error("eta_form: sample index out of range");
    }
    return (1.0 - sc.delta) * sc.theta_L - fiber_trace(sc.samples[index].model);
}

struct Signature {
    int negative = 0;
    int zero = 0;
    int positive = 0;

    friend bool operator==(const Signature &, const Signature &) = default;
};

// Ascending real eigenvalues.
inline Eigen::VectorXd eigenvalues(const HermitianForm &a)
{
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(a.matrix(), Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) {
        throw numerical_error("eigenvalue solver did not converge");
    }
    return es.eigenvalues();
}

inline Signature signature_of(const Eigen::VectorXd &ev, double tol = default_eigen_tol)
{
    Signature s;
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
        if (ev(i) < -tol) {
            ++s.negative;
        } else if (ev(i) > tol) {
            ++s.positive;
        } else {
            ++s.zero;
        }
    }
    return s;
}

inline Signature signature(const HermitianForm &a, double tol = default_eigen_tol)
{
    if (!(tol > 0.0)) {
        throw validation_error("signature: tolerance must be positive");
    }
    return signature_of(eigenvalues(a), tol);
}

// det(A) standing for the top power A^n; the positive normalization n! * (volume form)
// is dropped everywhere.
inline double top_power(const HermitianForm &a)
{
    return eigenvalues(a).prod();
}

} // namespace jetmorse

#endif
