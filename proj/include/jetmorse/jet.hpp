#ifndef JETMORSE_JET_HPP
#define JETMORSE_JET_HPP

#include <algorithm>
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

// Fiber coordinates of a k-jet of a curve in C^r.
//
// Row s-1 of xi() holds xi_s = f^{(s)}(0)/s!, the s-th Taylor coefficient of
// f(t) - f(0). With this scaling, reparametrization acts by the plain matrix
// product of reparam_matrix(). Column a-1 is the scalar germ of component a.
class Jet
{
public:
    Jet() = default;

    explicit Jet(Eigen::MatrixXcd xi) : xi_(std::move(xi))
    {
        check_jet_order(static_cast<int>(xi_.rows()));
        if (xi_.cols() < 1) {
            throw validation_error("jet fiber rank must be positive");
        }
        if (!xi_.allFinite()) {
            throw validation_error("jet entries must be finite");
        }
    }

    static Jet zero(int k, int r)
    {
        check_jet_order(k);
        return Jet(Eigen::MatrixXcd::Zero(k, r));
    }

    // Builds the jet whose component a is the scalar germ components[a].
    static Jet from_components(const std::vector<ScalarJet> &components)
    {
        if (components.empty()) {
            throw validation_error("jet needs at least one component");
        }
        const int k = components.front().order();
        Eigen::MatrixXcd xi(k, static_cast<Eigen::Index>(components.size()));
        for (std::size_t a = 0; a < components.size(); ++a) {
            if (components[a].order() != k) {
                throw validation_error("jet components must share one order");
            }
            for (int s = 1; s <= k; ++s) {
                xi(s - 1, static_cast<Eigen::Index>(a)) = components[a].coeff(s);
            }
        }
        return Jet(std::move(xi));
    }

    [[nodiscard]] int k() const noexcept
    {
        return static_cast<int>(xi_.rows());
    }

    [[nodiscard]] int r() const noexcept
    {
        return static_cast<int>(xi_.cols());
    }

    [[nodiscard]] const Eigen::MatrixXcd &xi() const noexcept
    {
        return xi_;
    }

    // xi_s as a row vector, s = 1..k.
    [[nodiscard]] Eigen::RowVectorXcd row(int s) const
    {
        return xi_.row(s - 1);
    }

    // Scalar germ of fiber component a = 1..r.
    [[nodiscard]] ScalarJet component(int a) const
    {
        std::vector<cplx> c(static_cast<std::size_t>(k()));
        for (int s = 1; s <= k(); ++s) {
            c[static_cast<std::size_t>(s - 1)] = xi_(s - 1, a - 1);
        }
        return ScalarJet(std::move(c));
    }

    // Rows multiplied by s!: the actual derivatives f^{(s)}(0).
    [[nodiscard]] Eigen::MatrixXcd derivative_rows() const
    {
        Eigen::MatrixXcd d = xi_;
        double fact = 1.0;
        for (int s = 1; s <= k(); ++s) {
            fact *= s;
            d.row(s - 1) *= fact;
        }
        return d;
    }

private:
    Eigen::MatrixXcd xi_;
};

// A k-jet of reparametrization phi(t) = alpha_1 t + ... + alpha_k t^k, alpha_1 != 0.
class Reparam
{
public:
    Reparam() = default;

    explicit Reparam(std::vector<cplx> alpha) : alpha_(std::move(alpha))
    {
        check_jet_order(order());
        if (alpha_.front() == cplx{}) {
            throw validation_error("reparametrization needs alpha_1 != 0");
        }
        for (const auto &a : alpha_) {
            if (!std::isfinite(a.real()) || !std::isfinite(a.imag())) {
                throw validation_error("reparametrization coefficients must be finite");
            }
        }
    }

    static Reparam identity(int k)
    {
        return linear(1.0, k);
    }

    // phi(t) = lambda t.
    static Reparam linear(cplx lambda, int k)
    {
        check_jet_order(k);
        std::vector<cplx> a(static_cast<std::size_t>(k), cplx{});
        a[0] = lambda;
        return Reparam(std::move(a));
    }

    static Reparam from_series(const ScalarJet &g)
    {
        return Reparam(std::vector<cplx>(g.coeffs().begin(), g.coeffs().end()));
    }

    [[nodiscard]] int order() const noexcept
    {
        return static_cast<int>(alpha_.size());
    }

    // alpha_i, i = 1..k.
    [[nodiscard]] cplx alpha(int i) const
    {
        return alpha_.at(static_cast<std::size_t>(i - 1));
    }

    [[nodiscard]] bool is_unipotent() const
    {
        return alpha_.front() == cplx{1.0, 0.0};
    }

    [[nodiscard]] ScalarJet series() const
    {
        return ScalarJet(alpha_);
    }

private:
    std::vector<cplx> alpha_;
};

// Entry (s, m) (1-based) is the t^m coefficient of phi(t)^s. Upper triangular,
// diagonal alpha_1^s. A jet row vector v transforms as v -> v * M.
inline Eigen::MatrixXcd reparam_matrix(const Reparam &phi, int k)
{
    check_jet_order(k);
    if (phi.order() < k) {
        throw validation_error("reparam_matrix: reparametrization order " + std::to_string(phi.order())
                               + " is below " + std::to_string(k));
    }
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(k, k);
    // base holds the coefficients of phi^{s-1} in slots 0..k
    std::vector<cplx> base(static_cast<std::size_t>(k + 1), cplx{});
    base[0] = 1.0;
    for (int s = 1; s <= k; ++s) {
        std::vector<cplx> next(static_cast<std::size_t>(k + 1), cplx{});
        for (int i = 0; i <= k; ++i) {
            if (base[static_cast<std::size_t>(i)] == cplx{}) {
                continue;
            }
            for (int j = 1; i + j <= k; ++j) {
                next[static_cast<std::size_t>(i + j)] += base[static_cast<std::size_t>(i)] * phi.alpha(j);
            }
        }
        base = std::move(next);
        for (int col = 1; col <= k; ++col) {
            m(s - 1, col - 1) = base[static_cast<std::size_t>(col)];
        }
    }
    return m;
}

// Jet of f o phi: every fiber component goes through the row-vector action.
inline Jet act(const Reparam &phi, const Jet &j)
{
    if (phi.order() != j.k()) {
        throw validation_error("act: reparametrization order " + std::to_string(phi.order())
                               + " does not match jet order " + std::to_string(j.k()));
    }
    return Jet(reparam_matrix(phi, j.k()).transpose() * j.xi());
}

// Truncated phi o psi, i.e. t -> phi(psi(t)).
//
// Orientation: reparam_matrix(phi o psi) == reparam_matrix(phi) * reparam_matrix(psi),
// hence act(psi, act(phi, j)) == act(compose_reparams(phi, psi), j).
inline Reparam compose_reparams(const Reparam &phi, const Reparam &psi)
{
    if (phi.order() != psi.order()) {
        throw validation_error("compose_reparams: orders differ");
    }
    return Reparam::from_series(compose_scalar(phi.series(), psi.series()));
}

inline Reparam inverse(const Reparam &phi)
{
    return Reparam::from_series(invert_series(phi.series()));
}

// Row s multiplied by lambda^s; equals act(Reparam::linear(lambda, k), j).
inline Jet weighted_scale(cplx lambda, const Jet &j)
{
    if (lambda == cplx{}) {
        throw validation_error("weighted_scale: lambda must be nonzero");
    }
    Eigen::MatrixXcd xi = j.xi();
    cplx power = 1.0;
    for (int s = 1; s <= j.k(); ++s) {
        power *= lambda;
        xi.row(s - 1) *= power;
    }
    return Jet(std::move(xi));
}

struct NormalizedJet {
    // Jet of (t, g_2, ..., g_r) with g_m = f_m o f_1^{-1}.
    Jet eta;

    struct Numerator {
        int component; // m >= 2
        int order;     // s >= 2
        cplx value;    // f_1'^{2s-1} * g_m^{(s)}(0)
    };

    // Lexicographic in (component, order).
    std::vector<Numerator> numerators;
};

// Column with the largest |xi_{1,a}| (1-based), a candidate first coordinate
// when xi_{1,1} vanishes. Empty when xi_1 == 0.
inline std::optional<int> suggest_pivot_component(const Jet &j)
{
    int best = 0;
    double best_abs = 0.0;
    for (int a = 1; a <= j.r(); ++a) {
        const double v = std::abs(j.xi()(0, a - 1));
        if (v > best_abs) {
            best_abs = v;
            best = a;
        }
    }
    if (best == 0) {
        return std::nullopt;
    }
    return best;
}

// Jet with fiber components a and b exchanged.
inline Jet swap_components(const Jet &j, int a, int b)
{
    Eigen::MatrixXcd xi = j.xi();
    xi.col(a - 1).swap(xi.col(b - 1));
    return Jet(std::move(xi));
}

inline NormalizedJet normalize_jet(const Jet &j)
{
    const cplx f1p = j.xi()(0, 0);
    if (f1p == cplx{}) {
        throw degenerate_jet_error("normalize_jet: xi_{1,1} = 0, first coordinate is not immersive");
    }
    const int k = j.k();
    const ScalarJet f1_inv = invert_series(j.component(1));

    std::vector<ScalarJet> comps;
    comps.reserve(static_cast<std::size_t>(j.r()));
    comps.push_back(ScalarJet::identity(k));
    NormalizedJet out;
    for (int m = 2; m <= j.r(); ++m) {
        ScalarJet g = compose_scalar(j.component(m), f1_inv);
        for (int s = 2; s <= k; ++s) {
            out.numerators.push_back({m, s, g.derivative(s) * std::pow(f1p, 2 * s - 1)});
        }
        comps.push_back(std::move(g));
    }
    out.eta = Jet::from_components(comps);
    return out;
}

// One term coefficient * z^multi_index of a polynomial on C^r.
struct Monomial {
    std::vector<int> exponents;
    cplx coefficient;
};

using Polynomial = std::vector<Monomial>;

// Taylor coefficients of t -> u(x + f(t)) - u(x) through order k, where f is any
// representative of the jet with f(0) = 0 in the chart and x is an optional base offset.
inline ScalarJet pullback_jet(const Polynomial &u, const Jet &j, const Eigen::VectorXcd &base = {})
{
    const int k = j.k();
    const int r = j.r();
    if (base.size() != 0 && base.size() != r) {
        throw validation_error("pullback_jet: base point dimension mismatch");
    }

    // Each component as a full series with constant term: x_a + f_a(t).
    // Store coefficients 0..k.
    using Series = std::vector<cplx>;
    auto mul = [k](const Series &a, const Series &b) {
        Series out(static_cast<std::size_t>(k + 1), cplx{});
        for (int i = 0; i <= k; ++i) {
            if (a[static_cast<std::size_t>(i)] == cplx{}) {
                continue;
            }
            for (int l = 0; i + l <= k; ++l) {
                out[static_cast<std::size_t>(i + l)] += a[static_cast<std::size_t>(i)] * b[static_cast<std::size_t>(l)];
            }
        }
        return out;
    };

    std::vector<Series> comp(static_cast<std::size_t>(r), Series(static_cast<std::size_t>(k + 1), cplx{}));
    for (int a = 0; a < r; ++a) {
        comp[static_cast<std::size_t>(a)][0] = base.size() != 0 ? base(a) : cplx{};
        for (int s = 1; s <= k; ++s) {
            comp[static_cast<std::size_t>(a)][static_cast<std::size_t>(s)] = j.xi()(s - 1, a);
        }
    }

    Series total(static_cast<std::size_t>(k + 1), cplx{});
    for (const auto &term : u) {
        if (static_cast<int>(term.exponents.size()) != r) {
            throw validation_error("pullback_jet: monomial has " + std::to_string(term.exponents.size())
                                   + " exponents, expected " + std::to_string(r));
        }
        Series prod(static_cast<std::size_t>(k + 1), cplx{});
        prod[0] = term.coefficient;
        for (int a = 0; a < r; ++a) {
            const int e = term.exponents[static_cast<std::size_t>(a)];
            if (e < 0) {
                throw validation_error("pullback_jet: negative exponent");
            }
            for (int rep = 0; rep < e; ++rep) {
                prod = mul(prod, comp[static_cast<std::size_t>(a)]);
            }
        }
        for (int s = 0; s <= k; ++s) {
            total[static_cast<std::size_t>(s)] += prod[static_cast<std::size_t>(s)];
        }
    }
    return ScalarJet(std::vector<cplx>(total.begin() + 1, total.end()));
}

} // namespace jetmorse

#endif
