#ifndef JETMORSE_SCALAR_JET_HPP
#define JETMORSE_SCALAR_JET_HPP

#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <jetmorse/error.hpp>

namespace jetmorse
{

using cplx = std::complex<double>;

// Jets above this order are rejected: factorials and lcm exponents grow too fast.
inline constexpr int max_jet_order = 12;

inline void check_jet_order(int k)
{
    if (k < 1 || k > max_jet_order) {
        throw validation_error("jet order must lie in 1.." + std::to_string(max_jet_order) + ", got "
                               + std::to_string(k));
    }
}

// Truncated germ t -> c_1 t + c_2 t^2 + ... + c_k t^k (no constant term).
// coeff(s) is the s-th Taylor coefficient, s = 1..k.
class ScalarJet
{
public:
    ScalarJet() = default;

    explicit ScalarJet(int order) : c_(static_cast<std::size_t>(order), cplx{})
    {
        check_jet_order(order);
    }

    explicit ScalarJet(std::vector<cplx> coeffs) : c_(std::move(coeffs))
    {
        check_jet_order(order());
        for (const auto &v : c_) {
            if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
                throw validation_error("scalar jet coefficients must be finite");
            }
        }
    }

    ScalarJet(std::initializer_list<cplx> coeffs) : ScalarJet(std::vector<cplx>(coeffs)) {}

    // The germ t itself, truncated at the given order.
    static ScalarJet identity(int order)
    {
        ScalarJet g(order);
        g.c_[0] = 1.0;
        return g;
    }

    [[nodiscard]] int order() const noexcept
    {
        return static_cast<int>(c_.size());
    }

    [[nodiscard]] cplx coeff(int s) const
    {
        return c_.at(static_cast<std::size_t>(s - 1));
    }

    cplx &coeff(int s)
    {
        return c_.at(static_cast<std::size_t>(s - 1));
    }

    // s-th derivative at 0, i.e. s! * coeff(s).
    [[nodiscard]] cplx derivative(int s) const
    {
        return std::tgamma(s + 1.0) * coeff(s);
    }

    [[nodiscard]] std::span<const cplx> coeffs() const noexcept
    {
        return c_;
    }

    friend bool operator==(const ScalarJet &, const ScalarJet &) = default;

private:
    std::vector<cplx> c_;
};

namespace detail
{

// Product of two zero-constant germs, truncated at `order`.
inline ScalarJet truncated_mul(const ScalarJet &a, const ScalarJet &b, int order)
{
    ScalarJet out(order);
    for (int i = 1; i <= a.order() && i < order; ++i) {
        const cplx ai = a.coeff(i);
        if (ai == cplx{}) {
            continue;
        }
        for (int j = 1; j <= b.order() && i + j <= order; ++j) {
            out.coeff(i + j) += ai * b.coeff(j);
        }
    }
    return out;
}

} // namespace detail

// Truncated coefficients of u(g(t)); g must have zero constant term (implicit in ScalarJet).
// The result has the order of g.
inline ScalarJet compose_scalar(const ScalarJet &u, const ScalarJet &g)
{
    const int k = g.order();
    ScalarJet out(k);
    ScalarJet power = g; // g^s, truncated
    for (int s = 1; s <= std::min(k, u.order()); ++s) {
        const cplx us = u.coeff(s);
        for (int m = s; m <= k; ++m) {
            out.coeff(m) += us * power.coeff(m);
        }
        if (s < k) {
            power = detail::truncated_mul(power, g, k);
        }
    }
    return out;
}

// Compositional inverse h with g(h(t)) = t + O(t^{k+1}), solved order by order.
inline ScalarJet invert_series(const ScalarJet &g)
{
    const int k = g.order();
    const cplx g1 = g.coeff(1);
    if (g1 == cplx{}) {
        throw degenerate_jet_error("invert_series: vanishing first coefficient");
    }
    ScalarJet h(k);
    h.coeff(1) = 1.0 / g1;
    for (int m = 2; m <= k; ++m) {
        // With h_m still zero, the t^m coefficient of g(h) collects only lower-order terms.
        const cplx residual = compose_scalar(g, h).coeff(m);
        h.coeff(m) = -residual / g1;
    }
    return h;
}

} // namespace jetmorse

#endif
