#ifndef JETMORSE_METRICS_HPP
#define JETMORSE_METRICS_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include <jetmorse/error.hpp>
#include <jetmorse/hermitian.hpp>
#include <jetmorse/jet.hpp>
#include <jetmorse/sym_power.hpp>
#include <jetmorse/wronskian.hpp>

namespace jetmorse
{

enum class MetricKind {
    demailly_gg,
    test1_wronskian,
    test2_invariant,
    sympow_wronskian,
};

inline std::string_view to_string(MetricKind k)
{
    switch (k) {
    case MetricKind::demailly_gg:
        return "gg";
    case MetricKind::test1_wronskian:
        return "test1";
    case MetricKind::test2_invariant:
        return "test2";
    case MetricKind::sympow_wronskian:
        return "sympow";
    }
    return "?";
}

inline MetricKind parse_metric_kind(std::string_view s)
{
    if (s == "gg") {
        return MetricKind::demailly_gg;
    }
    if (s == "test1") {
        return MetricKind::test1_wronskian;
    }
    if (s == "test2") {
        return MetricKind::test2_invariant;
    }
    if (s == "sympow") {
        return MetricKind::sympow_wronskian;
    }
    throw validation_error("unknown metric kind '" + std::string(s) + "' (expected gg|test1|test2|sympow)");
}

// Samplers only need k through weights, so it may exceed the jet cap; lcm exponents stay in 64 bits up to here.
inline constexpr int max_metric_order = 40;

// lcm(1, ..., k).
inline long long lcm_exponent(int k)
{
    if (k < 1 || k > max_metric_order) {
        throw validation_error("lcm_exponent: k out of range");
    }
    long long out = 1;
    for (long long s = 1; s <= k; ++s) {
        out = std::lcm(out, s);
    }
    return out;
}

// lcm{s(s+1) : s <= k}: the exponents 2p/(s(s+1)) of the Wronskian metrics are then even integers.
inline long long lcm_wronskian_exponent(int k)
{
    if (k < 1 || k > max_metric_order) {
        throw validation_error("lcm_wronskian_exponent: k out of range");
    }
    long long out = 1;
    for (long long s = 1; s <= k; ++s) {
        out = std::lcm(out, s * (s + 1));
    }
    return out;
}

// H_k = 1 + 1/2 + ... + 1/k.
inline double harmonic(int k)
{
    if (k < 1) {
        throw validation_error("harmonic: k must be positive");
    }
    double h = 0.0;
    for (int s = k; s >= 1; --s) {
        h += 1.0 / s;
    }
    return h;
}

struct MetricSpec {
    MetricKind kind = MetricKind::demailly_gg;
    int k = 1;
    long long p = 1;
    // epsilons[s-1] = eps_s, strictly decreasing in (0, 1].
    std::vector<double> epsilons;
    // SymPow: symmetric powers s = 1..min(k, l_max).
    int l_max = 3;
    // Test2: row s enters as ||eta_s||^{2p / row_weights[s-1]}; empty means weight s.
    std::vector<int> row_weights;
    // SymPow: chart point x added to the curve before applying the frame polynomials; empty means (1,...,1)/sqrt(r).
    Eigen::VectorXcd anchor;

    // Base the exponent must be a multiple of.
    [[nodiscard]] long long exponent_base() const
    {
        switch (kind) {
        case MetricKind::test1_wronskian:
        case MetricKind::sympow_wronskian:
            return lcm_wronskian_exponent(k);
        case MetricKind::test2_invariant:
            if (!row_weights.empty()) {
                long long out = 1;
                for (int w : row_weights) {
                    out = std::lcm(out, static_cast<long long>(w));
                }
                return out;
            }
            return lcm_exponent(k);
        case MetricKind::demailly_gg:
            break;
        }
        return lcm_exponent(k);
    }

    [[nodiscard]] int sympow_levels() const
    {
        return std::min(k, l_max);
    }

    [[nodiscard]] int row_weight(int s) const
    {
        return row_weights.empty() ? s : row_weights.at(static_cast<std::size_t>(s - 1));
    }

    void validate() const
    {
        if (k < 1 || k > max_metric_order) {
            throw validation_error("metric: k must lie in 1.." + std::to_string(max_metric_order));
        }
        if (p < 1 || p % exponent_base() != 0) {
            throw validation_error("metric: p = " + std::to_string(p) + " is not a positive multiple of "
                                   + std::to_string(exponent_base()));
        }
        if (static_cast<int>(epsilons.size()) != k) {
            throw validation_error("metric: expected " + std::to_string(k) + " epsilons");
        }
        for (std::size_t s = 0; s < epsilons.size(); ++s) {
            const double e = epsilons[s];
            if (!(e > 0.0 && e <= 1.0)) {
                throw validation_error("metric: epsilons must lie in (0, 1]");
            }
            if (s > 0 && !(e < epsilons[s - 1])) {
                throw validation_error("metric: epsilons must be strictly decreasing");
            }
        }
        if (kind == MetricKind::sympow_wronskian && l_max < 1) {
            throw validation_error("metric: l_max must be positive");
        }
        if (!row_weights.empty()) {
            if (static_cast<int>(row_weights.size()) != k) {
                throw validation_error("metric: expected " + std::to_string(k) + " row weights");
            }
            for (int w : row_weights) {
                if (w < 1) {
                    throw validation_error("metric: row weights must be positive");
                }
            }
        }
    }

    // eps_s = eps0^s, p = 0 resolves to exponent_base().
    static MetricSpec make(MetricKind kind, int k, long long p = 0, double eps0 = 0.1, int l_max = 3)
    {
        MetricSpec m;
        m.kind = kind;
        m.k = k;
        m.l_max = l_max;
        if (!(eps0 > 0.0 && eps0 < 1.0)) {
            throw validation_error("metric: eps0 must lie in (0, 1)");
        }
        if (k < 1 || k > max_metric_order) {
            throw validation_error("metric: k must lie in 1.." + std::to_string(max_metric_order));
        }
        double e = 1.0;
        for (int s = 1; s <= k; ++s) {
            e *= eps0;
            m.epsilons.push_back(e);
        }
        m.p = p == 0 ? m.exponent_base() : p;
        m.validate();
        return m;
    }

    // Same metric with all eps_s set to one (the pre-epsilon expansion); skips the ordering check.
    [[nodiscard]] MetricSpec with_unit_epsilons() const
    {
        MetricSpec m = *this;
        m.epsilons.assign(static_cast<std::size_t>(k), 1.0);
        return m;
    }
};

namespace detail
{

// K_{ab}(z) = delta_ab + sum_ij c_{ijab} z_i zbar_j, so that ||v||^2 = sum_ab v_a conj(v_b) K_ab.
inline Eigen::MatrixXcd jet_fiber_metric(const CurvatureModel &m, const Eigen::VectorXcd &z)
{
    const int r = m.r();
    Eigen::MatrixXcd k = Eigen::MatrixXcd::Identity(r, r);
    if (z.size() == 0) {
        return k;
    }
    for (int a = 0; a < r; ++a) {
        for (int b = 0; b < r; ++b) {
            for (int i = 0; i < m.n(); ++i) {
                for (int j = 0; j < m.n(); ++j) {
                    k(a, b) += m(i, j, a, b) * z(i) * std::conj(z(j));
                }
            }
        }
    }
    return k;
}

// Gram matrix X K X^* of the rows of x; its (a,b) entry pairs row a with row b.
inline Eigen::MatrixXcd row_gram(const Eigen::MatrixXcd &x, const Eigen::MatrixXcd &k)
{
    // sum_ab x_{pa} conj(x_{qb}) K_{ab}
    return x * k * x.adjoint();
}

inline double log_sum_exp(std::span<const double> terms)
{
    double mx = -std::numeric_limits<double>::infinity();
    for (double t : terms) {
        mx = std::max(mx, t);
    }
    if (mx == -std::numeric_limits<double>::infinity()) {
        return mx;
    }
    double acc = 0.0;
    for (double t : terms) {
        acc += std::exp(t - mx);
    }
    return mx + std::log(acc);
}

inline double safe_log(double x)
{
    return x > 0.0 ? std::log(x) : -std::numeric_limits<double>::infinity();
}

inline Eigen::VectorXcd default_anchor(int r)
{
    return Eigen::VectorXcd::Constant(r, cplx{1.0 / std::sqrt(static_cast<double>(r)), 0.0});
}

// Squared h-norm of the s-vector of scalar Wronskians W(u_A1 o f, ..., u_As o f),
// A ranging over s-subsets of the dual monomial frame of S^s V*.
inline double sympow_level_norm_sq(const MetricSpec &spec, const CurvatureModel &m, const Eigen::VectorXcd &z,
                                   const Jet &j, int s)
{
    const Eigen::VectorXcd anchor = spec.anchor.size() != 0 ? spec.anchor : default_anchor(j.r());
    const auto frame = multi_indices(j.r(), s);
    std::vector<ScalarJet> pulled;
    pulled.reserve(frame.size());
    for (const auto &alpha : frame) {
        pulled.push_back(pullback_jet(dual_frame_monomial(alpha), j, anchor));
    }
    const auto subsets = detail::combinations(static_cast<int>(frame.size()), s);
    std::vector<cplx> w;
    w.reserve(subsets.size());
    std::vector<ScalarJet> germs(static_cast<std::size_t>(s));
    for (const auto &sub : subsets) {
        for (int t = 0; t < s; ++t) {
            germs[static_cast<std::size_t>(t)] = pulled[static_cast<std::size_t>(sub[static_cast<std::size_t>(t)])];
        }
        w.push_back(scalar_wronskian(germs));
    }
    const bool at_origin = z.size() == 0 || z.isZero(0.0);
    if (at_origin) {
        double acc = 0.0;
        for (const auto &v : w) {
            acc += std::norm(v);
        }
        return acc;
    }
    // Metric on S^s V* at z from the symmetric-power curvature; induced on s-vectors by minors.
    const SymPowerCurvature sp = sym_power_curvature(m, s);
    const Eigen::MatrixXcd k = jet_fiber_metric(sp.C, z);
    cplx acc{};
    for (std::size_t x = 0; x < subsets.size(); ++x) {
        if (w[x] == cplx{}) {
            continue;
        }
        for (std::size_t y = 0; y < subsets.size(); ++y) {
            if (w[y] == cplx{}) {
                continue;
            }
            Eigen::MatrixXcd minor(s, s);
            for (int a = 0; a < s; ++a) {
                for (int b = 0; b < s; ++b) {
                    minor(a, b) = k(subsets[x][static_cast<std::size_t>(a)], subsets[y][static_cast<std::size_t>(b)]);
                }
            }
            acc += w[x] * std::conj(w[y]) * minor.determinant();
        }
    }
    return acc.real();
}

} // namespace detail

// log |(z, xi)| for the chosen metric family; -inf where the metric vanishes.
// z may be empty, meaning the origin of the chart where h is the identity.
inline double log_evaluate(const MetricSpec &spec, const CurvatureModel &m, const Eigen::VectorXcd &z, const Jet &j)
{
    if (spec.k != j.k()) {
        throw validation_error("evaluate: metric order " + std::to_string(spec.k) + " does not match jet order "
                               + std::to_string(j.k()));
    }
    if (m.r() != j.r()) {
        throw validation_error("evaluate: curvature model rank does not match jet rank");
    }
    if (z.size() != 0 && z.size() != m.n()) {
        throw validation_error("evaluate: base point dimension mismatch");
    }
    const int k = j.k();
    const double p = static_cast<double>(spec.p);
    const Eigen::MatrixXcd kz = detail::jet_fiber_metric(m, z);
    std::vector<double> terms;

    switch (spec.kind) {
    case MetricKind::demailly_gg: {
        const Eigen::MatrixXcd g = detail::row_gram(j.xi(), kz);
        for (int s = 1; s <= k; ++s) {
            const double ns = g(s - 1, s - 1).real();
            terms.push_back(std::log(spec.epsilons[static_cast<std::size_t>(s - 1)]) + p / s * detail::safe_log(ns));
        }
        return detail::log_sum_exp(terms) / p;
    }
    case MetricKind::test1_wronskian: {
        const Eigen::MatrixXcd g = detail::row_gram(j.derivative_rows(), kz);
        for (int s = 1; s <= k; ++s) {
            // ||W_s||_h^2 = det of the Gram matrix of the first s derivative rows.
            const double ns = s > j.r() ? 0.0 : g.topLeftCorner(s, s).determinant().real();
            const double wt = static_cast<double>(s) * (s + 1);
            terms.push_back(std::log(spec.epsilons[static_cast<std::size_t>(s - 1)])
                            + p / wt * detail::safe_log(std::max(ns, 0.0)));
        }
        return detail::log_sum_exp(terms) / p;
    }
    case MetricKind::test2_invariant: {
        const Jet eta = normalize_jet(j).eta;
        const Eigen::MatrixXcd g = detail::row_gram(eta.xi(), kz);
        for (int s = 1; s <= k; ++s) {
            const double ns = g(s - 1, s - 1).real();
            terms.push_back(std::log(spec.epsilons[static_cast<std::size_t>(s - 1)])
                            + p / spec.row_weight(s) * detail::safe_log(ns));
        }
        // exact sphere average of |<eta_1, v>|^2 over h-unit v
        const double avg = g(0, 0).real() / j.r();
        return detail::log_sum_exp(terms) / p + detail::safe_log(avg);
    }
    case MetricKind::sympow_wronskian: {
        for (int s = 1; s <= spec.sympow_levels(); ++s) {
            const double ns = detail::sympow_level_norm_sq(spec, m, z, j, s);
            const double wt = static_cast<double>(s) * (s + 1);
            terms.push_back(std::log(spec.epsilons[static_cast<std::size_t>(s - 1)])
                            + p / wt * detail::safe_log(std::max(ns, 0.0)));
        }
        return detail::log_sum_exp(terms) / p;
    }
    }
    return 0.0;
}

inline double evaluate(const MetricSpec &spec, const CurvatureModel &m, const Eigen::VectorXcd &z, const Jet &j)
{
    return std::exp(log_evaluate(spec, m, z, j));
}

// Fiber dimensions of the draws curvature_sampler expects.
inline std::vector<int> draw_dimensions(const MetricSpec &spec, int r)
{
    if (spec.kind == MetricKind::sympow_wronskian) {
        std::vector<int> dims;
        for (int s = 1; s <= spec.sympow_levels(); ++s) {
            dims.push_back(static_cast<int>(sym_power_dim(r, s)));
        }
        return dims;
    }
    return std::vector<int>(static_cast<std::size_t>(spec.k), r);
}

// Sum of the sampler weights against the fiber average: E[sampler] = fiber_weight_total / r * fiber_trace.
inline double fiber_weight_total(const MetricSpec &spec)
{
    switch (spec.kind) {
    case MetricKind::demailly_gg:
        return harmonic(spec.k);
    case MetricKind::test1_wronskian:
        return harmonic(spec.k + 1) - 1.0;
    case MetricKind::test2_invariant:
        return 1.0 + harmonic(spec.k);
    case MetricKind::sympow_wronskian:
        return harmonic(spec.sympow_levels() + 1) - 1.0;
    }
    return 0.0;
}

// Symmetric-power curvature tensors for s = 1..levels, reused across samples.
inline std::vector<SymPowerCurvature> sympow_tensors(const MetricSpec &spec, const CurvatureModel &m)
{
    std::vector<SymPowerCurvature> out;
    if (spec.kind != MetricKind::sympow_wronskian) {
        return out;
    }
    for (int s = 1; s <= spec.sympow_levels(); ++s) {
        out.push_back(sym_power_curvature(m, s));
    }
    return out;
}

namespace detail
{

inline void check_draws(const MetricSpec &spec, int r, std::span<const Eigen::VectorXcd> draws)
{
    const auto dims = draw_dimensions(spec, r);
    if (draws.size() != dims.size()) {
        throw validation_error("curvature_sampler: expected " + std::to_string(dims.size()) + " draws, got "
                               + std::to_string(draws.size()));
    }
    for (std::size_t s = 0; s < dims.size(); ++s) {
        check_unit(draws[s], dims[s], "curvature_sampler");
    }
}

// Unvalidated sampler body shared with the Monte Carlo loop.
inline void accumulate_sampler(const MetricSpec &spec, const CurvatureModel &m,
                               std::span<const SymPowerCurvature> sympow, std::span<const Eigen::VectorXcd> draws,
                               Eigen::MatrixXcd &acc)
{
    const int k = spec.k;
    switch (spec.kind) {
    case MetricKind::demailly_gg:
        for (int s = 1; s <= k; ++s) {
            accumulate_gamma(m, draws[static_cast<std::size_t>(s - 1)], 1.0 / s, acc);
        }
        return;
    case MetricKind::test1_wronskian:
        // sum_s 1/(s(s+1)) sum_{l<=s} gamma(u_l) = sum_l gamma(u_l) (1/l - 1/(k+1))
        for (int l = 1; l <= k; ++l) {
            accumulate_gamma(m, draws[static_cast<std::size_t>(l - 1)], 1.0 / l - 1.0 / (k + 1), acc);
        }
        return;
    case MetricKind::test2_invariant: {
        const Eigen::MatrixXcd t = fiber_trace(m).matrix();
        acc += t / static_cast<double>(m.r());
        for (int s = 1; s <= k; ++s) {
            accumulate_gamma(m, draws[static_cast<std::size_t>(s - 1)], 1.0 / s, acc);
        }
        return;
    }
    case MetricKind::sympow_wronskian:
        for (int s = 1; s <= spec.sympow_levels(); ++s) {
            accumulate_gamma(sympow[static_cast<std::size_t>(s - 1)].C, draws[static_cast<std::size_t>(s - 1)],
                             1.0 / (static_cast<double>(s) * (s + 1)), acc);
        }
        return;
    }
}

} // namespace detail

// Horizontal curvature form of one fiber sample (the vertical Fubini-Study part is factored out):
//   gg     sum_s 1/s gamma(u_s)
//   test1  sum_s 1/(s(s+1)) sum_{l<=s} gamma(u_l)
//   test2  fiber_trace / r + sum_s 1/s gamma(u_s)
//   sympow sum_s 1/(s(s+1)) gamma_{S^s V}(U_s)
inline HermitianForm curvature_sampler(const MetricSpec &spec, const CurvatureModel &m,
                                       std::span<const Eigen::VectorXcd> draws)
{
    detail::check_draws(spec, m.r(), draws);
    const auto sympow = sympow_tensors(spec, m);
    Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(m.n(), m.n());
    detail::accumulate_sampler(spec, m, sympow, draws, acc);
    return HermitianForm::symmetrized(acc);
}

struct FdCheck {
    double max_rel_deviation = 0.0;
    Eigen::MatrixXcd finite_difference;
    Eigen::MatrixXcd formula;
};

// Compares d^2 log|(z,xi)| / dz_i dzbar_j at z = 0 (central differences with the given step)
// against sum_s (1/s) w_s gamma(xi_s/|xi_s|), w_s = eps_s |xi_s|^{2p/s} / sum_t eps_t |xi_t|^{2p/t}.
inline FdCheck curvature_fd_check(const MetricSpec &spec, const CurvatureModel &m, const Jet &j, double step = 1e-3)
{
    if (spec.kind != MetricKind::demailly_gg) {
        throw validation_error("curvature_fd_check: only the gg metric has a closed-form expansion");
    }
    if (spec.k != j.k() || m.r() != j.r()) {
        throw validation_error("curvature_fd_check: dimension mismatch");
    }
    if (!(step > 0.0) || !std::isfinite(step)) {
        throw validation_error("curvature_fd_check: step must be positive");
    }
    const int k = j.k();
    const int n = m.n();
    const double p = static_cast<double>(spec.p);

    std::vector<double> log_terms;
    for (int s = 1; s <= k; ++s) {
        const double ns = j.xi().row(s - 1).squaredNorm();
        if (ns == 0.0) {
            throw degenerate_jet_error("curvature_fd_check: jet row " + std::to_string(s) + " vanishes");
        }
        log_terms.push_back(std::log(spec.epsilons[static_cast<std::size_t>(s - 1)]) + p / s * std::log(ns));
    }
    const double lse = detail::log_sum_exp(log_terms);

    FdCheck out;
    out.formula = Eigen::MatrixXcd::Zero(n, n);
    for (int s = 1; s <= k; ++s) {
        const double w = std::exp(log_terms[static_cast<std::size_t>(s - 1)] - lse);
        const Eigen::VectorXcd u = j.xi().row(s - 1).transpose() / j.xi().row(s - 1).norm();
        detail::accumulate_gamma(m, u, w / s, out.formula);
    }

    auto f = [&](const Eigen::VectorXd &x) {
        Eigen::VectorXcd z(n);
        for (int i = 0; i < n; ++i) {
            z(i) = cplx{x(i), x(n + i)};
        }
        return log_evaluate(spec, m, z, j);
    };
    // Real second derivatives over coordinates (x_1..x_n, y_1..y_n); one Richardson step on
    // (h, h/2) removes the h^2 term of the central difference.
    const int dim = 2 * n;
    auto central = [&](int a, int b, double h) {
        Eigen::VectorXd pp = Eigen::VectorXd::Zero(dim);
        Eigen::VectorXd pm = pp, mp = pp, mm = pp;
        pp(a) += h;
        pp(b) += h;
        pm(a) += h;
        pm(b) -= h;
        mp(a) -= h;
        mp(b) += h;
        mm(a) -= h;
        mm(b) -= h;
        return (f(pp) - f(pm) - f(mp) + f(mm)) / (4.0 * h * h);
    };
    Eigen::MatrixXd hess(dim, dim);
    for (int a = 0; a < dim; ++a) {
        for (int b = a; b < dim; ++b) {
            hess(a, b) = (4.0 * central(a, b, 0.5 * step) - central(a, b, step)) / 3.0;
            hess(b, a) = hess(a, b);
        }
    }
    // d/dz_i d/dzbar_j = 1/4 (f_{x_i x_j} + f_{y_i y_j} + i (f_{x_i y_j} - f_{y_i x_j}))
    out.finite_difference = Eigen::MatrixXcd(n, n);
    for (int i = 0; i < n; ++i) {
        for (int jj = 0; jj < n; ++jj) {
            out.finite_difference(i, jj) = 0.25 * cplx{hess(i, jj) + hess(n + i, n + jj),
                                                       hess(i, n + jj) - hess(n + i, jj)};
        }
    }
    const double scale = out.formula.cwiseAbs().maxCoeff();
    const double diff = (out.finite_difference - out.formula).cwiseAbs().maxCoeff();
    out.max_rel_deviation = scale > 0.0 ? diff / scale : diff;
    return out;
}

} // namespace jetmorse

#endif
