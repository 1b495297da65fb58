#ifndef JETMORSE_WRONSKIAN_HPP
#define JETMORSE_WRONSKIAN_HPP

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include <jetmorse/error.hpp>
#include <jetmorse/jet.hpp>
#include <jetmorse/scalar_jet.hpp>

namespace jetmorse
{

namespace detail
{

// All increasing l-subsets of {0..n-1}, lexicographic.
inline std::vector<std::vector<int>> combinations(int n, int l)
{
    std::vector<std::vector<int>> out;
    if (l < 0 || l > n) {
        return out;
    }
    std::vector<int> idx(static_cast<std::size_t>(l));
    for (int i = 0; i < l; ++i) {
        idx[static_cast<std::size_t>(i)] = i;
    }
    while (true) {
        out.push_back(idx);
        int i = l - 1;
        while (i >= 0 && idx[static_cast<std::size_t>(i)] == n - l + i) {
            --i;
        }
        if (i < 0) {
            break;
        }
        ++idx[static_cast<std::size_t>(i)];
        for (int j = i + 1; j < l; ++j) {
            idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
        }
    }
    return out;
}

} // namespace detail

// W_l = xi_1 ^ ... ^ xi_l in the basis e_{a_1} ^ ... ^ e_{a_l}, a_1 < ... < a_l.
struct WedgeWronskian {
    int l = 0;
    std::vector<cplx> components;
    double norm = 0.0;
};

// l x l minors of the first l derivative rows f'(0), ..., f^{(l)}(0).
inline WedgeWronskian wedge_wronskian(const Jet &j, int l)
{
    if (l < 1 || l > j.k()) {
        throw validation_error("wedge_wronskian: order " + std::to_string(l) + " outside 1.."
                               + std::to_string(j.k()));
    }
    WedgeWronskian w;
    w.l = l;
    const Eigen::MatrixXcd rows = j.derivative_rows().topRows(l);
    double sq = 0.0;
    for (const auto &cols : detail::combinations(j.r(), l)) {
        Eigen::MatrixXcd minor(l, l);
        for (int c = 0; c < l; ++c) {
            minor.col(c) = rows.col(cols[static_cast<std::size_t>(c)]);
        }
        const cplx d = minor.determinant();
        w.components.push_back(d);
        sq += std::norm(d);
    }
    w.norm = std::sqrt(sq);
    return w;
}

// det[g_i^{(j)}(0)], i, j = 1..s: derivative orders start at 1, so W(f_1, f_2) = f_1'f_2'' - f_2'f_1''.
inline cplx scalar_wronskian(std::span<const ScalarJet> germs)
{
    const int s = static_cast<int>(germs.size());
    if (s == 0) {
        throw validation_error("scalar_wronskian: empty germ list");
    }
    Eigen::MatrixXcd m(s, s);
    for (int i = 0; i < s; ++i) {
        const ScalarJet &g = germs[static_cast<std::size_t>(i)];
        if (g.order() < s) {
            throw validation_error("scalar_wronskian: germ order " + std::to_string(g.order())
                                   + " is below " + std::to_string(s));
        }
        for (int d = 1; d <= s; ++d) {
            m(i, d - 1) = g.derivative(d);
        }
    }
    return m.determinant();
}

// Weighted degree of W_s: s(s+1)/2.
constexpr long long wronskian_weight(int s)
{
    return static_cast<long long>(s) * (s + 1) / 2;
}

} // namespace jetmorse

#endif
