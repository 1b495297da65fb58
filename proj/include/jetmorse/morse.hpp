#ifndef JETMORSE_MORSE_HPP
#define JETMORSE_MORSE_HPP

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include <boost/math/distributions/students_t.hpp>
#include <Eigen/Dense>

#include <jetmorse/error.hpp>
#include <jetmorse/hermitian.hpp>
#include <jetmorse/metrics.hpp>
#include <jetmorse/sampling.hpp>

namespace jetmorse
{

// Which eigenvalue-sign sets the curvature integral runs over.
struct QMode {
    enum class Kind { exactly, at_most };

    Kind kind = Kind::at_most;
    int q = 1;

    static QMode exactly(int q)
    {
        return {Kind::exactly, q};
    }

    static QMode at_most(int q)
    {
        return {Kind::at_most, q};
    }

    // Zero-classified eigenvalues switch every indicator off.
    [[nodiscard]] bool accepts(const Signature &s) const
    {
        if (s.zero != 0) {
            return false;
        }
        return kind == Kind::exactly ? s.negative == q : s.negative <= q;
    }

    [[nodiscard]] std::string to_string() const
    {
        return (kind == Kind::exactly ? "exact:" : "atmost:") + std::to_string(q);
    }

    // "exact:Q" or "atmost:Q".
    static QMode parse(std::string_view text)
    {
        const auto colon = text.find(':');
        if (colon == std::string_view::npos) {
            throw validation_error("q mode '" + std::string(text) + "' must be exact:Q or atmost:Q");
        }
        const auto head = text.substr(0, colon);
        const std::string tail(text.substr(colon + 1));
        int q = 0;
        std::size_t used = 0;
        try {
            q = std::stoi(tail, &used);
        } catch (const std::exception &) {
            used = 0;
        }
        if (used != tail.size() || tail.empty() || q < 0) {
            throw validation_error("q mode '" + std::string(text) + "' has an invalid index");
        }
        if (head == "exact") {
            return exactly(q);
        }
        if (head == "atmost") {
            return at_most(q);
        }
        throw validation_error("q mode '" + std::string(text) + "' must be exact:Q or atmost:Q");
    }

    friend bool operator==(const QMode &, const QMode &) = default;
};

struct MorseEstimate {
    QMode q_mode;
    double mean = 0.0;
    // sample standard deviation / sqrt(samples); draws are i.i.d.
    double std_error = 0.0;
    long long samples = 0;
    int k = 0;
    int n = 0;
    int r = 0;
    MetricKind metric_kind = MetricKind::demailly_gg;
};

struct Verdict {
    MorseEstimate estimate;
    double prefactor = 0.0;
    double lower_bound = 0.0;
    bool positive = false;
};

struct McOptions {
    // Worker threads; 0 picks std::thread::hardware_concurrency().
    int threads = 1;
};

// Samples per block. Block b is drawn from Rng(sub_seed(seed, b)); blocks are merged in index
// order, so results do not depend on the thread count or on how blocks are grouped into chunks.
inline constexpr long long mc_block_size = 4096;

inline constexpr long long min_mc_samples = 1000;

inline long long block_count(long long samples)
{
    return (samples + mc_block_size - 1) / mc_block_size;
}

// (n+kr-1)! / (n! (k!)^r (kr-1)!) * (kr)^{-n}, evaluated through log-gamma.
inline double prefactor(int n, int k, int r)
{
    if (n < 1 || k < 1 || r < 1) {
        throw validation_error("prefactor: n, k, r must be positive");
    }
    if (n + k * r - 1 > 170) {
        throw numerical_error("prefactor: n + kr - 1 exceeds 170");
    }
    const double kr = static_cast<double>(k) * r;
    const double lg = std::lgamma(n + kr) - std::lgamma(n + 1.0) - r * std::lgamma(k + 1.0) - std::lgamma(kr)
                      - n * std::log(kr);
    return std::exp(lg);
}

// Combinatorial constant reported next to each metric family's estimate; the families are never mixed.
//   gg            prefactor(n, k, r)
//   test1/sympow  (n + k(r-1))! / (n! (k(r-1))!)
//   test2         (log k)^n / (n! (k!)^r)
inline double prefactor_for(MetricKind kind, int n, int k, int r)
{
    switch (kind) {
    case MetricKind::demailly_gg:
        return prefactor(n, k, r);
    case MetricKind::test1_wronskian:
    case MetricKind::sympow_wronskian: {
        if (n < 1 || k < 1 || r < 1) {
            throw validation_error("prefactor: n, k, r must be positive");
        }
        const int m = k * (r - 1);
        if (n + m > 170) {
            throw numerical_error("prefactor: n + k(r-1) exceeds 170");
        }
        return std::exp(std::lgamma(n + m + 1.0) - std::lgamma(n + 1.0) - std::lgamma(m + 1.0));
    }
    case MetricKind::test2_invariant: {
        if (n < 1 || k < 1 || r < 1) {
            throw validation_error("prefactor: n, k, r must be positive");
        }
        if (k == 1) {
            return 0.0;
        }
        return std::exp(n * std::log(std::log(static_cast<double>(k))) - std::lgamma(n + 1.0)
                        - r * std::lgamma(k + 1.0));
    }
    }
    return 0.0;
}

inline Verdict make_verdict(const MorseEstimate &est, double prefactor_value)
{
    Verdict v;
    v.estimate = est;
    v.prefactor = prefactor_value;
    v.positive = est.mean - 3.0 * est.std_error > 0.0;
    v.lower_bound = v.positive ? prefactor_value * est.mean : 0.0;
    return v;
}

// Coefficient of m^{n+kr-1} in the section growth: prefactor * mean when the verdict is positive, else 0.
inline double growth_bound(const Verdict &v, int n, int k, int r)
{
    if (v.estimate.q_mode != QMode::at_most(1)) {
        throw validation_error("growth_bound: needs an estimate with q mode atmost:1");
    }
    if (v.estimate.n != n || v.estimate.k != k || v.estimate.r != r) {
        throw validation_error("growth_bound: (n, k, r) do not match the estimate");
    }
    return v.positive ? v.prefactor * v.estimate.mean : 0.0;
}

namespace detail
{

// Per-run precomputation: twists, tensors and the base-sample picker.
class MorseKernel
{
public:
    MorseKernel(const MetricSpec &spec, const BaseScenario &sc, QMode q) : spec_(spec), sc_(sc), q_(q)
    {
        spec.validate();
        validate_scenario(sc);
        if (q.q > sc.n) {
            throw validation_error("q = " + std::to_string(q.q) + " exceeds the base dimension "
                                   + std::to_string(sc.n));
        }
        dims_ = draw_dimensions(spec, sc.r);
        const double omega = fiber_weight_total(spec);
        for (const auto &smp : sc.samples) {
            twists_.push_back(omega * (1.0 - sc.delta) * sc.theta_L.matrix());
            sympow_.push_back(sympow_tensors(spec, smp.model));
            weights_.push_back(smp.weight);
        }
    }

    [[nodiscard]] QMode q_mode() const noexcept
    {
        return q_;
    }

    // Fills out[0..count) with the values of the samples of block `block`.
    void run_block(std::uint64_t seed, long long block, long long count, double *out) const
    {
        Rng gen(sub_seed(seed, static_cast<std::uint64_t>(block)));
        std::normal_distribution<double> normal;
        std::discrete_distribution<std::size_t> pick(weights_.begin(), weights_.end());
        std::vector<Eigen::VectorXcd> draws(dims_.size());
        const int n = sc_.n;
        const double r = static_cast<double>(sc_.r);
        Eigen::MatrixXcd acc(n, n);
        for (long long i = 0; i < count; ++i) {
            const std::size_t b = pick(gen);
            for (std::size_t d = 0; d < dims_.size(); ++d) {
                draws[d] = uniform_unit_vector(dims_[d], gen, normal);
            }
            acc.setZero();
            accumulate_sampler(spec_, sc_.samples[b].model, sympow_[b], draws, acc);
            // gamma = omega (1 - delta) theta_L - r * sampler, so E[gamma] = omega * eta.
            const HermitianForm gamma = HermitianForm::symmetrized(twists_[b] - r * acc);
            const Eigen::VectorXd ev = eigenvalues(gamma);
            out[i] = q_.accepts(signature_of(ev)) ? ev.prod() : 0.0;
        }
    }

private:
    MetricSpec spec_;
    BaseScenario sc_;
    QMode q_;
    std::vector<int> dims_;
    std::vector<Eigen::MatrixXcd> twists_;
    std::vector<std::vector<SymPowerCurvature>> sympow_;
    std::vector<double> weights_;
};

inline int resolve_threads(int threads)
{
    if (threads < 0) {
        throw validation_error("thread count must be nonnegative");
    }
    if (threads == 0) {
        return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    }
    return threads;
}

// Runs blocks [first, last) and writes the samples of block b to values[(b - first) * block size ...].
inline std::vector<double> run_blocks(const MorseKernel &kernel, long long samples, std::uint64_t seed,
                                      long long first, long long last, int threads)
{
    const long long begin_sample = first * mc_block_size;
    const long long end_sample = std::min(samples, last * mc_block_size);
    std::vector<double> values(static_cast<std::size_t>(std::max(0LL, end_sample - begin_sample)));
    std::atomic<long long> next{first};
    auto worker = [&]() {
        for (long long b = next++; b < last; b = next++) {
            const long long lo = b * mc_block_size;
            const long long hi = std::min(samples, lo + mc_block_size);
            kernel.run_block(seed, b, hi - lo, values.data() + (lo - begin_sample));
        }
    };
    const int t = std::max(1, std::min<int>(resolve_threads(threads), static_cast<int>(last - first)));
    if (t == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (int i = 0; i < t; ++i) {
            pool.emplace_back(worker);
        }
    }
    return values;
}

inline void check_samples(long long samples)
{
    if (samples < min_mc_samples) {
        throw validation_error("Monte Carlo needs at least " + std::to_string(min_mc_samples) + " samples");
    }
}

} // namespace detail

// Per-sample integrand values 1_q(gamma) * det(gamma) in stream order.
inline std::vector<double> sample_values(const MetricSpec &spec, const BaseScenario &sc, QMode q, long long samples,
                                         std::uint64_t seed, McOptions opts = {})
{
    detail::check_samples(samples);
    const detail::MorseKernel kernel(spec, sc, q);
    return detail::run_blocks(kernel, samples, seed, 0, block_count(samples), opts.threads);
}

// Welford summaries of blocks [first, last) of a run; a chunk of the full computation.
inline std::vector<RunningStats> block_stats(const MetricSpec &spec, const BaseScenario &sc, QMode q,
                                             long long samples, std::uint64_t seed, long long first, long long last,
                                             McOptions opts = {})
{
    detail::check_samples(samples);
    const long long blocks = block_count(samples);
    if (first < 0 || last > blocks || first > last) {
        throw validation_error("block range out of bounds");
    }
    const detail::MorseKernel kernel(spec, sc, q);
    const std::vector<double> values = detail::run_blocks(kernel, samples, seed, first, last, opts.threads);
    std::vector<RunningStats> out;
    for (long long b = first; b < last; ++b) {
        RunningStats st;
        const long long lo = (b - first) * mc_block_size;
        const long long hi = std::min<long long>(static_cast<long long>(values.size()), lo + mc_block_size);
        for (long long i = lo; i < hi; ++i) {
            st.add(values[static_cast<std::size_t>(i)]);
        }
        out.push_back(st);
    }
    return out;
}

// Folds block summaries left to right in block order.
inline RunningStats merge_blocks(const std::vector<RunningStats> &blocks)
{
    RunningStats total;
    for (const auto &b : blocks) {
        total.merge(b);
    }
    return total;
}

inline MorseEstimate make_estimate(const MetricSpec &spec, const BaseScenario &sc, QMode q, const RunningStats &st)
{
    MorseEstimate est;
    est.q_mode = q;
    est.mean = st.mean;
    est.std_error = st.std_error();
    est.samples = st.count;
    est.k = spec.k;
    est.n = sc.n;
    est.r = sc.r;
    est.metric_kind = spec.kind;
    return est;
}

// Computes the run as `chunks` independent contiguous block ranges, then concatenates their block
// summaries and folds them in block order; equal to fiber_mc bit for bit.
inline MorseEstimate fiber_mc_chunked(const MetricSpec &spec, const BaseScenario &sc, QMode q, long long samples,
                                      std::uint64_t seed, int chunks, McOptions opts = {})
{
    detail::check_samples(samples);
    if (chunks < 1) {
        throw validation_error("chunk count must be positive");
    }
    const long long blocks = block_count(samples);
    std::vector<RunningStats> all;
    for (int c = 0; c < chunks; ++c) {
        const long long first = blocks * c / chunks;
        const long long last = blocks * (c + 1) / chunks;
        auto part = block_stats(spec, sc, q, samples, seed, first, last, opts);
        all.insert(all.end(), part.begin(), part.end());
    }
    return make_estimate(spec, sc, q, merge_blocks(all));
}

// Monte Carlo estimate of the fiber-averaged Morse integral of 1_q(gamma) gamma^n, where per sample
// a base point is picked by weight, the fiber draws are uniform on the unit spheres, and
// gamma = omega (1 - delta) theta_L - r * curvature_sampler, omega = fiber_weight_total(spec).
inline MorseEstimate fiber_mc(const MetricSpec &spec, const BaseScenario &sc, QMode q, long long samples,
                              std::uint64_t seed, McOptions opts = {})
{
    return fiber_mc_chunked(spec, sc, q, samples, seed, 1, opts);
}

// omega^n * sum_b weight_b * 1_q(eta_b) * det(eta_b).
inline double closed_form(const BaseScenario &sc, double omega, QMode q)
{
    double total = 0.0;
    for (std::size_t b = 0; b < sc.samples.size(); ++b) {
        const Eigen::VectorXd ev = eigenvalues(eta_form(sc, b));
        if (q.accepts(signature_of(ev))) {
            total += sc.samples[b].weight * ev.prod();
        }
    }
    return std::pow(omega, sc.n) * total;
}

// H_k^n * sum_b weight_b * 1_q(eta_b) * det(eta_b): the large-k limit for the gg metric.
inline double closed_form(const BaseScenario &sc, int k, QMode q)
{
    return closed_form(sc, harmonic(k), q);
}

struct DeltaPoint {
    double delta = 0.0;
    Verdict verdict;
};

struct DeltaScan {
    std::vector<DeltaPoint> points;
    std::optional<double> best_delta;
    double log_k_over_k = 0.0;
};

// Runs fiber_mc for every twist strength of an ascending grid and keeps the largest with a positive verdict.
inline DeltaScan delta_scan(const MetricSpec &spec, const BaseScenario &sc, const std::vector<double> &grid,
                            long long samples, std::uint64_t seed, QMode q = QMode::at_most(1), McOptions opts = {})
{
    if (grid.empty()) {
        throw validation_error("delta_scan: empty grid");
    }
    if (!std::is_sorted(grid.begin(), grid.end())) {
        throw validation_error("delta_scan: grid must be sorted ascending");
    }
    DeltaScan out;
    out.log_k_over_k = std::log(static_cast<double>(spec.k)) / spec.k;
    const double pre = prefactor_for(spec.kind, sc.n, spec.k, sc.r);
    for (double d : grid) {
        const BaseScenario twisted = sc.with_delta(d);
        const Verdict v = make_verdict(fiber_mc(spec, twisted, q, samples, seed, opts), pre);
        out.points.push_back({d, v});
        if (v.positive) {
            out.best_delta = d;
        }
    }
    return out;
}

struct ConvergenceReport {
    std::vector<double> batch_means;
    double grand_mean = 0.0;
    double ci_half_width = 0.0;
    // ci_half_width / |grand_mean|; infinity when the mean is zero but the interval is not.
    double ratio = 0.0;
    bool converged = false;
};

inline constexpr double convergence_threshold = 0.05;

// Batch-means diagnostic: the stream is cut into `batches` contiguous batches and a 95% Student-t
// interval is put on the grand mean from the spread of the batch means.
inline ConvergenceReport convergence_diag(const MetricSpec &spec, const BaseScenario &sc, QMode q, long long samples,
                                          int batches, std::uint64_t seed, McOptions opts = {})
{
    if (batches < 10) {
        throw validation_error("convergence_diag: needs at least 10 batches");
    }
    if (samples / batches < 100) {
        throw validation_error("convergence_diag: needs at least 100 samples per batch");
    }
    const std::vector<double> values = sample_values(spec, sc, q, samples, seed, opts);
    ConvergenceReport rep;
    RunningStats over_batches;
    RunningStats all;
    for (int b = 0; b < batches; ++b) {
        const long long lo = samples * b / batches;
        const long long hi = samples * (b + 1) / batches;
        RunningStats st;
        for (long long i = lo; i < hi; ++i) {
            st.add(values[static_cast<std::size_t>(i)]);
        }
        rep.batch_means.push_back(st.mean);
        over_batches.add(st.mean);
        all.merge(st);
    }
    rep.grand_mean = all.mean;
    const boost::math::students_t dist(batches - 1.0);
    const double t = boost::math::quantile(boost::math::complement(dist, 0.025));
    rep.ci_half_width = t * std::sqrt(over_batches.variance() / batches);
    if (rep.ci_half_width == 0.0) {
        rep.ratio = 0.0;
    } else if (rep.grand_mean == 0.0) {
        rep.ratio = std::numeric_limits<double>::infinity();
    } else {
        rep.ratio = rep.ci_half_width / std::abs(rep.grand_mean);
    }
    rep.converged = rep.ratio <= convergence_threshold;
    return rep;
}

} // namespace jetmorse

#endif
