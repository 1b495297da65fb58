#ifndef JETMORSE_CLI_HPP
#define JETMORSE_CLI_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include <jetmorse/error.hpp>
#include <jetmorse/hermitian.hpp>
#include <jetmorse/jet.hpp>
#include <jetmorse/metrics.hpp>
#include <jetmorse/morse.hpp>
#include <jetmorse/sampling.hpp>
#include <jetmorse/scenario_io.hpp>
#include <jetmorse/sym_power.hpp>
#include <jetmorse/wronskian.hpp>

namespace jetmorse
{

namespace cli
{

using json = nlohmann::json;

inline const std::vector<std::string> &command_names()
{
    static const std::vector<std::string> names{"act",   "wronskian",  "invariants", "curvature", "fd-check",
                                                "sympow", "morse",     "delta-scan", "converge",  "report"};
    return names;
}

inline constexpr double fd_threshold = 1e-3;

inline const char *csv_header = "metric_kind,k,n,r,q_mode,delta,N,seed,mean,stderr,prefactor,lower_bound,positive";

// Everything a run needs; strings are parsed inside run() so bad values map to exit code 2.
struct RunConfig {
    std::string command;
    std::string scenario;
    std::string jet;
    std::string metric;
    int k = 0;
    std::string p = "auto";
    double eps0 = 0.1;
    int l_max = 3;
    std::string q;
    long long samples = 0;
    int batches = 20;
    std::optional<std::uint64_t> seed;
    std::string delta_grid;
    std::string out;
    std::vector<std::string> inputs;
    double fd_step = 1e-3;
    int threads = 1;
};

inline std::string fmt(double x)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

inline std::vector<double> parse_delta_grid(const std::string &text)
{
    std::vector<double> parts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ':')) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(item, &used);
        } catch (const std::exception &) {
            used = 0;
        }
        if (used == 0 || used != item.size() || !std::isfinite(v)) {
            throw validation_error("--delta-grid: '" + text + "' is not a:b:step");
        }
        parts.push_back(v);
    }
    if (parts.size() != 3) {
        throw validation_error("--delta-grid: '" + text + "' is not a:b:step");
    }
    const double a = parts[0], b = parts[1], step = parts[2];
    if (!(step > 0.0) || b < a || a < 0.0) {
        throw validation_error("--delta-grid: needs 0 <= a <= b and step > 0");
    }
    const double count = std::floor((b - a) / step + 1e-9);
    if (count > 10000) {
        throw validation_error("--delta-grid: more than 10000 points");
    }
    std::vector<double> grid;
    for (long long i = 0; i <= static_cast<long long>(count); ++i) {
        grid.push_back(a + static_cast<double>(i) * step);
    }
    return grid;
}

inline long long parse_p(const std::string &text)
{
    if (text == "auto") {
        return 0;
    }
    std::size_t used = 0;
    long long v = 0;
    try {
        v = std::stoll(text, &used);
    } catch (const std::exception &) {
        used = 0;
    }
    if (used == 0 || used != text.size() || v < 1) {
        throw validation_error("--p: expected a positive integer or 'auto'");
    }
    return v;
}

inline MetricSpec metric_of(const RunConfig &c)
{
    if (c.metric.empty()) {
        throw validation_error(c.command + ": --metric is required");
    }
    if (c.k < 1) {
        throw validation_error(c.command + ": --k is required");
    }
    return MetricSpec::make(parse_metric_kind(c.metric), c.k, parse_p(c.p), c.eps0, c.l_max);
}

inline QMode q_of(const RunConfig &c)
{
    if (c.q.empty()) {
        throw validation_error(c.command + ": --q is required");
    }
    return QMode::parse(c.q);
}

inline std::uint64_t seed_of(const RunConfig &c)
{
    if (!c.seed) {
        throw validation_error(c.command + ": --seed is required");
    }
    return *c.seed;
}

inline void require(bool ok, const std::string &msg)
{
    if (!ok) {
        throw validation_error(msg);
    }
}

inline BaseScenario scenario_of(const RunConfig &c)
{
    require(!c.scenario.empty(), c.command + ": --scenario is required");
    return parse_scenario(c.scenario);
}

inline json jet_file(const RunConfig &c)
{
    require(!c.jet.empty(), c.command + ": --jet is required");
    return io::parse_json_text(io::read_file(c.jet), c.jet);
}

inline void write_text(const std::string &path, const std::string &text)
{
    std::ofstream f(path, std::ios::binary);
    if (!f) {
        throw validation_error(path + ": cannot write file");
    }
    f << text;
}

// Prints the summary and writes PREFIX.json when an output prefix is set.
inline void emit_json(const RunConfig &c, const json &doc, std::ostream &out)
{
    const std::string text = doc.dump(2) + "\n";
    if (!c.out.empty()) {
        write_text(c.out + ".json", text);
    }
    out << text;
}

inline json complex_vector(const std::vector<cplx> &v)
{
    json a = json::array();
    for (cplx z : v) {
        a.push_back(io::complex_to_json(z));
    }
    return a;
}

inline json real_vector(const Eigen::VectorXd &v)
{
    json a = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        a.push_back(v(i));
    }
    return a;
}

inline json signature_json(const Signature &s)
{
    return {{"negative", s.negative}, {"zero", s.zero}, {"positive", s.positive}};
}

inline std::string csv_row(const Verdict &v, double delta, std::uint64_t seed)
{
    const MorseEstimate &e = v.estimate;
    std::string row;
    row += std::string(to_string(e.metric_kind)) + ",";
    row += std::to_string(e.k) + "," + std::to_string(e.n) + "," + std::to_string(e.r) + ",";
    row += e.q_mode.to_string() + ",";
    row += fmt(delta) + ",";
    row += std::to_string(e.samples) + ",";
    row += std::to_string(seed) + ",";
    row += fmt(e.mean) + "," + fmt(e.std_error) + "," + fmt(v.prefactor) + "," + fmt(v.lower_bound) + ",";
    row += v.positive ? "true" : "false";
    return row;
}

inline json verdict_json(const Verdict &v, double delta, std::uint64_t seed)
{
    const MorseEstimate &e = v.estimate;
    return {{"metric_kind", std::string(to_string(e.metric_kind))},
            {"k", e.k},
            {"n", e.n},
            {"r", e.r},
            {"q_mode", e.q_mode.to_string()},
            {"delta", delta},
            {"N", e.samples},
            {"seed", seed},
            {"mean", e.mean},
            {"stderr", e.std_error},
            {"prefactor", v.prefactor},
            {"lower_bound", v.lower_bound},
            {"positive", v.positive}};
}

inline json metric_json(const MetricSpec &spec, double eps0)
{
    json m{{"kind", std::string(to_string(spec.kind))}, {"k", spec.k}, {"p", spec.p}, {"eps0", eps0}};
    if (spec.kind == MetricKind::sympow_wronskian) {
        m["l_max"] = spec.l_max;
    }
    return m;
}

inline void write_csv(const RunConfig &c, const std::vector<std::string> &rows)
{
    std::string text = std::string(csv_header) + "\n";
    for (const auto &r : rows) {
        text += r + "\n";
    }
    write_text(c.out + ".csv", text);
}

// ---- commands ----

inline int cmd_act(const RunConfig &c, std::ostream &out)
{
    const json doc = jet_file(c);
    const Jet j = io::jet_from_json(doc);
    require(doc.contains("alpha"), c.jet + ": 'alpha' is required for act");
    const Reparam phi = io::reparam_from_json(doc.at("alpha"));
    require(phi.order() == j.k(), c.jet + ": alpha has order " + std::to_string(phi.order()) + ", jet has k = "
                                      + std::to_string(j.k()));
    const Jet moved = act(phi, j);
    emit_json(c, {{"command", "act"}, {"k", j.k()}, {"r", j.r()}, {"xi", io::matrix_to_json(moved.xi())}}, out);
    return 0;
}

inline int cmd_wronskian(const RunConfig &c, std::ostream &out)
{
    const Jet j = io::jet_from_json(jet_file(c));
    json levels = json::array();
    for (int l = 1; l <= std::min(j.k(), j.r()); ++l) {
        const WedgeWronskian w = wedge_wronskian(j, l);
        levels.push_back({{"l", l}, {"weight", wronskian_weight(l)}, {"norm", w.norm},
                          {"components", complex_vector(w.components)}});
    }
    emit_json(c, {{"command", "wronskian"}, {"k", j.k()}, {"r", j.r()}, {"levels", levels}}, out);
    return 0;
}

inline int cmd_invariants(const RunConfig &c, std::ostream &out)
{
    const Jet j = io::jet_from_json(jet_file(c));
    NormalizedJet nj;
    try {
        nj = normalize_jet(j);
    } catch (const degenerate_jet_error &e) {
        std::string msg = e.what();
        if (const auto pivot = suggest_pivot_component(j); pivot && *pivot != 1) {
            msg += "; component " + std::to_string(*pivot) + " is immersive, swap it to the front";
        }
        throw degenerate_jet_error(msg);
    }
    json nums = json::array();
    for (const auto &q : nj.numerators) {
        nums.push_back({{"component", q.component}, {"order", q.order}, {"value", io::complex_to_json(q.value)}});
    }
    emit_json(c, {{"command", "invariants"}, {"k", j.k()}, {"r", j.r()}, {"eta", io::matrix_to_json(nj.eta.xi())},
                  {"numerators", nums}},
              out);
    return 0;
}

inline int cmd_curvature(const RunConfig &c, std::ostream &out)
{
    const BaseScenario sc = scenario_of(c);
    const MetricSpec spec = metric_of(c);
    const double omega = fiber_weight_total(spec);
    json samples = json::array();
    for (std::size_t b = 0; b < sc.samples.size(); ++b) {
        const HermitianForm tr = fiber_trace(sc.samples[b].model);
        const HermitianForm eta = eta_form(sc, b);
        const Eigen::VectorXd ev = eigenvalues(eta);
        samples.push_back({{"weight", sc.samples[b].weight},
                           {"fiber_trace", io::matrix_to_json(tr.matrix())},
                           {"expected_sampler", io::matrix_to_json((omega / sc.r) * tr.matrix())},
                           {"eta", io::matrix_to_json(eta.matrix())},
                           {"eta_eigenvalues", real_vector(ev)},
                           {"eta_signature", signature_json(signature_of(ev))},
                           {"eta_det", top_power(eta)}});
    }
    json doc{{"command", "curvature"}, {"metric", metric_json(spec, c.eps0)}, {"fiber_weight_total", omega},
             {"delta", sc.delta}, {"samples", samples}};
    if (!c.q.empty()) {
        const QMode q = q_of(c);
        doc["q_mode"] = q.to_string();
        doc["closed_form"] = closed_form(sc, omega, q);
    }
    emit_json(c, doc, out);
    return 0;
}

inline int cmd_fd_check(const RunConfig &c, std::ostream &out, std::ostream &err)
{
    const BaseScenario sc = scenario_of(c);
    const MetricSpec spec = metric_of(c);
    Jet j = Jet::zero(spec.k, sc.r);
    if (!c.jet.empty()) {
        j = io::jet_from_json(jet_file(c));
    } else {
        Rng gen(sub_seed(seed_of(c), 0));
        std::normal_distribution<double> normal;
        Eigen::MatrixXcd xi(spec.k, sc.r);
        for (int s = 0; s < spec.k; ++s) {
            for (int a = 0; a < sc.r; ++a) {
                const double re = normal(gen);
                const double im = normal(gen);
                xi(s, a) = cplx{re, im};
            }
        }
        j = Jet(xi);
    }
    double worst = 0.0;
    json samples = json::array();
    for (std::size_t b = 0; b < sc.samples.size(); ++b) {
        const FdCheck fd = curvature_fd_check(spec, sc.samples[b].model, j, c.fd_step);
        worst = std::max(worst, fd.max_rel_deviation);
        samples.push_back({{"max_rel_deviation", fd.max_rel_deviation},
                           {"finite_difference", io::matrix_to_json(fd.finite_difference)},
                           {"formula", io::matrix_to_json(fd.formula)}});
    }
    emit_json(c, {{"command", "fd-check"}, {"metric", metric_json(spec, c.eps0)}, {"step", c.fd_step}, {"max_deviation", worst},
                  {"threshold", fd_threshold}, {"samples", samples}},
              out);
    err << "max deviation " << fmt(worst) << "\n";
    if (!(worst <= fd_threshold)) {
        err << "fd-check: deviation above " << fd_threshold << "\n";
        return 3;
    }
    return 0;
}

inline int cmd_sympow(const RunConfig &c, std::ostream &out)
{
    const BaseScenario sc = scenario_of(c);
    require(c.l_max >= 1, "sympow: --lmax must be positive");
    json samples = json::array();
    for (const auto &smp : sc.samples) {
        json levels = json::array();
        for (int l = 1; l <= c.l_max; ++l) {
            const SymPowerCurvature spc = sym_power_curvature(smp.model, l);
            json frame = json::array();
            for (const auto &a : spc.frame) {
                frame.push_back(a);
            }
            levels.push_back({{"l", l}, {"dim", spc.dim()}, {"frame", frame}, {"c", io::model_to_json(spc.C)},
                              {"fiber_trace", io::matrix_to_json(fiber_trace(spc.C).matrix())}});
        }
        samples.push_back({{"weight", smp.weight}, {"levels", levels}});
    }
    emit_json(c, {{"command", "sympow"}, {"l_max", c.l_max}, {"samples", samples}}, out);
    return 0;
}

inline int cmd_morse(const RunConfig &c, std::ostream &out)
{
    require(!c.out.empty(), "morse: --out is required");
    const BaseScenario sc = scenario_of(c);
    const MetricSpec spec = metric_of(c);
    const QMode q = q_of(c);
    const std::uint64_t seed = seed_of(c);
    const MorseEstimate est = fiber_mc(spec, sc, q, c.samples, seed, {c.threads});
    const Verdict v = make_verdict(est, prefactor_for(spec.kind, sc.n, spec.k, sc.r));
    write_csv(c, {csv_row(v, sc.delta, seed)});
    const double omega = fiber_weight_total(spec);
    json doc = verdict_json(v, sc.delta, seed);
    doc["command"] = "morse";
    doc["metric"] = metric_json(spec, c.eps0);
    doc["fiber_weight_total"] = omega;
    doc["closed_form_isotropic"] = closed_form(sc, omega, q);
    emit_json(c, doc, out);
    return 0;
}

inline int cmd_delta_scan(const RunConfig &c, std::ostream &out)
{
    require(!c.out.empty(), "delta-scan: --out is required");
    require(!c.delta_grid.empty(), "delta-scan: --delta-grid is required");
    const BaseScenario sc = scenario_of(c);
    const MetricSpec spec = metric_of(c);
    const QMode q = q_of(c);
    const std::uint64_t seed = seed_of(c);
    const DeltaScan scan = delta_scan(spec, sc, parse_delta_grid(c.delta_grid), c.samples, seed, q, {c.threads});
    std::vector<std::string> rows;
    json points = json::array();
    for (const auto &pt : scan.points) {
        rows.push_back(csv_row(pt.verdict, pt.delta, seed));
        points.push_back(verdict_json(pt.verdict, pt.delta, seed));
    }
    write_csv(c, rows);
    json doc{{"command", "delta-scan"}, {"metric", metric_json(spec, c.eps0)}, {"points", points},
             {"log_k_over_k", scan.log_k_over_k}};
    doc["best_delta"] = scan.best_delta ? json(*scan.best_delta) : json(nullptr);
    emit_json(c, doc, out);
    return 0;
}

inline int cmd_converge(const RunConfig &c, std::ostream &out)
{
    require(!c.out.empty(), "converge: --out is required");
    const BaseScenario sc = scenario_of(c);
    const MetricSpec spec = metric_of(c);
    const QMode q = q_of(c);
    const std::uint64_t seed = seed_of(c);
    const ConvergenceReport rep = convergence_diag(spec, sc, q, c.samples, c.batches, seed, {c.threads});
    RunningStats over;
    for (double m : rep.batch_means) {
        over.add(m);
    }
    MorseEstimate est;
    est.q_mode = q;
    est.mean = rep.grand_mean;
    est.std_error = over.std_error();
    est.samples = c.samples;
    est.k = spec.k;
    est.n = sc.n;
    est.r = sc.r;
    est.metric_kind = spec.kind;
    const Verdict v = make_verdict(est, prefactor_for(spec.kind, sc.n, spec.k, sc.r));
    write_csv(c, {csv_row(v, sc.delta, seed)});
    json doc = verdict_json(v, sc.delta, seed);
    doc["command"] = "converge";
    doc["metric"] = metric_json(spec, c.eps0);
    doc["batches"] = c.batches;
    doc["batch_means"] = rep.batch_means;
    doc["ci_half_width"] = rep.ci_half_width;
    doc["ratio"] = std::isfinite(rep.ratio) ? json(rep.ratio) : json(nullptr);
    doc["threshold"] = convergence_threshold;
    doc["converged"] = rep.converged;
    emit_json(c, doc, out);
    return 0;
}

struct CsvRecord {
    std::string metric_kind;
    int k = 0;
    int n = 0;
    int r = 0;
    std::string q_mode;
    double delta = 0.0;
    long long samples = 0;
    double mean = 0.0;
    double std_error = 0.0;
};

inline std::vector<CsvRecord> read_result_csv(const std::string &path)
{
    std::istringstream in(io::read_file(path));
    std::string line;
    if (!std::getline(in, line) || line != csv_header) {
        throw validation_error(path + ": not a result file (header mismatch)");
    }
    std::vector<CsvRecord> out;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) {
            continue;
        }
        std::vector<std::string> f;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            f.push_back(cell);
        }
        if (f.size() != 13) {
            throw validation_error(path + ":" + std::to_string(lineno) + ": expected 13 columns");
        }
        try {
            CsvRecord rec;
            rec.metric_kind = f[0];
            rec.k = std::stoi(f[1]);
            rec.n = std::stoi(f[2]);
            rec.r = std::stoi(f[3]);
            rec.q_mode = f[4];
            rec.delta = std::stod(f[5]);
            rec.samples = std::stoll(f[6]);
            rec.mean = std::stod(f[8]);
            rec.std_error = std::stod(f[9]);
            out.push_back(rec);
        } catch (const std::exception &) {
            throw validation_error(path + ":" + std::to_string(lineno) + ": malformed number");
        }
    }
    return out;
}

// Table of mean against k, one row per (metric kind, q mode, delta, k), with H_k^n alongside.
inline int cmd_report(const RunConfig &c, std::ostream &out)
{
    require(!c.out.empty(), "report: --out is required");
    require(!c.inputs.empty(), "report: at least one input CSV is required");
    std::vector<CsvRecord> recs;
    for (const auto &path : c.inputs) {
        const auto part = read_result_csv(path);
        recs.insert(recs.end(), part.begin(), part.end());
    }
    std::stable_sort(recs.begin(), recs.end(), [](const CsvRecord &a, const CsvRecord &b) {
        return std::tie(a.metric_kind, a.q_mode, a.delta, a.k) < std::tie(b.metric_kind, b.q_mode, b.delta, b.k);
    });
    std::string table = "metric_kind,q_mode,delta,k,n,r,N,mean,stderr,hk_pow_n,mean_over_hk_pow_n\n";
    std::string plot = "metric_kind,k,mean,stderr,hk_pow_n\n";
    json rows = json::array();
    for (const auto &rc : recs) {
        const double ref = std::pow(harmonic(rc.k), rc.n);
        table += rc.metric_kind + "," + rc.q_mode + "," + fmt(rc.delta) + "," + std::to_string(rc.k) + ","
                 + std::to_string(rc.n) + "," + std::to_string(rc.r) + "," + std::to_string(rc.samples) + ","
                 + fmt(rc.mean) + "," + fmt(rc.std_error) + "," + fmt(ref) + "," + fmt(rc.mean / ref) + "\n";
        plot += rc.metric_kind + "," + std::to_string(rc.k) + "," + fmt(rc.mean) + "," + fmt(rc.std_error) + ","
                + fmt(ref) + "\n";
        rows.push_back({{"metric_kind", rc.metric_kind}, {"q_mode", rc.q_mode}, {"delta", rc.delta}, {"k", rc.k},
                        {"n", rc.n}, {"r", rc.r}, {"N", rc.samples}, {"mean", rc.mean}, {"stderr", rc.std_error},
                        {"hk_pow_n", ref}});
    }
    write_text(c.out + ".csv", table);
    write_text(c.out + "_plot.csv", plot);
    emit_json(c, {{"command", "report"}, {"rows", rows}}, out);
    return 0;
}

// Executes one command. 0 success, 2 validation failure, 3 numerical guard; diagnostics go to err.
inline int run(const RunConfig &c, std::ostream &out = std::cout, std::ostream &err = std::cerr)
{
    try {
        if (c.command == "act") {
            return cmd_act(c, out);
        }
        if (c.command == "wronskian") {
            return cmd_wronskian(c, out);
        }
        if (c.command == "invariants") {
            return cmd_invariants(c, out);
        }
        if (c.command == "curvature") {
            return cmd_curvature(c, out);
        }
        if (c.command == "fd-check") {
            return cmd_fd_check(c, out, err);
        }
        if (c.command == "sympow") {
            return cmd_sympow(c, out);
        }
        if (c.command == "morse") {
            return cmd_morse(c, out);
        }
        if (c.command == "delta-scan") {
            return cmd_delta_scan(c, out);
        }
        if (c.command == "converge") {
            return cmd_converge(c, out);
        }
        if (c.command == "report") {
            return cmd_report(c, out);
        }
        throw validation_error("unknown command '" + c.command + "'");
    } catch (const validation_error &e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const numerical_error &e) {
        err << "numerical error: " << e.what() << "\n";
        return 3;
    } catch (const nlohmann::json::exception &e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
}

// JETMORSE_THREADS: integer, 0 = auto. Unset means one thread.
inline int threads_from_env(const char *value)
{
    if (value == nullptr || *value == '\0') {
        return 1;
    }
    const std::string text(value);
    std::size_t used = 0;
    int v = -1;
    try {
        v = std::stoi(text, &used);
    } catch (const std::exception &) {
        used = 0;
    }
    if (used != text.size() || v < 0) {
        throw validation_error("JETMORSE_THREADS must be a non-negative integer");
    }
    return v;
}

inline int main_entry(int argc, char **argv, std::ostream &out = std::cout, std::ostream &err = std::cerr)
{
    CLI::App app{"Jet metrics, Wronskian invariants and Monte Carlo Morse integrals"};
    app.name("jetmorse");
    RunConfig c;
    std::uint64_t seed = 0;
    app.add_option("command", c.command, "command to run")->required()->check(CLI::IsMember(command_names()));
    app.add_option("inputs", c.inputs, "result CSV files (report)");
    app.add_option("--scenario", c.scenario, "scenario JSON file");
    app.add_option("--jet", c.jet, "jet JSON file {xi, alpha}");
    app.add_option("--metric", c.metric, "gg | test1 | test2 | sympow");
    app.add_option("--k", c.k, "jet order");
    app.add_option("--p", c.p, "exponent or 'auto'");
    app.add_option("--eps0", c.eps0, "eps_s = eps0^s");
    app.add_option("--lmax", c.l_max, "largest symmetric power (sympow)");
    app.add_option("--q", c.q, "exact:Q | atmost:Q");
    app.add_option("--samples", c.samples, "Monte Carlo sample count");
    auto *seed_opt = app.add_option("--seed", seed, "64-bit seed");
    app.add_option("--delta-grid", c.delta_grid, "a:b:step");
    app.add_option("--batches", c.batches, "batches for converge");
    app.add_option("--out", c.out, "output prefix");
    app.add_option("--step", c.fd_step, "finite-difference step (fd-check)");
    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError &e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
    if (seed_opt->count() > 0) {
        c.seed = seed;
    }
    try {
        c.threads = threads_from_env(std::getenv("JETMORSE_THREADS"));
    } catch (const validation_error &e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
    return run(c, out, err);
}

} // namespace cli

using cli::RunConfig;

} // namespace jetmorse

#endif
