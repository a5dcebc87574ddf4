#include "tlab/runner.hpp"

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <map>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "tlab/bsreg.hpp"
#include "tlab/diagnostics.hpp"
#include "tlab/fewbody.hpp"
#include "tlab/twobody.hpp"

namespace tlab {

namespace {

using nlohmann::json;

struct BoundFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

std::string fmt_label(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%g", x);
    return buf;
}

json threshold_json(const ThresholdReport& r) {
    return {{"lambda_lo", r.lambda_lo},
            {"lambda_hi", r.lambda_hi},
            {"lambda_cr", r.lambda_cr},
            {"residual", r.residual},
            {"iterations", r.iterations}};
}

const char* resonance_name(ResonanceClass c) {
    switch (c) {
        case ResonanceClass::subcritical: return "subcritical";
        case ResonanceClass::resonant: return "resonant";
        case ResonanceClass::bound: return "supercritical";
    }
    return "?";
}

const PairPotential& require_pair(const SystemSpec& sys, int i, int j) {
    const PairPotential* p = sys.pair(i, j);
    if (!p) {
        std::ostringstream os;
        os << "config: potential for pair (" << i << "," << j << ") required";
        throw std::invalid_argument(os.str());
    }
    return *p;
}

std::vector<double> default_or(const std::vector<double>& v,
                               std::initializer_list<double> d) {
    return v.empty() ? std::vector<double>(d) : v;
}

// -- subcommand payloads; each fills `report` and may emit CSV tables -------

void run_twobody_threshold(const ExperimentConfig& c, json& report,
                           std::map<std::string, std::string>& csv) {
    const auto grid = RadialGrid::composite_gl(c.solver.r_max, c.solver.n);
    const PairPotential& v = require_pair(c.system, 0, 1);
    const ThresholdReport rep = critical_coupling_2b(v, grid);
    report["threshold"] = threshold_json(rep);
    const double lam = c.experiment.lambda > 0.0 ? c.experiment.lambda : rep.lambda_cr;
    report["resonance"] = {
        {"lambda", lam},
        {"class", resonance_name(resonance_check(v, lam, c.experiment.tol, grid))}};
    const auto sl = scattering_length(v, lam);
    report["scattering_length"] = {{"a", sl.a},
                                   {"divergent", sl.divergent},
                                   {"converged", sl.converged}};
    std::ostringstream os;
    os << "lambda_lo,lambda_hi,lambda_cr,residual,iterations\n"
       << fmt(rep.lambda_lo) << ',' << fmt(rep.lambda_hi) << ','
       << fmt(rep.lambda_cr) << ',' << fmt(rep.residual) << ',' << rep.iterations
       << '\n';
    csv["threshold.csv"] = os.str();
}

void run_defs_probe(const ExperimentConfig& c, json& report,
                    std::map<std::string, std::string>& csv) {
    if (!(c.experiment.lambda > 0.0))
        throw std::invalid_argument("defs-probe: experiment.lambda required");
    const PairPotential& v = require_pair(c.system, 0, 1);
    const auto eps = default_or(c.experiment.epsilons, {0.01, 0.1});
    const DefsProbeReport rep =
        defs_probe(v, c.experiment.lambda, eps, c.experiment.probe_r_max,
                   c.experiment.probe_n);
    json entries = json::array();
    std::ostringstream os;
    os << "epsilon,def1_min_eig,def2_min_eig,def3_min_eig,def1_holds,def2_holds,def3_holds\n";
    for (const auto& e : rep.entries) {
        entries.push_back({{"epsilon", e.epsilon},
                           {"def1_min_eig", e.def1_min_eig},
                           {"def2_min_eig", e.def2_min_eig},
                           {"def3_min_eig", e.def3_min_eig},
                           {"def1_holds", e.def1_holds},
                           {"def2_holds", e.def2_holds},
                           {"def3_holds", e.def3_holds}});
        os << fmt(e.epsilon) << ',' << fmt(e.def1_min_eig) << ','
           << fmt(e.def2_min_eig) << ',' << fmt(e.def3_min_eig) << ','
           << e.def1_holds << ',' << e.def2_holds << ',' << e.def3_holds << '\n';
    }
    report["defs_probe"] = {{"lambda", rep.lambda},
                            {"entries", entries},
                            {"eps0_max", rep.eps0_max},
                            {"eps0_witness_eig", rep.eps0_witness_eig},
                            {"hardy_witness_eig", rep.hardy_witness_eig},
                            {"hardy_holds", rep.hardy_holds}};
    csv["defs_probe.csv"] = os.str();
}

void run_kernel_bounds(const ExperimentConfig& c, json& report,
                       std::map<std::string, std::string>& csv) {
    if (c.system.size() < 3)
        throw std::invalid_argument("kernel-bounds: needs a 3-particle system");
    if (!(c.experiment.lambda > 0.0))
        throw std::invalid_argument("kernel-bounds: experiment.lambda required");
    const PairPotential& v12 = require_pair(c.system, 0, 1);
    const PairPotential& v23 = require_pair(c.system, 1, 2);
    const JacobiFrame frame = build_frame(c.system.masses, {0, 1, 2});

    const KernelBoundReport kb = c0_constant(v12, v23, frame);
    report["c0"] = {{"c0", kb.c0},
                    {"factor1", kb.factor1},
                    {"factor2", kb.factor2},
                    {"factor3", kb.factor3},
                    {"gamma", kb.gamma}};

    const auto ks = default_or(c.experiment.k_values, {0.0, 0.1, 1.0});
    bool all_ok = true;
    json wegot = json::array();
    std::ostringstream os;
    os << "k,wegot_value,wegot_bound,ok\n";
    for (double k : ks) {
        const WegotCheck w = wegot_bound_check(k);
        wegot.push_back(
            {{"k", w.k_n}, {"value", w.value}, {"bound", w.bound}, {"ok", w.ok}});
        os << fmt(w.k_n) << ',' << fmt(w.value) << ',' << fmt(w.bound) << ','
           << w.ok << '\n';
        all_ok = all_ok && w.ok;
    }
    report["wegot"] = wegot;
    csv["wegot.csv"] = os.str();

    const auto grid = RadialGrid::composite_gl(c.solver.r_max, c.solver.n);
    const RTauReport rt = rtau_norm_bound(v12, c.experiment.lambda, ks, grid);
    json entries = json::array();
    for (const auto& e : rt.entries)
        entries.push_back(
            {{"k", e.k}, {"norm", e.norm}, {"bound", e.bound}, {"ok", e.ok}});
    report["rtau"] = {{"omega", rt.omega},
                      {"entries", entries},
                      {"stead_residual", rt.stead_residual},
                      {"all_ok", rt.all_ok}};
    all_ok = all_ok && rt.all_ok;
    if (!all_ok) throw BoundFailure("kernel-bounds: a derived norm bound failed");
}

std::vector<GaussianBasisElement> threebody_trace_basis(const FewBodyProblem& pb,
                                                        const SolverConfig& s) {
    // anisotropic product grid (pair scale x spectator scale) plus an
    // isotropic ladder covering the full range
    const double bx_max = std::sqrt(s.b_min * s.b_max);
    std::vector<double> bx(16), by(20);
    for (int i = 0; i < 16; ++i)
        bx[i] = s.b_min * std::pow(bx_max / s.b_min, i / 15.0);
    for (int i = 0; i < 20; ++i)
        by[i] = s.b_min * std::pow(s.b_max / s.b_min, i / 19.0);
    auto basis = grid_basis(bx, by);
    const auto lad = ladder_basis(pb.n_internal(), s.b_min, s.b_max, 50);
    basis.insert(basis.end(), lad.begin(), lad.end());
    return basis;
}

void run_threebody(const ExperimentConfig& c, std::uint64_t seed, json& report,
                   std::map<std::string, std::string>& csv) {
    if (c.system.size() != 3)
        throw std::invalid_argument("threebody-absorption: needs a 3-particle system");
    const FewBodyProblem problem(c.system);
    auto basis = threebody_trace_basis(problem, c.solver);

    const ThresholdReport th =
        threshold_on_basis(problem, basis, c.experiment.lambda_hint);
    report["threshold"] = threshold_json(th);

    // stability: stochastic enlargement must not move the estimate, and must
    // not raise the variational energy (monotonicity)
    GrowOptions g;
    g.seed = seed;
    g.target_size = static_cast<int>(basis.size()) + c.experiment.extra;
    g.pool = c.solver.pool;
    g.b_min = c.solver.b_min;
    g.b_max = c.solver.b_max;
    g.lambda = th.lambda_hi * 1.05;
    const double e_before = ground_state(problem, basis, g.lambda).energy;
    const auto enlarged = grow_basis(problem, basis, g);
    const double e_after = ground_state(problem, enlarged, g.lambda).energy;
    if (e_after > e_before + 1e-12)
        throw BoundFailure("threebody-absorption: variational monotonicity violated");
    const double cr2 = threshold_on_basis(problem, enlarged, th.lambda_cr).lambda_cr;
    const double stability = std::abs(cr2 - th.lambda_cr) / th.lambda_cr;
    report["stability"] = {{"lambda_cr_enlarged", cr2},
                           {"relative_shift", stability},
                           {"stable", stability < 1e-3}};

    const auto grid = RadialGrid::composite_gl(c.solver.r_max, c.solver.n);
    const PreconditionReport pre = subsystem_preconditions(
        c.system, th.lambda_cr, c.experiment.tol, grid);
    json pj = json::array();
    for (const auto& p : pre.pairs)
        pj.push_back({{"i", p.i},
                      {"j", p.j},
                      {"class", resonance_name(p.cls)},
                      {"margin", p.margin}});
    report["preconditions"] = {{"pairs", pj},
                               {"all_subcritical", pre.all_subcritical}};

    std::vector<double> schedule = c.experiment.lambda_schedule;
    if (schedule.empty()) {
        const double d_lo = c.experiment.delta_min.value_or(1e-4);
        const double d_hi = c.experiment.delta_max.value_or(1e-2);
        const int pts = c.experiment.schedule_points > 0 ? c.experiment.schedule_points : 8;
        for (int i = 0; i < pts; ++i) {
            const double delta =
                d_hi * std::pow(d_lo / d_hi, pts == 1 ? 0.0 : i / double(pts - 1));
            schedule.push_back(th.lambda_cr * (1.0 + delta));
        }
    }
    AbsorptionOptions ao;
    for (const auto& [key, pot] : c.system.potentials) ao.pairs.push_back({key.i, key.j});
    ao.l_values = default_or(c.experiment.l_values, {5.0});

    const SpreadingProfile profile = absorption_trace(problem, basis, schedule, ao);
    if (profile.truncated && !c.output.directory.empty())
        std::cerr << "warning: schedule truncated where E0 >= 0\n";

    std::ostringstream os;
    os << "lambda,energy,rho_sq";
    for (const auto& [i, j] : profile.pairs)
        for (double l : profile.l_values)
            os << ",p_" << (i + 1) << (j + 1) << "_L" << fmt_label(l);
    os << '\n';
    for (const auto& row : profile.rows) {
        os << fmt(row.lambda) << ',' << fmt(row.energy) << ',' << fmt(row.rho_sq);
        for (double p : row.pair_probs) os << ',' << fmt(p);
        os << '\n';
    }
    csv["profile.csv"] = os.str();

    json verdicts = json::array();
    try {
        const NoClusteringReport nc = no_clustering_report(profile);
        for (const auto& pv : nc.pairs)
            verdicts.push_back({{"i", pv.i},
                                {"j", pv.j},
                                {"verdict", to_string(pv.verdict)},
                                {"p_first", pv.p_first},
                                {"p_last", pv.p_last}});
        report["no_clustering"] = {{"pairs", verdicts},
                                   {"localized_factor", nc.localized_factor},
                                   {"noise_band", nc.noise_band}};
    } catch (const std::invalid_argument& ex) {
        report["no_clustering"] = {{"error", ex.what()}};
    }
    report["profile_rows"] = profile.rows.size();
    report["truncated"] = profile.truncated;
}

void run_tail_probe(const ExperimentConfig& c, json& report,
                    std::map<std::string, std::string>& csv) {
    const PairPotential& v = require_pair(c.system, 0, 1);
    const auto qs = default_or(c.experiment.q_values, {0.0, 2.0, 4.0, 8.0});
    const auto grid = RadialGrid::composite_gl(c.solver.r_max, c.solver.n);
    const auto norms = tail_bound_probe(v, qs, grid);
    json rows = json::array();
    std::ostringstream os;
    os << "q,norm\n";
    for (size_t i = 0; i < qs.size(); ++i) {
        rows.push_back({{"q", qs[i]}, {"norm", norms[i]}});
        os << fmt(qs[i]) << ',' << fmt(norms[i]) << '\n';
    }
    report["tail_probe"] = rows;
    csv["tail_probe.csv"] = os.str();
}

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot read config file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("config parse error: ") + e.what());
    }
    return j;
}

} // namespace

void write_file_atomic(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    if (target.has_parent_path()) fs::create_directories(target.parent_path());
    const fs::path tmp = target.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + tmp.string());
        out << content;
    }
    fs::rename(tmp, target);
}

int run_validate(const std::string& config_path, bool quiet) {
    try {
        const json j = load_json_file(config_path);
        const auto violations = validate_config(j);
        if (violations.empty()) {
            if (!quiet) std::cout << "ok\n";
            return 0;
        }
        if (!quiet)
            for (const auto& v : violations) std::cerr << v << '\n';
        return 2;
    } catch (const std::exception& e) {
        if (!quiet) std::cerr << e.what() << '\n';
        return 2;
    }
}

int run_experiment(const RunOptions& opts) {
    ExperimentConfig cfg;
    try {
        cfg = load_config(load_json_file(opts.config_path));
    } catch (const std::exception& e) {
        if (!opts.quiet) std::cerr << e.what() << '\n';
        return 2;
    }
    if (!opts.out_dir.empty()) cfg.output.directory = opts.out_dir;
    if (opts.seed) cfg.solver.seed = opts.seed;

    const bool stochastic = opts.subcommand == "threebody-absorption";
    if (stochastic && !cfg.solver.seed) {
        if (!opts.quiet)
            std::cerr << "threebody-absorption: a seed is required (solver.seed or --seed)\n";
        return 2;
    }

    json report;
    report["version"] = kVersion;
    report["subcommand"] = opts.subcommand;
    report["config"] = config_to_json(cfg);
    if (cfg.solver.seed) report["seed"] = *cfg.solver.seed;
    std::map<std::string, std::string> csv;

    try {
        json results;
        if (opts.subcommand == "twobody-threshold")
            run_twobody_threshold(cfg, results, csv);
        else if (opts.subcommand == "defs-probe")
            run_defs_probe(cfg, results, csv);
        else if (opts.subcommand == "kernel-bounds")
            run_kernel_bounds(cfg, results, csv);
        else if (opts.subcommand == "threebody-absorption")
            run_threebody(cfg, cfg.solver.seed.value_or(0), results, csv);
        else if (opts.subcommand == "tail-probe")
            run_tail_probe(cfg, results, csv);
        else {
            if (!opts.quiet)
                std::cerr << "unknown subcommand: " << opts.subcommand << '\n';
            return 2;
        }
        report["results"] = results;
    } catch (const BoundFailure& e) {
        if (!opts.quiet) std::cerr << e.what() << '\n';
        report["error"] = e.what();
        write_file_atomic(cfg.output.directory + "/report.json", report.dump(2) + "\n");
        return 3;
    } catch (const std::invalid_argument& e) {
        if (!opts.quiet) std::cerr << e.what() << '\n';
        return 2;
    } catch (const std::domain_error& e) {
        if (!opts.quiet) std::cerr << e.what() << '\n';
        report["error"] = e.what();
        write_file_atomic(cfg.output.directory + "/report.json", report.dump(2) + "\n");
        return 3;
    }

    const auto& formats = cfg.output.formats;
    const bool want_json =
        std::find(formats.begin(), formats.end(), "json") != formats.end();
    const bool want_csv =
        std::find(formats.begin(), formats.end(), "csv") != formats.end();
    if (want_json)
        write_file_atomic(cfg.output.directory + "/report.json", report.dump(2) + "\n");
    if (want_csv)
        for (const auto& [name, content] : csv)
            write_file_atomic(cfg.output.directory + "/" + name, content);
    if (!opts.quiet) std::cout << "wrote " << cfg.output.directory << "/report.json\n";
    return 0;
}

} // namespace tlab
