// Command line front end: weak form checks, defect functional evaluation,
// and maximal-turbulence selection over candidate hulls.

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "turbmax/euler_compressible.hpp"
#include "turbmax/euler_incompressible.hpp"
#include "turbmax/functional.hpp"
#include "turbmax/measure.hpp"
#include "turbmax/measure_io.hpp"
#include "turbmax/selector.hpp"
#include "turbmax/testfuncs.hpp"

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitError = 2;

std::string num(double x, int digits = 6) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.*g", digits, x);
    return buf;
}

turbmax::ConvexIntegrand choose_integrand(const std::string& name,
                                          const turbmax::GrowthStructure& g) {
    using turbmax::ConvexIntegrand;
    using turbmax::GrowthKind;
    std::string pick = name;
    if (pick == "auto") {
        pick = g.kind() == GrowthKind::Isentropic ? "energy" : "variance";
    }
    if (pick == "variance") {
        if (g.kind() != GrowthKind::PowerP || g.exponent() != 2.0) {
            throw std::invalid_argument("--f variance needs a measure with quadratic growth, got " +
                                        g.describe());
        }
        return ConvexIntegrand::squared_norm();
    }
    if (pick == "energy") {
        if (g.kind() == GrowthKind::Isentropic) {
            return ConvexIntegrand::isentropic_energy(g.exponent());
        }
        if (g.kind() == GrowthKind::PowerP && g.exponent() == 2.0) {
            return ConvexIntegrand::kinetic_energy();
        }
        throw std::invalid_argument("--f energy needs quadratic or isentropic growth, got " +
                                    g.describe());
    }
    throw std::invalid_argument("unknown integrand '" + name + "' (auto | variance | energy)");
}

std::vector<double> random_simplex(std::mt19937_64& rng, std::size_t n) {
    std::exponential_distribution<double> draw(1.0);
    std::vector<double> w(n);
    double sum = 0.0;
    for (double& x : w) {
        x = draw(rng) + 1e-12;
        sum += x;
    }
    double partial = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        w[i] /= sum;
        partial += w[i];
    }
    w[n - 1] = 1.0 - partial;
    return w;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot open file for writing: " + path.string());
    }
    out << text;
}

// ---------------------------------------------------------------------------
// check

struct CheckArgs {
    std::string measure;
    std::string model;
    std::string data;
    double tol = 0.0;
    int dict_k = 3;
    int dict_profiles = 4;
    std::string out;
};

int run_check(const CheckArgs& a) {
    const turbmax::DiscreteYoungMeasure Y = turbmax::read_measure_file(a.measure);
    const turbmax::SpaceTimeGrid& g = Y.grid();
    const double tol = a.tol > 0.0 ? a.tol : turbmax::default_residual_tol(g);
    turbmax::WeakFormReport wf;
    turbmax::AdmissibilityReport adm;
    if (a.model == "incompressible") {
        const turbmax::IncompressibleData data = turbmax::read_incompressible_data(a.data);
        const auto dict = turbmax::TestFunctionDictionary::incompressible(g.T(), g.d(), a.dict_k,
                                                                          a.dict_profiles);
        wf = turbmax::weak_form_report(Y, data, dict);
        adm = turbmax::check_admissibility(Y, data);
    } else {
        const turbmax::CompressibleData data = turbmax::read_compressible_data(a.data);
        const auto dict = turbmax::TestFunctionDictionary::compressible(g.T(), g.d(), a.dict_k,
                                                                        a.dict_profiles);
        wf = turbmax::weak_form_report(Y, data, dict);
        adm = turbmax::check_admissibility(Y, data);
    }
    const bool pass = wf.max_mass <= tol && wf.max_momentum <= tol && adm.admissible;
    const std::string report = turbmax::weak_form_report_json(a.model, wf, adm, tol, pass);
    if (!a.out.empty()) {
        write_file(a.out, report);
    } else {
        std::cout << report;
    }
    return pass ? kExitPass : kExitFail;
}

// ---------------------------------------------------------------------------
// select

struct SelectArgs {
    std::vector<std::string> candidates;
    std::string model = "abstract";
    std::string data;
    std::string f = "auto";
    bool skip_check = false;
    double tol = 0.0;
    double check_tol = 0.0;
    int dict_k = 3;
    int dict_profiles = 4;
    int restarts = 1;
    std::uint64_t seed = 20260821ULL;
    int max_iter = 10000;
    std::string out;
};

turbmax::CandidateSet build_candidates(const SelectArgs& a,
                                       std::vector<turbmax::DiscreteYoungMeasure> ms) {
    using turbmax::CandidateModel;
    using turbmax::CandidateSet;
    if (a.model == "abstract") {
        return CandidateSet(std::move(ms));
    }
    const CandidateModel model = a.model == "incompressible" ? CandidateModel::Incompressible
                                                             : CandidateModel::Compressible;
    if (a.skip_check) {
        return CandidateSet::unchecked(std::move(ms), model);
    }
    if (a.data.empty()) {
        throw std::invalid_argument("--model " + a.model +
                                    " needs --data (or --skip-check to trust the candidates)");
    }
    const turbmax::SpaceTimeGrid& g = ms.front().grid();
    const double check_tol =
        a.check_tol > 0.0 ? a.check_tol : turbmax::default_residual_tol(g);
    if (model == CandidateModel::Incompressible) {
        const auto data = turbmax::read_incompressible_data(a.data);
        const auto dict = turbmax::TestFunctionDictionary::incompressible(g.T(), g.d(), a.dict_k,
                                                                          a.dict_profiles);
        return CandidateSet(std::move(ms), data, dict, check_tol);
    }
    const auto data = turbmax::read_compressible_data(a.data);
    const auto dict =
        turbmax::TestFunctionDictionary::compressible(g.T(), g.d(), a.dict_k, a.dict_profiles);
    return CandidateSet(std::move(ms), data, dict, check_tol);
}

int run_select(const SelectArgs& a) {
    std::vector<turbmax::DiscreteYoungMeasure> ms;
    ms.reserve(a.candidates.size());
    for (const std::string& p : a.candidates) {
        ms.push_back(turbmax::read_measure_file(p));
    }
    const turbmax::ConvexIntegrand f = choose_integrand(a.f, ms.front().growth());
    const turbmax::CandidateSet cs = build_candidates(a, std::move(ms));

    turbmax::MaximizeOptions opt;
    opt.tol = a.tol;
    opt.max_iter = a.max_iter;
    std::mt19937_64 rng(a.seed);
    std::vector<turbmax::SelectionResult> results;
    const int restarts = std::max(1, a.restarts);
    results.reserve(static_cast<std::size_t>(restarts));
    for (int r = 0; r < restarts; ++r) {
        turbmax::MaximizeOptions o = opt;
        if (r > 0) {
            o.start = random_simplex(rng, cs.size());
        }
        results.push_back(turbmax::maximize(cs, f, o));
    }
    std::size_t best = 0;
    for (std::size_t i = 1; i < results.size(); ++i) {
        if (results[i].value > results[best].value) {
            best = i;
        }
    }
    std::optional<turbmax::UniquenessReport> uniq;
    if (results.size() > 1) {
        bool all_converged = true;
        for (const auto& r : results) {
            all_converged = all_converged && r.converged;
        }
        if (all_converged) {
            uniq = turbmax::uniqueness_diagnostic(results);
        } else {
            std::cerr << "turbmax: warning: some restarts did not converge, "
                         "skipping the uniqueness diagnostic\n";
        }
    }
    const std::string json =
        turbmax::selection_result_json(results[best], uniq ? &*uniq : nullptr);
    if (!a.out.empty()) {
        write_file(a.out, json);
        std::cout << "theta:";
        for (const double t : results[best].theta) {
            std::cout << " " << num(t, 12);
        }
        std::cout << "\nvalue: " << num(results[best].value, 12) << "\ngap: "
                  << num(results[best].gap) << " (tol " << num(results[best].tol) << ")\n"
                  << "wrote " << a.out << "\n";
    } else {
        std::cout << json;
    }
    return results[best].converged ? kExitPass : kExitFail;
}

// ---------------------------------------------------------------------------
// sweep

struct SweepArgs {
    std::vector<std::string> candidates;
    std::string f = "auto";
    int points = 101;
    std::string out;
};

int run_sweep(const SweepArgs& a) {
    if (a.candidates.size() != 2) {
        throw std::invalid_argument("sweep needs exactly two --candidates");
    }
    if (a.points < 2) {
        throw std::invalid_argument("--samples must be at least 2");
    }
    std::vector<turbmax::DiscreteYoungMeasure> ms;
    ms.push_back(turbmax::read_measure_file(a.candidates[0]));
    ms.push_back(turbmax::read_measure_file(a.candidates[1]));
    const turbmax::ConvexIntegrand f = choose_integrand(a.f, ms.front().growth());
    const turbmax::CandidateSet cs(std::move(ms));
    const turbmax::HullObjective obj(cs, f);
    std::ostringstream os;
    os << "tau,value\n";
    char line[80];
    for (int i = 0; i < a.points; ++i) {
        const double tau = static_cast<double>(i) / static_cast<double>(a.points - 1);
        const double theta[2] = {tau, 1.0 - tau};
        std::snprintf(line, sizeof line, "%.17g,%.17g\n", tau, obj.value(theta));
        os << line;
    }
    if (!a.out.empty()) {
        write_file(a.out, os.str());
        std::cout << "wrote " << a.out << "\n";
    } else {
        std::cout << os.str();
    }
    return kExitPass;
}

// ---------------------------------------------------------------------------
// demo

struct DemoArgs {
    std::vector<double> v1{1.0, 0.0};
    std::vector<double> v2{-1.0, 0.0};
    std::string f = "variance";
    std::string emit;
};

std::string vec_str(std::span<const double> v) {
    std::string s = "(";
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i > 0) {
            s += ", ";
        }
        s += num(v[i]);
    }
    return s + ")";
}

int run_demo(const DemoArgs& a) {
    using namespace turbmax;
    if (a.v1.empty() || a.v1.size() != a.v2.size()) {
        throw std::invalid_argument("--v1 and --v2 must be vectors of the same dimension");
    }
    const int d = static_cast<int>(a.v1.size());
    const SpaceTimeGrid grid(1.0, d, 8, 8);
    const GrowthStructure growth = GrowthStructure::quadratic();
    const auto constant_field = [](const std::vector<double>& v) {
        return [v](double, std::span<const double>, std::span<double> out) {
            std::copy(v.begin(), v.end(), out.begin());
        };
    };
    const DiscreteYoungMeasure Y1 = young_of_function(grid, d, growth, constant_field(a.v1));
    const DiscreteYoungMeasure Y2 = young_of_function(grid, d, growth, constant_field(a.v2));

    const ConvexIntegrand f =
        a.f == "energy" ? ConvexIntegrand::kinetic_energy() : ConvexIntegrand::squared_norm();
    const double f_factor = a.f == "energy" ? 0.5 : 1.0;
    double dv2 = 0.0;
    std::vector<double> mean(a.v1.size());
    for (std::size_t i = 0; i < a.v1.size(); ++i) {
        dv2 += (a.v1[i] - a.v2[i]) * (a.v1[i] - a.v2[i]);
        mean[i] = 0.5 * (a.v1[i] + a.v2[i]);
    }
    const bool degenerate = dv2 == 0.0;
    const double volume = grid.T() * std::pow(2.0 * std::numbers::pi, d);
    const double analytic = f_factor * 0.25 * dv2 * volume;

    std::cout << "two constant velocity states v1=" << vec_str(a.v1) << " and v2="
              << vec_str(a.v2) << " on (0,1) x T^" << d << ", " << grid.nt() << "x" << grid.nx()
              << "^" << d << " cells, f = " << a.f << "\n"
              << "analytic optimum: value = f(v1-v2 difference)/4 * T * (2 pi)^" << d << " = "
              << num(analytic, 12)
              << (degenerate ? "" : " at tau* = 0.5") << "\n";

    const CandidateSet cs(std::vector<DiscreteYoungMeasure>{Y1, Y2});
    const SelectionResult sel = maximize(cs, f);
    std::cout << "computed optimum: theta = (" << num(sel.theta[0], 12) << ", "
              << num(sel.theta[1], 12) << "), value = " << num(sel.value, 12)
              << ", gap = " << num(sel.gap) << " after " << sel.iterations << " iterations\n";

    bool ok = sel.converged;
    if (degenerate) {
        std::cout << "degenerate: the candidates coincide, every theta is optimal and the "
                     "functional vanishes\n";
        ok = ok && std::abs(sel.value) <= 1e-10;
    } else {
        ok = ok && std::abs(sel.theta[0] - 0.5) <= 1e-6 &&
             std::abs(sel.value - analytic) <= 1e-8 * analytic;
    }

    // The balanced mixture has the mean state as barycenter, so it faces the
    // weak form whose initial state is that mean.
    if (d >= 2) {
        const DiscreteYoungMeasure mix = cs.combine(SimplexWeights({0.5, 0.5}));
        SpatialField mean_field(d, grid.nx(), d);
        for (std::size_t c = 0; c < mean_field.cell_count(); ++c) {
            std::copy(mean.begin(), mean.end(), mean_field.at(c).begin());
        }
        const IncompressibleData data(mean_field);
        const auto dict = TestFunctionDictionary::incompressible(grid.T(), d);
        const WeakFormReport wf = weak_form_report(mix, data, dict);
        const AdmissibilityReport adm = check_admissibility(mix, data);
        const double margin_analytic = -dv2 / 8.0 * std::pow(2.0 * std::numbers::pi, d);
        std::cout << "the balanced mixture solves the weak form with initial state v0 = "
                  << vec_str(mean) << ":\n"
                  << "  max normalized residual " << num(std::max(wf.max_mass, wf.max_momentum))
                  << " (threshold " << num(default_residual_tol(grid)) << ")\n";
        if (degenerate) {
            std::cout << "  and it is energy admissible: min slab margin "
                      << num(adm.min_margin, 12) << "\n";
        } else {
            std::cout << "  but its energy exceeds E0: min slab margin " << num(adm.min_margin, 12)
                      << " (analytic -|v1-v2|^2/8 * (2 pi)^" << d << " = "
                      << num(margin_analytic, 12) << ")\n"
                      << "  so the maximally turbulent mixture is not energy admissible\n";
        }

        if (!a.emit.empty()) {
            const std::filesystem::path dir(a.emit);
            std::filesystem::create_directories(dir);
            write_measure_file(dir / "candidate1.json", Y1);
            write_measure_file(dir / "candidate2.json", Y2);
            SpatialField cst(d, grid.nx(), d);
            for (std::size_t c = 0; c < cst.cell_count(); ++c) {
                std::copy(a.v1.begin(), a.v1.end(), cst.at(c).begin());
            }
            write_incompressible_data(dir / "data-constant.json", IncompressibleData(cst));
            write_incompressible_data(dir / "data-mean.json", data);
            std::cout << "wrote candidate1.json, candidate2.json, data-constant.json "
                         "(candidate1's own initial state), data-mean.json under "
                      << dir.string() << "\n"
                      << "try:\n"
                      << "  turbmax check --model incompressible --measure "
                      << (dir / "candidate1.json").string() << " --data "
                      << (dir / "data-constant.json").string() << "\n"
                      << "  turbmax select --f variance --candidates "
                      << (dir / "candidate1.json").string() << " "
                      << (dir / "candidate2.json").string() << "\n"
                      << "  turbmax sweep --samples 11 --candidates "
                      << (dir / "candidate1.json").string() << " "
                      << (dir / "candidate2.json").string() << "\n";
        }
    } else if (!a.emit.empty()) {
        std::cout << "note: --emit needs dimension >= 2, nothing written\n";
    }

    std::cout << "demo: " << (ok ? "PASS" : "FAIL") << "\n";
    return ok ? kExitPass : kExitFail;
}

// ---------------------------------------------------------------------------
// vf

struct VfArgs {
    std::string measure;
    std::string f = "auto";
    bool json_out = false;
};

int run_vf(const VfArgs& a) {
    const turbmax::DiscreteYoungMeasure Y = turbmax::read_measure_file(a.measure);
    const turbmax::ConvexIntegrand f = choose_integrand(a.f, Y.growth());
    const turbmax::FunctionalReport rep = turbmax::jensen_defect(Y, f);
    if (a.json_out) {
        std::cout << turbmax::functional_report_json(f.name(), rep);
    } else {
        std::cout << "integrand: " << f.name() << "\n"
                  << "value: " << num(rep.value, 12) << "\n"
                  << "oscillation part: " << num(rep.oscillation_part, 12) << "\n"
                  << "concentration part: " << num(rep.concentration_part, 12) << "\n"
                  << "total energy: " << num(rep.total_energy, 12) << "\n";
    }
    return kExitPass;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Young measure toolkit: weak form checks, turbulence functionals, "
                 "and maximal selection over candidate hulls"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "turbmax 0.1.0");

    CheckArgs ca;
    auto* check = app.add_subcommand(
        "check", "Verify weak form residuals and energy admissibility of a measure");
    check->add_option("--measure", ca.measure, "Measure file (JSON)")->required();
    check->add_option("--model", ca.model, "Fluid model")
        ->required()
        ->check(CLI::IsMember({"incompressible", "compressible"}));
    check->add_option("--data", ca.data, "Initial data file (JSON)")->required();
    check->add_option("--tol", ca.tol,
                      "Normalized residual tolerance (0 means the h^2-scaled default)")
        ->capture_default_str();
    check->add_option("--dict-k", ca.dict_k, "Largest wavenumber in the test dictionary")
        ->capture_default_str();
    check->add_option("--dict-nt", ca.dict_profiles, "Time profiles in the test dictionary")
        ->capture_default_str();
    check->add_option("--out", ca.out, "Write the JSON report to this file instead of stdout");

    SelectArgs sa;
    auto* select = app.add_subcommand(
        "select", "Maximize the turbulence functional over the hull of candidate measures");
    select->add_option("--candidates", sa.candidates, "Candidate measure files")
        ->required()
        ->expected(1, -1);
    select->add_option("--f", sa.f, "Integrand: auto | variance | energy")
        ->capture_default_str();
    select->add_option("--model", sa.model, "abstract | incompressible | compressible")
        ->capture_default_str()
        ->check(CLI::IsMember({"abstract", "incompressible", "compressible"}));
    select->add_option("--data", sa.data, "Initial data file, for candidate checking");
    select->add_flag("--skip-check", sa.skip_check,
                     "Trust the candidates, skip weak form and admissibility checks");
    select->add_option("--tol", sa.tol,
                       "Optimality gap tolerance (0 means 1e-10 times the objective scale)")
        ->capture_default_str();
    select->add_option("--check-tol", sa.check_tol,
                       "Residual tolerance for candidate checking (0 means the h^2 default)")
        ->capture_default_str();
    select->add_option("--dict-k", sa.dict_k, "Largest wavenumber in the test dictionary")
        ->capture_default_str();
    select->add_option("--dict-nt", sa.dict_profiles, "Time profiles in the test dictionary")
        ->capture_default_str();
    select->add_option("--restarts", sa.restarts, "Number of starts (first is uniform)")
        ->capture_default_str();
    select->add_option("--seed", sa.seed, "Seed for the restart generator")
        ->capture_default_str();
    select->add_option("--max-iter", sa.max_iter, "Iteration cap")->capture_default_str();
    select->add_option("--out", sa.out, "Write the selection report to this file");

    SweepArgs wa;
    auto* sweep = app.add_subcommand(
        "sweep", "Tabulate the functional along the segment between two candidates");
    sweep->add_option("--candidates", wa.candidates, "Exactly two candidate measure files")
        ->required()
        ->expected(2);
    sweep->add_option("--f", wa.f, "Integrand: auto | variance | energy")->capture_default_str();
    sweep->add_option("--samples", wa.points, "Sample count on [0,1]")->capture_default_str();
    sweep->add_option("--out", wa.out, "Write CSV to this file instead of stdout");

    DemoArgs da;
    auto* demo = app.add_subcommand(
        "demo", "Run the two-state mixing example and compare with the closed form");
    demo->add_option("--v1", da.v1, "First constant state (default 1 0)")->expected(1, 6);
    demo->add_option("--v2", da.v2, "Second constant state (default -1 0)")->expected(1, 6);
    demo->add_option("--f", da.f, "Integrand: variance | energy")
        ->capture_default_str()
        ->check(CLI::IsMember({"variance", "energy"}));
    demo->add_option("--emit", da.emit, "Also write the example's measure and data files here");

    VfArgs va;
    auto* vf = app.add_subcommand("vf", "Evaluate the turbulence functional of a measure");
    vf->add_option("--measure", va.measure, "Measure file (JSON)")->required();
    vf->add_option("--f", va.f, "Integrand: auto | variance | energy")->capture_default_str();
    vf->add_flag("--json", va.json_out, "Emit a JSON report");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitError;
    }

    try {
        if (check->parsed()) {
            return run_check(ca);
        }
        if (select->parsed()) {
            return run_select(sa);
        }
        if (sweep->parsed()) {
            return run_sweep(wa);
        }
        if (demo->parsed()) {
            return run_demo(da);
        }
        if (vf->parsed()) {
            return run_vf(va);
        }
    } catch (const std::exception& e) {
        std::cerr << "turbmax: error: " << e.what() << "\n";
        return kExitError;
    }
    return kExitError;
}
