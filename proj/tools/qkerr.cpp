// qkerr: entanglement dynamics of a q-deformed field coupled to a Kerr medium.
//
//   qkerr sweep-q         field entropy vs q at fixed t          -> q,S_field
//   qkerr evolve          entropy time series                    -> t,gamma_t,S_field,S_atom,purity_field
//   qkerr find-optimal-q  q maximizing the field entropy at t    -> q_star,S_star (+ scan CSV)
//   qkerr revivals        near/fractional revival dips of a series CSV
//
// Exit codes: 0 success, 2 invalid arguments or malformed input, 3 numerical failure.

#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "qkerr/csv.hpp"
#include "qkerr/errors.hpp"
#include "qkerr/experiments.hpp"

namespace {

constexpr int kExitInvalid = 2;
constexpr int kExitNumerical = 3;
constexpr double kMinCliQ = 0.05;

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct PhysicsFlags {
    double omega = 1.0;
    double chi = 0.0;
    double gamma = 1.0;
    double q = 1.0;
    std::string log_base = "2";
    std::string out = "-";
    unsigned threads = 0;
};

struct InitialFlags {
    std::string kind = "fock";
    std::optional<std::size_t> fock_n;
    std::optional<double> alpha_sq;
    double alpha_phase = 0.0;
    double tail_tol = qkerr::kDefaultTailTolerance;
};

struct GridFlags {
    double t = 0.0;
    std::optional<double> t_max;
    std::optional<std::size_t> steps;
    double q_min = 0.5;
    double q_max = 1.0;
    std::optional<std::size_t> q_steps;
};

struct RevivalFlags {
    std::string in;
    double threshold = 0.2;
    double chi = 0.0;
    double window_lo = -std::numeric_limits<double>::infinity();
    double window_hi = std::numeric_limits<double>::infinity();
    std::string out = "-";
};

void add_physics(CLI::App& cmd, PhysicsFlags& f, bool with_q) {
    cmd.add_option("--omega", f.omega, "atomic frequency")->capture_default_str();
    cmd.add_option("--chi", f.chi, "Kerr nonlinearity")->capture_default_str();
    cmd.add_option("--gamma", f.gamma, "field-atom coupling (may be negative)")->capture_default_str();
    if (with_q) cmd.add_option("--q", f.q, "deformation parameter in (0.05, 1]")->capture_default_str();
    cmd.add_option("--log-base", f.log_base, "entropy logarithm base")
        ->check(CLI::IsMember({"2", "e"}))
        ->capture_default_str();
    cmd.add_option("--out", f.out, "output CSV path ('-' for stdout)")->capture_default_str();
    cmd.add_option("--threads", f.threads, "worker threads (0 = hardware)")->capture_default_str();
}

void add_initial(CLI::App& cmd, InitialFlags& f) {
    cmd.add_option("--initial", f.kind, "field preparation")
        ->check(CLI::IsMember({"fock", "coherent"}))
        ->capture_default_str();
    cmd.add_option("--fock-n", f.fock_n, "Fock number N of |N>_q");
    cmd.add_option("--alpha-sq", f.alpha_sq, "|alpha|^2 of the q-coherent state");
    cmd.add_option("--alpha-phase", f.alpha_phase, "arg(alpha) in radians")->capture_default_str();
    cmd.add_option("--tail-tol", f.tail_tol, "discarded coherent weight")->capture_default_str();
}

qkerr::Deformation cli_deformation(double q) {
    if (!(q > kMinCliQ && q <= 1.0))
        throw UsageError("q must lie in (0.05, 1], got " + std::to_string(q));
    return qkerr::Deformation{q};
}

qkerr::SystemParams make_params(const PhysicsFlags& f, double q) {
    qkerr::SystemParams p{f.omega, f.chi, f.gamma, cli_deformation(q)};
    p.validate();
    return p;
}

qkerr::InitialCondition make_initial(const InitialFlags& f) {
    if (f.kind == "fock") {
        if (!f.fock_n) throw UsageError("--initial fock requires --fock-n");
        return qkerr::FockInput{*f.fock_n};
    }
    if (!f.alpha_sq) throw UsageError("--initial coherent requires --alpha-sq");
    if (!(f.tail_tol > 0.0)) throw UsageError("--tail-tol must be positive");
    return qkerr::CoherentInput{{*f.alpha_sq, f.alpha_phase}, f.tail_tol};
}

qkerr::LogBase make_base(const std::string& s) {
    return s == "e" ? qkerr::LogBase::nats : qkerr::LogBase::bits;
}

qkerr::Grid make_q_grid(const GridFlags& g, std::size_t default_steps) {
    qkerr::Grid grid{g.q_min, g.q_max, g.q_steps.value_or(default_steps)};
    grid.validate();
    cli_deformation(grid.min);
    cli_deformation(grid.max);
    return grid;
}

template <typename Writer>
void emit(const std::string& path, Writer&& write) {
    if (path == "-") {
        write(std::cout);
        std::cout.flush();
        return;
    }
    std::ofstream file(path, std::ios::binary);
    if (!file) throw UsageError("cannot open '" + path + "' for writing");
    write(file);
    if (!file) throw qkerr::Error("failed writing '" + path + "'");
}

int run_sweep(const PhysicsFlags& pf, const InitialFlags& inf, const GridFlags& gf) {
    const auto params = make_params(pf, 1.0);
    const auto grid = make_q_grid(gf, 100);
    const auto points = qkerr::sweep_q(params, make_initial(inf), grid, gf.t,
                                       {make_base(pf.log_base), pf.threads});
    emit(pf.out, [&](std::ostream& os) { qkerr::write_sweep_csv(os, points); });
    return 0;
}

int run_evolve(const PhysicsFlags& pf, const InitialFlags& inf, const GridFlags& gf) {
    const auto params = make_params(pf, pf.q);
    const bool coherent = inf.kind == "coherent";
    const qkerr::Grid times{gf.t, gf.t_max.value_or(coherent ? 1400.0 : 700.0),
                            gf.steps.value_or(coherent ? 28000 : 14000)};
    const auto series = qkerr::entropy_series(params, make_initial(inf), times,
                                              {make_base(pf.log_base), pf.threads});
    emit(pf.out, [&](std::ostream& os) { qkerr::write_series_csv(os, series); });
    return 0;
}

int run_optimal(const PhysicsFlags& pf, const InitialFlags& inf, const GridFlags& gf) {
    const auto params = make_params(pf, 1.0);
    const auto grid = make_q_grid(gf, qkerr::kDefaultOptimalQGrid.steps);
    const auto best = qkerr::find_optimal_q(params, make_initial(inf), grid, gf.t,
                                            {make_base(pf.log_base), pf.threads});
    if (pf.out != "-")
        emit(pf.out, [&](std::ostream& os) { qkerr::write_sweep_csv(os, best.scan); });
    std::cout << "q_star,S_star\n"
              << qkerr::format_real(best.q_star) << ',' << qkerr::format_real(best.s_star) << '\n';
    return 0;
}

int run_revivals(const RevivalFlags& rf) {
    std::ifstream in(rf.in, std::ios::binary);
    if (!in) throw UsageError("cannot open '" + rf.in + "'");
    const auto series = qkerr::read_series_csv(in);
    const auto report =
        qkerr::detect_revivals(series, rf.threshold, {rf.window_lo, rf.window_hi}, rf.chi);
    emit(rf.out, [&](std::ostream& os) { qkerr::write_revival_csv(os, report); });
    std::cerr << "threshold " << qkerr::format_real(report.threshold) << " of max -> level "
              << qkerr::format_real(report.level) << ", " << report.dips.size() << " dip(s)\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Entanglement dynamics of a q-deformed field in a Kerr medium"};
    app.require_subcommand(1);

    PhysicsFlags physics;
    InitialFlags initial;
    GridFlags grid;
    RevivalFlags revival;
    grid.t = 1.0;

    auto* sweep = app.add_subcommand("sweep-q", "field entropy versus q at fixed time");
    add_physics(*sweep, physics, false);
    add_initial(*sweep, initial);
    sweep->add_option("--t", grid.t, "evolution time")->capture_default_str();
    sweep->add_option("--q-min", grid.q_min)->capture_default_str();
    sweep->add_option("--q-max", grid.q_max)->capture_default_str();
    sweep->add_option("--q-steps", grid.q_steps, "grid intervals (default 100)");

    auto* evolve = app.add_subcommand("evolve", "entropy time series");
    add_physics(*evolve, physics, true);
    add_initial(*evolve, initial);
    evolve->add_option("--t", grid.t, "first time sample (default 0)");
    evolve->add_option("--t-max", grid.t_max, "last time sample (default 700 fock, 1400 coherent)");
    evolve->add_option("--steps", grid.steps, "time intervals (default 14000 fock, 28000 coherent)");

    auto* optimal = app.add_subcommand("find-optimal-q", "deformation maximizing the field entropy");
    add_physics(*optimal, physics, false);
    add_initial(*optimal, initial);
    optimal->add_option("--t", grid.t, "evolution time")->capture_default_str();
    optimal->add_option("--q-min", grid.q_min)->capture_default_str();
    optimal->add_option("--q-max", grid.q_max)->capture_default_str();
    optimal->add_option("--q-steps", grid.q_steps, "coarse grid intervals (default 199)");

    auto* revivals = app.add_subcommand("revivals", "revival dips of an evolve CSV");
    revivals->add_option("--in", revival.in, "series CSV from 'evolve'")->required();
    revivals->add_option("--threshold", revival.threshold, "fraction of max S")->capture_default_str();
    revivals->add_option("--chi", revival.chi, "Kerr nonlinearity of the run")->required();
    revivals->add_option("--window-lo", revival.window_lo, "lowest gamma*t considered");
    revivals->add_option("--window-hi", revival.window_hi, "highest gamma*t considered");
    revivals->add_option("--out", revival.out, "report CSV path ('-' for stdout)")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitInvalid;
    }
    if (evolve->parsed() && evolve->count("--t") == 0) grid.t = 0.0;

    try {
        if (sweep->parsed()) return run_sweep(physics, initial, grid);
        if (evolve->parsed()) return run_evolve(physics, initial, grid);
        if (optimal->parsed()) return run_optimal(physics, initial, grid);
        return run_revivals(revival);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInvalid;
    } catch (const qkerr::DomainError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInvalid;
    } catch (const qkerr::FormatError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInvalid;
    } catch (const qkerr::Error& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return kExitNumerical;
    }
}
