#include <cmath>
#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ekin/errors.hpp"
#include "ekin/functionals.hpp"
#include "ekin/generators.hpp"
#include "ekin/hierarchy.hpp"
#include "ekin/kernels.hpp"
#include "ekin/meanfield.hpp"
#include "ekin/model.hpp"
#include "ekin/output.hpp"
#include "ekin/ssa.hpp"
#include "ekin/version.hpp"

namespace {

using namespace ekin;

struct CommonOpts {
    std::string builtin = "imitation";
    std::string model_path;
    int M = 2;
    int K = 2;
    double epsilon = 1.0;
    std::uint64_t seed = 12345;
    std::string out = "-";
    std::string format = "csv";
    CLI::Option* epsilon_opt = nullptr;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--builtin", o.builtin,
                    "Built-in model: uniform-drift | imitation | mixed");
    cmd->add_option("--model", o.model_path, "Model JSON file (overrides --builtin)");
    cmd->add_option("--M", o.M, "Subpopulations for built-in models")->check(CLI::PositiveNumber);
    cmd->add_option("--K", o.K, "Micro-states for built-in models")->check(CLI::PositiveNumber);
    o.epsilon_opt = cmd->add_option("--epsilon", o.epsilon, "Scaling parameter");
    cmd->add_option("--seed", o.seed, "Seed for generated initial data and replicas");
    cmd->add_option("--out", o.out, "Output path, - for stdout");
    cmd->add_option("--format", o.format, "Artifact format")
        ->check(CLI::IsMember({"csv", "json"}));
}

InteractionModel resolve_model(const CommonOpts& o) {
    if (!o.model_path.empty()) {
        InteractionModel m = load_model(o.model_path);
        if (o.epsilon_opt && o.epsilon_opt->count() > 0) m = with_epsilon(m, o.epsilon);
        return m;
    }
    return builtin_model(o.builtin, StateSpace(o.M, o.K), o.epsilon);
}

nlohmann::json base_config(const std::string& command, const CommonOpts& o,
                           const InteractionModel& model) {
    nlohmann::json j;
    j["command"] = command;
    j["version"] = version;
    if (!o.model_path.empty())
        j["model"] = o.model_path;
    else
        j["builtin"] = o.builtin;
    j["M"] = model.space.M();
    j["K"] = model.space.K();
    j["epsilon"] = model.epsilon;
    j["seed"] = o.seed;
    return j;
}

void emit(const Table& table, const nlohmann::json& config, const CommonOpts& o) {
    const std::string cfg = config.dump();
    write_text(o.out, o.format == "json" ? to_json(table, cfg) : to_csv(table, cfg));
}

SymTensor random_tensor(const StateSpace& sp, int n, ReplicaRng& rng) {
    SymTensor t(sp, n);
    for (std::size_t i = 0; i < t.size(); ++i) t[i] = 0.5 + rng.uniform();
    return symmetrize(t);
}

GradedSequence random_sequence(SequenceKind kind, const StateSpace& sp, int n_max,
                               std::uint64_t seed, double decay = 1.0) {
    ReplicaRng rng({seed, 1000});
    GradedSequence g(kind, sp, n_max);
    g.scalar() = kind == SequenceKind::state ? 1.0 : 0.5 + rng.uniform();
    double scale = 1.0;
    for (int n = 1; n <= n_max; ++n) {
        scale *= decay;
        SymTensor t = random_tensor(sp, n, rng);
        t *= scale;
        g.component(n) = t;
    }
    return g;
}

SymTensor random_density(const StateSpace& sp, std::uint64_t seed) {
    ReplicaRng rng({seed, 2000});
    SymTensor f(sp, 1);
    double mass = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        f[i] = 0.5 + rng.uniform();
        mass += f[i];
    }
    for (std::size_t i = 0; i < f.size(); ++i) f[i] /= mass;
    return f;
}

double component_distance(const SymTensor& a, const SymTensor& b) {
    SymTensor d = a;
    SymTensor nb = b;
    nb *= -1.0;
    d += nb;
    return max_norm(d);
}

// --- subcommand bodies ---

struct ValidateOpts {
    CommonOpts common;
    int dump_n = 0;
};

void run_validate(const ValidateOpts& o) {
    const InteractionModel model = resolve_model(o.common);
    const ValidationReport report = validate(model);
    if (!report.ok) throw ValidationError(report.message);
    if (o.dump_n > 0) {
        const LinOp gen = lambda_n(model, o.dump_n);
        Table t;
        t.add_column("row");
        t.add_column("col");
        t.add_column("value");
        for (std::size_t r = 0; r < gen.dim(); ++r)
            for (std::size_t c = 0; c < gen.dim(); ++c)
                if (gen.entry(r, c) != 0.0)
                    t.push_row({static_cast<double>(r), static_cast<double>(c),
                                gen.entry(r, c)});
        nlohmann::json cfg = base_config("validate", o.common, model);
        cfg["dump_generator"] = o.dump_n;
        emit(t, cfg, o.common);
        return;
    }
    std::cout << "ok\n";
}

struct HierarchyOpts {
    CommonOpts common;
    int s_max = 3;
    double t = 1.0;
    double dt = 1e-3;
};

void run_hierarchy(const HierarchyOpts& o) {
    const InteractionModel model = resolve_model(o.common);
    const StateSpace& sp = model.space;
    const MarginalObservables b0 =
        random_sequence(SequenceKind::observable, sp, o.s_max, o.common.seed);
    const MarginalStates f0 =
        random_sequence(SequenceKind::state, sp, o.s_max, o.common.seed + 1);
    const MarginalObservables b_exp = solve_expansion(model, b0, o.t);
    const MarginalObservables b_rk4 = integrate_dual_bbgky(model, b0, o.t, o.dt);
    const double duality = duality_check(model, b0, f0, o.t, o.dt);

    Table t;
    t.add_column("s");
    t.add_column("norm_B_s_t");
    t.add_column("expansion_vs_rk4");
    t.add_column("duality_residual");
    for (int s = 1; s <= o.s_max; ++s)
        t.push_row({static_cast<double>(s), max_norm(b_exp.component(s)),
                    component_distance(b_exp.component(s), b_rk4.component(s)), duality});

    nlohmann::json cfg = base_config("hierarchy", o.common, model);
    cfg["s_max"] = o.s_max;
    cfg["t"] = o.t;
    cfg["dt"] = o.dt;
    emit(t, cfg, o.common);
}

struct MeanfieldOpts {
    CommonOpts common;
    std::vector<double> epsilons{0.1, 0.05, 0.025};
    double t = 0.5;
    double dt = 1e-3;
    int s_max = 3;
    int nodes = 16;
    int series_n_max = -1;
    int chaos_k = 0;
};

void run_meanfield(const MeanfieldOpts& o) {
    const InteractionModel model = resolve_model(o.common);
    const StateSpace& sp = model.space;
    nlohmann::json cfg = base_config("meanfield", o.common, model);
    cfg["t"] = o.t;
    cfg["dt"] = o.dt;
    cfg["s_max"] = o.s_max;
    cfg["nodes"] = o.nodes;

    if (o.chaos_k > 0) {
        if (o.chaos_k > o.s_max)
            throw ValidationError("--chaos-k must not exceed --smax");
        const SymTensor f1_0 = random_density(sp, o.common.seed);
        ReplicaRng rng({o.common.seed, 3000});
        const SymTensor bk = random_tensor(sp, o.chaos_k, rng);
        Table t;
        t.add_column("s_max");
        t.add_column("lhs");
        t.add_column("rhs");
        t.add_column("residual");
        for (int s = std::max(2, o.chaos_k); s <= o.s_max; ++s) {
            MarginalObservables b0(SequenceKind::observable, sp, s);
            b0.component(o.chaos_k) = bk;
            const ChaosResult res = chaos_functional(model, b0, f1_0, o.t, s, o.dt);
            t.push_row({static_cast<double>(s), res.lhs, res.rhs,
                        std::abs(res.lhs - res.rhs)});
        }
        cfg["chaos_k"] = o.chaos_k;
        emit(t, cfg, o.common);
        return;
    }

    if (o.series_n_max >= 0) {
        const SymTensor f1_0 = random_density(sp, o.common.seed);
        const OneParticleDensity ft = integrate_vlasov(model, f1_0, o.t, o.dt);
        Table t;
        t.add_column("n_max");
        t.add_column("series_vs_ode");
        t.add_column("terms_grew");
        for (int n = 0; n <= o.series_n_max; ++n) {
            const OneParticleDensity sn = f1_series(model, f1_0, o.t, n, o.nodes);
            t.push_row({static_cast<double>(n), component_distance(sn.f1, ft.f1),
                        sn.terms_grew ? 1.0 : 0.0});
        }
        cfg["series_n_max"] = o.series_n_max;
        emit(t, cfg, o.common);
        return;
    }

    const MarginalObservables b0 =
        random_sequence(SequenceKind::observable, sp, o.s_max, o.common.seed);
    const std::vector<ConvergenceRow> rows =
        mean_field_convergence(model, o.epsilons, b0, o.t, o.dt);
    Table t;
    t.add_column("epsilon");
    t.add_column("N");
    t.add_column("err");
    for (const ConvergenceRow& r : rows)
        t.push_row({r.epsilon, static_cast<double>(ScalingConfig::N_of_epsilon(r.epsilon)),
                    r.err});
    cfg["epsilons"] = o.epsilons;
    emit(t, cfg, o.common);
}

struct VlasovOpts {
    CommonOpts common;
    double t = 2.0;
    double dt = 1e-3;
};

void run_vlasov(const VlasovOpts& o) {
    const InteractionModel model = resolve_model(o.common);
    const StateSpace& sp = model.space;
    const SymTensor f1_0 = random_density(sp, o.common.seed);
    const OneParticleDensity ft = integrate_vlasov(model, f1_0, o.t, o.dt);

    Table t;
    t.add_column("state");
    t.add_column("j");
    t.add_column("u");
    t.add_column("f1_0");
    t.add_column("f1_t");
    for (int v = 0; v < sp.S(); ++v) {
        const EntityState e = sp.unflatten(v);
        t.push_row({static_cast<double>(v), static_cast<double>(e.j),
                    static_cast<double>(e.u), f1_0[static_cast<std::size_t>(v)],
                    ft.f1[static_cast<std::size_t>(v)]});
    }
    nlohmann::json cfg = base_config("vlasov", o.common, model);
    cfg["t"] = o.t;
    cfg["dt"] = o.dt;
    emit(t, cfg, o.common);
}

struct SsaOpts {
    CommonOpts common;
    int N = 50;
    double t = 1.0;
    long long replicas = 10000;
};

void run_ssa(const SsaOpts& o) {
    InteractionModel model = resolve_model(o.common);
    // Chaos-scaling convention: without an explicit --epsilon the pair
    // interaction is weighted 1/N.
    if (!(o.common.epsilon_opt && o.common.epsilon_opt->count() > 0) &&
        o.common.model_path.empty())
        model = with_epsilon(model, 1.0 / static_cast<double>(o.N));
    const StateSpace& sp = model.space;
    const SymTensor f1_0 = random_density(sp, o.common.seed);
    const MarginalEstimate est =
        empirical_marginal(model, f1_0, o.N, o.t, o.replicas, {o.common.seed, 0});
    const OneParticleDensity ft = integrate_vlasov(model, f1_0, o.t, 1e-3);

    Table t;
    t.add_column("state");
    t.add_column("j");
    t.add_column("u");
    t.add_column("density");
    t.add_column("std_error");
    t.add_column("kinetic_f1");
    t.add_column("abs_diff");
    for (int v = 0; v < sp.S(); ++v) {
        const EntityState e = sp.unflatten(v);
        const std::size_t i = static_cast<std::size_t>(v);
        t.push_row({static_cast<double>(v), static_cast<double>(e.j),
                    static_cast<double>(e.u), est.density[i], est.std_error[i], ft.f1[i],
                    std::abs(est.density[i] - ft.f1[i])});
    }
    nlohmann::json cfg = base_config("ssa", o.common, model);
    cfg["N"] = o.N;
    cfg["t"] = o.t;
    cfg["replicas"] = o.replicas;
    emit(t, cfg, o.common);
}

struct FunctionalsOpts {
    CommonOpts common;
    double t = 1.0;
    int points = 5;
    int n_max = 4;
};

void run_functionals(const FunctionalsOpts& o) {
    if (o.points < 1) throw ValidationError("--points must be at least 1");
    if (o.n_max < 3) throw ValidationError("--nmax must be at least 3");
    const InteractionModel model = resolve_model(o.common);
    const StateSpace& sp = model.space;
    const FullObservables obs =
        random_sequence(SequenceKind::observable, sp, o.n_max, o.common.seed);
    // Rapidly decaying state components keep the finite-truncation
    // consistency residual meaningful.
    const FullStates states =
        random_sequence(SequenceKind::state, sp, o.n_max, o.common.seed + 1, 0.05);
    const int s_max = o.n_max - 2;
    const MarginalObservables b = marginal_obs_from_obs(obs, s_max);
    const MarginalStates f = marginals_from_full(states, s_max);
    const double consistency = std::abs(graded_bracket(b, f) - mean_value(obs, states));

    Table t;
    t.add_column("t");
    t.add_column("duality_residual");
    t.add_column("consistency_residual");
    for (int i = 0; i < o.points; ++i) {
        const double ti =
            o.points == 1 ? o.t
                          : o.t * static_cast<double>(i) / static_cast<double>(o.points - 1);
        t.push_row({ti, duality_full(model, obs, states, ti), consistency});
    }
    nlohmann::json cfg = base_config("functionals", o.common, model);
    cfg["t"] = o.t;
    cfg["points"] = o.points;
    cfg["n_max"] = o.n_max;
    emit(t, cfg, o.common);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Finite-state interacting-entity kinetics: jump-process generators, "
                 "marginal hierarchies, mean-field limits, and stochastic simulation"};
    app.require_subcommand(1);

    int threads = -1;
    app.add_option("--threads", threads,
                   "Thread cap (0 = auto); overrides ENTITY_KINETICS_THREADS");

    ValidateOpts vo;
    CLI::App* validate_cmd = app.add_subcommand("validate", "Check a model's tables");
    add_common(validate_cmd, vo.common);
    validate_cmd->add_option("--dump-generator", vo.dump_n,
                             "Emit the n-entity generator as (row, col, value) rows");

    HierarchyOpts ho;
    CLI::App* hierarchy_cmd = app.add_subcommand(
        "hierarchy", "Dual hierarchy: expansion vs integration and duality residual");
    add_common(hierarchy_cmd, ho.common);
    hierarchy_cmd->add_option("--smax", ho.s_max, "Truncation order");
    hierarchy_cmd->add_option("--t", ho.t, "Final time");
    hierarchy_cmd->add_option("--dt", ho.dt, "Integrator step");

    MeanfieldOpts mo;
    CLI::App* meanfield_cmd = app.add_subcommand(
        "meanfield", "Scaling convergence, chaos residuals, and series diagnostics");
    add_common(meanfield_cmd, mo.common);
    meanfield_cmd->add_option("--epsilons", mo.epsilons, "Scaling sweep, e.g. 0.1,0.05,0.025")
        ->delimiter(',');
    meanfield_cmd->add_option("--t", mo.t, "Final time");
    meanfield_cmd->add_option("--dt", mo.dt, "Integrator step");
    meanfield_cmd->add_option("--smax", mo.s_max, "Truncation order");
    meanfield_cmd->add_option("--nodes", mo.nodes, "Quadrature nodes per level");
    meanfield_cmd->add_option("--series-nmax", mo.series_n_max,
                              "Emit series-vs-ODE residuals up to this depth");
    meanfield_cmd->add_option("--chaos-k", mo.chaos_k,
                              "Emit chaos residuals for a k-ary initial observable");

    VlasovOpts vlo;
    CLI::App* vlasov_cmd =
        app.add_subcommand("vlasov", "Integrate the kinetic equation for f1");
    add_common(vlasov_cmd, vlo.common);
    vlasov_cmd->add_option("--t", vlo.t, "Final time");
    vlasov_cmd->add_option("--dt", vlo.dt, "Integrator step");

    SsaOpts so;
    CLI::App* ssa_cmd = app.add_subcommand(
        "ssa", "Stochastic simulation: empirical marginal vs the kinetic solution");
    add_common(ssa_cmd, so.common);
    ssa_cmd->add_option("--N", so.N, "Entity count");
    ssa_cmd->add_option("--t", so.t, "Final time");
    ssa_cmd->add_option("--replicas", so.replicas, "Independent replicas");

    FunctionalsOpts fo;
    CLI::App* functionals_cmd = app.add_subcommand(
        "functionals", "Duality and marginal-transform consistency residuals");
    add_common(functionals_cmd, fo.common);
    functionals_cmd->add_option("--t", fo.t, "Largest evolution time");
    functionals_cmd->add_option("--points", fo.points, "Time grid size");
    functionals_cmd->add_option("--nmax", fo.n_max, "Grand-canonical truncation");

    try {
        app.parse(argc, argv);
        if (threads >= 0) kernels::set_thread_limit(threads);
        if (validate_cmd->parsed()) run_validate(vo);
        if (hierarchy_cmd->parsed()) run_hierarchy(ho);
        if (meanfield_cmd->parsed()) run_meanfield(mo);
        if (vlasov_cmd->parsed()) run_vlasov(vlo);
        if (ssa_cmd->parsed()) run_ssa(so);
        if (functionals_cmd->parsed()) run_functionals(fo);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const InvariantError& e) {
        std::cerr << "invariant violated: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "unexpected failure: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
