#pragma once

// Command-line front end: generate-network, simulate, infer, evaluate, sweep.
// Exit codes: 0 success, 1 runtime failure, 2 usage error.

#include <chrono>
#include <cstdint>
#include <ctime>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "netrate/netrate.hpp"

namespace netrate::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

inline std::string version_string() {
    return std::string("netrate ") + kVersion + " (cascade format " + std::to_string(kFormatVersion) +
           ", network format " + std::to_string(kFormatVersion) + ")";
}

namespace detail {

inline std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

// Writes `body` to `path`, appending a generated-at comment unless deterministic.
inline void write_text(const std::string& path, const std::string& body, bool deterministic) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    out << body;
    if (!deterministic) out << "# generated-at " << utc_timestamp() << '\n';
    if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

inline void write_csv(const std::string& path, const std::string& body) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    out << body;
    if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

/// `inferred.txt` -> `inferred.diag.csv`.
inline std::string diag_path(const std::string& out) {
    const auto slash = out.find_last_of('/');
    const auto dot = out.find_last_of('.');
    const std::string stem = (dot != std::string::npos && (slash == std::string::npos || dot > slash)) ? out.substr(0, dot) : out;
    return stem + ".diag.csv";
}

inline std::vector<double> parse_values(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        out.push_back(netrate::detail::parse_double(item, 1, "sweep value"));
    }
    return out;
}

}  // namespace detail

struct ModelArgs {
    std::string name = "exp";
    double delta = 1.0;

    TransmissionModel model() const { return parse_model(name, delta); }
};

inline void add_model_options(CLI::App* cmd, ModelArgs& m) {
    cmd->add_option("--model", m.name, "transmission model: exp, pow or ray")->capture_default_str();
    cmd->add_option("--delta", m.delta, "minimum delay of the pow model")->capture_default_str();
}

inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    CLI::App app{"netrate: infer diffusion networks and transmission rates from cascades"};
    app.require_subcommand(0, 1);
    app.set_config("--config", "", "optional TOML/INI config file; flags take precedence");
    bool show_version = false;
    bool deterministic = false;
    app.add_flag("--version", show_version, "print toolkit and file format versions");
    app.add_flag("--deterministic", deterministic, "omit generated-at comment lines from output files");

    // generate-network
    auto* gen = app.add_subcommand("generate-network", "generate a synthetic ground-truth network");
    std::string gen_topology = "kronecker-hierarchical", gen_out;
    std::size_t gen_nodes = 1024, gen_edges = 2048;
    double gen_pf = 0.35, gen_pb = 0.25;
    std::vector<double> gen_range;
    std::uint64_t gen_seed = 1;
    ModelArgs gen_model;
    gen->add_option("--topology", gen_topology,
                    "kronecker-random, kronecker-hierarchical, kronecker-core or forestfire")
        ->capture_default_str();
    gen->add_option("--nodes", gen_nodes, "node count (a power of two for Kronecker)")->capture_default_str();
    gen->add_option("--edges", gen_edges, "expected edge count (Kronecker)")->capture_default_str();
    gen->add_option("--p-forward", gen_pf, "Forest Fire forward burning probability")->capture_default_str();
    gen->add_option("--p-backward", gen_pb, "Forest Fire backward burning probability")->capture_default_str();
    gen->add_option("--rate-range", gen_range, "uniform rate range LO HI (default depends on model)")->expected(2);
    gen->add_option("--seed", gen_seed, "random seed")->capture_default_str();
    gen->add_option("--out", gen_out, "output network file")->required();
    add_model_options(gen, gen_model);

    // simulate
    auto* sim = app.add_subcommand("simulate", "simulate cascades over a network");
    std::string sim_network, sim_out;
    SimConfig sim_cfg;
    sim_cfg.n_cascades = 5000;
    std::uint64_t sim_seed = 1;
    ModelArgs sim_model;
    sim->add_option("--network", sim_network, "ground-truth network file")->required();
    sim->add_option("--horizon", sim_cfg.horizon, "observation window T")->capture_default_str();
    sim->add_option("--cascades", sim_cfg.n_cascades, "number of cascades")->capture_default_str();
    sim->add_option("--min-infected", sim_cfg.min_infected, "redraw cascades with fewer infections")
        ->capture_default_str();
    sim->add_option("--seed", sim_seed, "random seed")->capture_default_str();
    sim->add_option("--workers", sim_cfg.workers, "worker threads")->envname("NETRATE_WORKERS");
    sim->add_option("--out", sim_out, "output cascade file")->required();
    add_model_options(sim, sim_model);

    // infer
    auto* inf = app.add_subcommand("infer", "infer a network from cascades");
    std::string inf_cascades, inf_out;
    SolverOptions inf_opts;
    bool inf_verbose = false;
    ModelArgs inf_model;
    inf->add_option("--cascades", inf_cascades, "cascade file")->required();
    inf->add_option("--out", inf_out, "output network file")->required();
    inf->add_option("--threshold", inf_opts.edge_threshold, "report edges with rate above this")
        ->capture_default_str();
    inf->add_option("--workers", inf_opts.workers, "worker threads")->envname("NETRATE_WORKERS");
    inf->add_option("--max-iters", inf_opts.max_iters, "iteration cap per node")->capture_default_str();
    inf->add_option("--tol", inf_opts.rel_tol, "relative objective decrease tolerance")->capture_default_str();
    inf->add_flag("--verbose", inf_verbose, "print the objective breakdown");
    add_model_options(inf, inf_model);

    // evaluate
    auto* ev = app.add_subcommand("evaluate", "compare an inferred network with the truth");
    std::string ev_truth, ev_inferred, ev_out;
    ev->add_option("--truth", ev_truth, "ground-truth network file")->required();
    ev->add_option("--inferred", ev_inferred, "inferred network file")->required();
    ev->add_option("--out", ev_out, "report CSV (stdout if omitted)");

    // sweep
    auto* sw = app.add_subcommand("sweep", "run a generate/simulate/infer/evaluate sweep");
    std::string sw_axis = "cascades", sw_values, sw_topology = "kronecker-hierarchical", sw_out;
    SweepSpec sw_spec;
    ModelArgs sw_model;
    sw_spec.network.nodes = 128;
    sw_spec.network.edges = 256;
    sw->add_option("--axis", sw_axis, "cascades, horizon or nodes")->capture_default_str();
    sw->add_option("--values", sw_values, "comma-separated, strictly increasing axis values")->required();
    sw->add_option("--repetitions", sw_spec.repetitions, "repetitions per value")->capture_default_str();
    sw->add_option("--topology", sw_topology, "network topology")->capture_default_str();
    sw->add_option("--nodes", sw_spec.network.nodes, "node count")->capture_default_str();
    sw->add_option("--edges", sw_spec.network.edges, "edge count")->capture_default_str();
    sw->add_option("--edges-per-node", sw_spec.edges_per_node, "edges per node on the nodes axis")
        ->capture_default_str();
    sw->add_option("--cascades", sw_spec.cascades, "cascades per cell")->capture_default_str();
    sw->add_option("--horizon", sw_spec.horizon, "observation window T")->capture_default_str();
    sw->add_option("--seed", sw_spec.seed, "base random seed")->capture_default_str();
    sw->add_option("--threshold", sw_spec.solver.edge_threshold, "edge threshold")->capture_default_str();
    sw->add_option("--workers", sw_spec.solver.workers, "worker threads")->envname("NETRATE_WORKERS");
    sw->add_option("--out", sw_out, "output CSV (stdout if omitted)");
    add_model_options(sw, sw_model);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "netrate: " << e.what() << " (run with --help for usage)\n";
        return kExitUsage;
    }

    if (show_version) {
        out << version_string() << '\n';
        return kExitOk;
    }
    if (app.get_subcommands().empty()) {
        err << "netrate: a subcommand is required (generate-network, simulate, infer, evaluate, sweep)\n";
        return kExitUsage;
    }

    try {
        if (gen->parsed()) {
            NetworkSpec spec;
            spec.topology = parse_topology(gen_topology);
            spec.nodes = gen_nodes;
            spec.edges = gen_edges;
            spec.p_forward = gen_pf;
            spec.p_backward = gen_pb;
            spec.model = gen_model.model();
            if (!gen_range.empty()) spec.rates = RateRange{gen_range[0], gen_range[1]};
            const Network net = generate_network(spec, Rng(gen_seed));
            std::ostringstream body;
            write_network(net, body);
            detail::write_text(gen_out, body.str(), deterministic);
            err << "generated " << net.node_count() << " nodes, " << net.edge_count() << " edges -> " << gen_out
                << '\n';
        } else if (sim->parsed()) {
            sim_cfg.model = sim_model.model();
            const Network net = read_network(sim_network);
            const CascadeSet cs = generate_cascades(net, sim_cfg, sim_seed);
            std::ostringstream body;
            write_cascades(cs, body);
            detail::write_text(sim_out, body.str(), deterministic);
            err << "simulated " << cs.size() << " cascades -> " << sim_out << '\n';
        } else if (inf->parsed()) {
            const TransmissionModel model = inf_model.model();
            const CascadeSet cs = read_cascades(inf_cascades);
            const InferenceResult res = infer_network(cs, model, inf_opts);
            std::ostringstream body;
            write_network(res.network, body);
            detail::write_text(inf_out, body.str(), deterministic);

            std::ostringstream diag;
            diag << "node,iters,objective,converged\r\n";
            for (const auto& d : res.diagnostics)
                diag << d.node << ',' << d.iterations << ',' << format_number(d.objective) << ','
                     << (d.converged ? 1 : 0) << "\r\n";
            detail::write_csv(detail::diag_path(inf_out), diag.str());

            err << "inferred " << res.network.edge_count() << " edges -> " << inf_out << '\n';
            if (res.unconverged_nodes() > 0) err << "warning: " << res.unconverged_nodes() << " nodes did not converge\n";
            for (const auto& d : res.diagnostics)
                if (!d.error.empty()) err << "error: node " << d.node << ": " << d.error << '\n';
            if (inf_verbose) {
                Network raw(cs.node_count());
                for (NodeId i = 0; i < cs.node_count(); ++i)
                    for (std::size_t v = 0; v < res.candidates[i].size(); ++v)
                        if (res.raw_rates[i][v] > 0) raw.set_rate(res.candidates[i][v], i, res.raw_rates[i][v]);
                const auto b = likelihood_breakdown(cs, raw, model);
                out << "psi1 " << format_number(b.psi1) << "\npsi2 " << format_number(b.psi2) << "\npsi3 "
                    << format_number(b.psi3) << "\nneg_log_likelihood " << format_number(b.neg_log_likelihood())
                    << '\n';
            }
            if (res.failed_nodes() > 0) return kExitFailure;
        } else if (ev->parsed()) {
            const Network truth = read_network(ev_truth);
            const Network inferred = read_network(ev_inferred);
            const EvalReport report = evaluate(truth, inferred);
            std::ostringstream body;
            write_report_csv(report, body);
            if (ev_out.empty())
                out << body.str();
            else
                detail::write_csv(ev_out, body.str());
        } else if (sw->parsed()) {
            sw_spec.axis = parse_axis(sw_axis);
            sw_spec.values = detail::parse_values(sw_values);
            sw_spec.network.topology = parse_topology(sw_topology);
            sw_spec.network.model = sw_model.model();
            const auto rows = run_sweep(sw_spec);
            std::ostringstream body;
            write_sweep_csv(rows, body);
            if (sw_out.empty())
                out << body.str();
            else
                detail::write_csv(sw_out, body.str());
        }
    } catch (const ParameterError& e) {
        err << "netrate: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "netrate: " << e.what() << '\n';
        return kExitFailure;
    }
    return kExitOk;
}

}  // namespace netrate::cli
