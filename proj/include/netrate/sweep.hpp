#pragma once

// Experiment sweeps: generate -> simulate -> infer -> evaluate over one varied
// parameter, emitting one CSV row per (axis value, repetition).

#include <chrono>
#include <cmath>
#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "netrate/errors.hpp"
#include "netrate/graph_synthesis.hpp"
#include "netrate/io.hpp"
#include "netrate/metrics.hpp"
#include "netrate/random.hpp"
#include "netrate/simulator.hpp"
#include "netrate/solver.hpp"

namespace netrate {

enum class SweepAxis { Cascades, Horizon, Nodes };

inline SweepAxis parse_axis(std::string_view name) {
    if (name == "cascades") return SweepAxis::Cascades;
    if (name == "horizon") return SweepAxis::Horizon;
    if (name == "nodes") return SweepAxis::Nodes;
    throw ParameterError("unknown sweep axis '" + std::string(name) + "' (expected cascades, horizon or nodes)");
}

struct SweepSpec {
    SweepAxis axis = SweepAxis::Cascades;
    std::vector<double> values;
    std::size_t repetitions = 1;

    NetworkSpec network;
    /// On the nodes axis the edge count follows the node count.
    double edges_per_node = 2.0;
    std::size_t cascades = 1000;
    double horizon = 10.0;
    std::size_t min_infected = 2;
    SolverOptions solver;
    std::uint64_t seed = 1;

    void validate() const {
        if (values.empty()) throw ParameterError("sweep needs at least one axis value");
        if (repetitions < 1) throw ParameterError("repetitions must be >= 1");
        for (std::size_t k = 1; k < values.size(); ++k)
            if (!(values[k] > values[k - 1])) throw ParameterError("sweep values must be strictly increasing");
        for (double v : values)
            if (!(v > 0) || !std::isfinite(v)) throw ParameterError("sweep values must be positive");
    }
};

struct SweepRow {
    double axis_value = 0;
    std::size_t repetition = 0;
    EvalReport report;
    double wall_time_seconds = 0;
    std::string error;
};

/// Runs every cell in (axis value, repetition) order. The network and the
/// cascade stream of a cell depend only on the repetition (and, on the nodes
/// axis, on the node count), so values of one repetition share their ground
/// truth and differ only in the swept quantity.
inline std::vector<SweepRow> run_sweep(const SweepSpec& spec) {
    spec.validate();
    std::vector<SweepRow> rows;
    const Rng base(spec.seed);
    for (double value : spec.values) {
        for (std::size_t rep = 0; rep < spec.repetitions; ++rep) {
            SweepRow row;
            row.axis_value = value;
            row.repetition = rep;
            try {
                NetworkSpec ns = spec.network;
                SimConfig sim;
                sim.model = ns.model;
                sim.n_cascades = spec.cascades;
                sim.horizon = spec.horizon;
                sim.min_infected = spec.min_infected;
                sim.workers = spec.solver.workers;
                switch (spec.axis) {
                    case SweepAxis::Cascades: sim.n_cascades = static_cast<std::size_t>(std::llround(value)); break;
                    case SweepAxis::Horizon: sim.horizon = value; break;
                    case SweepAxis::Nodes:
                        ns.nodes = static_cast<std::size_t>(std::llround(value));
                        ns.edges = static_cast<std::size_t>(std::llround(spec.edges_per_node * value));
                        break;
                }
                const Rng cell = base.substream(rep);
                const Network truth = generate_network(ns, cell.substream(1));
                const CascadeSet cs = generate_cascades(truth, sim, cell.substream(2).state());
                const auto start = std::chrono::steady_clock::now();
                const InferenceResult inferred = infer_network(cs, ns.model, spec.solver);
                row.wall_time_seconds =
                    std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
                row.report = evaluate(truth, inferred.network);
                if (inferred.failed_nodes() > 0)
                    row.error = std::to_string(inferred.failed_nodes()) + " node problems failed";
            } catch (const std::exception& e) {
                row.error = e.what();
            }
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

/// RFC 4180 field quoting.
inline std::string csv_field(std::string_view s) {
    if (s.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(s);
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out += '"';
        out += ch;
    }
    out += '"';
    return out;
}

inline void write_sweep_csv(const std::vector<SweepRow>& rows, std::ostream& out) {
    out << "axis_value,repetition,precision,recall,accuracy,norm_mae,wall_time_seconds,error\r\n";
    for (const auto& r : rows) {
        out << format_number(r.axis_value) << ',' << r.repetition << ',';
        if (r.error.empty() || r.report.n_true > 0) {
            out << format_number(r.report.precision) << ',' << format_number(r.report.recall) << ','
                << format_number(r.report.accuracy) << ',' << format_number(r.report.normalized_mae);
        } else {
            out << ",,,";
        }
        out << ',' << format_number(r.wall_time_seconds) << ',' << csv_field(r.error) << "\r\n";
    }
}

inline void write_report_csv(const EvalReport& r, std::ostream& out) {
    out << "precision,recall,accuracy,norm_mae,n_true,n_inferred,n_common\r\n";
    out << format_number(r.precision) << ',' << format_number(r.recall) << ',' << format_number(r.accuracy) << ','
        << format_number(r.normalized_mae) << ',' << r.n_true << ',' << r.n_inferred << ',' << r.n_common << "\r\n";
}

}  // namespace netrate
