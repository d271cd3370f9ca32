#include "gfpc/report.hpp"

#include "gfpc/errors.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace gfpc {

namespace {

std::string fmt(const char* spec, double value) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), spec, value);
    return buffer;
}

std::string f4(double value) { return fmt("%.4f", value); }
std::string g6(double value) { return fmt("%.6g", value); }
std::string g9(double value) { return fmt("%.9g", value); }

std::string eig_str(const Complex& lambda) {
    if (lambda.imag() == 0.0) return f4(lambda.real());
    const char sign = lambda.imag() >= 0.0 ? '+' : '-';
    return f4(lambda.real()) + " " + sign + " " + f4(std::abs(lambda.imag())) + "j";
}

std::string eig_list(const EigTriple& eigs) {
    std::string out;
    for (size_t i = 0; i < eigs.size(); ++i) {
        if (i) out += ", ";
        out += eig_str(eigs[i]);
    }
    return out;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    }
    out << content;
    out.flush();
    if (!out) {
        throw std::runtime_error("write failed for '" + path.string() + "'");
    }
}

bool wants(const OutputSection& output, const std::string& format) {
    for (const std::string& f : output.formats) {
        if (f == format) return true;
    }
    return false;
}

}  // namespace

bool DesignReport::all_ok() const {
    for (const CaseResult& c : cases) {
        if (!c.ok) return false;
    }
    return true;
}

DesignReport run_design(const DesignConfig& config) {
    DesignReport report;
    for (const CaseSpec& cs : config.cases) {
        CaseResult r;
        r.spec = cs;
        try {
            r.op = solve_operating_point(config.system);               // step 1
            r.gains = linearize(config.system, r.op);                  // step 2
            r.plant = build_state_space(config.system, r.gains);      // step 3
            r.ctrb = controllability(r.plant);                        // step 4
            const PerformanceSpec perf{cs.xi, cs.ts, cs.a};
            r.targets = spec_to_targets(perf);                        // step 5
            r.separation_warning = separation_weak(perf);
            r.gain = place_poles(r.plant, r.targets);                 // step 6
            r.ok = true;
        } catch (const std::exception& err) {
            r.ok = false;
            r.error = err.what();
        }
        report.cases.push_back(std::move(r));
    }
    return report;
}

std::string render_report(const DesignConfig& config, const DesignReport& report) {
    std::ostringstream out;
    out << "Grid-forming power-loop design report\n";
    out << "=====================================\n";
    out << "Units: angles in rad, powers/voltages/frequencies in p.u., times in s;\n";
    out << "omega_b in rad/s.\n\n";

    const SystemParams& sp = config.system;
    out << "System: omega_b=" << g6(sp.omega_b) << ", omega_g=" << g6(sp.omega_g)
        << ", v_g=" << g6(sp.v_g) << ", r_g=" << g6(sp.r_g) << ", x_g=" << g6(sp.x_g) << ",\n"
        << "        d_p=" << g6(sp.d_p) << ", d_q=" << g6(sp.d_q)
        << ", omega_set=" << g6(sp.omega_set) << ", p_set=" << g6(sp.p_set)
        << ", q_set=" << g6(sp.q_set) << ", v_set=" << g6(sp.v_set) << "\n";

    for (const CaseResult& r : report.cases) {
        out << "\nCase '" << r.spec.name << "'  (xi=" << g6(r.spec.xi) << ", ts=" << g6(r.spec.ts)
            << " s, a=" << g6(r.spec.a) << ")\n";
        out << "----------------------------------------------------------------------\n";
        if (!r.ok) {
            out << "  FAILED: " << r.error << "\n";
            if (r.ctrb.rank > 0 && !r.ctrb.controllable) {
                out << "  controllability: rank " << r.ctrb.rank << " < 3, singular values = ["
                    << g6(r.ctrb.singular_values(0)) << ", " << g6(r.ctrb.singular_values(1))
                    << ", " << g6(r.ctrb.singular_values(2)) << "]\n";
            }
            continue;
        }
        out << "  step 1  operating point   delta0 = " << f4(r.op.delta0)
            << ", v0 = " << f4(r.op.v0) << "\n";
        out << "  step 2  linearized gains  k_pdelta = " << f4(r.gains.k_pdelta)
            << ", k_pv = " << f4(r.gains.k_pv) << ", k_qdelta = " << f4(r.gains.k_qdelta)
            << ", k_qv = " << f4(r.gains.k_qv) << "\n";
        out << "  step 3  state matrices    a(1,3) = " << f4(r.plant.a(0, 2))
            << ", a(2,3) = " << f4(r.plant.a(1, 2)) << "\n";
        out << "          b = [" << f4(r.plant.b(0, 0)) << ", " << f4(r.plant.b(0, 1)) << "; "
            << f4(r.plant.b(1, 0)) << ", " << f4(r.plant.b(1, 1)) << "; "
            << f4(r.plant.b(2, 0)) << ", " << f4(r.plant.b(2, 1)) << "]\n";
        out << "  step 4  controllability   rank " << r.ctrb.rank
            << (r.ctrb.controllable ? " (controllable)" : " (NOT controllable)")
            << ", singular values = [" << g6(r.ctrb.singular_values(0)) << ", "
            << g6(r.ctrb.singular_values(1)) << ", " << g6(r.ctrb.singular_values(2)) << "]\n";
        out << "          p row 1 = [" << f4(r.ctrb.p_matrix(0, 0)) << ", "
            << f4(r.ctrb.p_matrix(0, 1)) << ", " << f4(r.ctrb.p_matrix(0, 2)) << ", "
            << f4(r.ctrb.p_matrix(0, 3)) << ", " << f4(r.ctrb.p_matrix(0, 4)) << ", "
            << f4(r.ctrb.p_matrix(0, 5)) << "]\n";
        out << "  step 5  targets           " << eig_list(r.targets.lambdas) << "\n";
        if (r.separation_warning) {
            out << "          warning: real eigenvalue is not well separated from the "
                   "dominant pair (a < 5*xi*omega_n)\n";
        }
        out << "  step 6  feedback gain\n";
        out << "          k = [" << f4(r.gain.k(0, 0)) << ", " << f4(r.gain.k(0, 1)) << ", "
            << f4(r.gain.k(0, 2)) << "; " << f4(r.gain.k(1, 0)) << ", " << f4(r.gain.k(1, 1))
            << ", " << f4(r.gain.k(1, 2)) << "]\n";
        out << "          achieved eigenvalues = " << eig_list(r.gain.achieved_eigs)
            << "  (max relative error " << fmt("%.2e", r.gain.max_rel_error) << ")\n";
        if (r.p_metrics) {
            out << "  metrics overshoot = " << f4(r.p_metrics->overshoot)
                << " %, settling = " << f4(r.p_metrics->settling_time)
                << " s, peak = " << f4(r.p_metrics->peak_time)
                << " s, final p = " << f4(r.p_metrics->final_value) << "\n";
        }
    }
    return out.str();
}

std::string trajectory_csv(const Trajectory& traj) {
    std::string out = "t,delta,omega,v,p,q,e1,e2\n";
    for (const TrajectoryRecord& rec : traj.records) {
        out += g9(rec.t);
        out += ',';
        out += g9(rec.delta);
        out += ',';
        out += g9(rec.omega);
        out += ',';
        out += g9(rec.v);
        out += ',';
        out += g9(rec.p);
        out += ',';
        out += g9(rec.q);
        out += ',';
        out += g9(rec.e1);
        out += ',';
        out += g9(rec.e2);
        out += '\n';
    }
    return out;
}

Trajectory parse_trajectory_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != "t,delta,omega,v,p,q,e1,e2") {
        throw std::runtime_error("trajectory csv: unexpected header");
    }
    Trajectory traj;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        TrajectoryRecord rec;
        double* fields[8] = {&rec.t, &rec.delta, &rec.omega, &rec.v,
                             &rec.p, &rec.q, &rec.e1, &rec.e2};
        std::istringstream row(line);
        std::string cell;
        for (double* field : fields) {
            if (!std::getline(row, cell, ',')) {
                throw std::runtime_error("trajectory csv: short row");
            }
            *field = std::stod(cell);
        }
        traj.records.push_back(rec);
    }
    return traj;
}

std::string metrics_table(const DesignReport& report) {
    std::ostringstream out;
    out << "case                 overshoot_pct   settling_s      peak_s\n";
    for (const CaseResult& r : report.cases) {
        char buffer[160];
        if (r.ok && r.p_metrics) {
            std::snprintf(buffer, sizeof(buffer), "%-20s %-15.4f %-15.4f %-15.4f",
                          r.spec.name.c_str(), r.p_metrics->overshoot,
                          r.p_metrics->settling_time, r.p_metrics->peak_time);
        } else {
            std::snprintf(buffer, sizeof(buffer), "%-20s %-15s %-15s %-15s", r.spec.name.c_str(),
                          "-", "-", "-");
        }
        std::string row(buffer);
        while (!row.empty() && row.back() == ' ') row.pop_back();
        out << row << "\n";
    }
    return out.str();
}

int cmd_design(const DesignConfig& config, const std::string& out_dir, std::ostream& out) {
    const DesignReport report = run_design(config);
    const std::string text = render_report(config, report);
    out << text;
    if (wants(config.output, "report")) {
        try {
            std::filesystem::create_directories(out_dir);
            write_file(std::filesystem::path(out_dir) / "design_report.txt", text);
        } catch (const std::exception& err) {
            out << "I/O error: " << err.what() << "\n";
            return kExitIo;
        }
    }
    return report.all_ok() ? kExitOk : kExitInfeasible;
}

int cmd_simulate(const DesignConfig& config, const std::string& out_dir, std::ostream& out) {
    DesignReport report = run_design(config);
    const SimConfig sim_cfg{config.sim.t_end, config.sim.dt, config.sim.record_every};

    try {
        std::filesystem::create_directories(out_dir);
    } catch (const std::exception& err) {
        out << "I/O error: " << err.what() << "\n";
        return kExitIo;
    }

    for (CaseResult& r : report.cases) {
        if (!r.ok) continue;
        try {
            const Trajectory traj =
                simulate_nonlinear(config.system, r.gain, config.sim.events, sim_cfg);
            if (!config.sim.events.empty()) {
                try {
                    r.p_metrics = step_metrics(traj, Signal::P, config.sim.events.front().time,
                                               config.sim.band);
                } catch (const NotSettledError&) {
                    r.p_metrics.reset();  // reported as '-' in the table
                }
            }
            if (wants(config.output, "csv")) {
                write_file(std::filesystem::path(out_dir) / (r.spec.name + "_trajectory.csv"),
                           trajectory_csv(traj));
            }
        } catch (const NumericalBlowupError& err) {
            r.ok = false;
            r.error = err.what();
        } catch (const std::exception& err) {
            out << "I/O error: " << err.what() << "\n";
            return kExitIo;
        }
    }

    const std::string table = metrics_table(report);
    out << table;
    for (const CaseResult& r : report.cases) {
        if (!r.ok) out << "case '" << r.spec.name << "' failed: " << r.error << "\n";
    }
    if (wants(config.output, "report")) {
        try {
            write_file(std::filesystem::path(out_dir) / "metrics.txt", table);
        } catch (const std::exception& err) {
            out << "I/O error: " << err.what() << "\n";
            return kExitIo;
        }
    }
    return report.all_ok() ? kExitOk : kExitInfeasible;
}

}  // namespace gfpc
