// Command-line front end: analyze a network document, export ellipse
// boundary data, verify computed regions empirically, or run a single
// closed-loop trajectory.

#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "roasel/care.hpp"
#include "roasel/network.hpp"
#include "roasel/roa.hpp"
#include "roasel/sim.hpp"
#include "roasel/split.hpp"

using namespace roasel;
using nlohmann::json;

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitCenterSpectrum = 3;
constexpr int kExitDimension = 4;

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open input file: " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open output file: " + path);
    out << content;
}

bool is_antistable(const DenseMatrix& a, double margin, bool& has_center, std::string& center_list) {
    has_center = false;
    bool anti = true;
    std::ostringstream bad;
    bool first = true;
    for (const auto& e : eigenvalues(a)) {
        if (std::fabs(e.real()) < margin) {
            has_center = true;
            if (!first) bad << ", ";
            bad << e.real() << (e.imag() >= 0 ? "+" : "") << e.imag() << "i";
            first = false;
        }
        if (e.real() <= 0.0) anti = false;
    }
    center_list = bad.str();
    return anti;
}

json report_to_json(const DriverReport& rep) {
    json j;
    j["schema"] = 1;
    j["mode"] = rep.mode == ReportMode::FullAntistable ? "full-antistable" : "subsystem";
    j["subsystem_order"] = rep.subsystem_order;
    j["globally_stabilizable"] = rep.globally_stabilizable;
    j["best_candidate"] = rep.best_candidate;
    json recs = json::array();
    for (const auto& r : rep.records) {
        json rj;
        rj["node"] = r.node;
        rj["controllable"] = r.controllable;
        rj["excluded"] = r.excluded;
        if (r.excluded) {
            rj["exclusion_reason"] = r.exclusion_reason;
        } else if (!rep.globally_stabilizable) {
            rj["radius"] = r.radius;
            rj["sqrt_det"] = r.sqrt_det;
            rj["measure"] = r.measure;
            rj["ratio"] = r.ratio;
        }
        recs.push_back(rj);
    }
    j["candidates"] = recs;
    return j;
}

void print_table(const DriverReport& rep) {
    std::cout << std::fixed << std::setprecision(4);
    if (rep.mode == ReportMode::Subsystem)
        std::cout << "mode: subsystem (anti-stable order k = " << rep.subsystem_order << ")\n";
    else
        std::cout << "mode: full-antistable (n = " << rep.subsystem_order << ")\n";
    std::cout << std::setw(6) << "node" << std::setw(12) << "delta" << std::setw(12) << "sqrt(detP)"
              << std::setw(12) << "measure" << std::setw(10) << "ratio" << std::setw(6) << "rank"
              << "\n";
    // rank by measure descending
    std::vector<const DriverRecord*> order;
    for (const auto& r : rep.records)
        if (!r.excluded) order.push_back(&r);
    std::sort(order.begin(), order.end(),
              [](const DriverRecord* a, const DriverRecord* b) {
                  if (a->measure != b->measure) return a->measure > b->measure;
                  return a->node < b->node;
              });
    for (size_t i = 0; i < order.size(); ++i) {
        const auto& r = *order[i];
        std::cout << std::setw(6) << r.node << std::setw(12) << r.radius << std::setw(12)
                  << r.sqrt_det << std::setw(12) << r.measure << std::setw(10) << r.ratio
                  << std::setw(6) << (i + 1) << "\n";
    }
    for (const auto& r : rep.records)
        if (r.excluded)
            std::cout << std::setw(6) << r.node << "  excluded: " << r.exclusion_reason << "\n";
    std::cout << "best driver node: " << rep.best_candidate << "\n";
}

DriverReport run_analysis(const NetworkDocument& doc, bool force_subsystem) {
    bool has_center = false;
    std::string centers;
    bool anti = is_antistable(doc.net.adjacency, doc.config.antistable_margin, has_center, centers);
    if (has_center)
        throw CenterSpectrumError("eigenvalues within margin of the imaginary axis: " + centers);
    if (anti && !force_subsystem) return rank_drivers_antistable(doc.net, doc.config);
    return rank_drivers_general(doc.net, doc.config);
}

int candidate_position(const NetworkSpec& net, int node) {
    for (size_t i = 0; i < net.candidates.size(); ++i)
        if (net.candidates[i] == node) return static_cast<int>(i);
    throw ParseError("node " + std::to_string(node) + " is not a listed driver candidate");
}

int cmd_analyze(const std::string& input, const std::string& out, bool force_subsystem) {
    NetworkDocument doc = parse_network(read_file(input));
    DriverReport rep;
    try {
        rep = run_analysis(doc, force_subsystem);
    } catch (const CenterSpectrumError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitCenterSpectrum;
    }
    if (rep.globally_stabilizable) {
        std::cout << "globally stabilizable; ROA unbounded\n";
        if (!out.empty()) write_file(out, report_to_json(rep).dump(2) + "\n");
        return 0;
    }
    print_table(rep);
    if (!out.empty()) write_file(out, report_to_json(rep).dump(2) + "\n");
    return 0;
}

int cmd_ellipse(const std::string& input, int node, int points, const std::string& out) {
    NetworkDocument doc = parse_network(read_file(input));
    DriverReport rep = run_analysis(doc, false);
    if (rep.globally_stabilizable) {
        std::cerr << "error: network is stable; no bounded ellipsoid to export\n";
        return kExitDimension;
    }
    if (rep.subsystem_order != 2) {
        std::cerr << "error: ellipse export needs analysis dimension 2, got "
                  << rep.subsystem_order << "\n";
        return kExitDimension;
    }
    const DriverRecord* rec = nullptr;
    for (const auto& r : rep.records)
        if (r.node == node) rec = &r;
    if (!rec || rec->excluded) {
        std::cerr << "error: node " << node << " has no valid analysis record\n";
        return kExitValidation;
    }
    auto pts = boundary_points(rec->roa, points);
    std::ostringstream os;
    os.precision(17);
    if (rep.mode == ReportMode::Subsystem)
        os << "# coordinates: z (anti-stable subsystem)\nz1,z2\n";
    else
        os << "x1,x2\n";
    for (const auto& p : pts) os << p[0] << "," << p[1] << "\n";
    if (out.empty())
        std::cout << os.str();
    else
        write_file(out, os.str());
    return 0;
}

int cmd_verify(const std::string& input, int node, int samples, double boundary_scale,
               double scale_delta) {
    NetworkDocument doc = parse_network(read_file(input));
    DriverReport rep = run_analysis(doc, false);
    if (rep.globally_stabilizable) {
        std::cout << "globally stabilizable; nothing to verify\n";
        return 0;
    }
    bool all_pass = true;
    std::cout << std::fixed << std::setprecision(4);
    for (const auto& rec : rep.records) {
        if (node != 0 && rec.node != node) continue;
        if (rec.excluded) {
            std::cout << "node " << rec.node << ": skipped (" << rec.exclusion_reason << ")\n";
            continue;
        }
        EllipsoidRoa roa = rec.roa;
        roa.radius *= scale_delta;
        ControlLaw law = make_control_law(rec.riccati.gain, doc.config.saturation_limit);
        VerificationReport vr;
        if (rep.mode == ReportMode::Subsystem) {
            int pos = candidate_position(doc.net, rec.node);
            auto part = partition_input(rep.split, input_matrix(doc.net, pos));
            vr = verify_roa(rep.split.antistable_block, part.top, law, roa,
                            samples, boundary_scale, doc.config.sim);
        } else {
            int pos = candidate_position(doc.net, rec.node);
            vr = verify_roa(doc.net.adjacency, input_matrix(doc.net, pos), law, roa,
                            samples, boundary_scale, doc.config.sim);
        }
        std::cout << "node " << rec.node << ": " << (vr.pass ? "pass" : "FAIL") << " ("
                  << vr.samples_converged << "/" << vr.samples_total
                  << " converged, worst Lyapunov increase " << std::scientific
                  << vr.worst_lyapunov_increase << std::fixed << ")\n";
        all_pass = all_pass && vr.pass;
    }
    return all_pass ? 0 : 1;
}

int cmd_simulate(const std::string& input, int node, const std::string& x0_str, double horizon,
                 double step, const std::string& out) {
    NetworkDocument doc = parse_network(read_file(input));

    std::vector<double> x0;
    {
        std::istringstream is(x0_str);
        std::string tok;
        while (std::getline(is, tok, ',')) x0.push_back(std::stod(tok));
    }
    if (static_cast<int>(x0.size()) != doc.net.node_count) {
        std::cerr << "error: --x0 has " << x0.size() << " entries, network has "
                  << doc.net.node_count << " nodes\n";
        return kExitValidation;
    }

    DriverReport rep = run_analysis(doc, false);
    int pos = candidate_position(doc.net, node);
    const DriverRecord* rec = nullptr;
    for (const auto& r : rep.records)
        if (r.node == node) rec = &r;
    if (!rec || rec->excluded) {
        std::cerr << "error: node " << node << " has no valid analysis record\n";
        return kExitValidation;
    }

    DenseMatrix b = input_matrix(doc.net, pos);
    const int n = doc.net.node_count;
    DenseMatrix gain_full(1, n);
    DenseMatrix lyap(n, n);
    if (rep.mode == ReportMode::Subsystem && !rep.globally_stabilizable) {
        // u = -H z1 with z = V⁻¹ x: full-state gain [H 0] V⁻¹ and Lyapunov
        // shape V⁻ᵀ blockdiag(P̃, 0) V⁻¹.
        const int k = rep.subsystem_order;
        DenseMatrix hk(1, n);
        for (int j = 0; j < k; ++j) hk(0, j) = rec->riccati.gain(0, j);
        gain_full = hk * rep.split.transform_inv;
        DenseMatrix pk(n, n);
        pk.set_block(0, 0, rec->riccati.p_matrix);
        lyap = rep.split.transform_inv.transpose() * pk * rep.split.transform_inv;
    } else {
        gain_full = rec->riccati.gain;
        lyap = rec->riccati.p_matrix;
    }
    ControlLaw law = make_control_law(gain_full, doc.config.saturation_limit);
    SimConfig sim = doc.config.sim;
    TrajectoryRecord traj = simulate(doc.net.adjacency, b, law, x0, horizon, step, &lyap, sim);
    std::string csv = trajectory_csv(traj);
    if (out.empty())
        std::cout << csv;
    else
        write_file(out, csv);
    std::cout << "converged: " << (traj.converged ? "true" : "false") << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Driver-node selection by invariant-ellipsoid region of attraction"};
    app.require_subcommand(1);

    std::string input, out;
    int node = 0, points = 360, samples = 32;
    double boundary_scale = 0.99, scale_delta = 1.0, horizon = 50.0, step = 1e-3;
    std::string x0_str;
    bool force_subsystem = false;

    auto* analyze = app.add_subcommand("analyze", "Rank driver nodes by ellipsoid measure");
    analyze->add_option("file", input)->required();
    analyze->add_option("--out", out, "Write JSON report");
    analyze->add_flag("--force-subsystem", force_subsystem, "Use the subsystem path even for fully anti-stable networks");

    auto* ellipse = app.add_subcommand("ellipse", "Export ellipse boundary points as CSV");
    ellipse->add_option("file", input)->required();
    ellipse->add_option("--node", node)->required();
    ellipse->add_option("--points", points);
    ellipse->add_option("--out", out);

    auto* verify = app.add_subcommand("verify", "Empirically verify contractive invariance");
    verify->add_option("file", input)->required();
    verify->add_option("--node", node);
    verify->add_option("--samples", samples);
    verify->add_option("--boundary-scale", boundary_scale);
    verify->add_option("--scale-delta", scale_delta);

    auto* simulate_cmd = app.add_subcommand("simulate", "Run one closed-loop trajectory");
    simulate_cmd->add_option("file", input)->required();
    simulate_cmd->add_option("--node", node)->required();
    simulate_cmd->add_option("--x0", x0_str)->required();
    simulate_cmd->add_option("--horizon", horizon);
    simulate_cmd->add_option("--step", step);
    simulate_cmd->add_option("--out", out);

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand(analyze)) return cmd_analyze(input, out, force_subsystem);
        if (app.got_subcommand(ellipse)) return cmd_ellipse(input, node, points, out);
        if (app.got_subcommand(verify)) return cmd_verify(input, node, samples, boundary_scale, scale_delta);
        if (app.got_subcommand(simulate_cmd)) return cmd_simulate(input, node, x0_str, horizon, step, out);
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const CenterSpectrumError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitCenterSpectrum;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    }
    return 0;
}
