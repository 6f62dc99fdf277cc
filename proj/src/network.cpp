#include "roasel/network.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include <json.hpp>

#include "roasel/split.hpp"

namespace roasel {

using nlohmann::json;

void NetworkSpec::validate() const {
    if (node_count <= 0) throw ParseError("nodes: must be a positive integer");
    if (adjacency.rows() != node_count || adjacency.cols() != node_count) {
        std::ostringstream os;
        os << "adjacency: expected " << node_count << "x" << node_count << ", got "
           << adjacency.rows() << "x" << adjacency.cols();
        throw ParseError(os.str());
    }
    if (candidates.empty()) throw ParseError("drivers: must be nonempty");
    std::set<int> seen;
    for (size_t i = 0; i < candidates.size(); ++i) {
        const int c = candidates[i];
        std::ostringstream path;
        path << "drivers[" << i << "]";
        if (c < 1 || c > node_count) throw ParseError(path.str() + ": index out of range");
        if (!seen.insert(c).second) throw ParseError(path.str() + ": duplicate candidate");
    }
    if (!input_weights.empty() && input_weights.size() != candidates.size())
        throw ParseError("input_weights: length must match drivers");
}

namespace {

bool positive_definite(const DenseMatrix& m) {
    // Leading principal minors, via determinants of leading blocks.
    if (!m.square()) return false;
    DenseMatrix sym = 0.5 * (m + m.transpose());
    if ((m - m.transpose()).frobenius_norm() > 1e-10 * (1.0 + m.frobenius_norm())) return false;
    for (int d = 1; d <= m.rows(); ++d) {
        if (lu_determinant(sym.block(0, 0, d, d)) <= 0.0) return false;
    }
    return true;
}

DenseMatrix parse_matrix(const json& j, const std::string& path) {
    if (!j.is_array() || j.empty()) throw ParseError(path + ": expected a nonempty 2-D array");
    const int rows = static_cast<int>(j.size());
    const int cols = static_cast<int>(j[0].size());
    std::vector<double> entries;
    entries.reserve(static_cast<size_t>(rows) * cols);
    for (int i = 0; i < rows; ++i) {
        if (!j[i].is_array() || static_cast<int>(j[i].size()) != cols)
            throw ParseError(path + ": rows have inconsistent lengths");
        for (int c = 0; c < cols; ++c) {
            if (!j[i][c].is_number()) throw ParseError(path + ": non-numeric entry");
            entries.push_back(j[i][c].get<double>());
        }
    }
    try {
        return DenseMatrix(rows, cols, std::move(entries));
    } catch (const DomainError&) {
        throw ParseError(path + ": non-finite entry");
    }
}

}  // namespace

DenseMatrix AnalysisConfig::state_cost_or_identity(int n) const {
    return state_cost ? *state_cost : DenseMatrix::identity(n);
}

DenseMatrix AnalysisConfig::subsystem_cost_or_identity(int k) const {
    return subsystem_state_cost ? *subsystem_state_cost : DenseMatrix::identity(k);
}

void AnalysisConfig::validate() const {
    if (input_cost <= 0.0) throw ParseError("config.R: must be positive");
    if (subsystem_input_cost <= 0.0) throw ParseError("config.R1: must be positive");
    if (saturation_limit <= 0.0) throw ParseError("config.u_max: must be positive");
    if (state_cost && !positive_definite(*state_cost))
        throw ParseError("config.Q: must be symmetric positive definite");
    if (subsystem_state_cost && !positive_definite(*subsystem_state_cost))
        throw ParseError("config.Q1: must be symmetric positive definite");
}

NetworkDocument parse_network(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("document: ") + e.what());
    }
    NetworkDocument doc;
    if (!j.contains("nodes") || !j["nodes"].is_number_integer())
        throw ParseError("nodes: missing or not an integer");
    doc.net.node_count = j["nodes"].get<int>();
    if (!j.contains("adjacency")) throw ParseError("adjacency: missing");
    doc.net.adjacency = parse_matrix(j["adjacency"], "adjacency");
    if (!j.contains("drivers") || !j["drivers"].is_array())
        throw ParseError("drivers: missing or not an array");
    for (const auto& d : j["drivers"]) {
        if (!d.is_number_integer()) throw ParseError("drivers: non-integer entry");
        doc.net.candidates.push_back(d.get<int>());
    }
    if (j.contains("input_weights")) {
        for (const auto& w : j["input_weights"]) doc.net.input_weights.push_back(w.get<double>());
    }
    doc.net.validate();

    if (j.contains("config")) {
        const json& c = j["config"];
        if (c.contains("Q") && c["Q"] != "identity") doc.config.state_cost = parse_matrix(c["Q"], "config.Q");
        if (c.contains("R")) doc.config.input_cost = c["R"].get<double>();
        if (c.contains("Q1") && c["Q1"] != "identity")
            doc.config.subsystem_state_cost = parse_matrix(c["Q1"], "config.Q1");
        if (c.contains("R1")) doc.config.subsystem_input_cost = c["R1"].get<double>();
        if (c.contains("u_max")) doc.config.saturation_limit = c["u_max"].get<double>();
        if (c.contains("antistable_margin")) doc.config.antistable_margin = c["antistable_margin"].get<double>();
        if (c.contains("rank_tol")) doc.config.rank_tol = c["rank_tol"].get<double>();
    }
    doc.config.validate();
    return doc;
}

std::string serialize_network(const NetworkDocument& doc) {
    json j;
    j["nodes"] = doc.net.node_count;
    json adj = json::array();
    for (int i = 0; i < doc.net.node_count; ++i) {
        json row = json::array();
        for (int c = 0; c < doc.net.node_count; ++c) row.push_back(doc.net.adjacency(i, c));
        adj.push_back(row);
    }
    j["adjacency"] = adj;
    j["drivers"] = doc.net.candidates;
    if (!doc.net.input_weights.empty()) j["input_weights"] = doc.net.input_weights;
    json cfg;
    if (doc.config.state_cost) {
        json q = json::array();
        for (int i = 0; i < doc.config.state_cost->rows(); ++i) {
            json row = json::array();
            for (int c = 0; c < doc.config.state_cost->cols(); ++c)
                row.push_back((*doc.config.state_cost)(i, c));
            q.push_back(row);
        }
        cfg["Q"] = q;
    }
    cfg["R"] = doc.config.input_cost;
    cfg["R1"] = doc.config.subsystem_input_cost;
    cfg["u_max"] = doc.config.saturation_limit;
    j["config"] = cfg;
    return j.dump(2);
}

DenseMatrix input_matrix(const NetworkSpec& net, int candidate_position) {
    if (candidate_position < 0 || candidate_position >= static_cast<int>(net.candidates.size()))
        throw DimensionError("input_matrix: candidate position out of range");
    DenseMatrix b(net.node_count, 1);
    const double w = net.input_weights.empty() ? 1.0 : net.input_weights[candidate_position];
    b(net.candidates[candidate_position] - 1, 0) = w;
    return b;
}

bool is_controllable(const DenseMatrix& a, const DenseMatrix& b, double tol) {
    if (a.rows() != b.rows() || b.cols() != 1)
        throw DimensionError("is_controllable: incompatible shapes");
    const int n = a.rows();
    if (n == 0) return true;
    DenseMatrix ctrb(n, n);
    DenseMatrix col = b;
    for (int p = 0; p < n; ++p) {
        // Normalize each power's column so large spectra do not overflow
        // the later powers out of the rank test.
        double norm = col.frobenius_norm();
        DenseMatrix scaled = col;
        if (norm > 0.0) scaled *= 1.0 / norm;
        for (int i = 0; i < n; ++i) ctrb(i, p) = scaled(i, 0);
        col = a * col;
    }
    return numerical_rank(ctrb, tol) == n;
}

std::vector<CandidateCheck> validate_candidates(const NetworkSpec& net, const AnalysisConfig& cfg) {
    net.validate();
    std::vector<CandidateCheck> out;
    out.reserve(net.candidates.size());

    SubsystemSplit split;
    bool have_split = false;
    try {
        split = split_spectrum(net.adjacency, cfg.antistable_margin);
        have_split = true;
    } catch (const CenterSpectrumError&) {
        // Full-system check still reported; subsystem flag mirrors it.
    }

    for (size_t i = 0; i < net.candidates.size(); ++i) {
        CandidateCheck c;
        c.node = net.candidates[i];
        DenseMatrix b = input_matrix(net, static_cast<int>(i));
        c.controllable = is_controllable(net.adjacency, b, cfg.rank_tol);
        if (!have_split || split.k == net.node_count) {
            c.subsystem_controllable = c.controllable;
        } else if (split.k == 0) {
            c.subsystem_controllable = true;  // nothing to stabilize
        } else {
            auto part = partition_input(split, b);
            c.subsystem_controllable = is_controllable(split.antistable_block, part.top, cfg.rank_tol);
        }
        out.push_back(c);
    }
    return out;
}

}  // namespace roasel
