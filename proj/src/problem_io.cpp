#include "gnesolve/problem_io.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>

namespace gnesolve {

using nlohmann::json;

namespace {

SparsePolynomial parse_poly(const json& terms, int n, const std::string& where) {
    if (!terms.is_array()) throw std::runtime_error(where + ": expected an array of terms");
    SparsePolynomial p(n);
    int ti = 0;
    for (const auto& t : terms) {
        const std::string at = where + ".terms[" + std::to_string(ti++) + "]";
        if (!t.is_object() || !t.contains("coeff") || !t.contains("exps"))
            throw std::runtime_error(at + ": term needs 'coeff' and 'exps'");
        if (!t["coeff"].is_number()) throw std::runtime_error(at + ".coeff: expected a number");
        const double c = t["coeff"].get<double>();
        if (!std::isfinite(c)) throw std::runtime_error(at + ".coeff: must be finite");
        const auto& exps = t["exps"];
        if (!exps.is_array() || static_cast<int>(exps.size()) != n)
            throw std::runtime_error(at + ".exps: expected " + std::to_string(n) + " integers");
        Monomial a(n);
        for (int i = 0; i < n; ++i) {
            if (!exps[i].is_number_integer() || exps[i].get<int>() < 0)
                throw std::runtime_error(at + ".exps[" + std::to_string(i) +
                                         "]: expected a nonnegative integer");
            a[i] = exps[i].get<int>();
        }
        p.add_term(a, c);
    }
    return p;
}

json poly_to_json(const SparsePolynomial& p) {
    json terms = json::array();
    for (const auto& [a, c] : p.terms()) {
        json t;
        t["coeff"] = c.real();
        t["exps"] = a;
        terms.push_back(std::move(t));
    }
    return terms;
}

json vector_to_json(const Eigen::VectorXd& v) {
    json a = json::array();
    for (int i = 0; i < v.size(); ++i) a.push_back(v[i]);
    return a;
}

}  // namespace

GnepProblem parse_problem(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw std::runtime_error(std::string("problem file is not valid JSON: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("players") || !doc["players"].is_array() ||
        doc["players"].empty())
        throw std::runtime_error("problem file needs a nonempty 'players' array");

    int n = 0;
    for (const auto& pl : doc["players"]) {
        if (!pl.is_object() || !pl.contains("dim") || !pl["dim"].is_number_integer() ||
            pl["dim"].get<int>() < 1)
            throw std::runtime_error("players[*].dim: expected a positive integer");
        n += pl["dim"].get<int>();
    }

    std::vector<PlayerProblem> players;
    int pi = 0;
    for (const auto& pl : doc["players"]) {
        const std::string where = "players[" + std::to_string(pi++) + "]";
        PlayerProblem p;
        p.dim = pl["dim"].get<int>();
        if (!pl.contains("objective"))
            throw std::runtime_error(where + ": missing 'objective'");
        p.objective = parse_poly(pl["objective"], n, where + ".objective");
        if (pl.contains("constraints")) {
            if (!pl["constraints"].is_array())
                throw std::runtime_error(where + ".constraints: expected an array");
            int ci = 0;
            for (const auto& c : pl["constraints"]) {
                const std::string cw = where + ".constraints[" + std::to_string(ci++) + "]";
                if (!c.is_object() || !c.contains("kind") || !c.contains("poly"))
                    throw std::runtime_error(cw + ": needs 'kind' and 'poly'");
                const std::string kind = c["kind"].get<std::string>();
                if (kind != "eq" && kind != "ineq")
                    throw std::runtime_error(cw + ".kind: expected \"eq\" or \"ineq\"");
                p.constraints.push_back(
                    {parse_poly(c["poly"], n, cw + ".poly"),
                     kind == "eq" ? ConstraintKind::Equality : ConstraintKind::Inequality});
            }
        }
        players.push_back(std::move(p));
    }
    return GnepProblem(std::move(players));
}

GnepProblem load_problem(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open problem file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_problem(ss.str());
}

std::string print_problem(const GnepProblem& prob) {
    json doc;
    doc["players"] = json::array();
    for (const auto& p : prob.players()) {
        json pl;
        pl["dim"] = p.dim;
        pl["objective"] = poly_to_json(p.objective);
        pl["constraints"] = json::array();
        for (const auto& c : p.constraints) {
            json cj;
            cj["kind"] = c.kind == ConstraintKind::Equality ? "eq" : "ineq";
            cj["poly"] = poly_to_json(c.g);
            pl["constraints"].push_back(std::move(cj));
        }
        doc["players"].push_back(std::move(pl));
    }
    return doc.dump(2);
}

void save_problem(const GnepProblem& prob, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write problem file: " + path);
    out << print_problem(prob) << "\n";
}

std::string tuples_to_json(const GnepProblem& prob, const ClassifiedTuples& cls) {
    const int n = prob.total_dim();
    json arr = json::array();
    for (const auto& t : cls.tuples) {
        json e;
        json x = json::array(), lam = json::array();
        for (int i = 0; i < t.point.size(); ++i) {
            json pair = json::array({t.point[i].real(), t.point[i].imag()});
            (i < n ? x : lam).push_back(std::move(pair));
        }
        e["x"] = std::move(x);
        e["lambda"] = std::move(lam);
        e["residual"] = t.residual;
        e["status"] = t.is_kkt ? "kkt" : (t.is_real ? "real" : "complex");
        e["singular"] = t.is_singular;
        arr.push_back(std::move(e));
    }
    return arr.dump(2);
}

std::string report_to_json(const GneReport& report) {
    json doc;
    doc["mixed_volume"] = report.mixed_volume;
    doc["counts"] = {{"complex_kkt_tuples", report.num_complex},
                     {"distinct_tuples", report.num_distinct},
                     {"kkt_tuples", report.num_kkt},
                     {"kkt_points", report.num_points},
                     {"singular", report.num_singular}};
    doc["paths"] = {{"tracked", report.paths_tracked},
                    {"converged", report.converged},
                    {"diverged", report.diverged},
                    {"failed", report.failed}};
    doc["completeness"] = report.complete ? "complete" : "possibly_incomplete";
    doc["gnes"] = json::array();
    for (const auto& g : report.gnes) {
        json e;
        e["x"] = vector_to_json(g.x);
        e["delta"] = g.delta;
        e["player_deltas"] = g.player_deltas;
        doc["gnes"].push_back(std::move(e));
    }
    doc["undetermined"] = json::array();
    for (const auto& u : report.undetermined) doc["undetermined"].push_back(vector_to_json(u));
    doc["timing"] = {{"kkt_seconds", report.kkt_seconds},
                     {"selection_seconds", report.select_seconds}};
    return doc.dump(2);
}

std::string report_to_text(const GneReport& report) {
    std::ostringstream os;
    os << "mixed volume:        " << report.mixed_volume << "\n";
    os << "complex KKT tuples:  " << report.num_complex << " (" << report.num_distinct
       << " distinct, " << report.num_singular << " singular)\n";
    os << "KKT tuples (K):      " << report.num_kkt << "\n";
    os << "KKT points (P):      " << report.num_points << "\n";
    os << "paths:               " << report.paths_tracked << " tracked, " << report.converged
       << " converged, " << report.diverged << " diverged, " << report.failed << " failed\n";
    os << "completeness:        "
       << (report.complete ? "complete" : "possibly incomplete") << "\n";
    os << "timing:              " << report.kkt_seconds << " s KKT solve, "
       << report.select_seconds << " s selection\n";
    if (report.gnes.empty()) {
        os << (report.complete ? "no GNE exists (certified)\n" : "no GNE found\n");
    } else {
        os << "GNEs (" << report.gnes.size() << "):\n";
        for (const auto& g : report.gnes) {
            os << "  x = (";
            for (int i = 0; i < g.x.size(); ++i) os << (i ? ", " : "") << g.x[i];
            os << ")  delta = " << g.delta << "\n";
        }
    }
    if (!report.undetermined.empty()) {
        os << "undetermined candidates (" << report.undetermined.size() << "):\n";
        for (const auto& u : report.undetermined) {
            os << "  x = (";
            for (int i = 0; i < u.size(); ++i) os << (i ? ", " : "") << u[i];
            os << ")\n";
        }
    }
    return os.str();
}

}  // namespace gnesolve
