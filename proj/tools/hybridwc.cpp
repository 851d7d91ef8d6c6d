#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hybridwc/io.hpp"
#include "hybridwc/parallel.hpp"
#include "hybridwc/verify.hpp"

using namespace hybridwc;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerifyFail = 1;
constexpr int kExitUsage = 2;

struct CommonOpts {
    std::string config_path;
    std::string epsilon_override;
    long max_degree_override = -1;
    std::string format = "json";
    std::string out_path;
};

ModelParams load_model(const CommonOpts& o) {
    if (o.config_path.empty()) throw Error("a config file is required (-c/--config)");
    std::ifstream in(o.config_path);
    if (!in) throw Error("cannot read config file: " + o.config_path);
    json j = json::parse(in);
    ModelParams p = model_from_json(j);
    if (!o.epsilon_override.empty()) p.epsilon = Epsilon::parse(o.epsilon_override);
    if (o.max_degree_override >= 0) p.max_q_degree = o.max_degree_override;
    p.validate();
    return p;
}

void emit(const CommonOpts& o, const std::string& payload) {
    if (o.out_path.empty()) {
        std::cout << payload;
        if (!payload.empty() && payload.back() != '\n') std::cout << "\n";
        return;
    }
    std::ofstream out(o.out_path, std::ios::binary);
    if (!out) throw Error("cannot open output file: " + o.out_path);
    out << payload;
}

std::string csv_quote(const std::string& s) { return "\"" + s + "\""; }

// ---- jfun / mu ------------------------------------------------------------

std::string render_series_json(const ModelParams& p, bool equivariant, bool mirror_map) {
    std::vector<json> rows(static_cast<size_t>(p.max_q_degree) + 1);
    parallel_for(rows.size(), [&](size_t i) {
        long beta = static_cast<long>(i);
        if (equivariant) {
            EqStateClass c(p);
            if (p.epsilon.unstable(beta)) {
                for (long j = 1; j <= p.N(); ++j) {
                    if (mirror_map) c += nu_coeff(beta, j, p);
                    else c += unstable_coeff_eq(beta, j, p);
                }
            }
            rows[i] = jfun_coeff_eq_to_json(beta, c, p);
        } else {
            StateClass c(p);
            if (p.epsilon.unstable(beta))
                c = mirror_map ? mu_coeff(beta, p) : unstable_coeff_noneq(beta, p);
            rows[i] = jfun_coeff_to_json(beta, c, p);
        }
    });
    json out{{"model", model_to_json(p)},
             {"epsilon", p.epsilon.str()},
             {"equivariant", equivariant},
             {"series", mirror_map ? "mu" : "jfun"},
             {"coefficients", rows}};
    return out.dump(2) + "\n";
}

std::string render_series_csv(const ModelParams& p, bool equivariant, bool mirror_map) {
    std::ostringstream out;
    if (equivariant) out << "beta,sector,fixed_point,coeff\n";
    else out << "beta,sector,power,z_exponent,coeff\n";
    for (long beta = 0; beta <= p.max_q_degree; ++beta) {
        if (!p.epsilon.unstable(beta)) continue;
        if (equivariant) {
            for (long j = 1; j <= p.N(); ++j) {
                EqStateClass c = mirror_map ? nu_coeff(beta, j, p) : unstable_coeff_eq(beta, j, p);
                for (const auto& [k, v] : c.entries())
                    out << beta << "," << k.second << "," << k.first << ","
                        << csv_quote(v.canonical_string()) << "\n";
            }
        } else {
            StateClass c = mirror_map ? mu_coeff(beta, p) : unstable_coeff_noneq(beta, p);
            for (const auto& [k, v] : c.entries())
                for (const auto& [zk, coeff] : v.z_laurent_map()) {
                    auto [n, d] = coeff.canonical_pair();
                    out << beta << "," << k.first << "," << k.second << "," << zk << ","
                        << n.constant_value().str() << "/" << d.constant_value().str() << "\n";
                }
        }
    }
    return out.str();
}

std::string render_series_latex(const ModelParams& p, bool equivariant, bool mirror_map) {
    std::ostringstream out;
    out << "\\begin{tabular}{rll}\n\\hline\n";
    out << "$\\beta$ & sector & coefficient \\\\\n\\hline\n";
    for (long beta = 0; beta <= p.max_q_degree; ++beta) {
        if (!p.epsilon.unstable(beta)) continue;
        std::ostringstream cell;
        if (equivariant) {
            for (long j = 1; j <= p.N(); ++j) {
                EqStateClass c = mirror_map ? nu_coeff(beta, j, p) : unstable_coeff_eq(beta, j, p);
                for (const auto& [k, v] : c.entries())
                    cell << "$" << v.canonical_string() << "\\,\\mathbf{1}^{" << k.first
                         << "}$ ";
            }
        } else {
            StateClass c = mirror_map ? mu_coeff(beta, p) : unstable_coeff_noneq(beta, p);
            for (const auto& [k, v] : c.entries())
                cell << "$" << v.canonical_string() << "\\,H^{" << k.second << "}$ ";
        }
        std::string body = cell.str();
        if (body.empty()) body = "$0$";
        out << beta << " & $" << p.j_sector(beta).numerator() << "/" << p.d() << "$ & " << body
            << " \\\\\n";
    }
    out << "\\hline\n\\end{tabular}\n";
    return out.str();
}

// ---- graphs ----------------------------------------------------------------

// Insertion-sector tuples compatible with the global selection rule
// (-beta + n - 2)/d - sum m_i integral.
std::vector<std::vector<Multiplicity>> admissible_sector_tuples(long n, long beta,
                                                                const ModelParams& p) {
    std::vector<std::vector<Multiplicity>> out;
    std::vector<long> cur(static_cast<size_t>(n), 0);
    while (true) {
        long sum = 0;
        for (long s : cur) sum += s;
        if (((-beta + n - 2 - sum) % p.d() + p.d()) % p.d() == 0) {
            std::vector<Multiplicity> tuple;
            for (long s : cur) tuple.push_back(p.mult(s));
            out.push_back(std::move(tuple));
        }
        size_t i = 0;
        while (i < cur.size() && ++cur[i] == p.d()) cur[i++] = 0;
        if (i == cur.size()) break;
    }
    return out;
}

std::string render_graphs(const ModelParams& p, long n, long beta, int max_vertices,
                          const std::string& format) {
    if (n < 1) throw Error("graphs: at least one marked point is required");
    std::vector<DecoratedTree> trees;
    for (const auto& sectors : admissible_sector_tuples(n, beta, p)) {
        auto batch = enumerate_trees(sectors, beta, p, max_vertices);
        trees.insert(trees.end(), batch.begin(), batch.end());
    }
    if (format == "dot") {
        std::string out;
        for (size_t i = 0; i < trees.size(); ++i)
            out += tree_to_dot(trees[i], p, static_cast<int>(i));
        return out;
    }
    if (format == "csv") {
        std::ostringstream out;
        out << "index,vertices,edges,beta,aut_order,contribution\n";
        for (size_t i = 0; i < trees.size(); ++i) {
            json t = tree_to_json(trees[i], p);
            out << i << "," << trees[i].vertices.size() << "," << trees[i].edges.size() << ","
                << beta << "," << trees[i].aut_order << ","
                << csv_quote(t.at("contribution").get<std::string>()) << "\n";
        }
        return out.str();
    }
    json rows = json::array();
    for (const auto& t : trees) rows.push_back(tree_to_json(t, p));
    json out{{"model", model_to_json(p)},
             {"n", n},
             {"beta", beta},
             {"max_vertices", max_vertices},
             {"trees", rows}};
    return out.dump(2) + "\n";
}

// ---- verify ----------------------------------------------------------------

struct VerifyResult {
    json report;
    bool pass;
};

VerifyResult run_verify(const ModelParams& p, const std::string& which, long beta_e_max,
                        long beta_v_max) {
    json checks = json::array();
    bool all_pass = true;
    auto record = [&](const std::string& name, const Verdict& v, const json& extra = json::object()) {
        json row{{"check", name}, {"pass", v.pass}};
        if (!v.witness.empty()) row["witness"] = v.witness;
        for (auto it = extra.begin(); it != extra.end(); ++it) row[it.key()] = it.value();
        checks.push_back(row);
        all_pass = all_pass && v.pass;
    };
    if (which == "residues") {
        std::vector<std::tuple<long, long, long, long, long>> jobs;
        for (long j = 1; j <= p.N(); ++j)
            for (long jp = 1; jp <= p.N(); ++jp) {
                if (j == jp) continue;
                for (long am = 0; am < p.d(); ++am)
                    for (long amp = 0; amp < p.d(); ++amp)
                        for (long be = 1; be <= beta_e_max; ++be)
                            if (((be - am - amp) % p.d() + p.d()) % p.d() == 0)
                                jobs.emplace_back(j, jp, am, amp, be);
            }
        std::vector<json> rows(jobs.size());
        std::vector<char> oks(jobs.size(), 1);
        parallel_for(jobs.size(), [&](size_t i) {
            auto [j, jp, am, amp, be] = jobs[i];
            ResidueReport rep = check_residue_recursion(j, jp, p.mult(am), p.mult(amp), be, p,
                                                        p.max_q_degree);
            json row{{"check", "residues"}, {"j", j},      {"jp", jp},
                     {"m", am},             {"mp", amp},   {"beta_e", be},
                     {"modulus", rep.modulus},             {"pass", rep.pass},
                     {"vertex_cone_checked", rep.vertex_cone_checked}};
            if (!rep.pass) {
                row["witness_beta"] = rep.witness_beta;
                row["witness_lhs"] = rep.witness_lhs;
                row["witness_rhs"] = rep.witness_rhs;
                oks[i] = 0;
            }
            rows[i] = std::move(row);
        });
        for (size_t i = 0; i < rows.size(); ++i) {
            checks.push_back(rows[i]);
            all_pass = all_pass && oks[i];
        }
    } else if (which == "edges") {
        record("edges", check_edge_formula_sweep(p, beta_e_max, beta_v_max),
               json{{"beta_e_max", beta_e_max}, {"beta_v_max", beta_v_max}});
    } else if (which == "poles") {
        for (long j = 1; j <= p.N(); ++j)
            for (long s = 0; s < p.d(); ++s)
                record("poles", check_pole_structure(j, p.mult(s), p, p.max_q_degree),
                       json{{"j", j}, {"m", s}});
    } else if (which == "limit") {
        record("limit", check_noneq_consistency(p, p.max_q_degree));
    } else {
        throw Error("unknown verify subcommand: " + which);
    }
    json out{{"model", model_to_json(p)}, {"verify", which}, {"pass", all_pass},
             {"checks", checks}};
    return {out, all_pass};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact hybrid-model generating-function calculator and identity verifier"};
    app.require_subcommand(1);

    CommonOpts opts;
    bool equivariant = false;
    long graphs_n = 1, graphs_beta = 1;
    int max_vertices = 6;
    long beta_e_max = 3, beta_v_max = 4;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("-c,--config", opts.config_path, "model config JSON");
        cmd->add_option("--epsilon", opts.epsilon_override, "override epsilon (0+, p/q, n, inf)");
        cmd->add_option("--max-degree", opts.max_degree_override, "override max q-degree");
        cmd->add_option("--format", opts.format, "output format: json|csv|latex|dot");
        cmd->add_option("--out", opts.out_path, "output file (stdout when omitted)");
    };

    CLI::App* jfun_cmd = app.add_subcommand("jfun", "unstable J-function coefficients");
    add_common(jfun_cmd);
    jfun_cmd->add_flag("--equivariant", equivariant, "fixed-point basis coefficients");

    CLI::App* mu_cmd = app.add_subcommand("mu", "mirror-map coefficients");
    add_common(mu_cmd);
    mu_cmd->add_flag("--equivariant", equivariant, "vertex mirror-map coefficients");

    CLI::App* graphs_cmd = app.add_subcommand("graphs", "localization tree catalog");
    add_common(graphs_cmd);
    graphs_cmd->add_option("--n", graphs_n, "number of marked points");
    graphs_cmd->add_option("--beta", graphs_beta, "total degree");
    graphs_cmd->add_option("--max-vertices", max_vertices, "vertex bound");

    CLI::App* verify_cmd = app.add_subcommand("verify", "identity verification");
    std::string verify_which;
    for (const char* sub : {"residues", "edges", "poles", "limit"}) {
        CLI::App* s = verify_cmd->add_subcommand(sub);
        add_common(s);
        s->add_option("--beta-e-max", beta_e_max, "edge degree bound");
        s->add_option("--beta-v-max", beta_v_max, "unstable vertex degree bound");
        s->callback([sub, &verify_which] { verify_which = sub; });
    }
    verify_cmd->require_subcommand(1);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (jfun_cmd->parsed() || mu_cmd->parsed()) {
            ModelParams p = load_model(opts);
            bool mirror = mu_cmd->parsed();
            std::string payload;
            if (opts.format == "json") payload = render_series_json(p, equivariant, mirror);
            else if (opts.format == "csv") payload = render_series_csv(p, equivariant, mirror);
            else if (opts.format == "latex") payload = render_series_latex(p, equivariant, mirror);
            else throw Error("unsupported format for this command: " + opts.format);
            emit(opts, payload);
            return kExitOk;
        }
        if (graphs_cmd->parsed()) {
            ModelParams p = load_model(opts);
            emit(opts, render_graphs(p, graphs_n, graphs_beta, max_vertices, opts.format));
            return kExitOk;
        }
        if (verify_cmd->parsed()) {
            ModelParams p = load_model(opts);
            VerifyResult r = run_verify(p, verify_which, beta_e_max, beta_v_max);
            if (opts.format == "csv") {
                std::ostringstream out;
                out << "check,pass,witness\n";
                for (const auto& row : r.report.at("checks"))
                    out << row.at("check").get<std::string>() << ","
                        << (row.at("pass").get<bool>() ? "1" : "0") << ","
                        << csv_quote(row.value("witness", "")) << "\n";
                emit(opts, out.str());
            } else {
                emit(opts, r.report.dump(2) + "\n");
            }
            return r.pass ? kExitOk : kExitVerifyFail;
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const json::exception& e) {
        std::cerr << "error: malformed JSON: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
