#pragma once

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "edgsolve/edgsolve.hpp"

// Command-line front end. Every subcommand reads one program file ('-' for
// stdin) and writes deterministic text or JSON. Exit codes: 0 success,
// 1 semantic finding (verify mismatch), 2 usage or parse error, 3 budget
// exhausted.

namespace edgsolve::cli {

using Json = nlohmann::ordered_json;

struct Config {
    std::string input = "-";
    std::string format = "text";
    std::string kind = "edg";  // graph subcommand
    std::string method = "coloring";
    std::string heuristic = "handles";
    long max_models = kDefaultModelCap;
    long max_cycles = kDefaultCycleCap;
    long max_atoms = kDefaultAtomCap;
    long max_unfold = kDefaultUnfoldCap;
};

namespace detail {

inline std::string read_input(const Config& cfg, std::istream& in) {
    if (cfg.input == "-") {
        std::ostringstream buf;
        buf << in.rdbuf();
        return buf.str();
    }
    std::ifstream file(cfg.input);
    if (!file) throw Error("cannot open '" + cfg.input + "'");
    std::ostringstream buf;
    buf << file.rdbuf();
    return buf.str();
}

inline Json models_json(const Program& p, const std::vector<Interpretation>& models) {
    std::vector<std::vector<std::string>> rows;
    rows.reserve(models.size());
    for (const Interpretation& m : models) rows.push_back(m.names(p));
    std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
        if (a.size() != b.size()) return a.size() < b.size();
        return a < b;
    });
    return Json(rows);
}

inline void print_models_text(std::ostream& out, const Program& p,
                              const std::vector<Interpretation>& models, bool truncated) {
    Json rows = models_json(p, models);
    for (const auto& row : rows) {
        out << "{";
        bool first = true;
        for (const auto& name : row) {
            out << (first ? " " : ", ") << name.get<std::string>();
            first = false;
        }
        out << (first ? "}" : " }") << "\n";
    }
    out << models.size() << " stable model" << (models.size() == 1 ? "" : "s");
    if (truncated) out << " (model cap reached)";
    out << "\n";
}

struct SolveOutcome {
    std::vector<Interpretation> models;
    bool truncated = false;
};

inline SolveOutcome solve_with_method(const Program& p, const Config& cfg) {
    SolveOutcome outcome;
    if (cfg.method == "brute") {
        outcome.models = enumerate_stable_brute(p, cfg.max_atoms);
        return outcome;
    }
    auto [kernel, log] = to_kernel(p, cfg.max_unfold);
    if (cfg.method == "decomposition") {
        DecompositionOptions opts;
        opts.cycle_cap = cfg.max_cycles;
        opts.atom_cap = cfg.max_atoms;
        for (const Interpretation& m : solve_by_decomposition(kernel, opts))
            outcome.models.push_back(reconstruct_model(m, log));
    } else {
        Edg g = build_edg(kernel.program);
        SolveOptions opts;
        opts.max_models = cfg.max_models;
        opts.cycle_cap = cfg.max_cycles;
        opts.heuristic = cfg.heuristic == "lex" ? SolveOptions::Heuristic::lexicographic
                                                : SolveOptions::Heuristic::handles;
        SolveResult result = solve_colorings(g, opts);
        outcome.truncated = result.truncated;
        for (const ColoringModel& m : result.models)
            outcome.models.push_back(reconstruct_model(m.interpretation, log));
    }
    std::sort(outcome.models.begin(), outcome.models.end());
    return outcome;
}

inline Json log_json(const Program& p, const TransformLog& log) {
    Json facts = Json::array(), falses = Json::array(), tail = Json::array();
    for (AtomId a : log.established_facts) facts.push_back(p.atom_name(a));
    for (AtomId a : log.forced_false) falses.push_back(p.atom_name(a));
    for (const auto& layer : log.stripped_tail) {
        Json rules = Json::array();
        for (const Rule& r : layer.rules) rules.push_back(print_rule(p, r));
        tail.push_back(Json{{"atom", p.atom_name(layer.atom)}, {"rules", rules}});
    }
    return Json{{"facts", facts}, {"false", falses}, {"tail", tail}};
}

inline Json edg_json(const Edg& g) {
    Json vertices = Json::array();
    for (int v = 0; v < g.vertex_count(); ++v) {
        const Edg::Vertex& vx = g.vertex(v);
        vertices.push_back(Json{{"label", g.label(v)},
                                {"atom", g.atom_name(vx.atom)},
                                {"rule_index", vx.rule_index}});
    }
    Json edges = Json::array();
    for (const Edg::Edge& e : g.edges())
        edges.push_back(Json{{"from", g.label(e.from)},
                             {"to", g.label(e.to)},
                             {"sign", std::string(1, sign_char(e.sign))}});
    return Json{{"kind", "edg"}, {"vertices", vertices}, {"edges", edges}};
}

inline Json dg_json(const Dg& g) {
    Json vertices = Json::array();
    for (size_t v = 0; v < g.atoms().size(); ++v) vertices.push_back(g.label(static_cast<int>(v)));
    Json edges = Json::array();
    for (const Dg::Edge& e : g.edges())
        edges.push_back(Json{{"from", g.label(e.from)},
                             {"to", g.label(e.to)},
                             {"sign", std::string(1, sign_char(e.sign))}});
    return Json{{"kind", "dg"}, {"vertices", vertices}, {"edges", edges}};
}

inline std::string handle_kind(Handle::Kind k) { return k == Handle::Kind::AND ? "AND" : "OR"; }

}  // namespace detail

inline int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
               std::ostream& err) {
    CLI::App app{"analyze and solve ground normal logic programs"};
    app.require_subcommand(1);
    Config cfg;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("input", cfg.input, "program file, or '-' for stdin");
        cmd->add_option("--format", cfg.format, "output format")
            ->check(CLI::IsMember({"text", "json"}));
    };

    CLI::App* parse_cmd = app.add_subcommand("parse", "parse and echo the canonical form");
    add_common(parse_cmd);

    CLI::App* kernel_cmd = app.add_subcommand("kernel", "reduce to an equivalent kernel program");
    add_common(kernel_cmd);
    kernel_cmd->add_option("--max-unfold", cfg.max_unfold, "unfolding rule budget")
        ->check(CLI::PositiveNumber);

    CLI::App* graph_cmd = app.add_subcommand("graph", "export the dependency graph");
    graph_cmd->add_option("input", cfg.input, "program file, or '-' for stdin");
    graph_cmd->add_option("--kind", cfg.kind, "graph kind")->check(CLI::IsMember({"edg", "dg"}));
    std::string graph_format = "dot";
    graph_cmd->add_option("--format", graph_format, "output format")
        ->check(CLI::IsMember({"dot", "json"}));

    CLI::App* analyze_cmd = app.add_subcommand("analyze", "report cycles, handles and bridges");
    add_common(analyze_cmd);
    analyze_cmd->add_option("--max-cycles", cfg.max_cycles, "cycle enumeration budget")
        ->check(CLI::PositiveNumber);
    analyze_cmd->add_option("--max-unfold", cfg.max_unfold, "unfolding rule budget")
        ->check(CLI::PositiveNumber);

    CLI::App* check_cmd = app.add_subcommand("check", "structural existence conditions");
    add_common(check_cmd);
    check_cmd->add_option("--max-cycles", cfg.max_cycles, "cycle enumeration budget")
        ->check(CLI::PositiveNumber);
    check_cmd->add_option("--max-unfold", cfg.max_unfold, "unfolding rule budget")
        ->check(CLI::PositiveNumber);

    CLI::App* solve_cmd = app.add_subcommand("solve", "compute all stable models");
    add_common(solve_cmd);
    solve_cmd->add_option("--method", cfg.method, "solving method")
        ->check(CLI::IsMember({"coloring", "decomposition", "brute"}));
    solve_cmd->add_option("--heuristic", cfg.heuristic, "branching heuristic")
        ->check(CLI::IsMember({"handles", "lex"}));
    solve_cmd->add_option("--max-models", cfg.max_models, "model cap")->check(CLI::PositiveNumber);
    solve_cmd->add_option("--max-cycles", cfg.max_cycles, "cycle enumeration budget")
        ->check(CLI::PositiveNumber);
    solve_cmd->add_option("--max-atoms", cfg.max_atoms, "atom cap for brute enumeration")
        ->check(CLI::PositiveNumber);
    solve_cmd->add_option("--max-unfold", cfg.max_unfold, "unfolding rule budget")
        ->check(CLI::PositiveNumber);

    CLI::App* verify_cmd = app.add_subcommand("verify", "diff the coloring solver against brute force");
    add_common(verify_cmd);
    verify_cmd->add_option("--max-atoms", cfg.max_atoms, "atom cap for brute enumeration")
        ->check(CLI::PositiveNumber);
    verify_cmd->add_option("--max-unfold", cfg.max_unfold, "unfolding rule budget")
        ->check(CLI::PositiveNumber);

    std::vector<const char*> argv{"edgsolve"};
    for (const std::string& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }

    if (graph_cmd->parsed()) cfg.format = graph_format;
    bool json = cfg.format == "json";
    auto emit_error = [&](const std::string& type, const std::string& message) {
        if (json)
            err << Json{{"error", Json{{"type", type}, {"message", message}}}}.dump() << "\n";
        else
            err << "error: " << message << "\n";
    };

    try {
        Program p = parse_program(detail::read_input(cfg, in));

        if (parse_cmd->parsed()) {
            if (json) {
                Json rules = Json::array();
                for (const Rule& r : p.rules()) rules.push_back(print_rule(p, r));
                out << Json{{"rules", rules}, {"atom_count", p.occurring_atoms().size()}}.dump() << "\n";
            } else {
                out << pretty_print(p);
            }
            return 0;
        }

        if (kernel_cmd->parsed()) {
            auto [kernel, log] = to_kernel(p, cfg.max_unfold);
            if (json) {
                Json rules = Json::array();
                for (const Rule& r : kernel.program.rules()) rules.push_back(print_rule(p, r));
                out << Json{{"kernel", rules}, {"log", detail::log_json(p, log)}}.dump() << "\n";
            } else {
                out << pretty_print(kernel.program);
                out << "% " << detail::log_json(p, log).dump() << "\n";
            }
            return 0;
        }

        if (graph_cmd->parsed()) {
            if (cfg.kind == "dg") {
                Dg g = build_dg(p);
                out << (json ? detail::dg_json(g).dump() + "\n" : to_dot(g));
            } else {
                Edg g = build_edg(p);
                out << (json ? detail::edg_json(g).dump() + "\n" : to_dot(g));
            }
            return 0;
        }

        if (analyze_cmd->parsed()) {
            KernelProgram kernel = to_kernel(p, cfg.max_unfold).first;
            Edg g = build_edg(kernel.program);
            Decomposition d = decompose(kernel, g, cfg.max_cycles);
            if (json) {
                Json cycles = Json::array();
                for (size_t i = 0; i < d.extended.size(); ++i) {
                    const ExtendedCycle& ec = d.extended[i];
                    Json handles = Json::array();
                    for (const Handle& h : ec.cycle.handles)
                        handles.push_back(Json{{"kind", detail::handle_kind(h.kind)},
                                               {"source_atom", g.atom_name(h.source_atom)},
                                               {"from", g.label(h.edge.from)},
                                               {"to", g.label(h.edge.to)}});
                    Json atoms = Json::array(), vertices = Json::array(), rules = Json::array(),
                         aux = Json::array(), hatoms = Json::array();
                    for (AtomId a : ec.cycle.atoms) atoms.push_back(g.atom_name(a));
                    for (int v : ec.cycle.vertices) vertices.push_back(g.label(v));
                    for (int r : ec.cycle_rules) rules.push_back(print_rule(kernel.program, kernel.program.rule(r)));
                    for (int r : ec.auxiliary_rules)
                        aux.push_back(print_rule(kernel.program, kernel.program.rule(r)));
                    for (AtomId a : ec.handle_atoms) hatoms.push_back(g.atom_name(a));
                    cycles.push_back(Json{{"id", i + 1},
                                          {"parity", ec.cycle.odd ? "odd" : "even"},
                                          {"atoms", atoms},
                                          {"vertices", vertices},
                                          {"rules", rules},
                                          {"handles", handles},
                                          {"auxiliary", aux},
                                          {"handle_atoms", hatoms}});
                }
                Json bridges = Json::array();
                for (const BridgeRule& b : d.bridges) {
                    Json from = Json::array(), to = Json::array();
                    for (int c : b.from_cycles) from.push_back(c + 1);
                    for (int c : b.to_cycles) to.push_back(c + 1);
                    bridges.push_back(Json{{"rule", print_rule(kernel.program, kernel.program.rule(b.rule))},
                                           {"from_cycles", from},
                                           {"to_cycles", to}});
                }
                out << Json{{"cycles", cycles}, {"bridges", bridges}}.dump() << "\n";
            } else {
                out << "kernel: " << kernel.program.rule_count() << " rules, "
                    << kernel.program.occurring_atoms().size() << " atoms\n";
                out << "cycles:\n";
                for (size_t i = 0; i < d.extended.size(); ++i) {
                    const ExtendedCycle& ec = d.extended[i];
                    out << "  C" << i + 1 << " " << (ec.cycle.odd ? "odd " : "even") << " ";
                    out << "{";
                    for (size_t k = 0; k < ec.cycle.atoms.size(); ++k)
                        out << (k ? ", " : "") << g.atom_name(ec.cycle.atoms[k]);
                    out << "}";
                    for (const Handle& h : ec.cycle.handles)
                        out << "  " << detail::handle_kind(h.kind) << " handle from "
                            << g.label(h.edge.from) << " into " << g.label(h.edge.to);
                    out << "\n";
                    for (int r : ec.auxiliary_rules)
                        out << "       auxiliary: "
                            << print_rule(kernel.program, kernel.program.rule(r)) << "\n";
                    if (!ec.handle_atoms.empty()) {
                        out << "       handle atoms: {";
                        for (size_t k = 0; k < ec.handle_atoms.size(); ++k)
                            out << (k ? ", " : "") << g.atom_name(ec.handle_atoms[k]);
                        out << "}\n";
                    }
                }
                if (!d.bridges.empty()) {
                    out << "bridges:\n";
                    for (const BridgeRule& b : d.bridges) {
                        out << "  " << print_rule(kernel.program, kernel.program.rule(b.rule))
                            << "  connects";
                        for (size_t k = 0; k < b.from_cycles.size(); ++k)
                            out << (k ? "," : "") << " C" << b.from_cycles[k] + 1;
                        out << " ->";
                        for (size_t k = 0; k < b.to_cycles.size(); ++k)
                            out << (k ? "," : "") << " C" << b.to_cycles[k] + 1;
                        out << "\n";
                    }
                }
            }
            return 0;
        }

        if (check_cmd->parsed()) {
            KernelProgram kernel = to_kernel(p, cfg.max_unfold).first;
            Edg g = build_edg(kernel.program);
            ExistenceVerdict verdict = check_necessary_condition(kernel, g, cfg.max_cycles);
            if (verdict.status != ExistenceStatus::no_models_proven) {
                // conditions on the original program are findings of their own
                if (is_stratified(p).stratified) {
                    verdict.status = ExistenceStatus::models_guaranteed;
                    verdict.reasons.insert(verdict.reasons.begin(), "stratified");
                } else if (is_call_consistent(p).call_consistent &&
                           verdict.status == ExistenceStatus::unknown) {
                    verdict.status = ExistenceStatus::models_guaranteed;
                    verdict.reasons.insert(verdict.reasons.begin(), "call-consistent");
                }
            }
            if (json) {
                out << Json{{"status", to_string(verdict.status)}, {"reasons", verdict.reasons}}.dump()
                    << "\n";
            } else {
                out << "status: " << to_string(verdict.status) << "\n";
                for (const std::string& r : verdict.reasons) out << "reason: " << r << "\n";
            }
            return 0;
        }

        if (solve_cmd->parsed()) {
            detail::SolveOutcome outcome = detail::solve_with_method(p, cfg);
            if (json) {
                out << Json{{"models", detail::models_json(p, outcome.models)},
                            {"count", outcome.models.size()},
                            {"truncated", outcome.truncated},
                            {"method", cfg.method}}
                           .dump()
                    << "\n";
            } else {
                detail::print_models_text(out, p, outcome.models, outcome.truncated);
            }
            return 0;
        }

        if (verify_cmd->parsed()) {
            std::vector<Interpretation> brute = enumerate_stable_brute(p, cfg.max_atoms);
            Config coloring_cfg = cfg;
            coloring_cfg.method = "coloring";
            detail::SolveOutcome outcome = detail::solve_with_method(p, coloring_cfg);
            bool match = outcome.models == brute;
            if (json) {
                out << Json{{"match", match},
                            {"count", brute.size()},
                            {"coloring", detail::models_json(p, outcome.models)},
                            {"brute", detail::models_json(p, brute)}}
                           .dump()
                    << "\n";
            } else if (match) {
                out << "coloring == brute: " << brute.size() << " model"
                    << (brute.size() == 1 ? "" : "s") << "\n";
            } else {
                out << "MISMATCH: coloring found " << outcome.models.size() << ", brute found "
                    << brute.size() << "\n";
            }
            return match ? 0 : 1;
        }
    } catch (const SyntaxError& e) {
        emit_error("SyntaxError", e.what());
        return 2;
    } catch (const BudgetError& e) {
        emit_error("BudgetError", e.what());
        return 3;
    } catch (const Error& e) {
        emit_error("Error", e.what());
        return 2;
    }
    return 2;
}

}  // namespace edgsolve::cli
