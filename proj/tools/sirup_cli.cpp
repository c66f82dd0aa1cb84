#include <chrono>
#include <filesystem>
#include <iostream>
#include <random>

#include <CLI11.hpp>

#include "sirup/cactus.hpp"
#include "sirup/classify.hpp"
#include "sirup/datalog.hpp"
#include "sirup/gadget.hpp"
#include "sirup/lambda.hpp"
#include "sirup/reductions.hpp"
#include "sirup/report.hpp"

namespace fs = std::filesystem;
using namespace sirup;

namespace {

struct Flags {
    std::string query;
    std::string data;
    std::string graph;
    std::string out;
    std::string program = "delta";
    std::string kind = "dag";
    std::string target = "delta";
    std::string rel = kDefaultSchemaRel;
    std::string emit_witness;
    int depth = 2;
    int probe_depth = -1;
    int max_span = kDefaultMaxSpan;
    int max_a_nodes = kDefaultMaxANodes;
    int max_gates = 8;
    int vertices = 6;
    int edges = 8;
    std::size_t cap = kDefaultCactusCap;
    unsigned seed = 1;
    bool json = false;
    bool focus = false;
    bool check = false;
};

LabelledGraph load(Report& r, const std::string& role, const std::string& path) {
    if (path.empty()) throw Error(ErrorKind::io, "missing --" + role);
    std::string text = read_file(path);
    r.add_input(role, path, text);
    return parse(text);
}

void write_out(const fs::path& path, const std::string& content) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    write_file(path.string(), content);
}

std::string scalar_text(const Json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); }

void print_text(const Report& r) {
    std::cout << r.command << "\n";
    for (const auto& [k, v] : r.verdict.items()) {
        if (v.is_object() || (v.is_array() && v.size() > 8)) continue;
        std::cout << "  " << k << ": " << scalar_text(v) << "\n";
    }
    for (const auto& w : r.witnesses)
        if (w.contains("file")) std::cout << "  wrote " << w["file"].get<std::string>() << "\n";
    for (const auto& [k, v] : r.caps_hit.items())
        if (v.is_boolean() && v.get<bool>()) std::cout << "  cap hit: " << k << "\n";
}

// ----------------------------------------------------------- commands

void cmd_validate(const Flags& f, Report& r) {
    if (f.query.empty() && f.data.empty()) throw Error(ErrorKind::io, "validate needs a .cq or .data file");
    const bool is_query = !f.query.empty();
    LabelledGraph g = load(r, is_query ? "query" : "data", is_query ? f.query : f.data);
    r.verdict["valid"] = true;
    r.verdict["graph"] = graph_summary(g);
    if (g.empty()) {
        r.verdict["shape"] = nullptr;
        return;
    }
    r.verdict["shape"] = shape_json(g, shape(g));
}

void cmd_classify(const Flags& f, Report& r) {
    LabelledGraph q = load(r, "query", f.query);
    ClassifyOptions opts;
    opts.lambda.max_span = f.max_span;
    opts.lambda.cap = f.cap;
    if (f.probe_depth >= 0) opts.lambda.bound_probe = f.probe_depth;
    ClassifyResult res = classify(q, opts);
    r.verdict["shape"] = shape_json(res.query, res.shape);
    Json c = classification_json(res.cls);
    for (const auto& [k, v] : c.items()) {
        if (k == "witnesses") continue;
        r.verdict[k] = v;
    }
    r.witnesses = c["witnesses"];
    if (res.fo_check) {
        r.verdict["fo_check"] = {{"witness", res.fo_check->witness}, {"d", res.fo_check->d}};
        r.caps_hit["cactus_cap"] = res.fo_check->truncated;
    }
    if (res.lambda) r.caps_hit["empirical_bound"] = res.lambda->empirical_truncated;
}

void cmd_bounded(const Flags& f, Report& r) {
    LabelledGraph q = load(r, "query", f.query);
    LambdaOptions opts;
    opts.max_span = f.max_span;
    opts.cap = f.cap;
    if (f.probe_depth >= 0) opts.bound_probe = f.probe_depth;
    LambdaVerdict v = decide_fo(q, opts);
    TypeGraph tg = type_graph(q, f.max_span);
    r.verdict = lambda_json(v, tg);
    r.caps_hit["empirical_bound"] = v.empirical_truncated;
    if (!f.emit_witness.empty() && v.witness) {
        fs::path dir(f.emit_witness);
        std::string desc = v.witness->describe(tg);
        write_out(dir / "structure.txt", desc + "\n");
        r.witnesses.push_back({{"kind", "periodic-structure"}, {"file", (dir / "structure.txt").string()}});
        OneCq oq = make_one_cq(q);
        BlowUp b = blow_up(oq, tg, v.witness->h);
        write_out(dir / "blowup.data", serialize(b.graph));
        r.witnesses.push_back({{"kind", "blow-up"}, {"file", (dir / "blowup.data").string()}});
    }
}

void cmd_evaluate(const Flags& f, Report& r) {
    LabelledGraph q = load(r, "query", f.query);
    LabelledGraph d = load(r, "data", f.data);
    r.verdict["program"] = f.program;
    if (f.program == "delta" || f.program == "delta+") {
        CertainOptions opts{f.program == "delta+", f.max_a_nodes};
        CertainResult res = certain_answer_delta(q, d, opts);
        Json j = certain_json(res);
        r.verdict["answer"] = res.answer;
        r.verdict["vacuous"] = res.vacuous;
        r.verdict["models_checked"] = res.models_checked;
        if (res.countermodel) r.witnesses.push_back({{"kind", "countermodel"}, {"model", j["countermodel"]}});
        return;
    }
    if (f.program != "pi" && f.program != "sigma")
        throw Error(ErrorKind::syntax, "unknown program '" + f.program + "' (expected delta, delta+, pi or sigma)");
    Programs progs = build_programs(q);
    const DatalogProgram& prog = f.program == "pi" ? progs.pi : progs.sigma;
    Closure cl = fixpoint(prog, d);
    r.verdict["rounds"] = cl.rounds;
    if (f.program == "pi") {
        r.verdict["answer"] = cl.goal;
        auto it = cl.facts.find(kP);
        if (it != cl.facts.end()) r.witnesses.push_back({{"kind", "P-facts"}, {"nodes", it->second}});
    } else {
        auto it = cl.facts.find(kP);
        std::set<std::string> answers = it == cl.facts.end() ? std::set<std::string>{} : it->second;
        r.verdict["answer"] = !answers.empty();
        r.verdict["answers"] = answers;
        r.witnesses.push_back({{"kind", "P-facts"}, {"nodes", answers}});
    }
}

void cmd_rewrite(const Flags& f, Report& r) {
    LabelledGraph q = load(r, "query", f.query);
    if (f.target != "delta" && f.target != "sigma")
        throw Error(ErrorKind::syntax, "unknown target '" + f.target + "' (expected delta or sigma)");
    RewriteTarget t = f.target == "delta" ? RewriteTarget::delta : RewriteTarget::sigma;
    Ucq u = ucq_rewriting(q, f.depth, t, f.cap);
    r.verdict["target"] = f.target;
    r.verdict["depth"] = f.depth;
    r.verdict["disjuncts"] = u.disjuncts.size();
    r.caps_hit["cactus_cap"] = u.truncated;
    for (std::size_t i = 0; i < u.disjuncts.size(); ++i) {
        const auto& dj = u.disjuncts[i];
        Json w{{"kind", "disjunct"}, {"index", i}, {"nodes", dj.body.size()}};
        if (!dj.answer_var.empty()) w["answer_var"] = dj.answer_var;
        if (!f.out.empty()) {
            fs::path p = fs::path(f.out) / ("C" + std::to_string(i) + ".cq");
            write_out(p, serialize(dj.body));
            w["file"] = p.string();
        } else {
            w["atoms"] = dj.body.atom_strings();
        }
        r.witnesses.push_back(std::move(w));
    }
    if (!f.data.empty()) {
        LabelledGraph d = load(r, "data", f.data);
        if (t == RewriteTarget::delta) {
            r.verdict["answer"] = ucq_holds(u, d);
        } else {
            std::set<std::string> answers;
            for (std::size_t v = 0; v < d.size(); ++v)
                if (ucq_holds_at(u, d, static_cast<int>(v))) answers.insert(d.name(static_cast<int>(v)));
            r.verdict["answer"] = !answers.empty();
            r.verdict["answers"] = answers;
        }
    }
}

void cmd_cactus(const Flags& f, Report& r) {
    LabelledGraph q = load(r, "query", f.query);
    CactusSet cs = cactuses_up_to(q, f.depth, f.cap);
    r.verdict["depth"] = f.depth;
    r.verdict["cactuses"] = cs.cactuses.size();
    r.caps_hit["cactus_cap"] = cs.truncated;
    Json skeletons = Json::array();
    for (std::size_t i = 0; i < cs.cactuses.size(); ++i) {
        const Cactus& c = cs.cactuses[i];
        Json s{{"index", i},
               {"skeleton", c.skeleton_code()},
               {"depth", c.depth()},
               {"segments", c.segments.size()},
               {"nodes", c.graph.size()}};
        if (!f.out.empty()) {
            fs::path p = fs::path(f.out) / ("cactus" + std::to_string(i) + ".cq");
            write_out(p, serialize(c.graph));
            s["file"] = p.string();
        }
        skeletons.push_back(std::move(s));
    }
    r.verdict["skeletons"] = std::move(skeletons);
    if (f.focus) {
        FocusReport fr = check_focused(q, f.depth, f.cap);
        r.verdict["focused"] = fr.holds_up_to_depth;
        r.caps_hit["focus_cap"] = fr.truncated;
        if (fr.counterexample) {
            const auto& ce = *fr.counterexample;
            r.witnesses.push_back({{"kind", "unfocused-hom"},
                                   {"from", ce.from.skeleton_code()},
                                   {"to", ce.to.skeleton_code()},
                                   {"root_focus_image", ce.to.graph.name(ce.hom.map[ce.from.root_focus])},
                                   {"hom", format_hom(ce.from.graph, ce.to.graph, ce.hom)}});
        }
    }
}

GraphInstance load_graph(const Flags& f, Report& r, bool directed) {
    if (!f.graph.empty()) {
        std::string text = read_file(f.graph);
        r.add_input("graph", f.graph, text);
        return parse_graph(text);
    }
    std::mt19937 rng(f.seed);
    return directed ? random_dag(rng, f.vertices, f.edges) : random_undirected(rng, f.vertices, f.edges);
}

void cmd_reduce(const Flags& f, Report& r) {
    LabelledGraph q = load(r, "query", f.query);
    LabelledGraph d;
    GraphInstance g;
    if (f.kind == "dag") {
        g = load_graph(f, r, true);
        auto nl = nl_hardness(q);
        if (!nl) throw Error(ErrorKind::precondition, "reduce: no eligible solitary pair for the dag reduction");
        d = dag_reduction(q, nl->pair, g);
    } else if (f.kind == "undirected") {
        g = load_graph(f, r, false);
        d = undirected_reduction(q, g);
    } else if (f.kind == "blowup") {
        g = load_graph(f, r, false);
        LambdaOptions lo;
        lo.max_span = f.max_span;
        lo.empirical_bound = false;
        LambdaVerdict v = decide_fo(q, lo);
        if (v.fo || !v.witness) throw Error(ErrorKind::precondition, "reduce: query is FO, no periodic structure");
        d = blowup_reduction(*v.witness, q, g);
    } else {
        throw Error(ErrorKind::syntax, "unknown reduction '" + f.kind + "' (expected dag, undirected or blowup)");
    }
    r.verdict["kind"] = f.kind;
    r.verdict["graph"] = g.str();
    r.verdict["reachable"] = g.reachable();
    r.verdict["data"] = graph_summary(d);
    if (!f.out.empty()) {
        write_out(f.out, serialize(d));
        r.witnesses.push_back({{"kind", "data"}, {"file", f.out}});
    }
    if (f.check) {
        CertainResult cr = certain_answer_delta(q, d, {false, f.max_a_nodes});
        r.verdict["answer"] = cr.answer;
        r.verdict["agrees"] = cr.answer == g.reachable();
    }
}

std::vector<GadgetSpec> load_gadgets(const std::string& path, Report& r) {
    if (path.empty()) throw Error(ErrorKind::io, "missing gadget file");
    std::string text = read_file(path);
    r.add_input("gadgets", path, text);
    return parse_gadget_file(text);
}

Json gadget_summary(const GadgetQuery& gq) {
    Json gs = Json::array();
    for (const auto& g : gq.gadgets)
        gs.push_back({{"frame", to_string(g.frame)},
                      {"formula", g.formula.str()},
                      {"arity", g.formula.arity},
                      {"gates", g.formula.gates()}});
    return gs;
}

void cmd_gadget(const Flags& f, const std::string& file, Report& r) {
    GadgetQuery gq = build_query(load_gadgets(file, r), {f.max_gates});
    r.verdict["gadgets"] = gadget_summary(gq);
    r.verdict["query"] = graph_summary(gq.q);
    if (!f.out.empty()) {
        write_out(f.out, serialize(gq.q));
        r.witnesses.push_back({{"kind", "query"}, {"file", f.out}});
    }
}

void cmd_gadget_verify(const Flags& f, const std::string& file, Report& r) {
    GadgetQuery gq = build_query(load_gadgets(file, r), {f.max_gates});
    r.verdict["gadgets"] = gadget_summary(gq);
    r.verdict["depth"] = f.depth;
    TriggerReport tr = verify_triggering(gq, f.depth);
    Json t = trigger_json(tr);
    for (const auto& [k, v] : t.items()) {
        if (k == "violations") continue;
        r.verdict[k] = v;
    }
    r.witnesses = t["violations"];
}

void cmd_schema_org(const Flags& f, Report& r) {
    LabelledGraph q = load(r, "query", f.query);
    LabelledGraph d = load(r, "data", f.data);
    SchemaOrgTransform tr = to_schema_org(q, f.rel);
    LabelledGraph fd = tr.forward(d);
    CertainOptions opts{false, f.max_a_nodes};
    CertainResult direct = certain_answer_delta(q, d, opts);
    CertainResult via = tr.certain_answer(fd, opts);
    r.verdict["rel"] = f.rel;
    r.verdict["answer"] = via.answer;
    r.verdict["delta_answer"] = direct.answer;
    r.verdict["agrees"] = via.answer == direct.answer;
    r.verdict["data"] = graph_summary(fd);
    if (!f.out.empty()) {
        write_out(f.out, serialize(fd));
        r.witnesses.push_back({{"kind", "data"}, {"file", f.out}});
    }
}

int exit_code_for(ErrorKind k) { return k == ErrorKind::cap_exceeded ? 2 : 1; }

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"sirup: classify and evaluate monadic disjunctive sirups"};
    app.require_subcommand(1);
    Flags f;
    std::string file;
    std::string gadget_file;

    auto add_query = [&](CLI::App* c) {
        c->add_option("--query", f.query, "query file (.cq)");
        c->add_option("file", file, "query file (.cq); same as --query");
    };
    auto add_common = [&](CLI::App* c) {
        c->add_flag("--json", f.json, "print the JSON report");
        c->add_option("--seed", f.seed, "seed for randomised inputs");
        c->add_option("--cap", f.cap, "cactus enumeration cap");
    };

    auto* validate = app.add_subcommand("validate", "parse a .cq or .data file and report its shape");
    add_query(validate);
    validate->add_option("--data", f.data, "data file (.data)");

    auto* classify_cmd = app.add_subcommand("classify", "complexity classification of Delta_q");
    add_query(classify_cmd);
    classify_cmd->add_option("--max-span", f.max_span, "type-graph span limit");
    classify_cmd->add_option("--probe-depth", f.probe_depth, "probe depth for the empirical bound");

    auto* bounded = app.add_subcommand("bounded", "FO / L-hard decision for Lambda-CQs");
    add_query(bounded);
    bounded->add_option("--max-span", f.max_span, "type-graph span limit");
    bounded->add_option("--probe-depth", f.probe_depth, "probe depth for the empirical bound");
    bounded->add_option("--emit-witness", f.emit_witness, "directory for witness files");

    auto* evaluate = app.add_subcommand("evaluate", "certain answers over a data instance");
    add_query(evaluate);
    evaluate->add_option("--data", f.data, "data file (.data)")->required();
    evaluate->add_option("--program", f.program, "delta, delta+, pi or sigma");
    evaluate->add_option("--max-a-nodes", f.max_a_nodes, "cap on A-nodes for model enumeration");

    auto* rewrite = app.add_subcommand("rewrite", "UCQ rewriting from cactuses of bounded depth");
    add_query(rewrite);
    rewrite->add_option("--depth", f.depth, "cactus depth");
    rewrite->add_option("--target", f.target, "delta or sigma");
    rewrite->add_option("--data", f.data, "evaluate the rewriting over this data file");
    rewrite->add_option("--out", f.out, "directory for disjunct .cq files");

    auto* cactus = app.add_subcommand("cactus", "enumerate cactuses up to a depth");
    add_query(cactus);
    cactus->add_option("--depth", f.depth, "cactus depth");
    cactus->add_option("--out", f.out, "directory for cactus .cq files");
    cactus->add_flag("--focus", f.focus, "also check focusedness up to the depth");

    auto* reduce = app.add_subcommand("reduce", "build a hardness-reduction data instance");
    add_query(reduce);
    reduce->add_option("--kind", f.kind, "dag, undirected or blowup");
    reduce->add_option("--graph", f.graph, "graph file; random graph from --seed if absent");
    reduce->add_option("--vertices", f.vertices, "vertices of the random graph");
    reduce->add_option("--edges", f.edges, "edges of the random graph");
    reduce->add_option("--max-span", f.max_span, "type-graph span limit");
    reduce->add_option("--max-a-nodes", f.max_a_nodes, "cap on A-nodes for --check");
    reduce->add_option("--out", f.out, "output .data file");
    reduce->add_flag("--check", f.check, "evaluate the certain answer and compare with reachability");

    auto* gadget = app.add_subcommand("gadget", "compile a gadget file to a .cq");
    gadget->add_option("file", gadget_file, "gadget file");
    gadget->add_option("--out", f.out, "output .cq file");
    gadget->add_option("--max-gates", f.max_gates, "gate cap per formula");
    auto* verify = gadget->add_subcommand("verify", "check triggering on every cactus up to --depth");
    verify->add_option("file", gadget_file, "gadget file");
    verify->add_option("--depth", f.depth, "cactus depth (at most 3)");
    verify->add_option("--max-gates", f.max_gates, "gate cap per formula");

    auto* schema = app.add_subcommand("schema-org", "rewrite A-labels as an incoming relation and evaluate");
    add_query(schema);
    schema->add_option("--data", f.data, "data file (.data)")->required();
    schema->add_option("--rel", f.rel, "binary relation replacing A");
    schema->add_option("--max-a-nodes", f.max_a_nodes, "cap on A-nodes for model enumeration");
    schema->add_option("--out", f.out, "output .data file");

    for (auto* c : {validate, classify_cmd, bounded, evaluate, rewrite, cactus, reduce, gadget, verify, schema})
        add_common(c);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }
    if (f.query.empty()) f.query = file;

    Report r;
    const auto start = std::chrono::steady_clock::now();
    try {
        if (validate->parsed()) {
            r.command = "validate";
            if (f.query.empty() && f.data.empty()) throw Error(ErrorKind::io, "validate needs a file");
            cmd_validate(f, r);
        } else if (classify_cmd->parsed()) {
            r.command = "classify";
            cmd_classify(f, r);
        } else if (bounded->parsed()) {
            r.command = "bounded";
            cmd_bounded(f, r);
        } else if (evaluate->parsed()) {
            r.command = "evaluate";
            cmd_evaluate(f, r);
        } else if (rewrite->parsed()) {
            r.command = "rewrite";
            cmd_rewrite(f, r);
        } else if (cactus->parsed()) {
            r.command = "cactus";
            cmd_cactus(f, r);
        } else if (reduce->parsed()) {
            r.command = "reduce";
            cmd_reduce(f, r);
        } else if (verify->parsed()) {
            r.command = "gadget verify";
            cmd_gadget_verify(f, gadget_file, r);
        } else if (gadget->parsed()) {
            r.command = "gadget";
            cmd_gadget(f, gadget_file, r);
        } else {
            r.command = "schema-org";
            cmd_schema_org(f, r);
        }
    } catch (const Error& e) {
        std::cerr << "error (" << to_string(e.kind()) << "): " << e.what() << "\n";
        if (f.json) {
            Json j{{"command", r.command}, {"error", {{"kind", to_string(e.kind())}, {"message", e.what()}}}};
            std::cout << j.dump(2) << "\n";
        }
        return exit_code_for(e.kind());
    } catch (const fs::filesystem_error& e) {
        std::cerr << "error (io): " << e.what() << "\n";
        return 1;
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    if (f.json)
        std::cout << r.to_json().dump(2) << "\n";
    else
        print_text(r);
    return r.any_cap_hit() ? 2 : 0;
}
