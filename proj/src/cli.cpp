#include "ricci/cli.hpp"

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ricci/curvature.hpp"
#include "ricci/flow.hpp"
#include "ricci/generators.hpp"
#include "ricci/graph.hpp"
#include "ricci/metrics.hpp"
#include "ricci/pipeline.hpp"

namespace ricci {

namespace {

using nlohmann::json;

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string fnv1a64_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw GraphError("cannot open " + path);
    std::uint64_t h = 1469598103934665603ull;
    char c;
    while (in.get(c)) {
        h ^= static_cast<unsigned char>(c);
        h *= 1099511628211ull;
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

struct Options {
    FlowConfig flow;
    std::string method = "exact";
    double plateau_tol = 0.02;

    FlowConfig resolved() const {
        FlowConfig cfg = flow;
        cfg.curvature.method = method == "sinkhorn" ? OtMethod::sinkhorn : OtMethod::exact;
        return cfg;
    }
};

// Shared tunables; every one of them can also be set through an RICCI_*
// environment variable.
void add_flow_flags(CLI::App* cmd, Options& opt, bool with_flow_stage) {
    cmd->add_option("--alpha", opt.flow.curvature.alpha, "Mass kept at the node itself")
        ->capture_default_str()
        ->envname("RICCI_ALPHA");
    cmd->add_option("--p", opt.flow.curvature.p, "Distance exponent of the measure")
        ->capture_default_str()
        ->envname("RICCI_P");
    cmd->add_option("--base", opt.flow.curvature.base, "Base of the measure decay")
        ->capture_default_str()
        ->envname("RICCI_BASE");
    cmd->add_option("--method", opt.method, "Optimal-transport solver")
        ->check(CLI::IsMember({"exact", "sinkhorn"}))
        ->capture_default_str()
        ->envname("RICCI_METHOD");
    cmd->add_option("--reg", opt.flow.curvature.sinkhorn_reg, "Sinkhorn regularization")
        ->capture_default_str()
        ->envname("RICCI_REG");
    cmd->add_option("--threads", opt.flow.curvature.threads,
                    "Curvature worker count (0 = all cores)")
        ->capture_default_str()
        ->envname("RICCI_THREADS");
    if (!with_flow_stage) return;
    cmd->add_option("--iterations", opt.flow.max_iterations, "Flow iteration cap")
        ->capture_default_str()
        ->envname("RICCI_ITERATIONS");
    cmd->add_option("--epsilon", opt.flow.epsilon, "Flow step size")
        ->capture_default_str()
        ->envname("RICCI_EPSILON");
    cmd->add_option("--delta", opt.flow.delta, "Curvature-stability stop threshold")
        ->capture_default_str()
        ->envname("RICCI_DELTA");
    cmd->add_option("--surgery-every", opt.flow.surgery_every,
                    "Iterations between surgeries (0 disables)")
        ->capture_default_str()
        ->envname("RICCI_SURGERY_EVERY");
    cmd->add_option("--surgery-top", opt.flow.surgery_quantile,
                    "Quantile of heaviest edges each surgery removes")
        ->capture_default_str()
        ->envname("RICCI_SURGERY_TOP");
    cmd->add_flag("--normalize,!--no-normalize", opt.flow.normalize,
                  "Rescale weights to sum |E| each iteration")
        ->capture_default_str()
        ->envname("RICCI_NORMALIZE");
    cmd->add_option("--weight-floor", opt.flow.weight_floor, "Minimum surviving weight")
        ->capture_default_str()
        ->envname("RICCI_WEIGHT_FLOOR");
    cmd->add_option("--plateau-tol", opt.plateau_tol,
                    "Modularity tolerance of the cutoff plateau")
        ->capture_default_str()
        ->envname("RICCI_PLATEAU_TOL");
}

json config_json(const Options& opt) {
    const FlowConfig& f = opt.flow;
    return json{{"alpha", f.curvature.alpha},
                {"p", f.curvature.p},
                {"base", f.curvature.base},
                {"method", opt.method},
                {"reg", f.curvature.sinkhorn_reg},
                {"threads", f.curvature.threads},
                {"epsilon", f.epsilon},
                {"delta", f.delta},
                {"iterations", f.max_iterations},
                {"surgery_every", f.surgery_every},
                {"surgery_top", f.surgery_quantile},
                {"normalize", f.normalize},
                {"weight_floor", f.weight_floor},
                {"plateau_tol", opt.plateau_tol}};
}

void write_manifest(const std::string& path, const std::string& command,
                    const json& config, const std::vector<std::string>& inputs,
                    const std::vector<std::string>& outputs,
                    const json& extra) {
    json m{{"tool", "ricci"},
           {"version", kVersion},
           {"command", command},
           {"config", config}};
    for (auto& [k, v] : extra.items()) m[k] = v;
    m["inputs"] = json::array();
    for (const auto& p : inputs)
        m["inputs"].push_back({{"path", p}, {"fnv1a64", fnv1a64_file(p)}});
    m["outputs"] = outputs;
    std::ofstream out(path);
    if (!out) throw GraphError("cannot write " + path);
    out << m.dump(2) << '\n';
}

Graph load_graph_checked(const std::string& path) {
    Graph g = load_edge_list_file(path);
    if (g.edge_count() == 0) throw GraphError(path + ": no edges");
    return g;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw GraphError("cannot write " + path);
    return out;
}

int run_curvature(const std::string& graph_path, const Options& opt,
                  const std::string& out_path) {
    Graph g = load_graph_checked(graph_path);
    FlowConfig cfg = opt.resolved();
    cfg.validate();
    CurvatureMap kappa = all_curvatures(g, cfg.curvature);
    std::ostringstream body;
    for (int i = 0; i < g.edge_count(); ++i) {
        const Edge& e = g.edge(i);
        body << g.label(e.u) << ' ' << g.label(e.v) << ' ' << fmt(e.w) << ' '
             << fmt(kappa[i]) << '\n';
    }
    if (out_path.empty()) {
        std::cout << body.str();
    } else {
        open_out(out_path) << body.str();
        write_manifest(out_path + ".manifest.json", "curvature", config_json(opt),
                       {graph_path}, {out_path}, json::object());
    }
    return 0;
}

int run_flow_cmd(const std::string& graph_path, const Options& opt,
                 const std::string& out_path, const std::string& trace_path) {
    Graph g = load_graph_checked(graph_path);
    FlowConfig cfg = opt.resolved();
    FlowTrace trace = run_flow(g, cfg);
    std::ostringstream body;
    write_edge_list(trace.final_graph, body);
    if (out_path.empty()) {
        std::cout << body.str();
    } else {
        open_out(out_path) << body.str();
    }
    std::vector<std::string> outputs;
    if (!out_path.empty()) outputs.push_back(out_path);
    if (!trace_path.empty()) {
        auto out = open_out(trace_path);
        write_trace(trace, g, out);
        outputs.push_back(trace_path);
    }
    std::cerr << "terminal " << to_string(trace.terminal_reason) << " after "
              << trace.iterations.size() << " iterations\n";
    if (!out_path.empty())
        write_manifest(out_path + ".manifest.json", "flow", config_json(opt),
                       {graph_path}, outputs,
                       json{{"terminal_reason", to_string(trace.terminal_reason)}});
    return 0;
}

int run_detect(const std::string& graph_path, const std::string& truth_path,
               const Options& opt, const std::string& out_prefix) {
    Graph g = load_graph_checked(graph_path);
    Partition truth;
    bool have_truth = !truth_path.empty();
    if (have_truth) truth = load_labels_file(truth_path, g);
    FlowConfig cfg = opt.resolved();
    DetectResult res =
        detect_pipeline(g, cfg, have_truth ? &truth : nullptr, opt.plateau_tol);

    std::ostringstream part, curve;
    for (int u = 0; u < g.node_count(); ++u)
        part << g.label(u) << ' ' << res.partition[u] << '\n';
    for (const CurvePoint& p : res.curve) {
        curve << fmt(p.cutoff) << ' ' << p.community_count << ' ' << fmt(p.modularity);
        if (p.ari) curve << ' ' << fmt(*p.ari);
        curve << '\n';
    }
    char summary[256];
    std::snprintf(summary, sizeof summary, "selected cutoff %.17g communities %d modularity %.6f",
                  res.selected.cutoff, res.selected.community_count, res.selected.modularity);

    if (out_prefix.empty()) {
        std::cout << part.str();
        // The curve rides along as comment rows so plain "node community"
        // consumers can keep reading stdout.
        std::istringstream rows(curve.str());
        std::string row;
        while (std::getline(rows, row)) std::cout << "# curve " << row << '\n';
        std::cout << "# " << summary << '\n';
        if (have_truth && res.selected.ari)
            std::cout << "# ari " << fmt(*res.selected.ari) << '\n';
    } else {
        open_out(out_prefix + ".partition") << part.str();
        open_out(out_prefix + ".curve") << curve.str();
        std::vector<std::string> inputs = {graph_path};
        if (have_truth) inputs.push_back(truth_path);
        write_manifest(out_prefix + ".manifest.json", "detect", config_json(opt), inputs,
                       {out_prefix + ".partition", out_prefix + ".curve"},
                       json{{"terminal_reason", to_string(res.trace.terminal_reason)}});
        std::cout << summary << '\n';
        if (have_truth && res.selected.ari)
            std::cout << "ari " << fmt(*res.selected.ari) << '\n';
    }
    return 0;
}

int run_generate(const std::string& model, int n, int k, double p_intra, double p_inter,
                 int a, int b, std::uint64_t seed, const Options& opt,
                 const std::string& out_prefix) {
    Graph g;
    Partition labels;
    if (model == "sbm") {
        std::tie(g, labels) = gen_sbm(n, k, p_intra, p_inter, seed);
    } else {
        std::tie(g, labels) = gen_gab({a, b});
    }
    std::ostringstream edges, labs;
    write_edge_list(g, edges);
    for (int u = 0; u < g.node_count(); ++u)
        labs << g.label(u) << ' ' << labels[u] << '\n';
    if (out_prefix.empty()) {
        std::cout << edges.str();
        std::istringstream rows(labs.str());
        std::string row;
        while (std::getline(rows, row)) std::cout << "# label " << row << '\n';
        return 0;
    }
    open_out(out_prefix + ".edges") << edges.str();
    open_out(out_prefix + ".labels") << labs.str();
    json extra{{"model", model}, {"seed", seed}};
    if (model == "sbm")
        extra.update(json{{"n", n}, {"k", k}, {"p_intra", p_intra}, {"p_inter", p_inter}});
    else
        extra.update(json{{"a", a}, {"b", b}});
    write_manifest(out_prefix + ".manifest.json", "generate", config_json(opt), {},
                   {out_prefix + ".edges", out_prefix + ".labels"}, extra);
    return 0;
}

int run_eval(const std::string& partition_path, const std::string& truth_path,
             const std::string& graph_path) {
    Graph g = load_graph_checked(graph_path);
    Partition part = load_labels_file(partition_path, g);
    Partition truth = load_labels_file(truth_path, g);
    char buf[64];
    std::snprintf(buf, sizeof buf, "ari %.6f\n", ari(part, truth));
    std::cout << buf;
    std::snprintf(buf, sizeof buf, "modularity %.6f\n", modularity(g, part));
    std::cout << buf;
    return 0;
}

}  // namespace

int cli_main(int argc, const char* const* argv) {
    CLI::App app{"Ollivier-Ricci curvature, discrete Ricci flow and community detection"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    Options opt;
    // Detection schedule: 50 iterations with surgery every 5 at the top 5%.
    opt.flow.max_iterations = 50;
    opt.flow.surgery_every = 5;

    std::string graph_path, truth_path, out_path, trace_path, out_prefix;

    auto* curv = app.add_subcommand("curvature", "Per-edge Ollivier-Ricci curvature");
    curv->add_option("graph", graph_path, "Edge-list file")->required();
    curv->add_option("-o,--output", out_path, "Output file (default stdout)");
    add_flow_flags(curv, opt, false);

    auto* flow = app.add_subcommand("flow", "Run the discrete Ricci flow");
    flow->add_option("graph", graph_path, "Edge-list file")->required();
    flow->add_option("-o,--output", out_path, "Final weighted edge list (default stdout)");
    flow->add_option("--trace", trace_path, "Write the full per-iteration trace here");
    add_flow_flags(flow, opt, true);

    auto* det = app.add_subcommand("detect", "Detect communities via flow and cutoff scan");
    det->add_option("graph", graph_path, "Edge-list file")->required();
    det->add_option("--truth", truth_path, "Ground-truth label file (enables ARI)");
    det->add_option("-o,--output", out_prefix,
                    "Prefix for .partition/.curve/.manifest.json outputs");
    add_flow_flags(det, opt, true);

    int n = 100, k = 2, a = 3, b = 2;
    double p_intra = 0.2, p_inter = 0.05;
    std::uint64_t seed = 0;
    std::string model;
    auto* gen = app.add_subcommand("generate", "Generate SBM or G(a,b) benchmark graphs");
    gen->add_option("model", model, "sbm or gab")
        ->required()
        ->check(CLI::IsMember({"sbm", "gab"}));
    gen->add_option("--n", n, "SBM node count")->capture_default_str();
    gen->add_option("--k", k, "SBM block count")->capture_default_str();
    gen->add_option("--p-intra", p_intra, "SBM intra-block probability")->capture_default_str();
    gen->add_option("--p-inter", p_inter, "SBM inter-block probability")->capture_default_str();
    gen->add_option("--a", a, "G(a,b) community clique size minus one")->capture_default_str();
    gen->add_option("--b", b, "G(a,b) community count minus one")->capture_default_str();
    gen->add_option("--seed", seed, "RNG seed")->capture_default_str()->envname("RICCI_SEED");
    gen->add_option("-o,--output", out_prefix, "Prefix for .edges/.labels files");

    std::string eval_part, eval_truth, eval_graph;
    auto* ev = app.add_subcommand("eval", "Score a partition against ground truth");
    ev->add_option("partition", eval_part, "Partition label file")->required();
    ev->add_option("truth", eval_truth, "Ground-truth label file")->required();
    ev->add_option("graph", eval_graph, "Edge-list file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (curv->parsed()) return run_curvature(graph_path, opt, out_path);
        if (flow->parsed()) return run_flow_cmd(graph_path, opt, out_path, trace_path);
        if (det->parsed()) return run_detect(graph_path, truth_path, opt, out_prefix);
        if (gen->parsed())
            return run_generate(model, n, k, p_intra, p_inter, a, b, seed, opt, out_prefix);
        if (ev->parsed()) return run_eval(eval_part, eval_truth, eval_graph);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

}  // namespace ricci
