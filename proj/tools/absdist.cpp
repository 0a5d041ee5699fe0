// Command-line front end: analyze a program into an AND-OR graph JSON,
// compare two analyses under a chosen metric, intersect several analyses,
// or run the benchmark harness over a corpus.
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "absdist/analyzer.hpp"
#include "absdist/bench.hpp"
#include "absdist/program.hpp"
#include "absdist/tree_metrics.hpp"

namespace {

constexpr int kExitParse = 2;
constexpr int kExitAnalysis = 3;
constexpr int kExitIncompatible = 4;

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_output(const std::string& path, const std::string& content) {
    if (path.empty()) {
        std::cout << content;
        if (!content.empty() && content.back() != '\n') std::cout << '\n';
        return;
    }
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << content;
}

absdist::AndOrGraph load_graph(const std::string& path) {
    return absdist::graph_from_json(nlohmann::json::parse(read_file(path)));
}

int cmd_analyze(const std::string& file, const std::string& domain,
                std::optional<int> widen, const std::string& entry, const std::string& out) {
    absdist::Program prog;
    try {
        prog = absdist::parse_program(read_file(file));
    } catch (const std::exception& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kExitParse;
    }
    try {
        absdist::AnalyzeOptions opts;
        opts.domain = absdist::domain_of_name(domain);
        opts.widen_share = widen;
        opts.entry = entry;
        if (widen && opts.domain != absdist::Domain::Share) {
            throw absdist::AnalysisError("--widen-share applies to the share domain only");
        }
        absdist::AndOrGraph g = absdist::analyze(prog, opts);
        write_output(out, absdist::graph_to_json(g).dump(2));
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "analysis error: " << e.what() << "\n";
        return kExitAnalysis;
    }
}

int cmd_compare(const std::string& a_path, const std::string& b_path, const std::string& metric,
                double mu, const std::string& base, const std::string& weights_path,
                const std::string& solver, const std::string& out) {
    try {
        absdist::AndOrGraph a = load_graph(a_path);
        absdist::AndOrGraph b = load_graph(b_path);
        absdist::Domain target = base.empty()
                                     ? (a.domain == b.domain ? a.domain : absdist::Domain::Gr)
                                     : absdist::domain_of_name(base);
        a = absdist::translate_base(a, target);
        b = absdist::translate_base(b, target);

        absdist::DistanceReport rep;
        if (metric == "top") {
            rep.metric = "top";
            rep.value = absdist::top_distance(a, b);
        } else if (metric == "flat") {
            std::optional<absdist::FlatWeights> w;
            if (!weights_path.empty()) {
                w = absdist::parse_weights_csv(read_file(weights_path));
            }
            rep = absdist::flat_distance(a, b, w);
        } else if (metric == "tree") {
            absdist::TreeDistParams params;
            params.mu = mu;
            params.solver = solver == "direct" ? absdist::TreeSolver::Direct
                                               : absdist::TreeSolver::Iterative;
            rep = absdist::tree_distance(a, b, params);
        } else {
            std::cerr << "unknown metric: " << metric << "\n";
            return 1;
        }
        write_output(out, rep.to_json().dump(2));
        return 0;
    } catch (const absdist::IncompatibleAnalyses& e) {
        std::cerr << "incompatible analyses: " << e.what() << "\n";
        return kExitIncompatible;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

int cmd_intersect(const std::vector<std::string>& paths, const std::string& base,
                  const std::string& out) {
    try {
        std::vector<absdist::AndOrGraph> gs;
        gs.reserve(paths.size());
        for (const std::string& p : paths) gs.push_back(load_graph(p));
        absdist::Domain target;
        if (!base.empty()) {
            target = absdist::domain_of_name(base);
        } else {
            target = gs[0].domain;
            for (const auto& g : gs) {
                if (g.domain != target) {
                    target = absdist::Domain::Gr;
                    break;
                }
            }
        }
        for (auto& g : gs) g = absdist::translate_base(g, target);
        absdist::AndOrGraph meet = absdist::intersect(gs);
        write_output(out, absdist::graph_to_json(meet).dump(2));
        return 0;
    } catch (const absdist::IncompatibleAnalyses& e) {
        std::cerr << "incompatible analyses: " << e.what() << "\n";
        return kExitIncompatible;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

int cmd_bench(const std::string& config_path, const std::string& out, const std::string& plot) {
    try {
        absdist::BenchConfig cfg =
            absdist::bench_config_from_json(nlohmann::json::parse(read_file(config_path)));
        std::vector<absdist::BenchRow> rows = absdist::run_bench(cfg);
        std::string csv = absdist::bench_csv(rows);
        write_output(out, csv);
        if (!plot.empty()) {
            write_output(plot, absdist::gnuplot_template(out.empty() ? "bench.csv" : out));
        }
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Abstract-interpretation analyses and distances between them"};
    app.require_subcommand(1);

    // analyze
    auto* analyze = app.add_subcommand("analyze", "Analyze a program into an AND-OR graph JSON");
    std::string an_file, an_domain = "gr", an_entry, an_out;
    std::optional<int> an_widen;
    analyze->add_option("file", an_file, "program file (.pl)")->required();
    analyze->add_option("--domain", an_domain, "abstract domain: gr | share")
        ->check(CLI::IsMember({"gr", "share"}));
    int an_widen_raw = -1;
    analyze->add_option("--widen-share", an_widen_raw,
                        "sharing cardinality widening threshold (share domain)");
    analyze->add_option("--entry", an_entry, "entry selector name/arity");
    analyze->add_option("-o,--output", an_out, "output path (default stdout)");

    // compare
    auto* compare = app.add_subcommand("compare", "Distance between two analysis JSON files");
    std::string cm_a, cm_b, cm_metric = "flat", cm_base, cm_weights, cm_solver = "iterative",
                cm_out;
    double cm_mu = 0.2;
    compare->add_option("a", cm_a, "first analysis JSON")->required();
    compare->add_option("b", cm_b, "second analysis JSON")->required();
    compare->add_option("--metric", cm_metric, "top | flat | tree")
        ->check(CLI::IsMember({"top", "flat", "tree"}));
    compare->add_option("--mu", cm_mu, "tree metric root weight, in (0,1]");
    compare->add_option("--base", cm_base, "base domain to translate into: gr | share");
    compare->add_option("--weights", cm_weights, "flat metric weights CSV (pp,weight)");
    compare->add_option("--solver", cm_solver, "tree solver: iterative | direct")
        ->check(CLI::IsMember({"iterative", "direct"}));
    compare->add_option("-o,--output", cm_out, "output path (default stdout)");

    // intersect
    auto* inter = app.add_subcommand("intersect", "Position-wise meet of several analyses");
    std::vector<std::string> in_paths;
    std::string in_base, in_out;
    inter->add_option("files", in_paths, "analysis JSON files")->required()->expected(-1);
    inter->add_option("--base", in_base, "base domain to translate into");
    inter->add_option("-o,--output", in_out, "output path (default stdout)");

    // bench
    auto* bench = app.add_subcommand("bench", "Run the corpus benchmark harness");
    std::string be_config, be_out, be_plot;
    bench->add_option("--config", be_config, "bench config JSON")->required();
    bench->add_option("-o,--output", be_out, "CSV output path (default stdout)");
    bench->add_option("--plot", be_plot, "write a gnuplot script template here");

    CLI11_PARSE(app, argc, argv);

    if (analyze->parsed()) {
        if (an_widen_raw >= 0) an_widen = an_widen_raw;
        return cmd_analyze(an_file, an_domain, an_widen, an_entry, an_out);
    }
    if (compare->parsed()) {
        return cmd_compare(cm_a, cm_b, cm_metric, cm_mu, cm_base, cm_weights, cm_solver, cm_out);
    }
    if (inter->parsed()) return cmd_intersect(in_paths, in_base, in_out);
    if (bench->parsed()) return cmd_bench(be_config, be_out, be_plot);
    return 1;
}
