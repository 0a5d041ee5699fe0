#include "absdist/bench.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "absdist/analyzer.hpp"
#include "absdist/tree_metrics.hpp"

namespace absdist {

namespace {

std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p);
    if (!in) throw std::runtime_error("cannot read " + p.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

std::string DomainConfig::label() const {
    std::string s = domain_name(domain);
    if (widen) s += "+w" + std::to_string(*widen);
    return s;
}

BenchConfig bench_config_from_json(const nlohmann::json& j) {
    BenchConfig cfg;
    cfg.corpus_dir = j.at("corpus_dir").get<std::string>();
    if (j.count("base")) cfg.base = domain_of_name(j.at("base").get<std::string>());
    if (j.count("mu")) cfg.mu = j.at("mu").get<double>();
    if (j.count("time_limit_ms")) cfg.time_limit_ms = j.at("time_limit_ms").get<double>();
    if (j.count("metrics")) {
        cfg.metrics.clear();
        for (const auto& m : j.at("metrics")) {
            std::string name = m.get<std::string>();
            if (name != "top" && name != "flat" && name != "tree") {
                throw std::invalid_argument("bench config: unknown metric " + name);
            }
            cfg.metrics.push_back(name);
        }
    }
    if (!j.count("domains")) throw std::invalid_argument("bench config: missing domains list");
    for (const auto& d : j.at("domains")) {
        DomainConfig dc;
        dc.domain = domain_of_name(d.at("domain").get<std::string>());
        if (d.count("widen")) dc.widen = d.at("widen").get<int>();
        if (dc.widen && dc.domain != Domain::Share) {
            throw std::invalid_argument("bench config: widening applies to the share domain only");
        }
        cfg.domains.push_back(dc);
    }
    if (cfg.domains.empty()) throw std::invalid_argument("bench config: empty domains list");
    return cfg;
}

std::vector<BenchRow> run_bench(const BenchConfig& cfg) {
    namespace fs = std::filesystem;
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(cfg.corpus_dir)) {
        if (e.is_regular_file() && e.path().extension() == ".pl") files.push_back(e.path());
    }
    std::sort(files.begin(), files.end());

    std::vector<BenchRow> rows;
    for (const fs::path& file : files) {
        std::string name = file.stem().string();
        Program prog;
        try {
            prog = parse_program(read_file(file));
        } catch (const std::exception& e) {
            BenchRow r;
            r.program = name;
            r.domain = "-";
            r.metric = "-";
            r.status = std::string("error");
            rows.push_back(r);
            continue;
        }

        struct Run {
            DomainConfig dc;
            AndOrGraph translated;
            double time_ms = 0;
            long size = 0;
            bool timed_out = false;
        };
        std::vector<Run> runs;
        for (const DomainConfig& dc : cfg.domains) {
            try {
                AnalyzeOptions opts;
                opts.domain = dc.domain;
                opts.widen_share = dc.widen;
                auto t0 = std::chrono::steady_clock::now();
                AndOrGraph g = analyze(prog, opts);
                auto t1 = std::chrono::steady_clock::now();
                Run run;
                run.dc = dc;
                run.time_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
                run.size = analysis_size(g);
                run.translated = translate_base(g, cfg.base);
                run.timed_out = run.time_ms > cfg.time_limit_ms;
                runs.push_back(std::move(run));
            } catch (const std::exception& e) {
                BenchRow r;
                r.program = name;
                r.domain = dc.label();
                r.widening = dc.widen;
                r.metric = "-";
                r.status = "error";
                rows.push_back(r);
            }
        }
        if (runs.empty()) continue;

        std::vector<AndOrGraph> translated;
        translated.reserve(runs.size());
        for (const Run& r : runs) translated.push_back(r.translated);
        AndOrGraph meet = intersect(translated);

        for (const Run& run : runs) {
            for (const std::string& metric : cfg.metrics) {
                BenchRow r;
                r.program = name;
                r.domain = run.dc.label();
                r.widening = run.dc.widen;
                r.metric = metric;
                r.time_ms = run.time_ms;
                r.size = run.size;
                r.status = run.timed_out ? "timeout" : "ok";
                try {
                    if (metric == "top") {
                        r.distance = top_distance(run.translated, meet);
                    } else if (metric == "flat") {
                        r.distance = flat_distance(run.translated, meet).value;
                    } else {
                        TreeDistParams params;
                        params.mu = cfg.mu;
                        r.distance = tree_distance(run.translated, meet, params).value;
                    }
                } catch (const std::exception& e) {
                    r.status = "error";
                }
                rows.push_back(std::move(r));
            }
        }
    }

    std::sort(rows.begin(), rows.end(), [](const BenchRow& a, const BenchRow& b) {
        auto key = [](const BenchRow& r) {
            return std::tie(r.program, r.domain, r.metric);
        };
        return key(a) < key(b);
    });
    return rows;
}

std::string bench_csv(const std::vector<BenchRow>& rows) {
    std::ostringstream os;
    os << "program,domain,widening,metric,distance,time_ms,size,status\n";
    for (const BenchRow& r : rows) {
        os << r.program << ',' << r.domain << ',';
        if (r.widening) {
            os << *r.widening;
        } else {
            os << '-';
        }
        os << ',' << r.metric << ',';
        if (r.distance) {
            char buf[32];
            std::snprintf(buf, sizeof buf, "%.6f", *r.distance);
            os << buf;
        }
        os << ',';
        {
            char buf[32];
            std::snprintf(buf, sizeof buf, "%.3f", r.time_ms);
            os << buf;
        }
        os << ',';
        if (r.size) os << *r.size;
        os << ',' << r.status << '\n';
    }
    return os.str();
}

std::string gnuplot_template(const std::string& csv_path) {
    std::ostringstream os;
    os << "# Precision / cost plot template over the bench CSV.\n"
          "# Usage: gnuplot -p this_file\n"
          "set datafile separator ','\n"
          "set key outside\n"
          "set xlabel 'analysis size (symbols)'\n"
          "set ylabel 'distance to intersection'\n"
          "set title 'precision vs analysis size'\n"
          "plot '"
       << csv_path
       << "' using 7:5 every ::1 with points pt 7 title 'configurations'\n";
    return os.str();
}

}  // namespace absdist
