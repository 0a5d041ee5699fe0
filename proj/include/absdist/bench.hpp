// Corpus benchmark harness: analyze every program under a list of domain
// configurations, translate everything into a base domain, approximate the
// most precise result by the intersection of all analyses, and report each
// configuration's distance to that intersection together with analysis time
// and size. Output is a deterministic CSV plus an optional gnuplot template.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "absdist/domain.hpp"

namespace absdist {

struct DomainConfig {
    Domain domain = Domain::Gr;
    std::optional<int> widen;  // sharing cardinality threshold

    std::string label() const;  // "gr", "share", "share+w2"
};

struct BenchConfig {
    std::string corpus_dir;
    std::vector<DomainConfig> domains;
    Domain base = Domain::Gr;
    std::vector<std::string> metrics{"top", "flat", "tree"};
    double mu = 0.2;
    double time_limit_ms = 10000;
};

// {"corpus_dir":..., "base":"gr", "mu":0.2, "time_limit_ms":...,
//  "metrics":[...], "domains":[{"domain":"share","widen":2}, ...]}
BenchConfig bench_config_from_json(const nlohmann::json& j);

struct BenchRow {
    std::string program;
    std::string domain;
    std::optional<int> widening;
    std::string metric;
    std::optional<double> distance;
    double time_ms = 0;
    std::optional<long> size;
    std::string status = "ok";  // ok | timeout | error
};

// One row per (program, domain config, metric); analysis failures yield a
// single status=error row for the configuration and the run continues.
std::vector<BenchRow> run_bench(const BenchConfig& cfg);

// Fixed columns: program,domain,widening,metric,distance,time_ms,size,status.
std::string bench_csv(const std::vector<BenchRow>& rows);

// Data-only plot support: a gnuplot script template over the CSV.
std::string gnuplot_template(const std::string& csv_path);

}  // namespace absdist
