#pragma once

#include <span>
#include <vector>

#include "depnet/centrality.hpp"
#include "depnet/graph.hpp"

namespace depnet {

// Gini coefficient over non-negative values: with x(1) <= ... <= x(n),
// G = sum_i (2i - n - 1) x(i) / (n sum x). Returns 0 when all mass is zero.
double gini(std::span<const double> values);

// Fraction of the population strictly below each value:
// pct(v) = |{u : u < v}| / (n - 1). Ties share a rank; the unique maximum
// maps to 1 and the minimum to 0. Requires n >= 2.
std::vector<double> percentile_ranks(std::span<const double> values);

struct SummaryStats {
    std::size_t count = 0;
    double median = 0.0;
    double iqr = 0.0;  // q75 - q25, linear interpolation between order stats
    double max = 0.0;
    double gini = 0.0;
};

SummaryStats summarize_values(std::span<const double> values);

struct EcosystemSummary {
    Ecosystem ecosystem = Ecosystem::pypi;
    std::size_t package_count = 0;
    double dependency_only_fraction = 0.0;  // packages with zero mentions
    SummaryStats mention_stats;
    std::map<GraphVariant, SummaryStats> centrality_stats;
};

EcosystemSummary summarize_ecosystem(const DependencyGraph& graph,
                                     const std::map<GraphVariant, CentralityResult>& results,
                                     Ecosystem eco);

enum class Quadrant { pasteur, popular, nebraska, majority };

std::string_view to_string(Quadrant quadrant);

// pasteur: both percentiles >= 0.5; popular: mentions high, centrality low;
// nebraska: centrality high, mentions low; majority: both low.
Quadrant classify_quadrant(double mention_pct, double centrality_pct);

struct PackageMetricsRow {
    NodeId node;
    std::string name;
    std::uint64_t mentions = 0;
    double mention_pct = 0.0;
    double centrality = 0.0;
    double centrality_pct = 0.0;
    Quadrant quadrant = Quadrant::majority;
    double pasteur_score = 0.0;  // mention_pct + centrality_pct
};

// One row per package scored in the given variant; percentiles are computed
// over that pooled population (all ecosystems together). Rows come back in
// canonical (class, key) order.
std::vector<PackageMetricsRow> package_metrics_rows(const DependencyGraph& graph,
                                                    const CentralityResult& result);

struct TopKReports {
    std::vector<PackageMetricsRow> pasteur;   // top k by mention_pct + centrality_pct
    std::vector<PackageMetricsRow> popular;   // top k by mention_pct where centrality_pct < 0.5
    std::vector<PackageMetricsRow> nebraska;  // top k by centrality_pct where mention_pct < 0.5
    std::vector<PackageMetricsRow> included;  // named sanity-check packages, input order
};

TopKReports top_k_reports(std::span<const PackageMetricsRow> rows, std::size_t k,
                          const std::vector<std::string>& include_names = {});

}  // namespace depnet
