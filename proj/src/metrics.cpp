#include "depnet/metrics.hpp"

#include <algorithm>
#include <cmath>

namespace depnet {

double gini(std::span<const double> values) {
    if (values.empty()) throw std::invalid_argument("gini: empty value list");
    std::vector<double> sorted(values.begin(), values.end());
    for (double v : sorted)
        if (v < 0) throw std::invalid_argument("gini: negative value");
    std::sort(sorted.begin(), sorted.end());

    const double n = static_cast<double>(sorted.size());
    double total = 0.0, weighted = 0.0;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        total += sorted[i];
        weighted += (2.0 * static_cast<double>(i + 1) - n - 1.0) * sorted[i];
    }
    if (total == 0.0) return 0.0;
    return weighted / (n * total);
}

std::vector<double> percentile_ranks(std::span<const double> values) {
    if (values.size() < 2)
        throw EmptyInputError("percentile_ranks: need at least 2 values");
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    const double denom = static_cast<double>(values.size() - 1);
    std::vector<double> ranks;
    ranks.reserve(values.size());
    for (double v : values) {
        auto below = std::lower_bound(sorted.begin(), sorted.end(), v) - sorted.begin();
        ranks.push_back(static_cast<double>(below) / denom);
    }
    return ranks;
}

namespace {

// Type-7 quantile: linear interpolation between order statistics.
double quantile_sorted(const std::vector<double>& sorted, double p) {
    if (sorted.size() == 1) return sorted.front();
    double h = p * static_cast<double>(sorted.size() - 1);
    auto lo = static_cast<std::size_t>(h);
    if (lo + 1 >= sorted.size()) return sorted.back();
    double frac = h - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

}  // namespace

SummaryStats summarize_values(std::span<const double> values) {
    if (values.empty()) throw EmptyInputError("summarize_values: empty value list");
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    SummaryStats stats;
    stats.count = sorted.size();
    stats.median = quantile_sorted(sorted, 0.5);
    stats.iqr = quantile_sorted(sorted, 0.75) - quantile_sorted(sorted, 0.25);
    stats.max = sorted.back();
    stats.gini = gini(sorted);
    return stats;
}

EcosystemSummary summarize_ecosystem(const DependencyGraph& graph,
                                     const std::map<GraphVariant, CentralityResult>& results,
                                     Ecosystem eco) {
    const NodeClass cls = node_class_of(eco);
    std::vector<double> mentions;
    std::size_t unmentioned = 0;
    for (const auto& node : graph.nodes()) {
        if (node.id.cls != cls) continue;
        mentions.push_back(static_cast<double>(node.mention_count));
        if (node.mention_count == 0) ++unmentioned;
    }
    if (mentions.empty())
        throw EmptyInputError("summarize_ecosystem: no " + std::string(to_string(eco)) +
                              " packages in the graph");

    EcosystemSummary summary;
    summary.ecosystem = eco;
    summary.package_count = mentions.size();
    summary.dependency_only_fraction =
        static_cast<double>(unmentioned) / static_cast<double>(mentions.size());
    summary.mention_stats = summarize_values(mentions);

    for (const auto& [variant, result] : results) {
        const auto& scores = result.normalized_applied ? result.normalized : result.raw;
        std::vector<double> values;
        for (const auto& [id, value] : scores)
            if (id.cls == cls) values.push_back(value);
        if (!values.empty()) summary.centrality_stats.emplace(variant, summarize_values(values));
    }
    return summary;
}

std::string_view to_string(Quadrant quadrant) {
    switch (quadrant) {
        case Quadrant::pasteur: return "pasteur";
        case Quadrant::popular: return "popular";
        case Quadrant::nebraska: return "nebraska";
        case Quadrant::majority: return "majority";
    }
    return "?";
}

Quadrant classify_quadrant(double mention_pct, double centrality_pct) {
    if (!(mention_pct >= 0.0 && mention_pct <= 1.0) ||
        !(centrality_pct >= 0.0 && centrality_pct <= 1.0))
        throw std::invalid_argument("classify_quadrant: percentiles must lie in [0, 1]");
    bool mentions_high = mention_pct >= 0.5;
    bool centrality_high = centrality_pct >= 0.5;
    if (mentions_high && centrality_high) return Quadrant::pasteur;
    if (mentions_high) return Quadrant::popular;
    if (centrality_high) return Quadrant::nebraska;
    return Quadrant::majority;
}

std::vector<PackageMetricsRow> package_metrics_rows(const DependencyGraph& graph,
                                                    const CentralityResult& result) {
    const auto& scores = result.normalized_applied ? result.normalized : result.raw;

    std::vector<PackageMetricsRow> rows;
    std::vector<double> mention_values, centrality_values;
    for (const auto& [id, value] : scores) {
        if (!is_package_class(id.cls)) continue;
        auto idx = graph.find(id);
        if (!idx) continue;
        const GraphNode& node = graph.node(*idx);
        PackageMetricsRow row;
        row.node = id;
        row.name = node.name;
        row.mentions = node.mention_count;
        row.centrality = value;
        rows.push_back(std::move(row));
        mention_values.push_back(static_cast<double>(node.mention_count));
        centrality_values.push_back(value);
    }
    if (rows.size() < 2)
        throw EmptyInputError("package_metrics_rows: need at least 2 scored packages");

    std::vector<double> mention_pcts = percentile_ranks(mention_values);
    std::vector<double> centrality_pcts = percentile_ranks(centrality_values);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        rows[i].mention_pct = mention_pcts[i];
        rows[i].centrality_pct = centrality_pcts[i];
        rows[i].quadrant = classify_quadrant(rows[i].mention_pct, rows[i].centrality_pct);
        rows[i].pasteur_score = rows[i].mention_pct + rows[i].centrality_pct;
    }
    return rows;
}

namespace {

std::vector<PackageMetricsRow> take_top(std::vector<PackageMetricsRow> rows, std::size_t k,
                                        double PackageMetricsRow::*score) {
    std::sort(rows.begin(), rows.end(),
              [score](const PackageMetricsRow& a, const PackageMetricsRow& b) {
                  if (a.*score != b.*score) return a.*score > b.*score;
                  return a.node < b.node;
              });
    if (rows.size() > k) rows.resize(k);
    return rows;
}

}  // namespace

TopKReports top_k_reports(std::span<const PackageMetricsRow> rows, std::size_t k,
                          const std::vector<std::string>& include_names) {
    TopKReports reports;
    std::vector<PackageMetricsRow> all(rows.begin(), rows.end());
    reports.pasteur = take_top(all, k, &PackageMetricsRow::pasteur_score);

    std::vector<PackageMetricsRow> low_centrality, low_mentions;
    for (const auto& row : rows) {
        if (row.centrality_pct < 0.5) low_centrality.push_back(row);
        if (row.mention_pct < 0.5) low_mentions.push_back(row);
    }
    reports.popular = take_top(std::move(low_centrality), k, &PackageMetricsRow::mention_pct);
    reports.nebraska = take_top(std::move(low_mentions), k, &PackageMetricsRow::centrality_pct);

    for (const auto& wanted : include_names) {
        for (const auto& row : rows) {
            auto eco = ecosystem_of(row.node.cls);
            bool name_match = row.name == wanted ||
                              (eco && fold_package_name(*eco, row.name) ==
                                          fold_package_name(*eco, wanted));
            if (name_match) {
                reports.included.push_back(row);
                break;
            }
        }
    }
    return reports;
}

}  // namespace depnet
