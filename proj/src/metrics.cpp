#include "navhint/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

#include <json.hpp>

namespace navhint {

namespace {

double path_length(const World& world, const std::vector<NodeId>& path) {
  double total = 0;
  for (std::size_t i = 0; i + 1 < path.size(); ++i)
    total += world.edge_length(path[i], path[i + 1]);
  return total;
}

void check_pair(const PathPair& pair) {
  if (!pair.world) throw ValidationError("path pair: missing world");
  if (pair.predicted.empty() || pair.reference.empty())
    throw ValidationError("path pair: empty path");
  int n = pair.world->node_count();
  for (NodeId v : pair.predicted)
    if (v < 0 || v >= n) throw LookupError("path pair: unknown node");
  for (NodeId v : pair.reference)
    if (v < 0 || v >= n) throw LookupError("path pair: unknown node");
}

}  // namespace

double navigation_error(const PathPair& pair, const DistanceTable& dist) {
  check_pair(pair);
  return dist(pair.predicted.back(), pair.reference.back());
}

double success(const PathPair& pair, const DistanceTable& dist) {
  return navigation_error(pair, dist) <= pair.success_threshold ? 1.0 : 0.0;
}

double spl(const PathPair& pair, const DistanceTable& dist) {
  check_pair(pair);
  double s = success(pair, dist);
  if (s == 0.0) return 0.0;
  double optimal = dist(pair.reference.front(), pair.reference.back());
  double taken = path_length(*pair.world, pair.predicted);
  if (optimal == 0.0 && taken == 0.0) return s;
  return s * optimal / std::max(taken, optimal);
}

double ndtw(const PathPair& pair, const DistanceTable& dist) {
  check_pair(pair);
  const auto& p = pair.predicted;
  const auto& r = pair.reference;
  const std::size_t np = p.size(), nr = r.size();
  constexpr double inf = std::numeric_limits<double>::infinity();
  std::vector<std::vector<double>> dp(np + 1, std::vector<double>(nr + 1, inf));
  dp[0][0] = 0.0;
  for (std::size_t i = 1; i <= np; ++i) {
    for (std::size_t j = 1; j <= nr; ++j) {
      double cost = dist(p[i - 1], r[j - 1]);
      dp[i][j] = cost +
                 std::min({dp[i - 1][j - 1], dp[i - 1][j], dp[i][j - 1]});
    }
  }
  return std::exp(-dp[np][nr] /
                  (static_cast<double>(nr) * pair.success_threshold));
}

double sdtw(const PathPair& pair, const DistanceTable& dist) {
  return success(pair, dist) * ndtw(pair, dist);
}

double cls(const PathPair& pair, const DistanceTable& dist) {
  check_pair(pair);
  const auto& p = pair.predicted;
  const auto& r = pair.reference;
  double pc = 0;
  for (NodeId rv : r) {
    double nearest = std::numeric_limits<double>::infinity();
    for (NodeId pv : p) nearest = std::min(nearest, dist(rv, pv));
    pc += std::exp(-nearest / pair.success_threshold);
  }
  pc /= static_cast<double>(r.size());
  double lr = path_length(*pair.world, r);
  double lp = path_length(*pair.world, p);
  double expected = pc * lr;
  double ls = (expected + std::abs(lp - expected)) == 0.0
                  ? 1.0
                  : expected / (expected + std::abs(lp - expected));
  return pc * ls;
}

MetricReport aggregate_metrics(const std::vector<PathPair>& pairs,
                               const std::vector<const DistanceTable*>& tables) {
  if (pairs.size() != tables.size())
    throw ValidationError("aggregate_metrics: size mismatch");
  MetricReport report;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const auto& d = *tables[i];
    report.ne += navigation_error(pairs[i], d);
    report.sr += success(pairs[i], d);
    report.spl += spl(pairs[i], d);
    report.cls += cls(pairs[i], d);
    report.ndtw += ndtw(pairs[i], d);
    report.sdtw += sdtw(pairs[i], d);
  }
  report.count = static_cast<int>(pairs.size());
  if (report.count > 0) {
    double inv = 1.0 / report.count;
    report.ne *= inv;
    report.sr *= inv;
    report.spl *= inv;
    report.cls *= inv;
    report.ndtw *= inv;
    report.sdtw *= inv;
  }
  return report;
}

double bleu(int n, const std::vector<std::vector<std::string>>& candidates,
            const std::vector<std::vector<std::string>>& references) {
  if (n < 1 || n > 4) throw ValidationError("bleu: order must be in 1..4");
  if (candidates.empty() || candidates.size() != references.size())
    throw ValidationError("bleu: empty or mismatched corpus");

  double log_sum = 0;
  std::size_t cand_len = 0, ref_len = 0;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    cand_len += candidates[i].size();
    ref_len += references[i].size();
  }
  for (int order = 1; order <= n; ++order) {
    long long matched = 0, total = 0;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      const auto& cand = candidates[i];
      const auto& ref = references[i];
      std::map<std::vector<std::string>, long long> ref_counts;
      for (std::size_t j = 0; j + order <= ref.size(); ++j)
        ++ref_counts[{ref.begin() + j, ref.begin() + j + order}];
      std::map<std::vector<std::string>, long long> cand_counts;
      for (std::size_t j = 0; j + order <= cand.size(); ++j)
        ++cand_counts[{cand.begin() + j, cand.begin() + j + order}];
      for (const auto& [gram, count] : cand_counts) {
        total += count;
        auto it = ref_counts.find(gram);
        if (it != ref_counts.end()) matched += std::min(count, it->second);
      }
    }
    if (total == 0 || matched == 0) return 0.0;
    log_sum += std::log(static_cast<double>(matched) /
                        static_cast<double>(total));
  }
  double bp = 1.0;
  if (cand_len < ref_len && cand_len > 0)
    bp = std::exp(1.0 - static_cast<double>(ref_len) /
                            static_cast<double>(cand_len));
  if (cand_len == 0) return 0.0;
  return bp * std::exp(log_sum / n);
}

using nlohmann::json;

std::string metric_report_to_json(const MetricReport& r) {
  json j{{"schema_version", 1}, {"ne", r.ne},     {"sr", r.sr},
         {"spl", r.spl},        {"cls", r.cls},   {"ndtw", r.ndtw},
         {"sdtw", r.sdtw},      {"count", r.count}};
  return j.dump(2) + "\n";
}

MetricReport metric_report_from_json(const std::string& text) {
  json j = json::parse(text);
  if (j.at("schema_version").get<int>() != 1)
    throw ValidationError("metric report: unknown schema version");
  MetricReport r;
  r.ne = j.at("ne").get<double>();
  r.sr = j.at("sr").get<double>();
  r.spl = j.at("spl").get<double>();
  r.cls = j.at("cls").get<double>();
  r.ndtw = j.at("ndtw").get<double>();
  r.sdtw = j.at("sdtw").get<double>();
  r.count = j.at("count").get<int>();
  return r;
}

}  // namespace navhint
