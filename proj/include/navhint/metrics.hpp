#ifndef NAVHINT_METRICS_HPP
#define NAVHINT_METRICS_HPP

#include <string>
#include <vector>

#include "navhint/world.hpp"

namespace navhint {

struct PathPair {
  std::vector<NodeId> predicted;
  std::vector<NodeId> reference;
  const World* world = nullptr;
  double success_threshold = 3.0;  // meters
};

struct MetricReport {
  double ne = 0, sr = 0, spl = 0, cls = 0, ndtw = 0, sdtw = 0;
  int count = 0;
};

// Per-episode metrics. `dist` must be the distance table of pair.world.
double navigation_error(const PathPair& pair, const DistanceTable& dist);
double success(const PathPair& pair, const DistanceTable& dist);
double spl(const PathPair& pair, const DistanceTable& dist);
double ndtw(const PathPair& pair, const DistanceTable& dist);
double sdtw(const PathPair& pair, const DistanceTable& dist);
double cls(const PathPair& pair, const DistanceTable& dist);

// Mean over episode-level values; pairs may span worlds when each pair keeps
// its own distance table.
MetricReport aggregate_metrics(const std::vector<PathPair>& pairs,
                               const std::vector<const DistanceTable*>& tables);

// Corpus-level BLEU-n, uniform weights up to order n, multiplicative brevity
// penalty, no smoothing.
double bleu(int n, const std::vector<std::vector<std::string>>& candidates,
            const std::vector<std::vector<std::string>>& references);

std::string metric_report_to_json(const MetricReport& report);
MetricReport metric_report_from_json(const std::string& text);

}  // namespace navhint

#endif
