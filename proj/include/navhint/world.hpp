#ifndef NAVHINT_WORLD_HPP
#define NAVHINT_WORLD_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "navhint/lexicon.hpp"

namespace navhint {

using NodeId = int;

struct Vec3 {
  double x = 0, y = 0, z = 0;
};

double euclidean(const Vec3& a, const Vec3& b);

struct GenerationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct LookupError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct VisualObject {
  std::string head_noun;
  std::vector<std::string> attributes;

  std::string phrase() const;
  bool operator==(const VisualObject&) const = default;
};

// One navigable neighbor as seen from a node. `heading` is relative to the
// node's canonical arrival heading (the bearing into the node from its
// lowest-id neighbor); per-step relative headings are recomputed from node
// positions during rollouts.
struct CandidateView {
  NodeId neighbor = -1;
  double heading = 0;    // alpha, [-pi, pi)
  double elevation = 0;  // beta, one of {-pi/6, 0, pi/6}
  std::vector<VisualObject> objects;

  bool operator==(const CandidateView&) const = default;
};

struct World {
  std::string id;
  std::vector<Vec3> nodes;  // node_id is the index
  std::vector<std::pair<NodeId, NodeId>> edges;
  std::vector<std::vector<CandidateView>> views;  // per node, neighbor-sorted
  std::uint64_t object_lexicon_seed = 0;

  double edge_length(NodeId a, NodeId b) const {
    return euclidean(nodes.at(a), nodes.at(b));
  }
  int node_count() const { return static_cast<int>(nodes.size()); }
};

struct SubInstructionSpan {
  int start_token = 0;
  int end_token = 0;  // half-open
  int hop_index = 0;

  bool operator==(const SubInstructionSpan&) const = default;
};

struct Episode {
  std::string id;
  std::string world_id;
  std::vector<NodeId> path;
  std::vector<std::string> instruction;
  std::vector<SubInstructionSpan> spans;
  NodeId goal = -1;

  bool operator==(const Episode&) const = default;
};

struct WorldConfig {
  int node_count = 14;
  int knn = 3;
  double box_xy = 16.0;  // nodes sampled in [0, box_xy)^2
  double box_z = 1.5;    // z in [-box_z, box_z)
  int min_objects_per_view = 2;
  int max_objects_per_view = 4;
  int max_retries = 64;
};

struct EpisodeConfig {
  int min_hops = 2;
  int max_hops = 4;
  int max_retries = 128;
};

World generate_world(std::uint64_t seed, const WorldConfig& cfg,
                     const Lexicon& lex = default_lexicon());

Episode generate_episode(const World& world, std::uint64_t seed,
                         const EpisodeConfig& cfg,
                         const Lexicon& lex = default_lexicon());

double shortest_path_distance(const World& world, NodeId a, NodeId b);

// Unique shortest path (ties broken by smallest predecessor id), inclusive of
// both endpoints.
std::vector<NodeId> shortest_path(const World& world, NodeId a, NodeId b);

const std::vector<CandidateView>& candidate_views(const World& world,
                                                  NodeId node);

// Cached all-pairs distances for metric evaluation over one world.
class DistanceTable {
 public:
  explicit DistanceTable(const World& world);
  double operator()(NodeId a, NodeId b) const { return d_.at(a).at(b); }

 private:
  std::vector<std::vector<double>> d_;
};

void validate_world(const World& world);
void validate_episode(const World& world, const Episode& episode);

// Heading of the displacement a -> b projected to the xy plane, in [-pi, pi).
double bearing(const Vec3& a, const Vec3& b);
double wrap_angle(double a);  // into [-pi, pi)

std::string world_to_json(const World& world);
World world_from_json(const std::string& text);
std::string episode_to_json(const Episode& episode);  // single line
Episode episode_from_json(const std::string& line);

}  // namespace navhint

#endif
