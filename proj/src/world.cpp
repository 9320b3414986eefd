#include "navhint/world.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <set>

#include <json.hpp>

#include "navhint/rng.hpp"

namespace navhint {

namespace {
constexpr double kPi = 3.141592653589793;
constexpr int kMinViews = 2;
constexpr int kMaxViews = 8;
}  // namespace

double euclidean(const Vec3& a, const Vec3& b) {
  double dx = a.x - b.x, dy = a.y - b.y, dz = a.z - b.z;
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

double wrap_angle(double a) {
  while (a >= kPi) a -= 2 * kPi;
  while (a < -kPi) a += 2 * kPi;
  return a;
}

double bearing(const Vec3& a, const Vec3& b) {
  return wrap_angle(std::atan2(b.y - a.y, b.x - a.x));
}

std::string VisualObject::phrase() const {
  std::string out;
  for (const auto& a : attributes) {
    out += a;
    out += ' ';
  }
  out += head_noun;
  return out;
}

namespace {

std::vector<std::vector<NodeId>> adjacency(const World& world) {
  std::vector<std::vector<NodeId>> adj(world.nodes.size());
  for (auto [a, b] : world.edges) {
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  for (auto& nbrs : adj) std::sort(nbrs.begin(), nbrs.end());
  return adj;
}

// Dijkstra with deterministic tie-breaking: on equal distance the smaller
// predecessor id wins, so shortest paths are unique functions of the world.
void dijkstra(const World& world, NodeId source, std::vector<double>& dist,
              std::vector<NodeId>& parent) {
  const auto adj = adjacency(world);
  const int n = world.node_count();
  dist.assign(n, std::numeric_limits<double>::infinity());
  parent.assign(n, -1);
  dist[source] = 0.0;
  using Item = std::pair<double, NodeId>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  pq.emplace(0.0, source);
  while (!pq.empty()) {
    auto [d, u] = pq.top();
    pq.pop();
    if (d > dist[u] + 1e-12) continue;
    for (NodeId v : adj[u]) {
      double nd = dist[u] + world.edge_length(u, v);
      if (nd < dist[v] - 1e-12 ||
          (std::abs(nd - dist[v]) <= 1e-12 && parent[v] > u)) {
        dist[v] = nd;
        parent[v] = u;
        pq.emplace(nd, v);
      }
    }
  }
}

double quantize_elevation(double dz, double horizontal) {
  double angle = std::atan2(dz, std::max(horizontal, 1e-9));
  if (angle > kPi / 12) return kPi / 6;
  if (angle < -kPi / 12) return -kPi / 6;
  return 0.0;
}

bool try_generate_graph(Rng& rng, const WorldConfig& cfg, World& world) {
  const int n = cfg.node_count;
  world.nodes.clear();
  world.edges.clear();
  for (int i = 0; i < n; ++i) {
    world.nodes.push_back({rng.uniform(0.0, cfg.box_xy),
                           rng.uniform(0.0, cfg.box_xy),
                           rng.uniform(-cfg.box_z, cfg.box_z)});
  }

  std::vector<int> degree(n, 0);
  std::set<std::pair<NodeId, NodeId>> edge_set;
  auto add_edge = [&](NodeId a, NodeId b) {
    if (a == b) return false;
    auto key = std::minmax(a, b);
    if (edge_set.count(key)) return false;
    if (degree[a] >= kMaxViews || degree[b] >= kMaxViews) return false;
    edge_set.insert(key);
    ++degree[a];
    ++degree[b];
    return true;
  };

  // Spanning tree: each node joins its nearest already-placed node.
  for (int i = 1; i < n; ++i) {
    int best = -1;
    double best_d = std::numeric_limits<double>::infinity();
    for (int j = 0; j < i; ++j) {
      if (degree[j] >= kMaxViews) continue;
      double d = euclidean(world.nodes[i], world.nodes[j]);
      if (d < best_d) {
        best_d = d;
        best = j;
      }
    }
    if (best < 0 || !add_edge(i, best)) return false;
  }

  // k-nearest-neighbor edges on top of the tree.
  for (int i = 0; i < n; ++i) {
    std::vector<std::pair<double, int>> by_dist;
    for (int j = 0; j < n; ++j)
      if (j != i) by_dist.emplace_back(euclidean(world.nodes[i], world.nodes[j]), j);
    std::sort(by_dist.begin(), by_dist.end());
    for (int k = 0; k < cfg.knn && k < static_cast<int>(by_dist.size()); ++k)
      add_edge(i, by_dist[k].second);
  }

  // Degree floor: a node with a single neighbor gets its next-nearest one.
  for (int i = 0; i < n; ++i) {
    std::vector<std::pair<double, int>> by_dist;
    for (int j = 0; j < n; ++j)
      if (j != i) by_dist.emplace_back(euclidean(world.nodes[i], world.nodes[j]), j);
    std::sort(by_dist.begin(), by_dist.end());
    for (std::size_t k = 0; degree[i] < kMinViews && k < by_dist.size(); ++k)
      add_edge(i, by_dist[k].second);
    if (degree[i] < kMinViews) return false;
  }

  world.edges.assign(edge_set.begin(), edge_set.end());
  for (auto [a, b] : world.edges)
    if (world.edge_length(a, b) <= 0) return false;
  return true;
}

std::vector<std::string> sample_attributes(Rng& rng, const Lexicon& lex) {
  std::vector<std::string> attrs;
  if (rng.uniform() < 0.55) {
    int count = 1 + static_cast<int>(rng.uniform_int(2));
    std::set<std::size_t> picked;
    while (static_cast<int>(picked.size()) < count)
      picked.insert(rng.uniform_int(lex.attributes.size()));
    for (auto idx : picked) attrs.push_back(lex.attributes[idx]);
  }
  return attrs;
}

void populate_views(Rng& rng, const WorldConfig& cfg, const Lexicon& lex,
                    World& world) {
  const auto adj = adjacency(world);
  world.views.assign(world.nodes.size(), {});
  for (int u = 0; u < world.node_count(); ++u) {
    const auto& nbrs = adj[u];
    // Canonical arrival heading: as if entering from the lowest-id neighbor.
    double ref = bearing(world.nodes[nbrs.front()], world.nodes[u]);
    auto& views = world.views[u];
    for (NodeId v : nbrs) {
      CandidateView cv;
      cv.neighbor = v;
      cv.heading = wrap_angle(bearing(world.nodes[u], world.nodes[v]) - ref);
      double dx = world.nodes[v].x - world.nodes[u].x;
      double dy = world.nodes[v].y - world.nodes[u].y;
      cv.elevation = quantize_elevation(world.nodes[v].z - world.nodes[u].z,
                                        std::hypot(dx, dy));
      views.push_back(cv);
    }

    // Object planting. Per node: two nouns each shared across >= 2 views
    // (feeds the Multiple/Missing categories; two so most target views carry
    // a shared noun) and at least one noun exclusive to each view (feeds
    // Target and distinctive-object selection).
    std::set<std::string> used;
    auto fresh_noun = [&]() {
      for (;;) {
        const auto& n = lex.nouns[rng.uniform_int(lex.nouns.size())];
        if (!used.count(n)) {
          used.insert(n);
          return n;
        }
      }
    };

    std::vector<std::pair<std::string, std::set<std::size_t>>> shared_plants;
    if (views.size() >= 2) {
      for (int s = 0; s < 2; ++s) {
        int count = 2 + static_cast<int>(rng.uniform_int(
                            std::min<std::size_t>(views.size(), 3) - 1));
        std::set<std::size_t> picked;
        while (static_cast<int>(picked.size()) < count)
          picked.insert(rng.uniform_int(views.size()));
        shared_plants.emplace_back(fresh_noun(), std::move(picked));
      }
    }

    for (std::size_t vi = 0; vi < views.size(); ++vi) {
      auto& objs = views[vi].objects;
      for (const auto& [shared, share_with] : shared_plants)
        if (share_with.count(vi))
          objs.push_back({shared, sample_attributes(rng, lex)});
      int extra = cfg.min_objects_per_view +
                  static_cast<int>(rng.uniform_int(
                      cfg.max_objects_per_view - cfg.min_objects_per_view + 1));
      extra = std::max(extra, 1);
      for (int k = 0; k < extra; ++k)
        objs.push_back({fresh_noun(), sample_attributes(rng, lex)});
      // Unique phrases within a view.
      std::set<std::string> seen;
      std::vector<VisualObject> dedup;
      for (auto& o : objs)
        if (seen.insert(o.phrase()).second) dedup.push_back(o);
      objs = std::move(dedup);
    }
  }
}

}  // namespace

World generate_world(std::uint64_t seed, const WorldConfig& cfg,
                     const Lexicon& lex) {
  if (cfg.node_count < 4)
    throw GenerationError("world: node_count must be >= 4");
  if (lex.nouns.empty()) throw GenerationError("world: empty object lexicon");
  for (int attempt = 0; attempt < cfg.max_retries; ++attempt) {
    Rng rng(derive_seed(seed, "world-gen") + static_cast<std::uint64_t>(attempt));
    World world;
    world.id = "w" + std::to_string(seed);
    world.object_lexicon_seed = seed;
    if (!try_generate_graph(rng, cfg, world)) continue;
    populate_views(rng, cfg, lex, world);
    try {
      validate_world(world);
    } catch (const ValidationError&) {
      continue;
    }
    return world;
  }
  throw GenerationError("world: no valid graph after bounded retries");
}

double shortest_path_distance(const World& world, NodeId a, NodeId b) {
  if (a < 0 || a >= world.node_count() || b < 0 || b >= world.node_count())
    throw LookupError("shortest_path_distance: unknown node");
  std::vector<double> dist;
  std::vector<NodeId> parent;
  dijkstra(world, a, dist, parent);
  return dist[b];
}

std::vector<NodeId> shortest_path(const World& world, NodeId a, NodeId b) {
  if (a < 0 || a >= world.node_count() || b < 0 || b >= world.node_count())
    throw LookupError("shortest_path: unknown node");
  std::vector<double> dist;
  std::vector<NodeId> parent;
  dijkstra(world, a, dist, parent);
  std::vector<NodeId> path;
  for (NodeId u = b; u != -1; u = parent[u]) path.push_back(u);
  std::reverse(path.begin(), path.end());
  if (path.front() != a) throw LookupError("shortest_path: unreachable node");
  return path;
}

const std::vector<CandidateView>& candidate_views(const World& world,
                                                  NodeId node) {
  if (node < 0 || node >= world.node_count())
    throw LookupError("candidate_views: unknown node");
  return world.views.at(node);
}

DistanceTable::DistanceTable(const World& world) {
  const int n = world.node_count();
  d_.resize(n);
  std::vector<NodeId> parent;
  for (int i = 0; i < n; ++i) dijkstra(world, i, d_[i], parent);
}

void validate_world(const World& world) {
  const int n = world.node_count();
  if (n < 4) throw ValidationError("world: fewer than 4 nodes");
  const auto adj = adjacency(world);
  for (int u = 0; u < n; ++u) {
    int deg = static_cast<int>(adj[u].size());
    if (deg < kMinViews || deg > kMaxViews)
      throw ValidationError("world: node degree outside [2, 8]");
    const auto& views = world.views.at(u);
    if (static_cast<int>(views.size()) != deg)
      throw ValidationError("world: views do not match neighbors");
    std::set<NodeId> targets;
    for (const auto& cv : views) {
      if (!targets.insert(cv.neighbor).second)
        throw ValidationError("world: duplicate view target");
      if (std::find(adj[u].begin(), adj[u].end(), cv.neighbor) == adj[u].end())
        throw ValidationError("world: view target is not a neighbor");
      if (cv.heading < -kPi || cv.heading >= kPi)
        throw ValidationError("world: heading out of range");
      if (cv.objects.empty()) throw ValidationError("world: empty view objects");
      std::set<std::string> phrases;
      for (const auto& o : cv.objects)
        if (!phrases.insert(o.phrase()).second)
          throw ValidationError("world: duplicate object phrase in view");
    }
  }
  for (auto [a, b] : world.edges)
    if (world.edge_length(a, b) <= 0)
      throw ValidationError("world: non-positive edge length");
  // Connectivity.
  std::vector<double> dist;
  std::vector<NodeId> parent;
  dijkstra(world, 0, dist, parent);
  for (double d : dist)
    if (!std::isfinite(d)) throw ValidationError("world: disconnected graph");
}

void validate_episode(const World& world, const Episode& episode) {
  if (episode.path.size() < 2)
    throw ValidationError("episode: path too short");
  const auto adj = adjacency(world);
  for (std::size_t i = 0; i + 1 < episode.path.size(); ++i) {
    NodeId a = episode.path[i], b = episode.path[i + 1];
    if (std::find(adj.at(a).begin(), adj.at(a).end(), b) == adj.at(a).end())
      throw ValidationError("episode: path edge missing from world");
  }
  if (episode.goal != episode.path.back())
    throw ValidationError("episode: goal is not the final path node");
  int l = static_cast<int>(episode.instruction.size());
  int cursor = 0, prev_hop = -1;
  for (const auto& span : episode.spans) {
    if (span.start_token != cursor || span.end_token <= span.start_token ||
        span.end_token > l)
      throw ValidationError("episode: spans do not partition instruction");
    if (span.hop_index <= prev_hop)
      throw ValidationError("episode: hop indices not strictly increasing");
    prev_hop = span.hop_index;
    cursor = span.end_token;
  }
  if (cursor != l)
    throw ValidationError("episode: spans do not cover instruction");
  if (episode.spans.size() != episode.path.size() - 1)
    throw ValidationError("episode: one span per hop required");
}

namespace {

// Episode instruction synthesis. Each hop gets one templated phrase; the
// category mix is tuned so a generated corpus ranks Invisible and Multiple
// as the two largest step categories.
enum class HopStrategy { Target, Multiple, Missing, Invisible, NoLandmarks };

std::set<std::string> view_nouns(const CandidateView& view) {
  std::set<std::string> nouns;
  for (const auto& o : view.objects) nouns.insert(singularize(o.head_noun));
  return nouns;
}

std::string direction_phrase(double alpha) {
  if (std::abs(alpha) <= kPi / 4) return "go straight and";
  if (alpha > kPi / 4 && alpha <= 3 * kPi / 4) return "turn left and";
  if (alpha < -kPi / 4 && alpha >= -3 * kPi / 4) return "turn right and";
  return "turn around and";
}

double bucket_center(double alpha) {
  if (std::abs(alpha) <= kPi / 4) return 0.0;
  if (alpha > kPi / 4 && alpha <= 3 * kPi / 4) return kPi / 2;
  if (alpha < -kPi / 4 && alpha >= -3 * kPi / 4) return -kPi / 2;
  return kPi;
}

// True when the target is, by a clear angular margin, the view closest to its
// direction-word's center among `subset`. Keeps direction cues sufficient for
// action selection: picking the best-matching view is then unambiguous.
bool direction_selects(const std::vector<double>& alphas,
                       const std::vector<std::size_t>& subset,
                       std::size_t target_idx, double margin = 0.35) {
  double mu = bucket_center(alphas[target_idx]);
  double target_gap = std::abs(wrap_angle(alphas[target_idx] - mu));
  for (std::size_t i : subset) {
    if (i == target_idx) continue;
    if (std::abs(wrap_angle(alphas[i] - mu)) < target_gap + margin)
      return false;
  }
  return true;
}

std::string motion_only_phrase(double alpha, Rng& rng) {
  if (std::abs(alpha) <= kPi / 4) return "go straight";
  bool alt = rng.uniform() < 0.5;
  if (alpha > kPi / 4 && alpha <= 3 * kPi / 4)
    return alt ? "turn left" : "make a left turn";
  if (alpha < -kPi / 4 && alpha >= -3 * kPi / 4)
    return alt ? "turn right" : "make a right turn";
  return "turn around";
}

std::string landmark_template(const std::string& phrase, Rng& rng) {
  switch (rng.uniform_int(4)) {
    case 0: return "walk towards the " + phrase;
    case 1: return "walk into the " + phrase;
    case 2: return "head to the " + phrase;
    default: return "walk past the " + phrase;
  }
}

}  // namespace

Episode generate_episode(const World& world, std::uint64_t seed,
                         const EpisodeConfig& cfg, const Lexicon& lex) {
  Rng rng(derive_seed(seed, "episode-gen") ^ fnv1a(world.id.data(), world.id.size()));
  const int n = world.node_count();
  for (int attempt = 0; attempt < cfg.max_retries; ++attempt) {
    NodeId start = static_cast<NodeId>(rng.uniform_int(n));
    std::vector<double> dist;
    std::vector<NodeId> parent;
    dijkstra(world, start, dist, parent);
    // Goals grouped by hop count; pick the length first so long paths are as
    // common as short ones.
    std::map<int, std::vector<NodeId>> goals_by_hops;
    for (NodeId g = 0; g < n; ++g) {
      if (g == start) continue;
      int hops = 0;
      for (NodeId u = g; u != start; u = parent[u]) ++hops;
      if (hops >= cfg.min_hops && hops <= cfg.max_hops)
        goals_by_hops[hops].push_back(g);
    }
    if (goals_by_hops.empty()) continue;
    std::vector<int> lengths;
    for (const auto& [hops, ids] : goals_by_hops) lengths.push_back(hops);
    const auto& pool =
        goals_by_hops[lengths[rng.uniform_int(lengths.size())]];
    NodeId goal = pool[rng.uniform_int(pool.size())];

    Episode ep;
    ep.world_id = world.id;
    ep.id = world.id + "-e" + std::to_string(seed);
    ep.goal = goal;
    for (NodeId u = goal; u != -1; u = parent[u]) ep.path.push_back(u);
    std::reverse(ep.path.begin(), ep.path.end());

    const std::size_t hop_count = ep.path.size() - 1;
    for (std::size_t hop = 0; hop < hop_count; ++hop) {
      NodeId u = ep.path[hop];
      NodeId next = ep.path[hop + 1];
      const auto& views = world.views.at(u);
      std::size_t target_idx = 0;
      for (std::size_t i = 0; i < views.size(); ++i)
        if (views[i].neighbor == next) target_idx = i;

      double heading = hop == 0
                           ? bearing(world.nodes[ep.path[0]], world.nodes[ep.path[1]])
                           : bearing(world.nodes[ep.path[hop - 1]], world.nodes[u]);
      double alpha = wrap_angle(bearing(world.nodes[u], world.nodes[next]) - heading);

      auto target_nouns = view_nouns(views[target_idx]);
      std::set<std::string> other_nouns, all_nouns;
      for (std::size_t i = 0; i < views.size(); ++i) {
        auto nouns = view_nouns(views[i]);
        all_nouns.insert(nouns.begin(), nouns.end());
        if (i != target_idx) other_nouns.insert(nouns.begin(), nouns.end());
      }
      std::vector<double> alphas(views.size());
      for (std::size_t i = 0; i < views.size(); ++i)
        alphas[i] = wrap_angle(
            bearing(world.nodes[u], world.nodes[views[i].neighbor]) - heading);
      std::vector<std::size_t> all_idx(views.size());
      for (std::size_t i = 0; i < views.size(); ++i) all_idx[i] = i;

      auto pick = [&](const std::vector<std::string>& pool) {
        return pool[rng.uniform_int(pool.size())];
      };

      // Every strategy is rendered only when the resulting phrase uniquely
      // identifies the target view (direction margin and/or exclusive noun);
      // a Target phrase is always available as the last resort.
      auto try_multiple = [&]() -> std::string {
        std::vector<std::string> nouns;
        for (const auto& noun : target_nouns) {
          if (!other_nouns.count(noun)) continue;
          std::vector<std::size_t> with_noun;
          for (std::size_t i = 0; i < views.size(); ++i)
            if (view_nouns(views[i]).count(noun)) with_noun.push_back(i);
          if (direction_selects(alphas, with_noun, target_idx))
            nouns.push_back(noun);
        }
        if (nouns.empty()) return {};
        return direction_phrase(alpha) + " walk towards the " + pick(nouns);
      };
      auto try_missing = [&]() -> std::string {
        std::vector<std::string> nouns;
        for (const auto& noun : other_nouns) {
          if (target_nouns.count(noun)) continue;
          std::vector<std::size_t> without_noun;
          for (std::size_t i = 0; i < views.size(); ++i)
            if (!view_nouns(views[i]).count(noun)) without_noun.push_back(i);
          if (direction_selects(alphas, without_noun, target_idx))
            nouns.push_back(noun);
        }
        if (nouns.empty()) return {};
        return direction_phrase(alpha) + " walk away from the " + pick(nouns);
      };
      auto try_invisible = [&]() -> std::string {
        if (!direction_selects(alphas, all_idx, target_idx)) return {};
        std::vector<std::string> absent;
        for (const auto& noun : lex.nouns)
          if (!all_nouns.count(noun)) absent.push_back(noun);
        if (absent.empty()) return {};
        return direction_phrase(alpha) + " walk towards the " + pick(absent);
      };
      auto try_no_landmarks = [&]() -> std::string {
        if (!direction_selects(alphas, all_idx, target_idx)) return {};
        return motion_only_phrase(alpha, rng);
      };
      auto try_target = [&]() -> std::string {
        std::vector<std::string> exclusive;
        for (const auto& o : views[target_idx].objects)
          if (!other_nouns.count(singularize(o.head_noun)))
            exclusive.push_back(o.phrase());
        if (exclusive.empty()) return {};
        // Direction prefix plus an exclusive landmark -- but only when the
        // direction does not point more squarely at a competing view.
        if (direction_selects(alphas, all_idx, target_idx, 0.05))
          return direction_phrase(alpha) + " " +
                 landmark_template(pick(exclusive), rng);
        return landmark_template(pick(exclusive), rng);
      };

      double roll = rng.uniform();
      HopStrategy want = roll < 0.44   ? HopStrategy::Invisible
                         : roll < 0.74 ? HopStrategy::Multiple
                         : roll < 0.82 ? HopStrategy::Target
                         : roll < 0.88 ? HopStrategy::Missing
                                       : HopStrategy::NoLandmarks;
      std::vector<HopStrategy> preference;
      switch (want) {
        case HopStrategy::Invisible:
          preference = {HopStrategy::Invisible, HopStrategy::Multiple,
                        HopStrategy::Missing, HopStrategy::Target};
          break;
        case HopStrategy::Multiple:
          preference = {HopStrategy::Multiple, HopStrategy::Invisible,
                        HopStrategy::Missing, HopStrategy::Target};
          break;
        case HopStrategy::Missing:
          preference = {HopStrategy::Missing, HopStrategy::Multiple,
                        HopStrategy::Invisible, HopStrategy::Target};
          break;
        case HopStrategy::NoLandmarks:
          preference = {HopStrategy::NoLandmarks, HopStrategy::Invisible,
                        HopStrategy::Multiple, HopStrategy::Missing,
                        HopStrategy::Target};
          break;
        case HopStrategy::Target:
          preference = {HopStrategy::Target};
          break;
      }
      std::string phrase_text;
      for (HopStrategy s : preference) {
        switch (s) {
          case HopStrategy::Target: phrase_text = try_target(); break;
          case HopStrategy::Multiple: phrase_text = try_multiple(); break;
          case HopStrategy::Missing: phrase_text = try_missing(); break;
          case HopStrategy::Invisible: phrase_text = try_invisible(); break;
          case HopStrategy::NoLandmarks: phrase_text = try_no_landmarks(); break;
        }
        if (!phrase_text.empty()) break;
      }
      if (phrase_text.empty()) phrase_text = try_target();
      if (phrase_text.empty())
        throw GenerationError("episode: no admissible phrase for hop");

      auto tokens = split_tokens(phrase_text);
      SubInstructionSpan span;
      span.start_token = static_cast<int>(ep.instruction.size());
      span.end_token = span.start_token + static_cast<int>(tokens.size());
      span.hop_index = static_cast<int>(hop);
      ep.instruction.insert(ep.instruction.end(), tokens.begin(), tokens.end());
      ep.spans.push_back(span);
    }

    validate_episode(world, ep);
    return ep;
  }
  throw GenerationError("episode: no admissible start/goal after retries");
}

// --- JSON ---

using nlohmann::json;

namespace {

json object_to_json(const VisualObject& o) {
  return json{{"head_noun", o.head_noun},
              {"attributes", o.attributes},
              {"phrase", o.phrase()}};
}

VisualObject object_from_json(const json& j) {
  VisualObject o;
  o.head_noun = j.at("head_noun").get<std::string>();
  o.attributes = j.at("attributes").get<std::vector<std::string>>();
  return o;
}

}  // namespace

std::string world_to_json(const World& world) {
  json j;
  j["schema_version"] = 1;
  j["id"] = world.id;
  j["object_lexicon_seed"] = world.object_lexicon_seed;
  json nodes = json::object();
  for (int i = 0; i < world.node_count(); ++i)
    nodes[std::to_string(i)] = {world.nodes[i].x, world.nodes[i].y,
                                world.nodes[i].z};
  j["nodes"] = std::move(nodes);
  json edges = json::array();
  for (auto [a, b] : world.edges)
    edges.push_back({a, b, world.edge_length(a, b)});
  j["edges"] = std::move(edges);
  json views = json::object();
  for (int i = 0; i < world.node_count(); ++i) {
    json vlist = json::array();
    for (const auto& cv : world.views[i]) {
      json objs = json::array();
      for (const auto& o : cv.objects) objs.push_back(object_to_json(o));
      vlist.push_back(json{{"neighbor", cv.neighbor},
                           {"heading", cv.heading},
                           {"elevation", cv.elevation},
                           {"objects", std::move(objs)}});
    }
    views[std::to_string(i)] = std::move(vlist);
  }
  j["views"] = std::move(views);
  return j.dump(2) + "\n";
}

World world_from_json(const std::string& text) {
  json j = json::parse(text);
  if (j.at("schema_version").get<int>() != 1)
    throw ValidationError("world: unknown schema version");
  World world;
  world.id = j.at("id").get<std::string>();
  world.object_lexicon_seed = j.at("object_lexicon_seed").get<std::uint64_t>();
  const auto& nodes = j.at("nodes");
  world.nodes.resize(nodes.size());
  for (auto it = nodes.begin(); it != nodes.end(); ++it) {
    int idx = std::stoi(it.key());
    world.nodes.at(idx) = {it.value()[0], it.value()[1], it.value()[2]};
  }
  for (const auto& e : j.at("edges"))
    world.edges.emplace_back(e[0].get<NodeId>(), e[1].get<NodeId>());
  const auto& views = j.at("views");
  world.views.resize(world.nodes.size());
  for (auto it = views.begin(); it != views.end(); ++it) {
    int idx = std::stoi(it.key());
    for (const auto& v : it.value()) {
      CandidateView cv;
      cv.neighbor = v.at("neighbor").get<NodeId>();
      cv.heading = v.at("heading").get<double>();
      cv.elevation = v.at("elevation").get<double>();
      for (const auto& o : v.at("objects")) cv.objects.push_back(object_from_json(o));
      world.views.at(idx).push_back(cv);
    }
  }
  return world;
}

std::string episode_to_json(const Episode& ep) {
  json spans = json::array();
  for (const auto& s : ep.spans)
    spans.push_back({{"start_token", s.start_token},
                     {"end_token", s.end_token},
                     {"hop_index", s.hop_index}});
  json j{{"schema_version", 1},
         {"id", ep.id},
         {"world_id", ep.world_id},
         {"path", ep.path},
         {"instruction", ep.instruction},
         {"spans", std::move(spans)},
         {"goal", ep.goal}};
  return j.dump();
}

Episode episode_from_json(const std::string& line) {
  json j = json::parse(line);
  if (j.at("schema_version").get<int>() != 1)
    throw ValidationError("episode: unknown schema version");
  Episode ep;
  ep.id = j.at("id").get<std::string>();
  ep.world_id = j.at("world_id").get<std::string>();
  ep.path = j.at("path").get<std::vector<NodeId>>();
  ep.instruction = j.at("instruction").get<std::vector<std::string>>();
  for (const auto& s : j.at("spans")) {
    SubInstructionSpan span;
    span.start_token = s.at("start_token").get<int>();
    span.end_token = s.at("end_token").get<int>();
    span.hop_index = s.at("hop_index").get<int>();
    ep.spans.push_back(span);
  }
  ep.goal = j.at("goal").get<NodeId>();
  return ep;
}

}  // namespace navhint
