#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "navhint/world.hpp"

using namespace navhint;

namespace {

std::vector<std::vector<NodeId>> adjacency_of(const World& w) {
  std::vector<std::vector<NodeId>> adj(w.nodes.size());
  for (auto [a, b] : w.edges) {
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  return adj;
}

// Exhaustive simple-path search; the oracle for Dijkstra on small worlds.
void brute_force_dfs(const World& w, const std::vector<std::vector<NodeId>>& adj,
                     NodeId node, NodeId goal, double cost,
                     std::vector<bool>& visited, double& best) {
  if (node == goal) {
    best = std::min(best, cost);
    return;
  }
  if (cost >= best) return;
  for (NodeId nb : adj[node]) {
    if (visited[nb]) continue;
    visited[nb] = true;
    brute_force_dfs(w, adj, nb, goal, cost + w.edge_length(node, nb), visited,
                    best);
    visited[nb] = false;
  }
}

double brute_force_distance(const World& w, NodeId a, NodeId b) {
  auto adj = adjacency_of(w);
  std::vector<bool> visited(w.nodes.size(), false);
  visited[a] = true;
  double best = std::numeric_limits<double>::infinity();
  brute_force_dfs(w, adj, a, b, 0.0, visited, best);
  return best;
}

}  // namespace

TEST_CASE("wrap_angle maps into [-pi, pi)") {
  const double pi = 3.141592653589793;
  CHECK(wrap_angle(0.0) == doctest::Approx(0.0));
  CHECK(wrap_angle(pi) == doctest::Approx(-pi));
  CHECK(wrap_angle(-pi) == doctest::Approx(-pi));
  CHECK(wrap_angle(2.5 * pi) == doctest::Approx(0.5 * pi));
  CHECK(wrap_angle(-2.5 * pi) == doctest::Approx(-0.5 * pi));
}

TEST_CASE("bearing uses the xy plane only") {
  Vec3 a{0, 0, 0};
  CHECK(bearing(a, {1, 0, 5}) == doctest::Approx(0.0));
  CHECK(bearing(a, {0, 1, -5}) == doctest::Approx(1.5707963267948966));
  CHECK(bearing(a, {-1, 0, 0}) == doctest::Approx(-3.141592653589793));
}

TEST_CASE("generated worlds validate and respect structural bounds") {
  WorldConfig cfg;
  for (std::uint64_t seed : {1ULL, 7ULL, 42ULL, 1234ULL}) {
    World w = generate_world(seed, cfg);
    CHECK_NOTHROW(validate_world(w));
    CHECK(w.node_count() == cfg.node_count);

    auto adj = adjacency_of(w);
    for (int u = 0; u < w.node_count(); ++u) {
      CHECK(adj[u].size() >= 2);
      CHECK(adj[u].size() <= 8);
      // Views cover exactly the neighbors, sorted by neighbor id.
      REQUIRE(w.views[u].size() == adj[u].size());
      std::sort(adj[u].begin(), adj[u].end());
      for (std::size_t i = 0; i < adj[u].size(); ++i) {
        CHECK(w.views[u][i].neighbor == adj[u][i]);
        CHECK(w.views[u][i].heading >= -3.1415926536);
        CHECK(w.views[u][i].heading < 3.1415926536);
        CHECK(!w.views[u][i].objects.empty());
      }
    }
    for (auto [a, b] : w.edges) CHECK(w.edge_length(a, b) > 0.0);
  }
}

TEST_CASE("every view carries a noun exclusive to it within its node") {
  World w = generate_world(99, WorldConfig{});
  for (int u = 0; u < w.node_count(); ++u) {
    const auto& views = w.views[u];
    for (std::size_t vi = 0; vi < views.size(); ++vi) {
      bool has_exclusive = false;
      for (const auto& obj : views[vi].objects) {
        bool elsewhere = false;
        for (std::size_t vj = 0; vj < views.size() && !elsewhere; ++vj) {
          if (vj == vi) continue;
          for (const auto& other : views[vj].objects)
            if (other.head_noun == obj.head_noun) {
              elsewhere = true;
              break;
            }
        }
        if (!elsewhere) {
          has_exclusive = true;
          break;
        }
      }
      CHECK(has_exclusive);
    }
  }
}

TEST_CASE("world generation is deterministic in the seed") {
  WorldConfig cfg;
  World a = generate_world(2024, cfg);
  World b = generate_world(2024, cfg);
  CHECK(world_to_json(a) == world_to_json(b));
  World c = generate_world(2025, cfg);
  CHECK(world_to_json(a) != world_to_json(c));
}

TEST_CASE("shortest path distance matches exhaustive enumeration") {
  WorldConfig cfg;
  cfg.node_count = 10;
  for (std::uint64_t seed : {3ULL, 17ULL, 404ULL}) {
    World w = generate_world(seed, cfg);
    for (NodeId a = 0; a < w.node_count(); ++a)
      for (NodeId b = 0; b < w.node_count(); ++b) {
        double got = shortest_path_distance(w, a, b);
        double want = brute_force_distance(w, a, b);
        CHECK(got == doctest::Approx(want).epsilon(1e-12));
      }
  }
}

TEST_CASE("shortest_path is a valid path whose length matches the distance") {
  World w = generate_world(55, WorldConfig{});
  std::set<std::pair<NodeId, NodeId>> edges(w.edges.begin(), w.edges.end());
  auto is_edge = [&](NodeId a, NodeId b) {
    auto key = std::minmax(a, b);
    return edges.count(key) > 0;
  };
  for (NodeId a = 0; a < w.node_count(); ++a)
    for (NodeId b = 0; b < w.node_count(); ++b) {
      auto path = shortest_path(w, a, b);
      REQUIRE(!path.empty());
      CHECK(path.front() == a);
      CHECK(path.back() == b);
      double total = 0;
      for (std::size_t i = 1; i < path.size(); ++i) {
        CHECK(is_edge(path[i - 1], path[i]));
        total += w.edge_length(path[i - 1], path[i]);
      }
      CHECK(total == doctest::Approx(shortest_path_distance(w, a, b)));
      // Deterministic tie-breaking: asking again gives the same path.
      CHECK(shortest_path(w, a, b) == path);
    }
}

TEST_CASE("DistanceTable agrees with shortest_path_distance") {
  World w = generate_world(8, WorldConfig{});
  DistanceTable table(w);
  for (NodeId a = 0; a < w.node_count(); ++a)
    for (NodeId b = 0; b < w.node_count(); ++b)
      CHECK(table(a, b) == doctest::Approx(shortest_path_distance(w, a, b)));
}

TEST_CASE("generated episodes validate and align spans with hops") {
  World w = generate_world(777, WorldConfig{});
  EpisodeConfig ecfg;
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    Episode ep = generate_episode(w, seed, ecfg);
    CHECK_NOTHROW(validate_episode(w, ep));
    int hops = static_cast<int>(ep.path.size()) - 1;
    CHECK(hops >= ecfg.min_hops);
    CHECK(hops <= ecfg.max_hops);
    CHECK(ep.goal == ep.path.back());
    CHECK(ep.path == shortest_path(w, ep.path.front(), ep.path.back()));

    // Spans tile the instruction: contiguous, half-open, one per hop.
    REQUIRE(static_cast<int>(ep.spans.size()) == hops);
    CHECK(ep.spans.front().start_token == 0);
    CHECK(ep.spans.back().end_token == static_cast<int>(ep.instruction.size()));
    for (std::size_t i = 0; i < ep.spans.size(); ++i) {
      CHECK(ep.spans[i].hop_index == static_cast<int>(i));
      CHECK(ep.spans[i].start_token < ep.spans[i].end_token);
      if (i > 0) CHECK(ep.spans[i].start_token == ep.spans[i - 1].end_token);
    }
  }
}

TEST_CASE("episode generation is deterministic in the seed") {
  World w = generate_world(31, WorldConfig{});
  Episode a = generate_episode(w, 5, EpisodeConfig{});
  Episode b = generate_episode(w, 5, EpisodeConfig{});
  CHECK(a == b);
}

TEST_CASE("world JSON round trip") {
  World w = generate_world(123, WorldConfig{});
  World back = world_from_json(world_to_json(w));
  CHECK(back.id == w.id);
  CHECK(back.nodes.size() == w.nodes.size());
  CHECK(back.edges == w.edges);
  CHECK(back.views == w.views);
  CHECK(world_to_json(back) == world_to_json(w));
}

TEST_CASE("episode JSON round trip") {
  World w = generate_world(123, WorldConfig{});
  Episode ep = generate_episode(w, 9, EpisodeConfig{});
  Episode back = episode_from_json(episode_to_json(ep));
  CHECK(back == ep);
}

TEST_CASE("validate_episode rejects corrupted episodes") {
  World w = generate_world(64, WorldConfig{});
  Episode ep = generate_episode(w, 1, EpisodeConfig{});

  Episode broken = ep;
  broken.path.push_back(broken.path.back());  // self-loop hop
  CHECK_THROWS_AS(validate_episode(w, broken), ValidationError);

  broken = ep;
  broken.goal = (ep.goal + 1) % w.node_count();
  CHECK_THROWS_AS(validate_episode(w, broken), ValidationError);

  broken = ep;
  broken.spans.pop_back();
  CHECK_THROWS_AS(validate_episode(w, broken), ValidationError);
}
