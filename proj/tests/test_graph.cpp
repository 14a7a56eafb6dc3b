#include <doctest.h>

#include <algorithm>
#include <map>
#include <set>

#include "bden/graph.hpp"
#include "stats.hpp"

using namespace bden;

namespace {

DynamicGraph star(std::size_t leaves, NodeId* hub_out = nullptr) {
  DynamicGraph g;
  const NodeId hub = g.add_node();
  for (std::size_t i = 0; i < leaves; ++i) g.add_edge(hub, g.add_node());
  if (hub_out) *hub_out = hub;
  return g;
}

// Plain edge-set model used to check the slot bookkeeping.
struct ModelGraph {
  std::set<std::uint64_t> nodes;
  std::set<std::pair<std::uint64_t, std::uint64_t>> edges;
  void add_edge(std::uint64_t a, std::uint64_t b) { edges.insert(std::minmax(a, b)); }
  std::size_t remove(std::uint64_t v) {
    std::size_t d = 0;
    for (auto it = edges.begin(); it != edges.end();) {
      if (it->first == v || it->second == v) {
        it = edges.erase(it);
        ++d;
      } else {
        ++it;
      }
    }
    nodes.erase(v);
    return d;
  }
};

void check_against(const DynamicGraph& g, const ModelGraph& model) {
  REQUIRE(g.node_count() == model.nodes.size());
  REQUIRE(g.edge_count() == model.edges.size());
  std::size_t sum = 0;
  for (NodeId v : g.nodes()) {
    REQUIRE(model.nodes.count(v.value));
    for (NodeId w : g.neighbors(v)) REQUIRE(model.edges.count(std::minmax(v.value, w.value)));
    sum += g.degree(v);
  }
  CHECK(sum == g.degree_sum());
  CHECK(g.degree_sum() == 2 * g.edge_count());
}

}  // namespace

TEST_CASE("add_node") {
  DynamicGraph g;
  const NodeId a = g.add_node();
  CHECK(g.node_count() == 1);
  CHECK(g.degree(a) == 0);

  auto k = DynamicGraph::complete(30);
  const auto sum = k.degree_sum();
  const NodeId v = k.add_node();
  CHECK(k.node_count() == 31);
  CHECK(k.degree(v) == 0);
  CHECK(k.degree_sum() == sum);

  const NodeId b = g.add_node();
  CHECK(a != b);
}

TEST_CASE("node ids are never reused") {
  DynamicGraph g;
  std::set<NodeId> seen;
  Rng rng(5);
  for (int i = 0; i < 2000; ++i) {
    if (g.node_count() > 0 && rng.bernoulli(0.45)) {
      g.remove_node(g.id_at(static_cast<DynamicGraph::Slot>(rng.below(g.node_count()))));
    } else {
      CHECK(seen.insert(g.add_node()).second);
    }
  }
}

TEST_CASE("remove_node") {
  DynamicGraph g;
  const NodeId iso = g.add_node();
  CHECK(g.remove_node(iso) == 0);
  CHECK(g.node_count() == 0);

  NodeId hub{};
  auto s = star(4, &hub);
  CHECK(s.remove_node(hub) == 4);
  CHECK(s.edge_count() == 0);
  CHECK(s.node_count() == 4);

  auto k = DynamicGraph::complete(30);
  const std::size_t sum_before = k.degree_sum();
  CHECK(k.remove_node(k.nodes()[7]) == 29);
  CHECK(k.node_count() == 29);
  CHECK(k.edge_count() == 29 * 28 / 2);
  CHECK(k.degree_sum() == sum_before - 2 * 29);
  for (NodeId v : k.nodes()) CHECK(k.degree(v) == 28);

  CHECK_THROWS_AS(k.remove_node(NodeId{9999}), GraphError);
  const NodeId gone = k.nodes()[0];
  k.remove_node(gone);
  CHECK_THROWS_AS(k.remove_node(gone), GraphError);
}

TEST_CASE("add_edge") {
  DynamicGraph g;
  const NodeId a = g.add_node(), b = g.add_node(), c = g.add_node();
  CHECK(g.add_edge(a, b));
  CHECK_FALSE(g.add_edge(b, a));
  CHECK(g.edge_count() == 1);
  CHECK_THROWS_AS(g.add_edge(a, a), GraphError);
  CHECK_THROWS_AS(g.add_edge(a, NodeId{77}), GraphError);

  CHECK(g.add_edge(b, c));
  CHECK(g.degree(a) == 1);
  CHECK(g.degree(b) == 2);
  CHECK(g.degree(c) == 1);
}

TEST_CASE("mean_degree and degree_histogram") {
  CHECK(DynamicGraph::complete(30).mean_degree() == 29.0);
  DynamicGraph one;
  one.add_node();
  CHECK(one.mean_degree() == 0.0);
  CHECK(DynamicGraph{}.mean_degree() == 0.0);  // empty graph: defined as 0

  DynamicGraph path;
  const NodeId a = path.add_node(), b = path.add_node(), c = path.add_node();
  path.add_edge(a, b);
  path.add_edge(b, c);
  CHECK(path.mean_degree() == doctest::Approx(4.0 / 3.0));

  CHECK(DynamicGraph::complete(4).degree_histogram() == std::map<std::size_t, std::size_t>{{3, 4}});
  CHECK(star(4).degree_histogram() == std::map<std::size_t, std::size_t>{{1, 4}, {4, 1}});
  CHECK(DynamicGraph{}.degree_histogram().empty());
}

TEST_CASE("random operation sequences keep the graph consistent") {
  for (std::uint64_t trial = 0; trial < 40; ++trial) {
    Rng rng(1000 + trial);
    DynamicGraph g;
    ModelGraph model;
    for (int step = 0; step < 400; ++step) {
      const double u = rng.uniform();
      if (u < 0.35 || g.node_count() < 2) {
        model.nodes.insert(g.add_node().value);
      } else if (u < 0.75) {
        const auto ids = g.nodes();
        const NodeId a = ids[rng.below(ids.size())], b = ids[rng.below(ids.size())];
        if (a == b) {
          CHECK_THROWS_AS(g.add_edge(a, b), GraphError);
        } else {
          const bool fresh = !model.edges.count(std::minmax(a.value, b.value));
          CHECK(g.add_edge(a, b) == fresh);
          model.add_edge(a.value, b.value);
        }
      } else {
        const auto ids = g.nodes();
        const NodeId v = ids[rng.below(ids.size())];
        const std::size_t expected = model.remove(v.value);
        const std::size_t sum = g.degree_sum();
        CHECK(g.remove_node(v) == expected);
        CHECK(g.degree_sum() == sum - 2 * expected);
      }
    }
    check_against(g, model);
  }
}

TEST_CASE("add then remove an isolated node restores the edge set") {
  Rng rng(3);
  auto g = DynamicGraph::complete(6);
  g.remove_node(g.nodes()[2]);
  auto edges = [](const DynamicGraph& h) {
    std::set<std::pair<std::uint64_t, std::uint64_t>> out;
    for (NodeId v : h.nodes())
      for (NodeId w : h.neighbors(v)) out.insert(std::minmax(v.value, w.value));
    return out;
  };
  const auto before = edges(g);
  const NodeId v = g.add_node();
  g.remove_node(v);
  CHECK(edges(g) == before);
}

TEST_CASE("sample_targets exhaustion and basic contract") {
  Rng rng(11);
  DynamicGraph g;
  std::vector<NodeId> ids;
  for (int i = 0; i < 3; ++i) ids.push_back(g.add_node());
  for (auto mech : {Mechanism::uniform, Mechanism::preferential}) {
    auto got = g.sample_targets(mech, 5, {}, rng);
    std::sort(got.begin(), got.end());
    CHECK(got == ids);
  }
  CHECK(g.sample_targets(Mechanism::uniform, 2, NodeSet(ids.begin(), ids.end()), rng).empty());
  CHECK(DynamicGraph{}.sample_targets(Mechanism::preferential, 3, {}, rng).empty());
}

TEST_CASE("sample_targets never repeats or returns excluded nodes") {
  Rng rng(12);
  for (int trial = 0; trial < 300; ++trial) {
    DynamicGraph g;
    const std::size_t n = 1 + rng.below(40);
    for (std::size_t i = 0; i < n; ++i) g.add_node();
    const auto ids = g.nodes();
    for (std::size_t e = 0; e < 2 * n; ++e) {
      const NodeId a = ids[rng.below(n)], b = ids[rng.below(n)];
      if (a != b) g.add_edge(a, b);
    }
    NodeSet exclude;
    for (NodeId v : ids)
      if (rng.bernoulli(0.2)) exclude.insert(v);
    const std::size_t m = 1 + rng.below(12);
    const std::size_t candidates = n - exclude.size();
    for (auto mech : {Mechanism::uniform, Mechanism::preferential}) {
      const auto got = g.sample_targets(mech, m, exclude, rng);
      CHECK(got.size() == std::min(m, candidates));
      CHECK(std::set<NodeId>(got.begin(), got.end()).size() == got.size());
      for (NodeId v : got) CHECK_FALSE(exclude.count(v));
    }
  }
}

TEST_CASE("uniform sampling is uniform") {
  Rng rng(21);
  DynamicGraph two;
  const NodeId a = two.add_node();
  two.add_node();
  std::size_t hits = 0;
  for (int i = 0; i < 100000; ++i) hits += two.sample_targets(Mechanism::uniform, 1, {}, rng)[0] == a;
  CHECK(static_cast<double>(hits) / 1e5 == doctest::Approx(0.5).epsilon(0.02));

  // 10 candidates among 12 nodes, one draw each
  auto g = DynamicGraph::complete(12);
  const auto ids = g.nodes();
  NodeSet exclude{ids[0], ids[5]};
  std::map<NodeId, std::size_t> pos;
  std::size_t k = 0;
  for (NodeId v : ids)
    if (!exclude.count(v)) pos[v] = k++;
  std::vector<std::size_t> counts(10, 0);
  for (int i = 0; i < 100000; ++i) ++counts[pos.at(g.sample_targets(Mechanism::uniform, 1, exclude, rng)[0])];
  CHECK(testing::chi_square(counts, std::vector<double>(10, 0.1)) < testing::chi2_crit_001(9));

  // Inclusion probability is m / candidates for multi-draws too.
  std::vector<std::size_t> incl(10, 0);
  for (int i = 0; i < 50000; ++i)
    for (NodeId v : g.sample_targets(Mechanism::uniform, 4, exclude, rng)) ++incl[pos.at(v)];
  for (auto c : incl) CHECK(static_cast<double>(c) / 50000.0 == doctest::Approx(0.4).epsilon(0.03));
}

TEST_CASE("preferential sampling follows degree") {
  Rng rng(31);
  // degrees {x:2, y:0} among candidates
  DynamicGraph g;
  const NodeId x = g.add_node(), y = g.add_node(), p = g.add_node(), q = g.add_node();
  g.add_edge(x, p);
  g.add_edge(x, q);
  for (int i = 0; i < 2000; ++i) CHECK(g.sample_targets(Mechanism::preferential, 1, {p, q}, rng)[0] == x);
  (void)y;

  // Fixed 5-node graph, degrees 4,2,2,1,1 (sum 10).
  DynamicGraph h;
  std::vector<NodeId> v;
  for (int i = 0; i < 5; ++i) v.push_back(h.add_node());
  h.add_edge(v[0], v[1]);
  h.add_edge(v[0], v[2]);
  h.add_edge(v[0], v[3]);
  h.add_edge(v[0], v[4]);
  h.add_edge(v[1], v[2]);
  std::vector<std::size_t> counts(5, 0);
  for (int i = 0; i < 100000; ++i) {
    const NodeId got = h.sample_targets(Mechanism::preferential, 1, {}, rng)[0];
    ++counts[static_cast<std::size_t>(std::find(v.begin(), v.end(), got) - v.begin())];
  }
  std::vector<double> p_expected;
  for (NodeId u : v) p_expected.push_back(static_cast<double>(h.degree(u)) / 10.0);
  CHECK(testing::chi_square(counts, p_expected) < testing::chi2_crit_001(4));
}

TEST_CASE("preferential falls back to uniform when weights run out") {
  Rng rng(41);
  DynamicGraph g;
  std::vector<NodeId> v;
  for (int i = 0; i < 6; ++i) v.push_back(g.add_node());
  g.add_edge(v[0], v[1]);
  // candidates: v0 (deg 1) and isolated v2..v5; m=3 takes v0 first then two isolated
  std::vector<std::size_t> counts(6, 0);
  for (int i = 0; i < 20000; ++i) {
    const auto got = g.sample_targets(Mechanism::preferential, 3, {v[1]}, rng);
    REQUIRE(got.size() == 3);
    CHECK(std::find(got.begin(), got.end(), v[0]) != got.end());
    for (NodeId u : got) ++counts[u.value];
  }
  for (int i = 2; i < 6; ++i) CHECK(static_cast<double>(counts[i]) / 20000 == doctest::Approx(0.5).epsilon(0.04));

  // all isolated: plain uniform
  DynamicGraph iso;
  for (int i = 0; i < 5; ++i) iso.add_node();
  std::vector<std::size_t> c5(5, 0);
  for (int i = 0; i < 50000; ++i) ++c5[iso.sample_targets(Mechanism::preferential, 1, {}, rng)[0].value];
  CHECK(testing::chi_square(c5, std::vector<double>(5, 0.2)) < testing::chi2_crit_001(4));
}

TEST_CASE("preferential pairs match sequential draws without replacement") {
  Rng rng(51);
  DynamicGraph h;
  std::vector<NodeId> v;
  for (int i = 0; i < 5; ++i) v.push_back(h.add_node());
  h.add_edge(v[0], v[1]);
  h.add_edge(v[0], v[2]);
  h.add_edge(v[0], v[3]);
  h.add_edge(v[0], v[4]);
  h.add_edge(v[1], v[2]);
  const double w[5] = {4, 2, 2, 1, 1};
  std::vector<double> p;
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> index;
  for (std::size_t i = 0; i < 5; ++i)
    for (std::size_t j = i + 1; j < 5; ++j) {
      index[{i, j}] = p.size();
      p.push_back(w[i] / 10 * w[j] / (10 - w[i]) + w[j] / 10 * w[i] / (10 - w[j]));
    }
  std::vector<std::size_t> counts(p.size(), 0);
  for (int t = 0; t < 100000; ++t) {
    auto got = h.sample_targets(Mechanism::preferential, 2, {}, rng);
    auto a = got[0].value, b = got[1].value;
    ++counts[index.at(std::minmax<std::size_t>(a, b))];
  }
  CHECK(testing::chi_square(counts, p) < testing::chi2_crit_001(9));
}
