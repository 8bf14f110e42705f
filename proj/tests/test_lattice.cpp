#include <gtest/gtest.h>

#include <algorithm>
#include <cstdlib>
#include <queue>
#include <sstream>

#include "rso/errors.hpp"
#include "rso/lattice.hpp"

using namespace rso;

namespace {

// Brute-force count of lattice points at l1 / linf norm n.
std::uint64_t brute_sphere(int d, std::int64_t n, bool linf) {
  std::uint64_t count = 0;
  std::array<std::int64_t, kMaxDim> x{};
  for (int k = 0; k < d; ++k) x[k] = -n;
  for (;;) {
    std::int64_t norm = 0;
    for (int k = 0; k < d; ++k) {
      norm = linf ? std::max(norm, std::abs(x[k])) : norm + std::abs(x[k]);
    }
    if (norm == n) ++count;
    int k = 0;
    while (k < d && ++x[k] > n) x[k++] = -n;
    if (k == d) break;
  }
  return count;
}

std::vector<std::vector<std::int64_t>> floyd_warshall(std::size_t n,
                                                      const std::vector<std::pair<std::size_t, std::size_t>>& edges) {
  const std::int64_t inf = 1 << 20;
  std::vector<std::vector<std::int64_t>> d(n, std::vector<std::int64_t>(n, inf));
  for (std::size_t i = 0; i < n; ++i) d[i][i] = 0;
  for (auto [a, b] : edges) d[a][b] = d[b][a] = 1;
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);
  return d;
}

}  // namespace

TEST(Lattice, SphereCountMatchesEnumeration) {
  for (int d = 1; d <= 4; ++d) {
    const auto l1 = GraphModel::lattice_l1(d);
    const auto linf = GraphModel::lattice_linf(d);
    for (std::int64_t n = 0; n <= (d <= 2 ? 9 : 4); ++n) {
      EXPECT_EQ(l1.sphere_count(l1.root(), n), brute_sphere(d, n, false)) << "d=" << d << " n=" << n;
      EXPECT_EQ(linf.sphere_count(linf.root(), n), brute_sphere(d, n, true)) << "d=" << d << " n=" << n;
      EXPECT_DOUBLE_EQ(l1.sphere_count_real(n), double(brute_sphere(d, n, false)));
      EXPECT_DOUBLE_EQ(linf.sphere_count_real(n), double(brute_sphere(d, n, true)));
      EXPECT_EQ(l1.sphere(l1.root(), n).size(), brute_sphere(d, n, false));
    }
  }
}

TEST(Lattice, CoordinationConstants) {
  EXPECT_DOUBLE_EQ(GraphModel::lattice_l1(1).coord_constant(), 2.0);
  EXPECT_DOUBLE_EQ(GraphModel::lattice_l1(2).coord_constant(), 4.0);
  EXPECT_DOUBLE_EQ(GraphModel::lattice_linf(2).coord_constant(), 8.0);
  const auto g = GraphModel::lattice_l1(3);
  for (std::int64_t n = 1; n <= 200; ++n) {
    EXPECT_LE(g.sphere_count_real(n), g.coord_constant() * double(n * n) * (1 + 1e-12));
  }
}

TEST(Lattice, NeighboursAndDistance) {
  const auto g = GraphModel::lattice_l1(2);
  const auto v = Vertex::coords({3, -2});
  EXPECT_EQ(g.degree(v), 4u);
  for (const auto& w : g.neighbors(v)) {
    EXPECT_TRUE(g.adjacent(v, w));
    EXPECT_EQ(g.distance(v, w), 1);
  }
  EXPECT_EQ(g.distance(v, Vertex::coords({0, 0})), 5);
  const auto h = GraphModel::lattice_linf(2);
  EXPECT_EQ(h.degree(v), 8u);
  EXPECT_EQ(h.distance(v, Vertex::coords({0, 0})), 3);
}

TEST(Lattice, BallIsLexicographicAndComplete) {
  const auto g = GraphModel::lattice_l1(2);
  const auto ball = g.ball(3);
  EXPECT_EQ(ball.size(), 25u);
  EXPECT_TRUE(std::is_sorted(ball.begin(), ball.end()));
  for (std::size_t i = 0; i < ball.size(); ++i) {
    EXPECT_LE(g.depth(ball[i]), 3);
    EXPECT_EQ(ball.index_of(ball[i]), std::ptrdiff_t(i));
  }
  EXPECT_EQ(ball.index_of(Vertex::coords({4, 0})), -1);
}

TEST(ExplicitGraph, BfsMatchesFloydWarshall) {
  const std::vector<std::pair<std::size_t, std::size_t>> edges = {
      {0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 0}, {2, 5}, {5, 6}, {6, 7}, {1, 7}};
  const auto g = GraphModel::explicit_graph(8, 0, edges);
  const auto d = floyd_warshall(8, edges);
  for (std::size_t i = 0; i < 8; ++i) {
    for (std::size_t j = 0; j < 8; ++j) {
      EXPECT_EQ(g.distance(Vertex::index(std::int64_t(i)), Vertex::index(std::int64_t(j))), d[i][j]);
    }
  }
  std::int64_t ecc = 0;
  for (std::size_t j = 0; j < 8; ++j) ecc = std::max(ecc, d[0][j]);
  EXPECT_EQ(g.root_eccentricity(), ecc);
  std::uint64_t total = 0;
  for (std::int64_t n = 0; n <= ecc; ++n) total += g.sphere_count(g.root(), n);
  EXPECT_EQ(total, 8u);
  const auto ball = g.ball(1);
  EXPECT_TRUE(std::is_sorted(ball.begin(), ball.end()));
  EXPECT_EQ(ball.size(), 3u);
}

TEST(ExplicitGraph, ParseEdgeList) {
  std::istringstream in("# triangle plus tail\n4 0\n0 1\n1 2\n2 0\n2 3\n");
  const auto g = GraphModel::parse_edge_list(in);
  EXPECT_EQ(g.order(), 4u);
  EXPECT_EQ(g.degree(Vertex::index(2)), 3u);
  EXPECT_EQ(g.depth(Vertex::index(3)), 2);
}

TEST(ExplicitGraph, RejectsBadInput) {
  std::istringstream self_loop("2 0\n0 0\n");
  EXPECT_THROW(GraphModel::parse_edge_list(self_loop), Error);
  std::istringstream range("2 0\n0 5\n");
  EXPECT_THROW(GraphModel::parse_edge_list(range), Error);
  const auto g = GraphModel::explicit_graph(3, 0, {{0, 1}});
  EXPECT_THROW(g.distance(Vertex::index(0), Vertex::index(2)), InputError);
  EXPECT_THROW(g.distance(Vertex::index(0), Vertex::index(9)), InputError);
}
