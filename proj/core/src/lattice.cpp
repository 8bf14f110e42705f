#include "rso/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <set>
#include <sstream>

#include "rso/errors.hpp"

namespace rso {

Vertex Vertex::coords(std::initializer_list<std::int64_t> xs) {
  if (xs.size() > static_cast<std::size_t>(kMaxDim)) {
    throw InputError("vertex arity exceeds kMaxDim");
  }
  Vertex v;
  std::copy(xs.begin(), xs.end(), v.c.begin());
  return v;
}

std::ostream& operator<<(std::ostream& os, const Vertex& v) {
  os << '(';
  for (int i = 0; i < kMaxDim; ++i) {
    if (i) os << ',';
    os << v.c[i];
  }
  return os << ')';
}

VertexSet::VertexSet(std::vector<Vertex> vertices) : vertices_(std::move(vertices)) {
  index_.reserve(vertices_.size());
  for (std::size_t i = 0; i < vertices_.size(); ++i) {
    if (!index_.emplace(vertices_[i], i).second) {
      throw InputError("duplicate vertex in vertex set");
    }
  }
}

std::ptrdiff_t VertexSet::index_of(const Vertex& v) const {
  auto it = index_.find(v);
  return it == index_.end() ? -1 : static_cast<std::ptrdiff_t>(it->second);
}

namespace {

double binomial(std::int64_t n, std::int64_t k) {
  if (k < 0 || k > n) return 0.0;
  return std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0));
}

// c_n for the l1 lattice: sum_k 2^k C(d,k) C(n-1,k-1).
std::uint64_t l1_sphere_count(int d, std::int64_t n) {
  if (n == 0) return 1;
  std::uint64_t total = 0;
  for (int k = 1; k <= d && k <= n; ++k) {
    // exact integer binomials; arguments stay small for enumerable n
    std::uint64_t cdk = 1;
    for (int i = 0; i < k; ++i) cdk = cdk * (d - i) / (i + 1);
    std::uint64_t cnk = 1;
    for (int i = 0; i < k - 1; ++i) cnk = cnk * static_cast<std::uint64_t>(n - 1 - i) / (i + 1);
    total += (std::uint64_t{1} << k) * cdk * cnk;
  }
  return total;
}

std::uint64_t ipow(std::uint64_t b, int e) {
  std::uint64_t r = 1;
  while (e-- > 0) r *= b;
  return r;
}

bool valid_lattice_vertex(const Vertex& v, int d) {
  for (int i = d; i < kMaxDim; ++i) {
    if (v.c[i] != 0) return false;
  }
  return true;
}

std::int64_t lattice_norm(GraphKind kind, const Vertex& a, const Vertex& b, int d) {
  std::int64_t acc = 0;
  for (int i = 0; i < d; ++i) {
    const std::int64_t diff = a.c[i] > b.c[i] ? a.c[i] - b.c[i] : b.c[i] - a.c[i];
    acc = kind == GraphKind::ZdL1 ? acc + diff : std::max(acc, diff);
  }
  return acc;
}

// Visit the box center + [-n,n]^d lexicographically.
template <class F>
void for_each_in_box(const Vertex& center, int d, std::int64_t n, F&& f) {
  std::array<std::int64_t, kMaxDim> off{};
  for (int i = 0; i < d; ++i) off[i] = -n;
  while (true) {
    Vertex v = center;
    for (int i = 0; i < d; ++i) v.c[i] += off[i];
    f(v);
    int i = d - 1;
    while (i >= 0 && off[i] == n) {
      off[i] = -n;
      --i;
    }
    if (i < 0) break;
    ++off[i];
  }
}

}  // namespace

GraphModel GraphModel::lattice_l1(int d) {
  if (d < 1 || d > kMaxDim) throw InputError("lattice dimension must be in [1, kMaxDim]");
  GraphModel g;
  g.kind_ = GraphKind::ZdL1;
  g.dim_ = d;
  for (int i = 0; i < d; ++i) {
    for (int s : {-1, 1}) {
      std::array<std::int64_t, kMaxDim> o{};
      o[i] = s;
      g.offsets_.push_back(o);
    }
  }
  std::sort(g.offsets_.begin(), g.offsets_.end());
  g.degree_bound_ = 2 * d;
  double c = 0.0;
  for (std::int64_t n = 1; n <= 256; ++n) {
    c = std::max(c, static_cast<double>(l1_sphere_count(d, n)) / std::pow(double(n), d - 1));
  }
  g.coord_constant_ = c;
  return g;
}

GraphModel GraphModel::lattice_linf(int d) {
  if (d < 1 || d > kMaxDim) throw InputError("lattice dimension must be in [1, kMaxDim]");
  GraphModel g;
  g.kind_ = GraphKind::ZdLinf;
  g.dim_ = d;
  Vertex zero{};
  for_each_in_box(zero, d, 1, [&](const Vertex& v) {
    if (v != zero) g.offsets_.push_back(v.c);
  });
  g.degree_bound_ = static_cast<int>(ipow(3, d) - 1);
  double c = 0.0;
  for (std::int64_t n = 1; n <= 256; ++n) {
    const double cn = double(ipow(2 * n + 1, d) - ipow(2 * n - 1, d));
    c = std::max(c, cn / std::pow(double(n), d - 1));
  }
  g.coord_constant_ = c;
  return g;
}

GraphModel GraphModel::explicit_graph(std::size_t n_vertices, std::size_t root,
                                      const std::vector<std::pair<std::size_t, std::size_t>>& edges,
                                      int growth_dim, int degree_bound, double coord_constant) {
  if (n_vertices == 0) throw InputError("explicit graph needs at least one vertex");
  if (root >= n_vertices) throw InputError("root index out of range");
  if (growth_dim < 1) throw InputError("growth dimension must be positive");
  GraphModel g;
  g.kind_ = GraphKind::Explicit;
  g.dim_ = growth_dim;
  g.root_ = Vertex::index(static_cast<std::int64_t>(root));
  std::vector<std::set<std::size_t>> adj(n_vertices);
  for (const auto& [u, v] : edges) {
    if (u >= n_vertices || v >= n_vertices) {
      throw InputError("edge (" + std::to_string(u) + "," + std::to_string(v) + ") out of range");
    }
    if (u == v) throw InputError("self-loop at vertex " + std::to_string(u));
    adj[u].insert(v);
    adj[v].insert(u);
  }
  g.adjacency_.resize(n_vertices);
  int max_degree = 0;
  for (std::size_t i = 0; i < n_vertices; ++i) {
    g.adjacency_[i].assign(adj[i].begin(), adj[i].end());
    max_degree = std::max(max_degree, static_cast<int>(adj[i].size()));
  }
  if (degree_bound == 0) degree_bound = max_degree;
  if (max_degree > degree_bound) {
    throw InputError("maximum degree " + std::to_string(max_degree) + " exceeds declared bound " +
                     std::to_string(degree_bound));
  }
  g.degree_bound_ = degree_bound;

  g.root_depth_ = g.bfs(root);
  g.eccentricity_ = 0;
  for (auto depth : g.root_depth_) g.eccentricity_ = std::max(g.eccentricity_, depth);

  double smallest = 0.0;
  for (std::size_t s = 0; s < n_vertices; ++s) {
    const auto dist = g.bfs(s);
    std::unordered_map<std::int64_t, std::uint64_t> counts;
    for (auto x : dist) {
      if (x > 0) ++counts[x];
    }
    for (const auto& [n, count] : counts) {
      smallest = std::max(smallest, double(count) / std::pow(double(n), growth_dim - 1));
    }
  }
  if (coord_constant == 0.0) coord_constant = std::max(smallest, 1.0);
  if (coord_constant < smallest) {
    throw InputError("declared coordination constant is below the observed growth");
  }
  g.coord_constant_ = coord_constant;
  return g;
}

GraphModel GraphModel::parse_edge_list(std::istream& in, const std::string& source) {
  std::string line;
  std::size_t lineno = 0;
  std::size_t n = 0;
  std::size_t root = 0;
  bool header = false;
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    long long a = 0;
    long long b = 0;
    if (!(ls >> a)) continue;  // blank
    std::string rest;
    if (!(ls >> b) || (ls >> rest) || a < 0 || b < 0) {
      throw InputError(source + ":" + std::to_string(lineno) +
                       ": expected two non-negative integers");
    }
    if (!header) {
      n = static_cast<std::size_t>(a);
      root = static_cast<std::size_t>(b);
      header = true;
    } else {
      edges.emplace_back(static_cast<std::size_t>(a), static_cast<std::size_t>(b));
    }
  }
  if (!header) throw InputError(source + ": missing header line 'n_vertices root_index'");
  return explicit_graph(n, root, edges);
}

GraphModel GraphModel::load_edge_list(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open edge list '" + path + "'");
  return parse_edge_list(in, path);
}

std::vector<std::int64_t> GraphModel::bfs(std::size_t source) const {
  std::vector<std::int64_t> dist(adjacency_.size(), -1);
  std::deque<std::size_t> queue{source};
  dist[source] = 0;
  while (!queue.empty()) {
    const auto u = queue.front();
    queue.pop_front();
    for (auto w : adjacency_[u]) {
      if (dist[w] < 0) {
        dist[w] = dist[u] + 1;
        queue.push_back(w);
      }
    }
  }
  return dist;
}

bool GraphModel::contains(const Vertex& v) const noexcept {
  if (is_lattice()) return valid_lattice_vertex(v, dim_);
  for (int i = 1; i < kMaxDim; ++i) {
    if (v.c[i] != 0) return false;
  }
  return v.c[0] >= 0 && static_cast<std::size_t>(v.c[0]) < adjacency_.size();
}

void GraphModel::require(const Vertex& v) const {
  if (!contains(v)) {
    std::ostringstream os;
    os << "vertex " << v << " is not in the graph";
    throw InputError(os.str());
  }
}

std::size_t GraphModel::degree(const Vertex& v) const {
  if (is_lattice()) return offsets_.size();
  require(v);
  return adjacency_[static_cast<std::size_t>(v.c[0])].size();
}

Vertex GraphModel::neighbor(const Vertex& v, std::size_t k) const {
  if (is_lattice()) {
    Vertex w = v;
    const auto& o = offsets_[k];
    for (int i = 0; i < dim_; ++i) w.c[i] += o[i];
    return w;
  }
  return Vertex::index(static_cast<std::int64_t>(adjacency_[static_cast<std::size_t>(v.c[0])][k]));
}

std::vector<Vertex> GraphModel::neighbors(const Vertex& v) const {
  std::vector<Vertex> out;
  const auto deg = degree(v);
  out.reserve(deg);
  for (std::size_t k = 0; k < deg; ++k) out.push_back(neighbor(v, k));
  return out;
}

bool GraphModel::adjacent(const Vertex& u, const Vertex& v) const {
  if (is_lattice()) return contains(u) && contains(v) && lattice_norm(kind_, u, v, dim_) == 1;
  require(u);
  require(v);
  const auto& a = adjacency_[static_cast<std::size_t>(u.c[0])];
  return std::binary_search(a.begin(), a.end(), static_cast<std::size_t>(v.c[0]));
}

std::int64_t GraphModel::distance(const Vertex& u, const Vertex& v) const {
  require(u);
  require(v);
  if (is_lattice()) return lattice_norm(kind_, u, v, dim_);
  if (u == root_) return depth(v);
  if (v == root_) return depth(u);
  const auto d = bfs(static_cast<std::size_t>(u.c[0]))[static_cast<std::size_t>(v.c[0])];
  if (d < 0) throw InputError("no path between vertices");
  return d;
}

std::int64_t GraphModel::depth(const Vertex& v) const {
  if (is_lattice()) {
    std::int64_t acc = 0;
    for (int i = 0; i < dim_; ++i) {
      const auto a = v.c[i] < 0 ? -v.c[i] : v.c[i];
      acc = kind_ == GraphKind::ZdL1 ? acc + a : std::max(acc, a);
    }
    return acc;
  }
  require(v);
  const auto d = root_depth_[static_cast<std::size_t>(v.c[0])];
  if (d < 0) throw InputError("no path between vertices");
  return d;
}

std::vector<Vertex> GraphModel::sphere(const Vertex& center, std::int64_t n) const {
  if (n < 0) throw DomainError("sphere radius must be non-negative");
  require(center);
  std::vector<Vertex> out;
  if (is_lattice()) {
    for_each_in_box(center, dim_, n, [&](const Vertex& v) {
      if (lattice_norm(kind_, center, v, dim_) == n) out.push_back(v);
    });
    return out;
  }
  const auto dist = bfs(static_cast<std::size_t>(center.c[0]));
  for (std::size_t i = 0; i < dist.size(); ++i) {
    if (dist[i] == n) out.push_back(Vertex::index(static_cast<std::int64_t>(i)));
  }
  return out;
}

VertexSet GraphModel::ball(const Vertex& center, std::int64_t n) const {
  if (n < 0) throw DomainError("ball radius must be non-negative");
  require(center);
  std::vector<Vertex> out;
  if (is_lattice()) {
    for_each_in_box(center, dim_, n, [&](const Vertex& v) {
      if (lattice_norm(kind_, center, v, dim_) <= n) out.push_back(v);
    });
    return VertexSet(std::move(out));
  }
  const auto dist = bfs(static_cast<std::size_t>(center.c[0]));
  for (std::size_t i = 0; i < dist.size(); ++i) {
    if (dist[i] >= 0 && dist[i] <= n) out.push_back(Vertex::index(static_cast<std::int64_t>(i)));
  }
  return VertexSet(std::move(out));
}

std::uint64_t GraphModel::sphere_count(const Vertex& center, std::int64_t n) const {
  if (n < 0) throw DomainError("sphere radius must be non-negative");
  require(center);
  switch (kind_) {
    case GraphKind::ZdL1:
      return l1_sphere_count(dim_, n);
    case GraphKind::ZdLinf:
      return n == 0 ? 1 : ipow(2 * n + 1, dim_) - ipow(2 * n - 1, dim_);
    case GraphKind::Explicit:
      break;
  }
  const auto dist = center == root_ ? root_depth_ : bfs(static_cast<std::size_t>(center.c[0]));
  return static_cast<std::uint64_t>(std::count(dist.begin(), dist.end(), n));
}

double GraphModel::sphere_count_real(std::int64_t n) const {
  if (n < 0) return 0.0;
  if (n == 0) return 1.0;
  switch (kind_) {
    case GraphKind::ZdL1: {
      if (dim_ == 1) return 2.0;
      if (dim_ == 2) return 4.0 * double(n);
      double total = 0.0;
      for (int k = 1; k <= dim_ && k <= n; ++k) {
        total += std::ldexp(1.0, k) * binomial(dim_, k) * binomial(n - 1, k - 1);
      }
      return total;
    }
    case GraphKind::ZdLinf:
      return std::pow(2.0 * double(n) + 1.0, dim_) - std::pow(2.0 * double(n) - 1.0, dim_);
    case GraphKind::Explicit:
      break;
  }
  return static_cast<double>(std::count(root_depth_.begin(), root_depth_.end(), n));
}

}  // namespace rso
