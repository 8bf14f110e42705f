#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace rso {

inline constexpr int kMaxDim = 4;

/// Integer coordinate tuple (lattice kinds) or a vertex index stored in
/// coordinate 0 (explicit graphs). Unused coordinates are zero.
struct Vertex {
  std::array<std::int64_t, kMaxDim> c{};

  static Vertex index(std::int64_t i) {
    Vertex v;
    v.c[0] = i;
    return v;
  }
  static Vertex coords(std::initializer_list<std::int64_t> xs);

  friend bool operator==(const Vertex&, const Vertex&) = default;
  friend auto operator<=>(const Vertex&, const Vertex&) = default;
};

std::ostream& operator<<(std::ostream& os, const Vertex& v);

struct VertexHash {
  std::size_t operator()(const Vertex& v) const noexcept {
    std::uint64_t h = 0x84222325cbf29ce4ULL;
    for (auto x : v.c) {
      h ^= static_cast<std::uint64_t>(x) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    return static_cast<std::size_t>(h);
  }
};

/// Ordered vertex list with its inverse index map.
class VertexSet {
 public:
  VertexSet() = default;
  explicit VertexSet(std::vector<Vertex> vertices);

  const std::vector<Vertex>& vertices() const noexcept { return vertices_; }
  std::size_t size() const noexcept { return vertices_.size(); }
  bool empty() const noexcept { return vertices_.empty(); }
  const Vertex& operator[](std::size_t i) const { return vertices_[i]; }
  bool contains(const Vertex& v) const { return index_.count(v) != 0; }
  /// Index of v, or -1 if absent.
  std::ptrdiff_t index_of(const Vertex& v) const;

  auto begin() const noexcept { return vertices_.begin(); }
  auto end() const noexcept { return vertices_.end(); }

 private:
  std::vector<Vertex> vertices_;
  std::unordered_map<Vertex, std::size_t, VertexHash> index_;
};

enum class GraphKind { ZdL1, ZdLinf, Explicit };

/// Graph geometry. Immutable after construction.
///
/// Lattice kinds are infinite and handled in closed form; explicit graphs
/// are finite adjacency lists with a designated root. `dim` is the growth
/// dimension d and `coord_constant` the constant in c_n(v) <= c * n^(d-1).
class GraphModel {
 public:
  static GraphModel lattice_l1(int d);
  static GraphModel lattice_linf(int d);
  /// Edges are symmetrised; self-loops and out-of-range indices throw.
  /// A `degree_bound` of 0 means "use the maximum degree"; a
  /// `coord_constant` of 0 means "the smallest valid constant".
  static GraphModel explicit_graph(std::size_t n_vertices, std::size_t root,
                                   const std::vector<std::pair<std::size_t, std::size_t>>& edges,
                                   int growth_dim = 1, int degree_bound = 0,
                                   double coord_constant = 0.0);
  /// Plain-text edge list: "n_vertices root_index" then "u v" per line.
  static GraphModel load_edge_list(const std::string& path);
  static GraphModel parse_edge_list(std::istream& in, const std::string& source = "<stream>");

  GraphKind kind() const noexcept { return kind_; }
  int dim() const noexcept { return dim_; }
  const Vertex& root() const noexcept { return root_; }
  double coord_constant() const noexcept { return coord_constant_; }
  int degree_bound() const noexcept { return degree_bound_; }
  bool is_lattice() const noexcept { return kind_ != GraphKind::Explicit; }
  /// Number of vertices of an explicit graph; 0 for lattices.
  std::size_t order() const noexcept { return adjacency_.size(); }

  bool contains(const Vertex& v) const noexcept;
  void require(const Vertex& v) const;

  std::size_t degree(const Vertex& v) const;
  /// k-th neighbour of v, 0 <= k < degree(v). Lattice neighbour order is
  /// lexicographic in the offset.
  Vertex neighbor(const Vertex& v, std::size_t k) const;
  std::vector<Vertex> neighbors(const Vertex& v) const;
  bool adjacent(const Vertex& u, const Vertex& v) const;

  /// Graph distance; throws InputError for foreign vertices or "no path".
  std::int64_t distance(const Vertex& u, const Vertex& v) const;
  /// distance(root, v), with a cached BFS for explicit graphs.
  std::int64_t depth(const Vertex& v) const;

  std::vector<Vertex> sphere(const Vertex& center, std::int64_t n) const;
  VertexSet ball(const Vertex& center, std::int64_t n) const;
  VertexSet ball(std::int64_t n) const { return ball(root_, n); }

  /// c_n(center): closed form on lattices, BFS on explicit graphs.
  std::uint64_t sphere_count(const Vertex& center, std::int64_t n) const;
  /// c_n(root) as a real, usable for n far beyond enumerable radii.
  double sphere_count_real(std::int64_t n) const;
  /// Largest distance from the root (explicit graphs); -1 on lattices.
  std::int64_t root_eccentricity() const noexcept { return eccentricity_; }

 private:
  GraphModel() = default;
  std::vector<std::int64_t> bfs(std::size_t source) const;

  GraphKind kind_ = GraphKind::ZdL1;
  int dim_ = 1;
  Vertex root_{};
  double coord_constant_ = 2.0;
  int degree_bound_ = 2;
  std::vector<std::array<std::int64_t, kMaxDim>> offsets_;
  std::vector<std::vector<std::size_t>> adjacency_;
  std::vector<std::int64_t> root_depth_;
  std::int64_t eccentricity_ = -1;
};

}  // namespace rso
