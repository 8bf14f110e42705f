#include "rso/operator_core.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>

#include "rso/errors.hpp"

namespace rso {

OperatorAssembly assemble(const GraphModel& g, const MarkovSpec& m, const PotentialSpec& pot,
                          const FieldSample& xi, std::int64_t radius) {
  if (radius < 0) throw DomainError("truncation radius must be non-negative");
  const VertexSet ball = g.ball(radius);
  std::vector<Vertex> kept;
  kept.reserve(ball.size());
  for (const auto& v : ball) {
    if (!pot.in_dirichlet(v)) kept.push_back(v);
  }
  if (kept.empty()) throw DegenerateError("no vertices left after removing the Dirichlet set");

  OperatorAssembly out;
  out.vertices = VertexSet(std::move(kept));
  out.radius = radius;
  const auto n = static_cast<Eigen::Index>(out.vertices.size());
  out.H = Matrix::Zero(n, n);
  out.omega0 = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < n; ++i) {
    const Vertex& u = out.vertices[static_cast<std::size_t>(i)];
    const double q = m.rate(u);
    if (!(q > 0.0)) throw ConfigError("invalid jump rate in assembly");
    const double local = pot.value(g, u) + xi.at(u);
    out.omega0 = std::min(out.omega0, local);
    out.H(i, i) = q + local;
    for (const auto& tr : m.kernel(g, u)) {
      const auto j = out.vertices.index_of(tr.to);
      if (j >= 0 && j != i) out.H(i, j) -= q * tr.probability;
    }
  }
  return out;
}

double trace_identity_residual(const Matrix& H, double t, std::optional<double> cluster_tol) {
  if (!(t > 0.0)) throw DomainError("trace identity needs t > 0");
  const double trace = matrix_exponential(H, t).trace();
  const auto spec = spectrum(H, cluster_tol);
  Complex sum = 0.0;
  for (const auto& c : spec.clusters) sum += double(c.multiplicity) * std::exp(-t * c.value);
  return std::abs(Complex(trace) - sum) / std::abs(trace);
}

double trace_identity_residual(const OperatorAssembly& assembly, double t,
                               std::optional<double> cluster_tol) {
  return trace_identity_residual(assembly.H, t, cluster_tol);
}

PushforwardReport multiplicity_pushforward(const Matrix& M, double t,
                                           std::optional<double> cluster_tol) {
  if (M.rows() > 50) throw ComplexityError("multiplicity pushforward is limited to dimension 50");
  PushforwardReport r;
  r.source = spectrum(M, cluster_tol);
  const Matrix E = matrix_exponential(M, t);
  r.image = spectrum(E, cluster_tol);
  const double tol = r.image.tolerance;

  r.clusters.resize(r.image.clusters.size());
  for (std::size_t k = 0; k < r.image.clusters.size(); ++k) {
    r.clusters[k].image = r.image.clusters[k].value;
    r.clusters[k].image_multiplicity = r.image.clusters[k].multiplicity;
  }
  for (const auto& src : r.source.clusters) {
    const Complex mapped = std::exp(-t * src.value);
    std::ptrdiff_t best = -1;
    double best_dist = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < r.image.clusters.size(); ++k) {
      const double dist = std::abs(mapped - r.image.clusters[k].value);
      if (dist < best_dist) {
        best_dist = dist;
        best = static_cast<std::ptrdiff_t>(k);
      }
    }
    // a cluster's spread can reach tol * (multiplicity - 1) under single linkage
    if (best < 0 || best_dist > tol * double(std::max(1, r.image.clusters[best].multiplicity))) {
      ++r.unmatched_preimages;
      continue;
    }
    auto& c = r.clusters[static_cast<std::size_t>(best)];
    c.summed_multiplicity += src.multiplicity;
    c.preimage_clusters += 1;
  }
  r.pass = r.unmatched_preimages == 0;
  for (auto& c : r.clusters) {
    c.aliased = c.preimage_clusters > 1;
    c.pass = c.summed_multiplicity == c.image_multiplicity;
    r.pass = r.pass && c.pass;
  }
  return r;
}

double omega0(const GraphModel& g, const PotentialSpec& pot, const FieldSample& xi,
              const VertexSet& region) {
  double best = std::numeric_limits<double>::infinity();
  bool any = false;
  for (const auto& v : region) {
    if (pot.in_dirichlet(v)) continue;
    best = std::min(best, pot.value(g, v) + xi.at(v));
    any = true;
  }
  if (!any) throw DegenerateError("omega0 over an empty region");
  return best;
}

void write_matrix(std::ostream& os, const Matrix& M) {
  if (M.rows() != M.cols()) throw InputError("matrix dump needs a square matrix");
  os << M.rows() << '\n';
  char buf[64];
  for (Eigen::Index i = 0; i < M.rows(); ++i) {
    for (Eigen::Index j = 0; j < M.cols(); ++j) {
      const auto res = std::to_chars(buf, buf + sizeof buf, M(i, j));
      if (j) os << ' ';
      os.write(buf, res.ptr - buf);
    }
    os << '\n';
  }
}

Matrix read_matrix(std::istream& is) {
  std::string token;
  if (!(is >> token)) throw InputError("matrix dump: missing dimension");
  long long n = 0;
  {
    const auto res = std::from_chars(token.data(), token.data() + token.size(), n);
    if (res.ec != std::errc{} || res.ptr != token.data() + token.size() || n < 0) {
      throw InputError("matrix dump: bad dimension '" + token + "'");
    }
  }
  Matrix M(n, n);
  for (long long i = 0; i < n; ++i) {
    for (long long j = 0; j < n; ++j) {
      if (!(is >> token)) throw InputError("matrix dump: truncated at row " + std::to_string(i));
      double x = 0.0;
      const auto res = std::from_chars(token.data(), token.data() + token.size(), x);
      if (res.ec != std::errc{} || res.ptr != token.data() + token.size()) {
        throw InputError("matrix dump: bad entry '" + token + "'");
      }
      M(i, j) = x;
    }
  }
  return M;
}

}  // namespace rso
