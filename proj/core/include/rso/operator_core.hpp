#pragma once

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "rso/ctmc_walker.hpp"
#include "rso/lattice.hpp"
#include "rso/noise_field.hpp"
#include "rso/potential.hpp"

namespace rso {

using Matrix = Eigen::MatrixXd;
using Complex = std::complex<double>;

/// Dirichlet truncation of H = -H_X + V + xi to ball(root, radius) minus
/// the Dirichlet set. Row i corresponds to vertices[i].
struct OperatorAssembly {
  VertexSet vertices;
  Matrix H;
  std::int64_t radius = 0;
  double omega0 = 0.0;  ///< min of V + xi over the included vertices

  std::size_t dimension() const noexcept { return vertices.size(); }
};

/// Throws InputError if xi misses an included vertex and DegenerateError
/// if nothing remains after removing the Dirichlet set.
OperatorAssembly assemble(const GraphModel& g, const MarkovSpec& m, const PotentialSpec& pot,
                          const FieldSample& xi, std::int64_t radius);

/// e^{A} by scaling and squaring with a diagonal Pade approximant of
/// degree 3, 5, 7, 9 or 13 selected from ||A||_1.
Matrix expm(const Matrix& A);
/// e^{-tM}.
Matrix matrix_exponential(const Matrix& M, double t);

// Spectrum ------------------------------------------------------------------

struct EigenCluster {
  Complex value;          ///< mean of the member eigenvalues
  int multiplicity = 0;   ///< algebraic multiplicity (cluster size)
};

struct SpectrumResult {
  std::vector<EigenCluster> clusters;  ///< sorted by (real, imag)
  double tolerance = 0.0;

  int total_multiplicity() const;
};

/// All eigenvalues of a real square matrix: balancing, Householder
/// reduction to Hessenberg form, then Francis double-shift QR. Sorted by
/// (real, imag). Throws NumericalError with the stuck index on
/// non-convergence.
std::vector<Complex> eigenvalues(const Matrix& M);

/// Default merge tolerance 1e-6 * (1 + max |lambda|).
double default_cluster_tolerance(const std::vector<Complex>& eigs);

/// Single-linkage clustering: eigenvalues closer than `tol` share a cluster.
SpectrumResult cluster_eigenvalues(const std::vector<Complex>& eigs, double tol);

SpectrumResult spectrum(const Matrix& M, std::optional<double> cluster_tol = std::nullopt);

/// |Tr e^{-tH} - sum m_a e^{-t lambda}| / |Tr e^{-tH}|.
double trace_identity_residual(const Matrix& H, double t,
                               std::optional<double> cluster_tol = std::nullopt);
double trace_identity_residual(const OperatorAssembly& assembly, double t,
                               std::optional<double> cluster_tol = std::nullopt);

struct PushforwardCluster {
  Complex image;             ///< eigenvalue cluster of e^{-tM}
  int image_multiplicity = 0;
  int summed_multiplicity = 0;  ///< sum of m_a(lambda, M) over matched preimages
  int preimage_clusters = 0;
  bool aliased = false;  ///< more than one distinct preimage cluster
  bool pass = false;
};

struct PushforwardReport {
  SpectrumResult source;
  SpectrumResult image;
  std::vector<PushforwardCluster> clusters;
  int unmatched_preimages = 0;
  bool pass = false;
};

/// Checks m_a(mu, e^{-tM}) = sum over e^{-t lambda} = mu of m_a(lambda, M).
PushforwardReport multiplicity_pushforward(const Matrix& M, double t,
                                           std::optional<double> cluster_tol = std::nullopt);

/// min of V + xi over `region` minus the Dirichlet set.
double omega0(const GraphModel& g, const PotentialSpec& pot, const FieldSample& xi,
              const VertexSet& region);

// Matrix dump ---------------------------------------------------------------

/// "n" then n rows of n space-separated shortest round-trip decimals.
void write_matrix(std::ostream& os, const Matrix& M);
Matrix read_matrix(std::istream& is);

}  // namespace rso
