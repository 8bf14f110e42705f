#include <algorithm>
#include <cmath>
#include <numeric>

#include "rso/errors.hpp"
#include "rso/operator_core.hpp"

namespace rso {

namespace {

// Parlett-Reinsch balancing by powers of two; preserves eigenvalues exactly.
void balance(Matrix& a) {
  constexpr double kRadix = 2.0;
  constexpr double kSqrdx = kRadix * kRadix;
  const auto n = a.rows();
  bool done = false;
  while (!done) {
    done = true;
    for (Eigen::Index i = 0; i < n; ++i) {
      double r = 0.0;
      double c = 0.0;
      for (Eigen::Index j = 0; j < n; ++j) {
        if (j != i) {
          c += std::abs(a(j, i));
          r += std::abs(a(i, j));
        }
      }
      if (c == 0.0 || r == 0.0) continue;
      double g = r / kRadix;
      double f = 1.0;
      const double s = c + r;
      while (c < g) {
        f *= kRadix;
        c *= kSqrdx;
      }
      g = r * kRadix;
      while (c > g) {
        f /= kRadix;
        c /= kSqrdx;
      }
      if ((c + r) / f < 0.95 * s) {
        done = false;
        a.row(i) *= 1.0 / f;
        a.col(i) *= f;
      }
    }
  }
}

// Householder reduction to upper Hessenberg form.
void hessenberg(Matrix& a) {
  const auto n = a.rows();
  for (Eigen::Index k = 0; k + 2 < n; ++k) {
    const auto len = n - k - 1;
    Eigen::VectorXd v = a.col(k).tail(len);
    const double norm = v.norm();
    if (norm == 0.0) continue;
    const double alpha = v(0) > 0.0 ? -norm : norm;
    v(0) -= alpha;
    const double vnorm = v.norm();
    if (vnorm == 0.0) continue;
    v /= vnorm;
    // A <- P A P with P = I - 2 v v^T acting on rows/cols k+1..n-1
    a.bottomRightCorner(len, n - k) -= 2.0 * v * (v.transpose() * a.bottomRightCorner(len, n - k));
    a.rightCols(len) -= 2.0 * (a.rightCols(len) * v) * v.transpose();
    a(k + 1, k) = alpha;
    a.col(k).tail(len - 1).setZero();
  }
}

double sign_of(double a, double b) { return b >= 0.0 ? std::abs(a) : -std::abs(a); }

// Francis double-shift QR on an upper Hessenberg matrix (eigenvalues only).
void hessenberg_qr(Matrix& a, std::vector<double>& wr, std::vector<double>& wi) {
  constexpr int kMaxIterations = 100;
  const auto n = static_cast<int>(a.rows());
  wr.assign(n, 0.0);
  wi.assign(n, 0.0);
  double anorm = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = std::max(i - 1, 0); j < n; ++j) anorm += std::abs(a(i, j));
  }
  int nn = n - 1;
  double shift = 0.0;
  while (nn >= 0) {
    int its = 0;
    int l = 0;
    do {
      for (l = nn; l >= 1; --l) {
        double s = std::abs(a(l - 1, l - 1)) + std::abs(a(l, l));
        if (s == 0.0) s = anorm;
        if (std::abs(a(l, l - 1)) + s == s) {
          a(l, l - 1) = 0.0;
          break;
        }
      }
      double x = a(nn, nn);
      if (l == nn) {
        wr[nn] = x + shift;
        wi[nn--] = 0.0;
        continue;
      }
      double y = a(nn - 1, nn - 1);
      double w = a(nn, nn - 1) * a(nn - 1, nn);
      if (l == nn - 1) {
        const double p = 0.5 * (y - x);
        const double q = p * p + w;
        double z = std::sqrt(std::abs(q));
        x += shift;
        if (q >= 0.0) {
          z = p + sign_of(z, p);
          wr[nn - 1] = wr[nn] = x + z;
          if (z != 0.0) wr[nn] = x - w / z;
          wi[nn - 1] = wi[nn] = 0.0;
        } else {
          wr[nn - 1] = wr[nn] = x + p;
          wi[nn - 1] = -z;
          wi[nn] = z;
        }
        nn -= 2;
        continue;
      }
      if (its == kMaxIterations) {
        throw NumericalError("QR iteration did not converge at eigenvalue index " +
                                 std::to_string(nn),
                             nn);
      }
      if (its > 0 && its % 10 == 0) {
        // exceptional shift
        shift += x;
        for (int i = 0; i <= nn; ++i) a(i, i) -= x;
        const double s = std::abs(a(nn, nn - 1)) + std::abs(a(nn - 1, nn - 2));
        y = x = 0.75 * s;
        w = -0.4375 * s * s;
      }
      ++its;
      int m = nn - 2;
      double p = 0.0;
      double q = 0.0;
      double r = 0.0;
      double z = 0.0;
      for (; m >= l; --m) {
        z = a(m, m);
        r = x - z;
        const double s0 = y - z;
        p = (r * s0 - w) / a(m + 1, m) + a(m, m + 1);
        q = a(m + 1, m + 1) - z - r - s0;
        r = a(m + 2, m + 1);
        const double s = std::abs(p) + std::abs(q) + std::abs(r);
        p /= s;
        q /= s;
        r /= s;
        if (m == l) break;
        const double u = std::abs(a(m, m - 1)) * (std::abs(q) + std::abs(r));
        const double v = std::abs(p) * (std::abs(a(m - 1, m - 1)) + std::abs(z) + std::abs(a(m + 1, m + 1)));
        if (u + v == v) break;
      }
      for (int i = m + 2; i <= nn; ++i) {
        a(i, i - 2) = 0.0;
        if (i != m + 2) a(i, i - 3) = 0.0;
      }
      for (int k = m; k <= nn - 1; ++k) {
        if (k != m) {
          p = a(k, k - 1);
          q = a(k + 1, k - 1);
          r = 0.0;
          if (k != nn - 1) r = a(k + 2, k - 1);
          x = std::abs(p) + std::abs(q) + std::abs(r);
          if (x != 0.0) {
            p /= x;
            q /= x;
            r /= x;
          }
        }
        const double s = sign_of(std::sqrt(p * p + q * q + r * r), p);
        if (s == 0.0) continue;
        if (k == m) {
          if (l != m) a(k, k - 1) = -a(k, k - 1);
        } else {
          a(k, k - 1) = -s * x;
        }
        p += s;
        x = p / s;
        y = q / s;
        z = r / s;
        q /= p;
        r /= p;
        for (int j = k; j <= nn; ++j) {
          p = a(k, j) + q * a(k + 1, j);
          if (k != nn - 1) {
            p += r * a(k + 2, j);
            a(k + 2, j) -= p * z;
          }
          a(k + 1, j) -= p * y;
          a(k, j) -= p * x;
        }
        const int mmin = nn < k + 3 ? nn : k + 3;
        for (int i = l; i <= mmin; ++i) {
          p = x * a(i, k) + y * a(i, k + 1);
          if (k != nn - 1) {
            p += z * a(i, k + 2);
            a(i, k + 2) -= p * r;
          }
          a(i, k + 1) -= p * q;
          a(i, k) -= p;
        }
      }
    } while (l < nn - 1);
  }
}

bool complex_less(const Complex& a, const Complex& b) {
  if (a.real() != b.real()) return a.real() < b.real();
  return a.imag() < b.imag();
}

}  // namespace

int SpectrumResult::total_multiplicity() const {
  int s = 0;
  for (const auto& c : clusters) s += c.multiplicity;
  return s;
}

std::vector<Complex> eigenvalues(const Matrix& M) {
  if (M.rows() != M.cols()) throw InputError("eigenvalues need a square matrix");
  if (!M.allFinite()) throw NumericalError("eigenvalues of a non-finite matrix");
  Matrix a = M;
  balance(a);
  hessenberg(a);
  std::vector<double> wr;
  std::vector<double> wi;
  hessenberg_qr(a, wr, wi);
  std::vector<Complex> out(wr.size());
  for (std::size_t i = 0; i < wr.size(); ++i) out[i] = {wr[i], wi[i]};
  std::sort(out.begin(), out.end(), complex_less);
  return out;
}

double default_cluster_tolerance(const std::vector<Complex>& eigs) {
  double radius = 0.0;
  for (const auto& z : eigs) radius = std::max(radius, std::abs(z));
  return 1e-6 * (1.0 + radius);
}

SpectrumResult cluster_eigenvalues(const std::vector<Complex>& eigs, double tol) {
  const auto n = eigs.size();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  // eigs are not assumed sorted; sort indices by real part and sweep
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return eigs[a].real() < eigs[b].real(); });
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      const auto i = order[a];
      const auto j = order[b];
      if (eigs[j].real() - eigs[i].real() > tol) break;
      if (std::abs(eigs[i] - eigs[j]) <= tol) parent[find(i)] = find(j);
    }
  }
  std::vector<std::ptrdiff_t> slot(n, -1);
  SpectrumResult result;
  result.tolerance = tol;
  std::vector<Complex> sums;
  for (std::size_t i = 0; i < n; ++i) {
    const auto root = find(i);
    if (slot[root] < 0) {
      slot[root] = static_cast<std::ptrdiff_t>(result.clusters.size());
      result.clusters.push_back({});
      sums.push_back(0.0);
    }
    auto& c = result.clusters[static_cast<std::size_t>(slot[root])];
    c.multiplicity += 1;
    sums[static_cast<std::size_t>(slot[root])] += eigs[i];
  }
  for (std::size_t k = 0; k < result.clusters.size(); ++k) {
    result.clusters[k].value = sums[k] / double(result.clusters[k].multiplicity);
  }
  std::sort(result.clusters.begin(), result.clusters.end(),
            [](const EigenCluster& a, const EigenCluster& b) { return complex_less(a.value, b.value); });
  return result;
}

SpectrumResult spectrum(const Matrix& M, std::optional<double> cluster_tol) {
  if (M.rows() > 2000) throw ComplexityError("dense spectrum is limited to dimension 2000");
  const auto eigs = eigenvalues(M);
  return cluster_eigenvalues(eigs, cluster_tol.value_or(default_cluster_tolerance(eigs)));
}

}  // namespace rso
