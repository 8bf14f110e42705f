#include <cmath>

#include "rso/errors.hpp"
#include "rso/operator_core.hpp"

namespace rso {

namespace {

// Higham (2005) degree thresholds for double precision.
constexpr double kTheta3 = 1.495585217958292e-2;
constexpr double kTheta5 = 2.539398330063230e-1;
constexpr double kTheta7 = 9.504178996162932e-1;
constexpr double kTheta9 = 2.097847961257068e0;
constexpr double kTheta13 = 5.371920351148152e0;

constexpr double kB3[] = {120.0, 60.0, 12.0, 1.0};
constexpr double kB5[] = {30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0};
constexpr double kB7[] = {17297280.0, 8648640.0, 1995840.0, 277200.0,
                          25200.0,    1512.0,    56.0,      1.0};
constexpr double kB9[] = {17643225600.0, 8821612800.0, 2075673600.0, 302702400.0, 30270240.0,
                          2162160.0,     110880.0,     3960.0,       90.0,        1.0};
constexpr double kB13[] = {64764752532480000.0,
                           32382376266240000.0,
                           7771770303897600.0,
                           1187353796428800.0,
                           129060195264000.0,
                           10559470521600.0,
                           670442572800.0,
                           33522128640.0,
                           1323241920.0,
                           40840800.0,
                           960960.0,
                           16380.0,
                           182.0,
                           1.0};

Matrix pade_solve(const Matrix& U, const Matrix& V) {
  const Matrix P = V + U;
  const Matrix Q = V - U;
  return Q.partialPivLu().solve(P);
}

// Low-degree approximant r_m(A) for m in {3, 5, 7, 9}.
Matrix pade_low(const Matrix& A, const double* b, int m) {
  const auto n = A.rows();
  const Matrix I = Matrix::Identity(n, n);
  const Matrix A2 = A * A;
  Matrix odd = b[1] * I;
  Matrix even = b[0] * I;
  Matrix power = I;
  for (int k = 2; k <= m; k += 2) {
    power = power * A2;
    odd += b[k + 1] * power;
    even += b[k] * power;
  }
  return pade_solve(A * odd, even);
}

Matrix pade13(const Matrix& A) {
  const auto n = A.rows();
  const double* b = kB13;
  const Matrix I = Matrix::Identity(n, n);
  const Matrix A2 = A * A;
  const Matrix A4 = A2 * A2;
  const Matrix A6 = A4 * A2;
  const Matrix U =
      A * (A6 * (b[13] * A6 + b[11] * A4 + b[9] * A2) + b[7] * A6 + b[5] * A4 + b[3] * A2 + b[1] * I);
  const Matrix V =
      A6 * (b[12] * A6 + b[10] * A4 + b[8] * A2) + b[6] * A6 + b[4] * A4 + b[2] * A2 + b[0] * I;
  return pade_solve(U, V);
}

}  // namespace

Matrix expm(const Matrix& A) {
  if (A.rows() != A.cols()) throw InputError("matrix exponential needs a square matrix");
  if (!A.allFinite()) throw NumericalError("matrix exponential of a non-finite matrix");
  const auto n = A.rows();
  if (n == 0) return A;
  const double norm = A.cwiseAbs().colwise().sum().maxCoeff();

  Matrix R;
  if (norm <= kTheta3) {
    R = pade_low(A, kB3, 3);
  } else if (norm <= kTheta5) {
    R = pade_low(A, kB5, 5);
  } else if (norm <= kTheta7) {
    R = pade_low(A, kB7, 7);
  } else if (norm <= kTheta9) {
    R = pade_low(A, kB9, 9);
  } else {
    const int s = std::max(0, static_cast<int>(std::ceil(std::log2(norm / kTheta13))));
    R = pade13(A * std::ldexp(1.0, -s));
    for (int i = 0; i < s; ++i) R = R * R;
  }
  if (!R.allFinite()) {
    throw NumericalError("matrix exponential overflowed (||A||_1 = " + std::to_string(norm) + ")");
  }
  return R;
}

Matrix matrix_exponential(const Matrix& M, double t) { return expm(-t * M); }

}  // namespace rso
