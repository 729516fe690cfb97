#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <numeric>
#include <vector>

#include "incidence_energy/errors.hpp"
#include "incidence_energy/graph.hpp"

namespace incidence_energy {

/// Every numerical threshold in one place. Defaults are the campaign regime;
/// the CLI exposes each as a --tol-* flag.
struct Tolerances {
  double jacobi = 1e-12;          // stop when off(M) <= jacobi * ||M||_F
  double recheck_jacobi = 1e-15;  // tightened solve for violation candidates
  double clamp = 1e-9;            // eigenvalues within clamp*||M||_F of 0 become 0
  double violation = 1e-9;        // gap < -violation is a violation
  double equality = 1e-8;         // |gap| <= equality is an equality
  double regular_crosscheck = 1e-8;
};

inline constexpr int kMaxJacobiSweeps = 50;
inline constexpr int kMaxSpectralOrder = 64;

/// Ascending eigenvalues of a symmetric matrix plus the quality of the
/// eigen-decomposition that produced them.
struct Spectrum {
  std::vector<double> values;
  double residual = 0.0;              // ||V diag(values) V^T - M||_F
  double orthogonality_defect = 0.0;  // max |(V^T V - I)(i,j)|
  double matrix_norm = 0.0;           // ||M||_F
  int sweeps = 0;
};

inline void require_symmetric(const DenseSymMatrix& m) {
  for (int i = 0; i < m.order(); ++i) {
    for (int j = i + 1; j < m.order(); ++j) {
      if (m(i, j) != m(j, i)) throw ContractViolation("matrix is not symmetric");
    }
  }
}

/// Builds a symmetric matrix from a square grid, rejecting any asymmetry.
inline DenseSymMatrix symmetric_from_rows(const std::vector<std::vector<double>>& rows) {
  const int n = static_cast<int>(rows.size());
  DenseSymMatrix m(n);
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(rows[i].size()) != n) throw ContractViolation("matrix is not square");
    for (int j = i; j < n; ++j) {
      if (rows[i][j] != rows[j][i]) throw ContractViolation("matrix is not symmetric");
      m.set(i, j, rows[i][j]);
    }
  }
  return m;
}

namespace detail {

inline double off_norm(const std::vector<double>& a, int n) {
  double s = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j) s += a[i * n + j] * a[i * n + j];
  return std::sqrt(s);
}

}  // namespace detail

/// Cyclic Jacobi eigen-decomposition.
///
/// Sweeps every off-diagonal pair (p, q) in row order, annihilating it with a
/// plane rotation, until off(M) <= tol * ||M||_F or kMaxJacobiSweeps sweeps
/// have run. Rotations are accumulated so the residual and orthogonality of
/// the eigenvectors can be reported; the residual is checked against
/// (tol + 8 n eps) * ||M||_F before returning.
inline Spectrum sym_eigenvalues(const DenseSymMatrix& m, double tol = Tolerances{}.jacobi,
                                int max_sweeps = kMaxJacobiSweeps) {
  const int n = m.order();
  if (n > kMaxSpectralOrder) throw UnsupportedSize("eigensolver supports order <= 64");
  if (!(tol > 0.0)) throw ContractViolation("Jacobi tolerance must be positive");
  require_symmetric(m);

  std::vector<double> a(m.data().begin(), m.data().end());
  std::vector<double> v(static_cast<std::size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i) v[i * n + i] = 1.0;
  auto A = [&](int i, int j) -> double& { return a[i * n + j]; };
  auto V = [&](int i, int j) -> double& { return v[i * n + j]; };

  Spectrum s;
  s.matrix_norm = m.frobenius_norm();
  const double target = tol * s.matrix_norm;

  int sweep = 0;
  double off = detail::off_norm(a, n);
  while (off > target) {
    if (sweep == max_sweeps) throw ConvergenceError(off, sweep);
    ++sweep;
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double apq = A(p, q);
        if (apq == 0.0) continue;
        const double theta = (A(q, q) - A(p, p)) / (2.0 * apq);
        double t;
        if (std::abs(theta) > 1e150) {
          t = 0.5 / theta;
        } else {
          t = std::copysign(1.0, theta) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        }
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double sn = t * c;
        const double tau = sn / (1.0 + c);
        A(p, p) -= t * apq;
        A(q, q) += t * apq;
        A(p, q) = 0.0;
        A(q, p) = 0.0;
        for (int r = 0; r < n; ++r) {
          if (r == p || r == q) continue;
          const double g = A(r, p);
          const double h = A(r, q);
          const double rp = g - sn * (h + tau * g);
          const double rq = h + sn * (g - tau * h);
          A(r, p) = rp;
          A(p, r) = rp;
          A(r, q) = rq;
          A(q, r) = rq;
        }
        for (int r = 0; r < n; ++r) {
          const double g = V(r, p);
          const double h = V(r, q);
          V(r, p) = g - sn * (h + tau * g);
          V(r, q) = h + sn * (g - tau * h);
        }
      }
    }
    off = detail::off_norm(a, n);
  }
  s.sweeps = sweep;

  std::vector<int> idx(static_cast<std::size_t>(n));
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](int x, int y) { return A(x, x) < A(y, y); });
  s.values.resize(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) s.values[k] = A(idx[k], idx[k]);

  double res2 = 0.0;
  double defect = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      double recon = 0.0;
      double dot = 0.0;
      for (int k = 0; k < n; ++k) {
        recon += V(i, k) * A(k, k) * V(j, k);
        dot += V(k, i) * V(k, j);
      }
      const double diff = recon - m(i, j);
      res2 += diff * diff;
      defect = std::max(defect, std::abs(dot - (i == j ? 1.0 : 0.0)));
    }
  }
  s.residual = std::sqrt(res2);
  s.orthogonality_defect = defect;

  // The dropped off-diagonal mass is up to tol * ||M||_F, plus roundoff.
  const double roundoff = 8.0 * n * std::numeric_limits<double>::epsilon();
  if (s.residual > (tol + roundoff) * s.matrix_norm) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "Jacobi residual %.3e exceeds bound after %d sweeps",
                  s.residual, sweep);
    throw ConvergenceError(buf, off);
  }
  return s;
}

/// sqrt(x), with |x| <= clamp_tol read as an exact zero. Roundoff leaves
/// zero eigenvalues at about 1e-16 * ||M||, and the square root would blow
/// that up to 1e-8.
inline double clamped_sqrt(double x, double clamp_tol) {
  if (x < -clamp_tol) throw NegativeEigenvalueError(x);
  return x <= clamp_tol ? 0.0 : std::sqrt(x);
}

/// Sum of square roots of a PSD spectrum; eigenvalues within clamp_tol of
/// zero count as zero.
inline double energy_of_spectrum(const Spectrum& s, double clamp_tol) {
  double e = 0.0;
  for (double lambda : s.values) e += clamped_sqrt(lambda, clamp_tol);
  return e;
}

/// E(D) and E(X): singular-value sums of the directed and undirected
/// incidence matrices, via the Laplacian and signless Laplacian spectra.
struct EnergyPair {
  double e_d = 0.0;
  double e_x = 0.0;
  double gap = 0.0;  // e_x - e_d
  Spectrum laplacian;
  Spectrum signless;
};

inline EnergyPair energy_pair(const Graph& g, double jacobi_tol, double clamp_rel) {
  EnergyPair p;
  const auto l = laplacian(g);
  const auto q = signless_laplacian(g);
  p.laplacian = sym_eigenvalues(l, jacobi_tol);
  p.signless = sym_eigenvalues(q, jacobi_tol);
  p.e_d = energy_of_spectrum(p.laplacian, clamp_rel * p.laplacian.matrix_norm);
  p.e_x = energy_of_spectrum(p.signless, clamp_rel * p.signless.matrix_norm);
  p.gap = p.e_x - p.e_d;
  return p;
}

inline EnergyPair energy_pair(const Graph& g, const Tolerances& tols = {}) {
  return energy_pair(g, tols.jacobi, tols.clamp);
}

/// Singular values of a rectangular matrix, descending, from the eigenvalues
/// of M M^T. Only the first `rows` singular values are reported; any others
/// are zero.
inline std::vector<double> singular_values_direct(const Matrix& m, const Tolerances& tols = {}) {
  if (m.rows() > kMaxSpectralOrder) throw UnsupportedSize("at most 64 rows supported");
  const Spectrum s = sym_eigenvalues(gram(m), tols.jacobi);
  const double clamp = tols.clamp * s.matrix_norm;
  std::vector<double> out;
  out.reserve(s.values.size());
  for (double lambda : s.values) out.push_back(clamped_sqrt(lambda, clamp));
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

}  // namespace incidence_energy
