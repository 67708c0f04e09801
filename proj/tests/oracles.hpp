/* Copyright 2026 The nmrdj Authors. All Rights Reserved.
Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at
    http://www.apache.org/licenses/LICENSE-2.0
Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

// Test-only reference computations. Nothing here calls into the library's numerical paths:
// operators are built from Kronecker products of Pauli matrices, exponentials use Pade
// approximants, spectra use a naive O(N^2) DFT.

#ifndef NMRDJ_TESTS_ORACLES_HPP
#define NMRDJ_TESTS_ORACLES_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

namespace oracle {

using Complex = std::complex<double>;
using Mat = Eigen::MatrixXcd;

inline constexpr double kPi = 3.14159265358979323846;

// 1/2 sigma_axis, axis in {'x', 'y', 'z'}.
inline Mat half_pauli(char axis) {
  Mat m = Mat::Zero(2, 2);
  if (axis == 'x') {
    m(0, 1) = m(1, 0) = 0.5;
  } else if (axis == 'y') {
    m(0, 1) = Complex(0, -0.5);
    m(1, 0) = Complex(0, 0.5);
  } else {
    m(0, 0) = 0.5;
    m(1, 1) = -0.5;
  }
  return m;
}

// Spin operator of `spin` in an n-spin space, spin 0 is the leftmost Kronecker factor.
inline Mat spin_op(int n, int spin, char axis) {
  Mat out = Mat::Identity(1, 1);
  for (int i = 0; i < n; ++i) {
    const Mat f = i == spin ? half_pauli(axis) : Mat::Identity(2, 2);
    Mat next = Eigen::kroneckerProduct(out, f).eval();
    out = next;
  }
  return out;
}

// 2 pi [sum nu_i Iz_i + sum_{i<j} D_ij Iz_i Iz_j] from Kronecker products.
inline Mat hamiltonian(const std::vector<double> &nu, const Eigen::MatrixXd &d) {
  const int n = static_cast<int>(nu.size());
  const Eigen::Index dim = Eigen::Index{1} << n;
  Mat h = Mat::Zero(dim, dim);
  for (int i = 0; i < n; ++i)
    h += 2 * kPi * nu[i] * spin_op(n, i, 'z');
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      h += 2 * kPi * d(i, j) * spin_op(n, i, 'z') * spin_op(n, j, 'z');
  return h;
}

inline Mat expm(const Mat &a) { return a.exp(); }

// Frequencies (Hz) of every eigenvector pair connected by Ix of `spin`, from a numerical
// eigendecomposition. Positive frequency = (E_low-bit - E_high-bit) / 2 pi.
inline std::vector<double> brute_force_lines(const std::vector<double> &nu,
                                             const Eigen::MatrixXd &d, int spin) {
  const int n = static_cast<int>(nu.size());
  const Mat h = hamiltonian(nu, d);
  Eigen::SelfAdjointEigenSolver<Mat> es(h);
  const Mat ix = spin_op(n, spin, 'x');
  const Mat iz = spin_op(n, spin, 'z');
  const Mat v = es.eigenvectors();
  std::vector<double> out;
  for (Eigen::Index a = 0; a < h.rows(); ++a)
    for (Eigen::Index b = 0; b < h.rows(); ++b) {
      const Complex m = (v.col(a).adjoint() * ix * v.col(b))(0, 0);
      const double za = (v.col(a).adjoint() * iz * v.col(a))(0, 0).real();
      if (std::abs(m) > 0.25 && za > 0)
        out.push_back((es.eigenvalues()(a) - es.eigenvalues()(b)) / (2 * kPi));
    }
  std::sort(out.begin(), out.end());
  return out;
}

// exp(-i pi X_pq) with X_pq the two-level "x" operator (|p><q| + |q><p|)/2 rotated by phase.
inline Mat two_level_pi(Eigen::Index dim, Eigen::Index p, Eigen::Index q, double phase) {
  Mat x = Mat::Zero(dim, dim);
  x(p, q) = 0.5 * std::exp(Complex(0, -phase));
  x(q, p) = 0.5 * std::exp(Complex(0, phase));
  return expm(Complex(0, -kPi) * x);
}

// Signal sum_k Tr(rho(t_k) I+) exp(-t_k / t2) by explicit time evolution with the Pade
// exponential, I+ over `detect` spins.
inline std::vector<Complex> fid(const Mat &rho, const Mat &h, int n, std::size_t points,
                                double dwell, double t2, const std::vector<int> &detect) {
  Mat iplus = Mat::Zero(rho.rows(), rho.cols());
  for (int s : detect)
    iplus += spin_op(n, s, 'x') + Complex(0, 1) * spin_op(n, s, 'y');
  const Mat step = expm(Complex(0, -dwell) * h);
  Mat u = Mat::Identity(rho.rows(), rho.cols());
  std::vector<Complex> out;
  for (std::size_t k = 0; k < points; ++k) {
    const double t = static_cast<double>(k) * dwell;
    out.push_back((u * rho * u.adjoint() * iplus).trace() * std::exp(-t / t2));
    u = step * u;
  }
  return out;
}

// X(f_j) = sum_k x_k exp(-i 2 pi f_j k dwell), f_j = j / (N dwell), j = -N/2+1 .. N/2.
inline std::vector<Complex> naive_dft(const std::vector<Complex> &x) {
  const auto n = static_cast<long>(x.size());
  std::vector<Complex> out;
  for (long j = -n / 2 + 1; j <= n / 2; ++j) {
    Complex acc = 0;
    for (long k = 0; k < n; ++k)
      acc += x[static_cast<std::size_t>(k)] *
             std::exp(Complex(0, -2 * kPi * static_cast<double>(j * k % n) / n));
    out.push_back(acc);
  }
  return out;
}

// Unit-peak truncated Gaussian on [0, T] with the given edge level.
inline double gaussian(double t, double duration, double edge) {
  if (edge >= 1.0)
    return 1.0;
  const double half = duration / 2;
  const double sigma2 = half * half / (2 * std::log(1 / edge));
  return std::exp(-(t - half) * (t - half) / (2 * sigma2));
}

inline double trapezoid_area(double duration, double edge, std::size_t intervals) {
  const double h = duration / static_cast<double>(intervals);
  double s = 0.5 * (gaussian(0, duration, edge) + gaussian(duration, duration, edge));
  for (std::size_t k = 1; k < intervals; ++k)
    s += gaussian(static_cast<double>(k) * h, duration, edge);
  return s * h;
}

// Midpoint piecewise-constant propagator of a Gaussian pi pulse, RF on all spins:
// H(t) = h + A g(t) sum_j [cos(2 pi f_j t) Fx + sin(2 pi f_j t) Fy], A from the trapezoid area.
inline Mat shaped_midpoint(const Mat &h, int n, const std::vector<double> &freqs,
                           double duration, double edge, std::size_t steps) {
  Mat fx = Mat::Zero(h.rows(), h.cols());
  Mat fy = Mat::Zero(h.rows(), h.cols());
  for (int s = 0; s < n; ++s) {
    fx += spin_op(n, s, 'x');
    fy += spin_op(n, s, 'y');
  }
  const double amp = kPi / trapezoid_area(duration, edge, 200000);
  const double dt = duration / static_cast<double>(steps);
  Mat u = Mat::Identity(h.rows(), h.cols());
  for (std::size_t k = 0; k < steps; ++k) {
    const double t = (static_cast<double>(k) + 0.5) * dt;
    double bx = 0.0;
    double by = 0.0;
    for (double f : freqs) {
      bx += std::cos(2 * kPi * f * t);
      by += std::sin(2 * kPi * f * t);
    }
    const double g = amp * gaussian(t, duration, edge);
    const Mat step = expm(Complex(0, -dt) * (h + g * bx * fx + g * by * fy));
    u = step * u;
  }
  return u;
}

// Richardson extrapolation of two midpoint products (global error O(dt^4)).
inline Mat shaped_reference(const Mat &h, int n, const std::vector<double> &freqs,
                            double duration, double edge, std::size_t steps) {
  return (4.0 * shaped_midpoint(h, n, freqs, duration, edge, 2 * steps) -
          shaped_midpoint(h, n, freqs, duration, edge, steps)) /
         3.0;
}

inline std::uint64_t choose(unsigned n, unsigned k) {
  // Pascal's triangle.
  std::vector<std::vector<std::uint64_t>> c(n + 1, std::vector<std::uint64_t>(n + 1, 0));
  for (unsigned i = 0; i <= n; ++i) {
    c[i][0] = 1;
    for (unsigned j = 1; j <= i; ++j)
      c[i][j] = c[i - 1][j - 1] + (j <= i - 1 ? c[i - 1][j] : 0);
  }
  return c[n][k];
}

inline Mat random_hermitian(std::mt19937_64 &rng, Eigen::Index dim) {
  std::normal_distribution<double> g;
  Mat a(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i)
    for (Eigen::Index j = 0; j < dim; ++j)
      a(i, j) = Complex(g(rng), g(rng));
  return (a + a.adjoint()) / 2.0;
}

inline Mat random_unitary(std::mt19937_64 &rng, Eigen::Index dim) {
  return expm(Complex(0, -1) * random_hermitian(rng, dim));
}

}  // namespace oracle

#endif  // NMRDJ_TESTS_ORACLES_HPP
