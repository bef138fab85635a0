#pragma once

// Dense matrix-exponential reference for small circuits: builds the layer
// unitaries e^{-i gamma H_C} and e^{-i beta sum X_i} as explicit matrices
// via scaling-and-squaring Taylor series, sharing no code with the
// statevector kernels under test.

#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

namespace dense_reference {

using cd = std::complex<double>;
using cmat = std::vector<std::vector<cd>>;
using cvec = std::vector<cd>;

inline cmat identity(std::size_t n) {
  cmat m(n, cvec(n, {0.0, 0.0}));
  for (std::size_t i = 0; i < n; ++i) m[i][i] = {1.0, 0.0};
  return m;
}

inline cmat matmul(const cmat& a, const cmat& b) {
  const std::size_t n = a.size();
  cmat out(n, cvec(n, {0.0, 0.0}));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) {
      const cd aik = a[i][k];
      if (aik == cd{0.0, 0.0}) continue;
      for (std::size_t j = 0; j < n; ++j) out[i][j] += aik * b[k][j];
    }
  return out;
}

inline cvec matvec(const cmat& a, const cvec& v) {
  const std::size_t n = a.size();
  cvec out(n, {0.0, 0.0});
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) out[i] += a[i][j] * v[j];
  return out;
}

inline cmat kron(const cmat& a, const cmat& b) {
  const std::size_t na = a.size();
  const std::size_t nb = b.size();
  cmat out(na * nb, cvec(na * nb, {0.0, 0.0}));
  for (std::size_t ia = 0; ia < na; ++ia)
    for (std::size_t ja = 0; ja < na; ++ja)
      for (std::size_t ib = 0; ib < nb; ++ib)
        for (std::size_t jb = 0; jb < nb; ++jb)
          out[ia * nb + ib][ja * nb + jb] = a[ia][ja] * b[ib][jb];
  return out;
}

// Scaling-and-squaring Taylor exponential; plenty accurate at 8x8 sizes.
inline cmat expm(const cmat& a) {
  const std::size_t n = a.size();
  double norm = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < n; ++j) row += std::abs(a[i][j]);
    norm = std::max(norm, row);
  }
  int squarings = 0;
  double scale = 1.0;
  while (norm * scale > 0.5) {
    scale *= 0.5;
    ++squarings;
  }
  cmat scaled(n, cvec(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) scaled[i][j] = a[i][j] * scale;

  cmat result = identity(n);
  cmat term = identity(n);
  for (int k = 1; k <= 24; ++k) {
    term = matmul(term, scaled);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        term[i][j] /= static_cast<double>(k);
        result[i][j] += term[i][j];
      }
  }
  for (int s = 0; s < squarings; ++s) result = matmul(result, result);
  return result;
}

// sum_i X_i with qubit q acting on bit q of the little-endian basis index.
inline cmat x_sum(int num_qubits) {
  const cmat x{{cd{0, 0}, cd{1, 0}}, {cd{1, 0}, cd{0, 0}}};
  const std::size_t dim = std::size_t{1} << num_qubits;
  cmat total(dim, cvec(dim, {0.0, 0.0}));
  for (int q = 0; q < num_qubits; ++q) {
    const cmat low = identity(std::size_t{1} << q);
    const cmat high = identity(dim >> (q + 1));
    const cmat xq = kron(high, kron(x, low));
    for (std::size_t i = 0; i < dim; ++i)
      for (std::size_t j = 0; j < dim; ++j) total[i][j] += xq[i][j];
  }
  return total;
}

inline cmat scaled_by(const cmat& a, cd factor) {
  cmat out = a;
  for (auto& row : out)
    for (auto& v : row) v *= factor;
  return out;
}

// One QAOA layer as a dense unitary: e^{-i beta sum X} . e^{-i gamma diag(E)}.
inline cmat layer_unitary(const std::vector<double>& energies, double gamma,
                          double beta) {
  const std::size_t dim = energies.size();
  cmat hc(dim, cvec(dim, {0.0, 0.0}));
  for (std::size_t k = 0; k < dim; ++k) hc[k][k] = {energies[k], 0.0};
  int num_qubits = 0;
  while ((std::size_t{1} << num_qubits) < dim) ++num_qubits;
  const cmat uc = expm(scaled_by(hc, cd{0.0, -gamma}));
  const cmat ub = expm(scaled_by(x_sum(num_qubits), cd{0.0, -beta}));
  return matmul(ub, uc);
}

// Largest absolute difference after aligning global phase on the reference's
// biggest amplitude.
inline double phase_aligned_distance(const cvec& reference, const cvec& candidate) {
  std::size_t anchor = 0;
  for (std::size_t k = 1; k < reference.size(); ++k)
    if (std::abs(reference[k]) > std::abs(reference[anchor])) anchor = k;
  cd phase{1.0, 0.0};
  if (std::abs(candidate[anchor]) > 1e-12)
    phase = reference[anchor] / candidate[anchor];
  if (std::abs(phase) > 1e-12) phase /= std::abs(phase);
  double worst = 0.0;
  for (std::size_t k = 0; k < reference.size(); ++k)
    worst = std::max(worst, std::abs(reference[k] - phase * candidate[k]));
  return worst;
}

}  // namespace dense_reference
