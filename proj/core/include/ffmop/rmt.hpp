#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "ffmop/polynomial.hpp"
#include "ffmop/quadrature.hpp"
#include "ffmop/specialfn.hpp"

namespace ffmop {

// Philox4x32-10 counter-based generator. The 128-bit counter is
// (block index, stream) and the 64-bit key is the seed, so every
// (seed, stream) pair gives an independent, platform-stable sequence.
class RngState {
 public:
  RngState(std::uint64_t seed = 0, std::uint64_t stream = 0) : seed_(seed), stream_(stream) {}

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream() const noexcept { return stream_; }
  std::uint64_t counter() const noexcept { return counter_; }

  std::uint64_t next_u64();
  double uniform();       // in (0, 1), 53-bit resolution
  double normal();        // standard normal by Box-Muller
  double gamma(double shape);  // unit scale, Marsaglia-Tsang

  // Stream for batch `batch` derived from this generator's seed.
  static RngState split(std::uint64_t seed, std::uint64_t batch) { return RngState(seed, batch); }

 private:
  void refill();
  std::uint64_t seed_, stream_;
  std::uint64_t counter_ = 0;
  std::array<std::uint32_t, 4> block_{};
  int avail_ = 0;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

// Raw Philox4x32-10 block function.
std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> ctr, std::array<std::uint32_t, 2> key);

class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(int rows, int cols) : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows) * cols) {}
  static ComplexMatrix identity(int n);
  static ComplexMatrix diagonal(const std::vector<double>& d);

  int rows() const noexcept { return rows_; }
  int cols() const noexcept { return cols_; }
  cplx& operator()(int i, int j) { return data_[static_cast<std::size_t>(i) * cols_ + j]; }
  const cplx& operator()(int i, int j) const { return data_[static_cast<std::size_t>(i) * cols_ + j]; }
  const std::vector<cplx>& data() const noexcept { return data_; }

  bool hermitian = false;

  ComplexMatrix adjoint() const;
  ComplexMatrix block(int rows, int cols) const;  // top-left
  double frobenius() const;
  cplx trace() const;
  bool is_hermitian(double rel_tol = 1e-13) const;

  friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);
  friend ComplexMatrix operator+(const ComplexMatrix& a, const ComplexMatrix& b);
  friend ComplexMatrix operator*(double s, const ComplexMatrix& a);

 private:
  int rows_ = 0, cols_ = 0;
  std::vector<cplx> data_;
};

ComplexMatrix sample_ginibre(RngState& rng, int n, int m);
// Hermitian, eigenvalue weight exp(-x^2/(2c)); c = 1/2 gives exp(-x^2).
ComplexMatrix sample_gue(RngState& rng, int n, double c = 0.5);
// Integer a >= 0: c G G^* with G an n x (n+a) Ginibre matrix.
ComplexMatrix sample_lue_matrix(RngState& rng, int n, int a, double c = 1.0);
// Any a > -1: sorted eigenvalues, weight x^a e^{-x/c}.
std::vector<double> sample_lue(RngState& rng, int n, double a, double c = 1.0);
// Sorted eigenvalues with weight x^a (1-x)^{b-a-1} on (0,1).
std::vector<double> sample_jue(RngState& rng, int n, int a, int b);
// Size of the Haar unitary and block width used by sample_jue.
struct JueTruncation {
  int unitary_size;
  int block_rows;
  int block_cols;
};
JueTruncation jue_truncation(int n, int a, int b);

ComplexMatrix sample_haar_unitary(RngState& rng, int n);

std::vector<double> hermitian_eigenvalues(const ComplexMatrix& m, double tol = 1e-12);
std::vector<double> squared_singular_values(const ComplexMatrix& m, double tol = 1e-12);

// Exact rejection sampling of the polynomial ensemble with density
// proportional to |Delta(x) det[v_j(x_k)]| on `support`, n <= 3.
struct PeSampler {
  std::vector<RealFn> v;
  Support support;
};
PeSampler pe_from_density(const DensityId& id, int n);
std::vector<std::vector<double>> sample_pe_direct(RngState& rng, const PeSampler& pe, int count,
                                                  const QuadratureConfig& cfg = {});

}  // namespace ffmop
