#include "ffmop/rmt.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "ffmop/error.hpp"

namespace ffmop {

std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> ctr, std::array<std::uint32_t, 2> key) {
  constexpr std::uint32_t kM0 = 0xD2511F53u, kM1 = 0xCD9E8D57u;
  constexpr std::uint32_t kW0 = 0x9E3779B9u, kW1 = 0xBB67AE85u;
  for (int round = 0; round < 10; ++round) {
    if (round > 0) {
      key[0] += kW0;
      key[1] += kW1;
    }
    const std::uint64_t p0 = static_cast<std::uint64_t>(kM0) * ctr[0];
    const std::uint64_t p1 = static_cast<std::uint64_t>(kM1) * ctr[2];
    const auto hi0 = static_cast<std::uint32_t>(p0 >> 32), lo0 = static_cast<std::uint32_t>(p0);
    const auto hi1 = static_cast<std::uint32_t>(p1 >> 32), lo1 = static_cast<std::uint32_t>(p1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
  }
  return ctr;
}

void RngState::refill() {
  block_ = philox4x32_10({static_cast<std::uint32_t>(counter_), static_cast<std::uint32_t>(counter_ >> 32),
                          static_cast<std::uint32_t>(stream_), static_cast<std::uint32_t>(stream_ >> 32)},
                         {static_cast<std::uint32_t>(seed_), static_cast<std::uint32_t>(seed_ >> 32)});
  ++counter_;
  avail_ = 2;
}

std::uint64_t RngState::next_u64() {
  if (avail_ == 0) refill();
  const int i = 2 - avail_;
  --avail_;
  return (static_cast<std::uint64_t>(block_[2 * i]) << 32) | block_[2 * i + 1];
}

double RngState::uniform() { return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1p-53; }

double RngState::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double u1 = uniform(), u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double th = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(th);
  has_spare_ = true;
  return r * std::cos(th);
}

double RngState::gamma(double shape) {
  if (!(shape > 0.0)) throw DomainError("gamma variate: shape must be positive");
  if (shape < 1.0) {
    const double g = gamma(shape + 1.0);
    return g * std::pow(uniform(), 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0, c = 1.0 / std::sqrt(9.0 * d);
  while (true) {
    const double x = normal();
    double v = 1.0 + c * x;
    if (v <= 0.0) continue;
    v = v * v * v;
    const double u = uniform();
    if (std::log(u) < 0.5 * x * x + d - d * v + d * std::log(v)) return d * v;
  }
}

ComplexMatrix ComplexMatrix::identity(int n) {
  ComplexMatrix m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = 1.0;
  m.hermitian = true;
  return m;
}

ComplexMatrix ComplexMatrix::diagonal(const std::vector<double>& d) {
  const int n = static_cast<int>(d.size());
  ComplexMatrix m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = d[i];
  m.hermitian = true;
  return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix r(cols_, rows_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) r(j, i) = std::conj((*this)(i, j));
  r.hermitian = hermitian;
  return r;
}

ComplexMatrix ComplexMatrix::block(int rows, int cols) const {
  if (rows > rows_ || cols > cols_) throw DomainError("block: larger than matrix");
  ComplexMatrix r(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) r(i, j) = (*this)(i, j);
  return r;
}

double ComplexMatrix::frobenius() const {
  double s = 0.0;
  for (const cplx& v : data_) s += std::norm(v);
  return std::sqrt(s);
}

cplx ComplexMatrix::trace() const {
  cplx t = 0.0;
  for (int i = 0; i < std::min(rows_, cols_); ++i) t += (*this)(i, i);
  return t;
}

bool ComplexMatrix::is_hermitian(double rel_tol) const {
  if (rows_ != cols_) return false;
  const double tol = rel_tol * std::max(frobenius(), 1e-300);
  for (int i = 0; i < rows_; ++i)
    for (int j = i; j < cols_; ++j)
      if (std::abs((*this)(i, j) - std::conj((*this)(j, i))) > tol) return false;
  return true;
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols_ != b.rows_) throw DomainError("matrix product: dimension mismatch");
  ComplexMatrix r(a.rows_, b.cols_);
  for (int i = 0; i < a.rows_; ++i)
    for (int k = 0; k < a.cols_; ++k) {
      const cplx v = a(i, k);
      for (int j = 0; j < b.cols_; ++j) r(i, j) += v * b(k, j);
    }
  return r;
}

ComplexMatrix operator+(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw DomainError("matrix sum: dimension mismatch");
  ComplexMatrix r = a;
  for (std::size_t i = 0; i < r.data_.size(); ++i) r.data_[i] += b.data_[i];
  r.hermitian = a.hermitian && b.hermitian;
  return r;
}

ComplexMatrix operator*(double s, const ComplexMatrix& a) {
  ComplexMatrix r = a;
  for (cplx& v : r.data_) v *= s;
  return r;
}

ComplexMatrix sample_ginibre(RngState& rng, int n, int m) {
  if (n < 1 || m < 1) throw DomainError("sample_ginibre: dimensions must be >= 1");
  ComplexMatrix g(n, m);
  const double s = std::sqrt(0.5);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j) {
      const double re = rng.normal(), im = rng.normal();
      g(i, j) = cplx(s * re, s * im);
    }
  return g;
}

ComplexMatrix sample_gue(RngState& rng, int n, double c) {
  if (n < 1) throw DomainError("sample_gue: n must be >= 1");
  if (!(c > 0.0)) throw DomainError("sample_gue: c must be positive");
  // Matrix density exp(-Tr H^2), then dilation by sqrt(2c).
  const double scale = std::sqrt(2.0 * c);
  ComplexMatrix h(n, n);
  for (int i = 0; i < n; ++i) {
    h(i, i) = scale * std::sqrt(0.5) * rng.normal();
    for (int j = i + 1; j < n; ++j) {
      const double re = rng.normal() * 0.5, im = rng.normal() * 0.5;
      h(i, j) = scale * cplx(re, im);
      h(j, i) = std::conj(h(i, j));
    }
  }
  h.hermitian = true;
  return h;
}

namespace {

// G G^* with exact conjugate symmetry.
ComplexMatrix gram(const ComplexMatrix& g) {
  const int n = g.rows();
  ComplexMatrix w(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      cplx s = 0.0;
      for (int k = 0; k < g.cols(); ++k) s += g(i, k) * std::conj(g(j, k));
      if (i == j) s = s.real();
      w(i, j) = s;
      w(j, i) = std::conj(s);
    }
  w.hermitian = true;
  return w;
}

}  // namespace

ComplexMatrix sample_lue_matrix(RngState& rng, int n, int a, double c) {
  if (a < 0) throw DomainError("sample_lue_matrix: a must be a nonnegative integer");
  if (!(c > 0.0)) throw DomainError("sample_lue: c must be positive");
  ComplexMatrix w = c * gram(sample_ginibre(rng, n, n + a));
  w.hermitian = true;
  return w;
}

std::vector<double> sample_lue(RngState& rng, int n, double a, double c) {
  if (n < 1) throw DomainError("sample_lue: n must be >= 1");
  if (!(a > -1.0)) throw DomainError("sample_lue: a must be > -1");
  if (a == std::floor(a) && a >= 0.0) return hermitian_eigenvalues(sample_lue_matrix(rng, n, static_cast<int>(a), c));
  if (!(c > 0.0)) throw DomainError("sample_lue: c must be positive");
  // Bidiagonal beta = 2 model: diagonal chi_{2(n+a-i)}/sqrt(2), subdiagonal chi_{2(n-1-i)}/sqrt(2).
  ComplexMatrix B(n, n);
  for (int i = 0; i < n; ++i) {
    B(i, i) = std::sqrt(rng.gamma(n + a - i));
    if (i + 1 < n) B(i + 1, i) = std::sqrt(rng.gamma(n - 1 - i));
  }
  ComplexMatrix w = c * gram(B);
  w.hermitian = true;
  return hermitian_eigenvalues(w);
}

JueTruncation jue_truncation(int n, int a, int b) {
  if (n < 1) throw DomainError("sample_jue: n must be >= 1");
  if (a < 0 || b <= a)
    throw DomainError("sample_jue: needs integers a >= 0 and b > a; use sample_pe_direct for other parameters");
  return JueTruncation{b + 2 * n - 1, n, n + a};
}

std::vector<double> sample_jue(RngState& rng, int n, int a, int b) {
  const JueTruncation t = jue_truncation(n, a, b);
  const ComplexMatrix U = sample_haar_unitary(rng, t.unitary_size);
  std::vector<double> x = squared_singular_values(U.block(t.block_rows, t.block_cols));
  for (double& v : x) v = std::clamp(v, 0.0, 1.0);
  return x;
}

ComplexMatrix sample_haar_unitary(RngState& rng, int n) {
  ComplexMatrix z = sample_ginibre(rng, n, n);
  // Modified Gram-Schmidt with one reorthogonalization pass; R has a
  // positive diagonal, so Q is Haar distributed.
  for (int j = 0; j < n; ++j) {
    for (int pass = 0; pass < 2; ++pass) {
      for (int i = 0; i < j; ++i) {
        cplx dot = 0.0;
        for (int k = 0; k < n; ++k) dot += std::conj(z(k, i)) * z(k, j);
        for (int k = 0; k < n; ++k) z(k, j) -= dot * z(k, i);
      }
    }
    double nrm = 0.0;
    for (int k = 0; k < n; ++k) nrm += std::norm(z(k, j));
    nrm = std::sqrt(nrm);
    if (nrm == 0.0) throw NumericalError("sample_haar_unitary: rank-deficient Ginibre sample");
    for (int k = 0; k < n; ++k) z(k, j) /= nrm;
  }
  return z;
}

std::vector<double> hermitian_eigenvalues(const ComplexMatrix& m, double tol) {
  if (m.rows() != m.cols()) throw DomainError("hermitian_eigenvalues: matrix must be square");
  if (!m.hermitian && !m.is_hermitian()) throw DomainError("hermitian_eigenvalues: matrix is not Hermitian");
  const int n = m.rows();
  ComplexMatrix A = m;
  const double norm = A.frobenius();
  std::vector<double> ev(n);
  if (norm == 0.0) return ev;
  bool converged = false;
  for (int sweep = 0; sweep <= 30; ++sweep) {
    double off = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (i != j) off += std::norm(A(i, j));
    if (std::sqrt(off) <= tol * norm) {
      converged = true;
      break;
    }
    if (sweep == 30) break;
    for (int p = 0; p < n - 1; ++p)
      for (int q = p + 1; q < n; ++q) {
        const cplx apq = A(p, q);
        const double mag = std::abs(apq);
        if (mag == 0.0) continue;
        const cplx e = apq / mag;
        const double tau = (A(q, q).real() - A(p, p).real()) / (2.0 * mag);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t), s = t * c;
        const cplx ec = std::conj(e);
        // A <- J^H A J with J = [[c, s], [-s conj(e), c conj(e)]] on (p, q).
        for (int r = 0; r < n; ++r) {
          const cplx x = A(r, p), y = A(r, q);
          A(r, p) = c * x - s * ec * y;
          A(r, q) = s * x + c * ec * y;
        }
        for (int r = 0; r < n; ++r) {
          const cplx x = A(p, r), y = A(q, r);
          A(p, r) = c * x - s * e * y;
          A(q, r) = s * x + c * e * y;
        }
        A(p, q) = 0.0;
        A(q, p) = 0.0;
        A(p, p) = A(p, p).real();
        A(q, q) = A(q, q).real();
      }
  }
  if (!converged) throw NumericalError("hermitian_eigenvalues: Jacobi sweep budget exhausted");
  for (int i = 0; i < n; ++i) ev[i] = A(i, i).real();
  std::sort(ev.begin(), ev.end());
  return ev;
}

std::vector<double> squared_singular_values(const ComplexMatrix& m, double tol) {
  std::vector<double> x = hermitian_eigenvalues(gram(m), tol);
  for (double& v : x) v = std::max(v, 0.0);
  return x;
}

PeSampler pe_from_density(const DensityId& id, int n) {
  validate(id);
  if (n < 1 || n > 3) throw DomainError("pe_from_density: n must lie in 1..3");
  PeSampler pe;
  pe.support = support_of(id);
  for (int j = 0; j < n; ++j)
    pe.v.push_back([id, j](double x) { return std::pow(x, j) * density_value(id, x); });
  return pe;
}

namespace {

// Delta(x) det[v_j(x_k)] for n <= 3.
double pe_density(const PeSampler& pe, const double* x, int n) {
  double vand = 1.0;
  for (int j = 0; j < n; ++j)
    for (int k = j + 1; k < n; ++k) vand *= x[k] - x[j];
  double M[3][3] = {};
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) M[j][k] = pe.v[j](x[k]);
  double det = 0.0;
  if (n == 1) det = M[0][0];
  else if (n == 2) det = M[0][0] * M[1][1] - M[0][1] * M[1][0];
  else
    det = M[0][0] * (M[1][1] * M[2][2] - M[1][2] * M[2][1]) - M[0][1] * (M[1][0] * M[2][2] - M[1][2] * M[2][0]) +
          M[0][2] * (M[1][0] * M[2][1] - M[1][1] * M[2][0]);
  return vand * det;
}

}  // namespace

std::vector<std::vector<double>> sample_pe_direct(RngState& rng, const PeSampler& pe, int count,
                                                  const QuadratureConfig& cfg) {
  cfg.validate();
  const int n = static_cast<int>(pe.v.size());
  if (n < 1 || n > 3) throw DomainError("sample_pe_direct: n must lie in 1..3");
  if (count < 0) throw DomainError("sample_pe_direct: negative sample count");

  // Per-point envelope: |Delta| <= prod (1+x^2)^{(n-1)/2} and
  // |det[v_j(x_k)]| <= prod ||v(x_k)||_2 (Hadamard).
  auto q = [&](double x) {
    double s = 0.0;
    for (const auto& f : pe.v) {
      const double v = f(x);
      s += v * v;
    }
    return std::pow(1.0 + x * x, 0.5 * (n - 1)) * std::sqrt(s);
  };

  // Finite window outside of which the envelope is negligible.
  double L = pe.support.lo, H = pe.support.hi;
  {
    double qmax = 0.0;
    const double a0 = std::isfinite(L) ? L : (std::isfinite(H) ? H - 1.0 : -1.0);
    const double b0 = std::isfinite(H) ? H : (std::isfinite(L) ? L + 1.0 : 1.0);
    for (int i = 1; i < 64; ++i) qmax = std::max(qmax, q(a0 + (b0 - a0) * i / 64.0));
    auto extend = [&](double start, double dir) {
      double x = start, step = 0.25;
      for (int it = 0; it < 4000; ++it) {
        x += dir * step;
        const double v = q(x);
        qmax = std::max(qmax, v);
        if (v < 1e-18 * qmax) {
          // Confirm the tail stays small.
          bool small = true;
          for (int k = 1; k <= 8 && small; ++k) small = q(x + dir * step * k) < 1e-18 * qmax;
          if (small) return x;
        }
        step = std::min(step * 1.05, 10.0);
      }
      throw NumericalError("sample_pe_direct: weight tail does not decay");
    };
    if (!std::isfinite(L)) L = extend(a0, -1.0);
    if (!std::isfinite(H)) H = extend(b0, 1.0);
  }

  // Piecewise-constant proposal dominating q cellwise.
  constexpr int kCells = 4096;
  const double w = (H - L) / kCells;
  std::vector<double> h(kCells), cdf(kCells + 1, 0.0);
  for (int i = 0; i < kCells; ++i) {
    double m = 0.0;
    for (int k = 0; k <= 8; ++k) {
      double x = L + w * (i + k / 8.0);
      if (k == 0 && i == 0) x = L + 1e-9 * w;
      if (k == 8 && i == kCells - 1) x = H - 1e-9 * w;
      const double v = q(x);
      if (!std::isfinite(v)) throw DomainError("sample_pe_direct: unbounded weight is not supported");
      m = std::max(m, v);
    }
    h[i] = 1.25 * m + 1e-300;
    cdf[i + 1] = cdf[i] + h[i] * w;
  }

  // Positivity pre-check on a grid of ordered configurations.
  {
    constexpr int G = 24;
    std::vector<double> g(G);
    for (int i = 0; i < G; ++i) g[i] = L + (H - L) * (i + 0.5) / G;
    double mx = 0.0, mn = 0.0;
    double x[3];
    auto visit = [&](auto&& self, int depth, int start) -> void {
      if (depth == n) {
        const double d = pe_density(pe, x, n);
        mx = std::max(mx, d);
        mn = std::min(mn, d);
        return;
      }
      for (int i = start; i < G; ++i) {
        x[depth] = g[i];
        self(self, depth + 1, i + 1);
      }
    };
    visit(visit, 0, 0);
    if (mn < -1e-12 * std::max(mx, 1e-300))
      throw DomainError("sample_pe_direct: density changes sign; not a valid ensemble");
  }

  std::vector<std::vector<double>> out;
  out.reserve(count);
  long long proposals = 0;
  double x[3];
  double hx[3];
  while (static_cast<int>(out.size()) < count) {
    ++proposals;
    double env = 1.0;
    for (int k = 0; k < n; ++k) {
      const double u = rng.uniform() * cdf[kCells];
      int cell = static_cast<int>(std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin()) - 1;
      cell = std::clamp(cell, 0, kCells - 1);
      x[k] = L + w * (cell + rng.uniform());
      hx[k] = h[cell];
      env *= hx[k];
    }
    std::sort(x, x + n);
    const double ratio = std::abs(pe_density(pe, x, n)) / env;
    if (ratio > 1.0 + 1e-9) throw NumericalError("sample_pe_direct: envelope violated", ratio);
    if (rng.uniform() < ratio) out.emplace_back(x, x + n);
    if (proposals >= 100000 && static_cast<double>(out.size()) / proposals < 1e-5)
      throw NumericalError("sample_pe_direct: acceptance rate below 1e-5; use a tighter envelope");
  }
  return out;
}

}  // namespace ffmop
