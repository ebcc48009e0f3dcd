#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "ffmop/polynomial.hpp"
#include "ffmop/rmt.hpp"

namespace ffmop {

// Expression tree for random matrix models, e.g.
// "ssv(prod(ginibre(3,3), ginibre(3,3)))" or "ev(sum(gue(2,c=0.5), lue(2,a=1,c=2)))".
struct EnsembleModel {
  enum class Kind { Gue, Lue, Jue, Ginibre, Prod, Sum, Dilate, Shift, Ssv, Ev };
  Kind kind = Kind::Gue;
  int n = 1, m = 1;          // leaf sizes
  double a = 0.0, b = 0.0;   // leaf shape parameters
  double c = 1.0;            // leaf scale, Dilate factor, Shift amount
  std::vector<std::shared_ptr<const EnsembleModel>> children;
  int rows = 0, cols = 0;    // output shape (points: rows = count, cols = 0)
  bool hermitian = false;    // matrix nodes only

  bool yields_points() const noexcept { return cols == 0; }
  std::string to_string() const;
};

// Throws DomainError on syntax errors or incompatible dimensions.
EnsembleModel parse_model(std::string_view text);

// One draw of the terminal point configuration, sorted ascending.
std::vector<double> sample_points(const EnsembleModel& model, RngState& rng);

struct CharPolyEstimate {
  Poly mean;
  std::vector<double> coeffs;   // mean coefficients, index k for x^k, length n+1
  std::vector<double> stderrs;  // sample std / sqrt(N)
  long long samples = 0;
  std::uint64_t seed = 0;
  int batches = 0;
  std::vector<std::vector<double>> batch_means;  // per batch, per coefficient
  std::vector<long long> batch_sizes;
};

inline constexpr int kBatchSize = 1024;

// Mean of prod (x - lambda_i) over N draws. Batch b uses stream b of `seed`;
// batches are reduced in index order, so results do not depend on `threads`.
CharPolyEstimate expected_char_poly(const EnsembleModel& model, int degree, long long samples, std::uint64_t seed,
                                    int threads = 1);

}  // namespace ffmop
