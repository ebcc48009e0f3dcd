#include "ffmop/model.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <charconv>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "ffmop/error.hpp"

namespace ffmop {

namespace {

std::string num(double v) {
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

using NodePtr = std::shared_ptr<const EnsembleModel>;

struct Arg {
  std::string key;  // empty for positional
  bool is_model = false;
  double value = 0.0;
  NodePtr model;
};

class Parser {
 public:
  explicit Parser(std::string_view t) : t_(t) {}

  EnsembleModel parse() {
    EnsembleModel m = node();
    skip();
    if (p_ != t_.size()) fail("unexpected trailing input");
    return m;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw DomainError("model expression: " + msg + " at offset " + std::to_string(p_));
  }
  void skip() {
    while (p_ < t_.size() && std::isspace(static_cast<unsigned char>(t_[p_]))) ++p_;
  }
  bool eat(char c) {
    skip();
    if (p_ < t_.size() && t_[p_] == c) {
      ++p_;
      return true;
    }
    return false;
  }
  std::string ident() {
    skip();
    std::string s;
    while (p_ < t_.size() && (std::isalpha(static_cast<unsigned char>(t_[p_])) || t_[p_] == '_'))
      s += static_cast<char>(std::tolower(static_cast<unsigned char>(t_[p_++])));
    return s;
  }
  double number() {
    skip();
    double v = 0.0;
    const char* b = t_.data() + p_;
    auto r = std::from_chars(b, t_.data() + t_.size(), v);
    if (r.ec != std::errc() || !std::isfinite(v)) fail("expected a number");
    p_ += static_cast<std::size_t>(r.ptr - b);
    return v;
  }

  Arg arg() {
    skip();
    Arg a;
    if (p_ < t_.size() && std::isalpha(static_cast<unsigned char>(t_[p_]))) {
      const std::size_t save = p_;
      std::string id = ident();
      if (eat('=')) {
        a.key = id;
        a.value = number();
        return a;
      }
      p_ = save;
      a.is_model = true;
      a.model = std::make_shared<const EnsembleModel>(node());
      return a;
    }
    a.value = number();
    return a;
  }

  EnsembleModel node() {
    const std::string name = ident();
    if (name.empty()) fail("expected a node name");
    if (!eat('(')) fail("expected '(' after " + name);
    std::vector<Arg> args;
    if (!eat(')')) {
      do args.push_back(arg());
      while (eat(','));
      if (!eat(')')) fail("expected ')' to close " + name);
    }
    return build(name, args);
  }

  // Assigns positional then keyed numeric parameters to `names`.
  std::vector<double> params(const std::string& node, const std::vector<Arg>& args,
                             const std::vector<std::string>& names, const std::vector<double>& defaults,
                             std::size_t required) const {
    std::vector<double> out = defaults;
    std::vector<bool> set(names.size(), false);
    std::size_t pos = 0;
    for (const Arg& a : args) {
      if (a.is_model) continue;
      std::size_t idx;
      if (a.key.empty()) {
        idx = pos++;
        if (idx >= names.size()) throw DomainError("model expression: too many arguments to " + node);
      } else {
        auto it = std::find(names.begin(), names.end(), a.key);
        if (it == names.end()) throw DomainError("model expression: unknown parameter '" + a.key + "' for " + node);
        idx = static_cast<std::size_t>(it - names.begin());
      }
      if (set[idx]) throw DomainError("model expression: parameter '" + names[idx] + "' given twice for " + node);
      set[idx] = true;
      out[idx] = a.value;
    }
    for (std::size_t i = 0; i < required; ++i)
      if (!set[i]) throw DomainError("model expression: missing parameter '" + names[i] + "' for " + node);
    return out;
  }

  static int as_int(double v, const std::string& what) {
    if (v != std::floor(v) || std::abs(v) > 1e6)
      throw DomainError("model expression: " + what + " must be an integer");
    return static_cast<int>(v);
  }

  static std::vector<NodePtr> models(const std::vector<Arg>& args) {
    std::vector<NodePtr> out;
    for (const Arg& a : args)
      if (a.is_model) out.push_back(a.model);
    return out;
  }

  EnsembleModel build(const std::string& name, const std::vector<Arg>& args) const {
    using K = EnsembleModel::Kind;
    EnsembleModel m;
    const auto kids = models(args);
    auto no_kids = [&] {
      if (!kids.empty()) throw DomainError("model expression: " + name + " takes no sub-models");
    };
    auto positive_n = [&](int n) {
      if (n < 1) throw DomainError("model expression: " + name + " size must be >= 1");
    };
    if (name == "gue") {
      no_kids();
      auto p = params(name, args, {"n", "c"}, {0, 0.5}, 1);
      m.kind = K::Gue;
      m.n = as_int(p[0], "gue n");
      positive_n(m.n);
      m.c = p[1];
      if (!(m.c > 0)) throw DomainError("model expression: gue c must be positive");
      m.rows = m.cols = m.n;
      m.hermitian = true;
    } else if (name == "lue") {
      no_kids();
      auto p = params(name, args, {"n", "a", "c"}, {0, 0.0, 1.0}, 1);
      m.kind = K::Lue;
      m.n = as_int(p[0], "lue n");
      positive_n(m.n);
      m.a = p[1];
      m.c = p[2];
      if (!(m.a > -1)) throw DomainError("model expression: lue a must be > -1");
      if (!(m.c > 0)) throw DomainError("model expression: lue c must be positive");
      m.rows = m.cols = m.n;
      m.hermitian = true;
    } else if (name == "jue") {
      no_kids();
      auto p = params(name, args, {"n", "a", "b"}, {0, 0, 0}, 3);
      m.kind = K::Jue;
      m.n = as_int(p[0], "jue n");
      positive_n(m.n);
      m.a = as_int(p[1], "jue a");
      m.b = as_int(p[2], "jue b");
      jue_truncation(m.n, static_cast<int>(m.a), static_cast<int>(m.b));
      m.rows = m.cols = m.n;
      m.hermitian = true;
    } else if (name == "ginibre") {
      no_kids();
      auto p = params(name, args, {"n", "m"}, {0, 0}, 1);
      m.kind = K::Ginibre;
      m.n = as_int(p[0], "ginibre n");
      m.m = args.size() >= 2 ? as_int(p[1], "ginibre m") : m.n;
      positive_n(m.n);
      positive_n(m.m);
      m.rows = m.n;
      m.cols = m.m;
    } else if (name == "prod" || name == "sum") {
      params(name, args, {}, {}, 0);
      if (kids.size() < 2) throw DomainError("model expression: " + name + " needs at least two sub-models");
      m.kind = name == "prod" ? K::Prod : K::Sum;
      for (const auto& k : kids)
        if (k->yields_points()) throw DomainError("model expression: " + name + " operands must be matrices");
      m.rows = kids.front()->rows;
      m.cols = kids.front()->cols;
      m.hermitian = m.kind == K::Sum;
      for (std::size_t i = 1; i < kids.size(); ++i) {
        const auto& k = kids[i];
        if (m.kind == K::Prod) {
          if (k->rows != m.cols)
            throw DomainError("model expression: dimension mismatch in prod (" + std::to_string(m.cols) + " vs " +
                              std::to_string(k->rows) + ")");
          m.cols = k->cols;
        } else if (k->rows != m.rows || k->cols != m.cols) {
          throw DomainError("model expression: dimension mismatch in sum");
        }
      }
      for (const auto& k : kids) m.hermitian = m.hermitian && k->hermitian;
      if (m.kind == K::Prod && kids.size() == 1) m.hermitian = kids.front()->hermitian;
      if (m.kind == K::Prod)
        for (const auto& k : kids)
          if (k->kind == K::Lue && (k->a != std::floor(k->a) || k->a < 0))
            throw DomainError("model expression: products need matrix entries; lue with non-integer a is spectral only");
      m.children = kids;
    } else if (name == "dilate" || name == "shift") {
      const bool dil = name == "dilate";
      auto p = params(name, args, {dil ? "c" : "t"}, {0}, 1);
      if (kids.size() != 1) throw DomainError("model expression: " + name + " takes exactly one sub-model");
      m.kind = dil ? K::Dilate : K::Shift;
      m.c = p[0];
      if (dil && !(m.c > 0)) throw DomainError("model expression: dilate c must be positive");
      const auto& k = kids.front();
      if (!dil && !k->yields_points() && k->rows != k->cols)
        throw DomainError("model expression: shift needs a square matrix");
      m.rows = k->rows;
      m.cols = k->cols;
      m.hermitian = k->hermitian;
      m.children = kids;
    } else if (name == "ssv" || name == "ev") {
      params(name, args, {}, {}, 0);
      if (kids.size() != 1) throw DomainError("model expression: " + name + " takes exactly one sub-model");
      const auto& k = kids.front();
      if (k->yields_points()) throw DomainError("model expression: " + name + " needs a matrix operand");
      m.kind = name == "ssv" ? K::Ssv : K::Ev;
      if (m.kind == K::Ev) {
        if (k->rows != k->cols) throw DomainError("model expression: ev needs a square matrix");
        if (!k->hermitian) throw DomainError("model expression: ev needs a Hermitian matrix; use ssv");
      }
      m.rows = k->rows;
      m.cols = 0;
      m.children = kids;
    } else {
      throw DomainError("model expression: unknown node '" + name + "'");
    }
    return m;
  }

  std::string_view t_;
  std::size_t p_ = 0;
};

bool spectral_only(const EnsembleModel& m) {
  return m.kind == EnsembleModel::Kind::Lue && (m.a != std::floor(m.a) || m.a < 0);
}

ComplexMatrix sample_matrix(const EnsembleModel& m, RngState& rng) {
  using K = EnsembleModel::Kind;
  switch (m.kind) {
    case K::Gue:
      return sample_gue(rng, m.n, m.c);
    case K::Lue:
      if (spectral_only(m)) {
        // Unitarily invariant matrix with the bidiagonal-model spectrum.
        const std::vector<double> ev = sample_lue(rng, m.n, m.a, m.c);
        const ComplexMatrix U = sample_haar_unitary(rng, m.n);
        ComplexMatrix r = U * ComplexMatrix::diagonal(ev) * U.adjoint();
        r.hermitian = true;
        return r;
      }
      return sample_lue_matrix(rng, m.n, static_cast<int>(m.a), m.c);
    case K::Jue: {
      const JueTruncation t = jue_truncation(m.n, static_cast<int>(m.a), static_cast<int>(m.b));
      const ComplexMatrix B = sample_haar_unitary(rng, t.unitary_size).block(t.block_rows, t.block_cols);
      ComplexMatrix r = B * B.adjoint();
      for (int i = 0; i < r.rows(); ++i)
        for (int j = i + 1; j < r.cols(); ++j) r(j, i) = std::conj(r(i, j));
      for (int i = 0; i < r.rows(); ++i) r(i, i) = r(i, i).real();
      r.hermitian = true;
      return r;
    }
    case K::Ginibre:
      return sample_ginibre(rng, m.n, m.m);
    case K::Prod: {
      ComplexMatrix r = sample_matrix(*m.children.front(), rng);
      for (std::size_t i = 1; i < m.children.size(); ++i) r = r * sample_matrix(*m.children[i], rng);
      r.hermitian = false;
      return r;
    }
    case K::Sum: {
      ComplexMatrix r = sample_matrix(*m.children.front(), rng);
      for (std::size_t i = 1; i < m.children.size(); ++i) r = r + sample_matrix(*m.children[i], rng);
      r.hermitian = m.hermitian;
      return r;
    }
    case K::Dilate: {
      ComplexMatrix r = m.c * sample_matrix(*m.children.front(), rng);
      r.hermitian = m.hermitian;
      return r;
    }
    case K::Shift: {
      ComplexMatrix r = sample_matrix(*m.children.front(), rng);
      for (int i = 0; i < r.rows(); ++i) r(i, i) += m.c;
      return r;
    }
    default:
      throw DomainError("model: node does not produce a matrix");
  }
}

}  // namespace

std::string EnsembleModel::to_string() const {
  switch (kind) {
    case Kind::Gue:
      return "gue(" + std::to_string(n) + ",c=" + num(c) + ")";
    case Kind::Lue:
      return "lue(" + std::to_string(n) + ",a=" + num(a) + ",c=" + num(c) + ")";
    case Kind::Jue:
      return "jue(" + std::to_string(n) + ",a=" + num(a) + ",b=" + num(b) + ")";
    case Kind::Ginibre:
      return "ginibre(" + std::to_string(n) + "," + std::to_string(m) + ")";
    case Kind::Prod:
    case Kind::Sum: {
      std::string s = kind == Kind::Prod ? "prod(" : "sum(";
      for (std::size_t i = 0; i < children.size(); ++i) s += (i ? "," : "") + children[i]->to_string();
      return s + ")";
    }
    case Kind::Dilate:
      return "dilate(" + num(c) + "," + children.front()->to_string() + ")";
    case Kind::Shift:
      return "shift(" + num(c) + "," + children.front()->to_string() + ")";
    case Kind::Ssv:
      return "ssv(" + children.front()->to_string() + ")";
    case Kind::Ev:
      return "ev(" + children.front()->to_string() + ")";
  }
  return {};
}

EnsembleModel parse_model(std::string_view text) { return Parser(text).parse(); }

std::vector<double> sample_points(const EnsembleModel& model, RngState& rng) {
  using K = EnsembleModel::Kind;
  if (!model.yields_points()) throw DomainError("model: terminal node must be ev(...) or ssv(...)");
  switch (model.kind) {
    case K::Ssv:
      return squared_singular_values(sample_matrix(*model.children.front(), rng));
    case K::Ev: {
      const EnsembleModel& k = *model.children.front();
      if (k.kind == K::Lue) return sample_lue(rng, k.n, k.a, k.c);
      if (k.kind == K::Jue) return sample_jue(rng, k.n, static_cast<int>(k.a), static_cast<int>(k.b));
      return hermitian_eigenvalues(sample_matrix(k, rng));
    }
    case K::Dilate: {
      std::vector<double> x = sample_points(*model.children.front(), rng);
      for (double& v : x) v *= model.c;
      return x;
    }
    case K::Shift: {
      std::vector<double> x = sample_points(*model.children.front(), rng);
      for (double& v : x) v += model.c;
      return x;
    }
    default:
      throw DomainError("model: terminal node must be ev(...) or ssv(...)");
  }
}

namespace {

struct BatchStats {
  long long count = 0;
  std::vector<double> mean, m2;
};

BatchStats run_batch(const EnsembleModel& model, int degree, long long size, std::uint64_t seed, std::uint64_t batch) {
  RngState rng = RngState::split(seed, batch);
  BatchStats st;
  st.mean.assign(degree + 1, 0.0);
  st.m2.assign(degree + 1, 0.0);
  std::vector<double> c(degree + 1);
  for (long long s = 0; s < size; ++s) {
    const std::vector<double> x = sample_points(model, rng);
    if (static_cast<int>(x.size()) != degree)
      throw DomainError("expected_char_poly: model yields " + std::to_string(x.size()) + " points, degree is " +
                        std::to_string(degree));
    std::fill(c.begin(), c.end(), 0.0);
    c[0] = 1.0;
    for (int k = 0; k < degree; ++k) {
      for (int j = k + 1; j >= 1; --j) c[j] = c[j - 1] - x[k] * c[j];
      c[0] = -x[k] * c[0];
    }
    ++st.count;
    for (int j = 0; j <= degree; ++j) {
      const double d = c[j] - st.mean[j];
      st.mean[j] += d / static_cast<double>(st.count);
      st.m2[j] += d * (c[j] - st.mean[j]);
    }
  }
  return st;
}

}  // namespace

CharPolyEstimate expected_char_poly(const EnsembleModel& model, int degree, long long samples, std::uint64_t seed,
                                    int threads) {
  if (!model.yields_points()) throw DomainError("expected_char_poly: terminal node must be ev(...) or ssv(...)");
  if (degree != model.rows)
    throw DomainError("expected_char_poly: model yields " + std::to_string(model.rows) + " points, degree is " +
                      std::to_string(degree));
  if (samples < 2) throw DomainError("expected_char_poly: need at least 2 samples");
  if (threads < 1) throw DomainError("expected_char_poly: threads must be >= 1");

  const long long nb = (samples + kBatchSize - 1) / kBatchSize;
  std::vector<BatchStats> stats(static_cast<std::size_t>(nb));
  std::atomic<long long> next{0};
  std::exception_ptr err;
  std::mutex err_mu;
  auto worker = [&] {
    while (true) {
      const long long b = next.fetch_add(1);
      if (b >= nb) return;
      try {
        const long long size = std::min<long long>(kBatchSize, samples - b * kBatchSize);
        stats[b] = run_batch(model, degree, size, seed, static_cast<std::uint64_t>(b));
      } catch (...) {
        std::lock_guard<std::mutex> lk(err_mu);
        if (!err) err = std::current_exception();
        next = nb;
      }
    }
  };
  const int nt = static_cast<int>(std::min<long long>(threads, nb));
  if (nt <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < nt; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (err) std::rethrow_exception(err);

  // Ordered pairwise combination of batch moments.
  CharPolyEstimate out;
  out.seed = seed;
  out.batches = static_cast<int>(nb);
  std::vector<double> mean(degree + 1, 0.0), m2(degree + 1, 0.0);
  long long n = 0;
  for (const BatchStats& st : stats) {
    const long long nn = n + st.count;
    for (int j = 0; j <= degree; ++j) {
      const double d = st.mean[j] - mean[j];
      mean[j] += d * static_cast<double>(st.count) / static_cast<double>(nn);
      m2[j] += st.m2[j] + d * d * static_cast<double>(n) * static_cast<double>(st.count) / static_cast<double>(nn);
    }
    n = nn;
    out.batch_means.push_back(st.mean);
    out.batch_sizes.push_back(st.count);
  }
  out.samples = n;
  out.coeffs = mean;
  out.coeffs[degree] = 1.0;
  out.stderrs.resize(degree + 1);
  for (int j = 0; j <= degree; ++j)
    out.stderrs[j] = std::sqrt(m2[j] / static_cast<double>(n - 1)) / std::sqrt(static_cast<double>(n));
  out.mean = Poly(out.coeffs);
  return out;
}

}  // namespace ffmop
