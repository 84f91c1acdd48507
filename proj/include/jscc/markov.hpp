#ifndef JSCC_MARKOV_HPP
#define JSCC_MARKOV_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "jscc/error.hpp"
#include "jscc/matrix.hpp"

namespace jscc {

/// Which eigenvector is returned: of A itself, or of its transpose.
enum class Orientation { direct, transposed };

struct PerronOptions {
  long max_iter = 1'000'000;
  double tol = 1e-12;
};

struct PerronResult {
  double eigenvalue = 0.0;
  std::vector<double> right_vector;  // min entry exactly 1
  double residual = 0.0;             // ||B v - lambda v||_inf / ||v||_inf
};

/// Same as PerronResult but the eigenvalue is kept as its logarithm.
struct LogPerronResult {
  double log_eigenvalue = 0.0;
  std::vector<double> right_vector;
  double residual = 0.0;
};

namespace detail {

inline std::vector<std::vector<char>> reachability(const SquareMatrix& a) {
  const std::size_t d = a.dim();
  std::vector<std::vector<char>> r(d, std::vector<char>(d, 0));
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) r[i][j] = (a(i, j) > 0.0 || i == j) ? 1 : 0;
  for (std::size_t k = 0; k < d; ++k)
    for (std::size_t i = 0; i < d; ++i)
      if (r[i][k])
        for (std::size_t j = 0; j < d; ++j)
          if (r[k][j]) r[i][j] = 1;
  return r;
}

inline bool irreducible(const SquareMatrix& a) {
  if (a.dim() == 1) return true;
  const auto r = reachability(a);
  for (const auto& row : r)
    for (char c : row)
      if (!c) return false;
  return true;
}

/// Period of an irreducible nonnegative matrix (gcd of cycle lengths).
inline std::size_t period(const SquareMatrix& a) {
  const std::size_t d = a.dim();
  if (d == 1) return a(0, 0) > 0.0 ? 1 : 0;
  std::vector<long> level(d, -1);
  std::vector<std::size_t> queue{0};
  level[0] = 0;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const std::size_t u = queue[head];
    for (std::size_t v = 0; v < d; ++v) {
      if (a(v, u) > 0.0 && level[v] < 0) {
        level[v] = level[u] + 1;
        queue.push_back(v);
      }
    }
  }
  long g = 0;
  for (std::size_t u = 0; u < d; ++u)
    for (std::size_t v = 0; v < d; ++v)
      if (a(v, u) > 0.0 && level[u] >= 0 && level[v] >= 0)
        g = std::gcd(g, std::abs(level[u] + 1 - level[v]));
  return static_cast<std::size_t>(g);
}

inline void check_nonnegative(const SquareMatrix& a) {
  if (a.dim() == 0) throw DomainError("perron_eigenpair: empty matrix");
  for (double x : a.data())
    if (!(x >= 0.0) || !std::isfinite(x))
      throw DomainError("perron_eigenpair: matrix must be finite and nonnegative");
}

struct IterationOutcome {
  bool converged = false;
  double eigenvalue = 0.0;
  std::vector<double> v;
};

// Power iteration on (b + shift*I) with Collatz-Wielandt bracketing.
inline IterationOutcome power_iterate(const SquareMatrix& b, double shift, long max_iter,
                                      double tol) {
  const std::size_t d = b.dim();
  std::vector<double> v(d, 1.0), y(d);
  double best_gap = std::numeric_limits<double>::infinity();
  long since_best = 0;
  IterationOutcome out;
  for (long it = 0; it < max_iter; ++it) {
    for (std::size_t i = 0; i < d; ++i) {
      double acc = shift * v[i];
      for (std::size_t j = 0; j < d; ++j) acc += b(i, j) * v[j];
      y[i] = acc;
    }
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0, ymax = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
      if (v[i] <= 0.0) {
        lo = 0.0;
        hi = std::numeric_limits<double>::infinity();
      } else {
        const double ratio = y[i] / v[i];
        lo = std::min(lo, ratio);
        hi = std::max(hi, ratio);
      }
      ymax = std::max(ymax, y[i]);
    }
    if (!(ymax > 0.0)) return out;
    for (std::size_t i = 0; i < d; ++i) v[i] = y[i] / ymax;
    const double gap = hi - lo;
    if (gap < best_gap) {
      best_gap = gap;
      since_best = 0;
    } else {
      ++since_best;
    }
    const bool tight = gap <= 8.0 * std::numeric_limits<double>::epsilon() * hi;
    const bool stalled = since_best > 200 && best_gap <= tol * hi;
    if (tight || stalled) {
      out.converged = true;
      out.eigenvalue = 0.5 * (lo + hi) - shift;
      out.v = v;
      return out;
    }
  }
  return out;
}

inline PerronResult finish(const SquareMatrix& b, std::vector<double> v, double lambda) {
  const double vmin = *std::min_element(v.begin(), v.end());
  for (double& x : v) x /= vmin;
  const double vmax = *std::max_element(v.begin(), v.end());
  double res = 0.0;
  const auto bv = b.apply(v);
  for (std::size_t i = 0; i < v.size(); ++i) res = std::max(res, std::abs(bv[i] - lambda * v[i]));
  return PerronResult{lambda, std::move(v), res / vmax};
}

}  // namespace detail

/// Dominant eigenvalue and positive eigenvector of a nonnegative matrix.
/// Irreducible matrices are always accepted; a reducible matrix is accepted
/// only when its spectral radius still has a strictly positive eigenvector
/// (e.g. the identity), otherwise ReducibleMatrix is thrown.
inline PerronResult perron_eigenpair(const SquareMatrix& a,
                                     Orientation orientation = Orientation::transposed,
                                     const PerronOptions& opts = {}) {
  detail::check_nonnegative(a);
  const SquareMatrix b = orientation == Orientation::transposed ? a.transposed() : a;
  const std::size_t d = b.dim();
  if (d == 1) {
    if (!(b(0, 0) > 0.0)) throw ReducibleMatrix("perron_eigenpair: zero 1x1 matrix");
    return PerronResult{b(0, 0), {1.0}, 0.0};
  }
  double scale = 0.0;
  for (double x : b.data()) scale = std::max(scale, x);
  if (!(scale > 0.0)) throw ReducibleMatrix("perron_eigenpair: zero matrix");
  const SquareMatrix bs = b.scaled(1.0 / scale);

  const bool irr = detail::irreducible(bs);
  const bool primitive = irr && detail::period(bs) == 1;
  // Shift by I when the plain iteration could oscillate.
  const double shift = primitive ? 0.0 : 1.0;
  const long cap = irr ? opts.max_iter : std::min<long>(opts.max_iter, 20000);
  auto outcome = detail::power_iterate(bs, shift, cap, opts.tol);
  if (!outcome.converged) {
    if (!irr) throw ReducibleMatrix("perron_eigenpair: reducible matrix without positive eigenvector");
    throw NonConvergence("perron_eigenpair: iteration cap reached before tolerance");
  }
  const double vmin = *std::min_element(outcome.v.begin(), outcome.v.end());
  if (!(vmin > 1e-300) || !(outcome.eigenvalue > 0.0)) {
    throw ReducibleMatrix("perron_eigenpair: reducible matrix without positive eigenvector");
  }
  PerronResult r = detail::finish(bs, std::move(outcome.v), outcome.eigenvalue);
  r.eigenvalue *= scale;
  r.residual *= scale;
  return r;
}

/// Perron pair of the matrix with entries exp(log_a(i,j)); -inf entries are zeros.
/// The spectral radius is returned as a logarithm so huge or tiny tilted
/// matrices stay representable.
inline LogPerronResult perron_log_eigenpair(const SquareMatrix& log_a,
                                            Orientation orientation = Orientation::transposed,
                                            const PerronOptions& opts = {}) {
  double m = -std::numeric_limits<double>::infinity();
  for (double x : log_a.data()) {
    if (std::isnan(x) || x == std::numeric_limits<double>::infinity())
      throw DomainError("perron_log_eigenpair: invalid log entry");
    m = std::max(m, x);
  }
  if (!std::isfinite(m)) throw ReducibleMatrix("perron_log_eigenpair: zero matrix");
  SquareMatrix a(log_a.dim());
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = 0; j < a.dim(); ++j) a(i, j) = std::exp(log_a(i, j) - m);
  PerronResult r = perron_eigenpair(a, orientation, opts);
  return LogPerronResult{m + std::log(r.eigenvalue), std::move(r.right_vector), r.residual};
}

/// Stationary distribution of an irreducible aperiodic column-stochastic matrix.
inline std::vector<double> stationary_distribution(const StochasticMatrix& w) {
  const SquareMatrix& a = w.matrix();
  const std::size_t d = a.dim();
  if (!detail::irreducible(a)) throw ReducibleMatrix("stationary_distribution: reducible chain");
  if (detail::period(a) != 1) throw Periodic("stationary_distribution: periodic chain");
  // Solve (W - I) pi = 0 with the last equation replaced by sum(pi) = 1.
  std::vector<std::vector<double>> m(d, std::vector<double>(d + 1, 0.0));
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) m[i][j] = a(i, j) - (i == j ? 1.0 : 0.0);
  }
  for (std::size_t j = 0; j < d; ++j) m[d - 1][j] = 1.0;
  m[d - 1][d] = 1.0;
  for (std::size_t col = 0; col < d; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < d; ++r)
      if (std::abs(m[r][col]) > std::abs(m[piv][col])) piv = r;
    std::swap(m[col], m[piv]);
    const double p = m[col][col];
    if (p == 0.0) throw ReducibleMatrix("stationary_distribution: singular system");
    for (std::size_t r = 0; r < d; ++r) {
      if (r == col) continue;
      const double f = m[r][col] / p;
      if (f == 0.0) continue;
      for (std::size_t c = col; c <= d; ++c) m[r][c] -= f * m[col][c];
    }
  }
  std::vector<double> pi(d);
  double sum = 0.0;
  for (std::size_t i = 0; i < d; ++i) {
    pi[i] = std::max(0.0, m[i][d] / m[i][i]);
    sum += pi[i];
  }
  for (double& x : pi) x /= sum;
  return pi;
}

/// The two-state matrix W(p,q) = [[1-p, q], [p, 1-q]] (column-stochastic).
inline StochasticMatrix binary_chain(double p, double q) {
  if (!(p >= 0.0 && p <= 1.0 && q >= 0.0 && q <= 1.0))
    throw DomainError("binary_chain: parameters must lie in [0, 1]");
  return StochasticMatrix{{1.0 - p, q}, {p, 1.0 - q}};
}

/// Markov source on M.
class SourceChain {
public:
  explicit SourceChain(StochasticMatrix w) : w_(std::move(w)), init_(stationary_distribution(w_)) {}

  SourceChain(StochasticMatrix w, std::vector<double> initial)
      : w_(std::move(w)), init_(std::move(initial)) {
    if (init_.size() != w_.dim()) throw DomainError("SourceChain: initial has wrong length");
    validate_distribution(init_, "SourceChain initial");
  }

  std::size_t m_size() const noexcept { return w_.dim(); }
  const StochasticMatrix& matrix() const noexcept { return w_; }
  const std::vector<double>& initial() const noexcept { return init_; }

private:
  StochasticMatrix w_;
  std::vector<double> init_;
};

/// Joint Markov process on X x Z; state index is z * x_size + x and X is Z/|X|Z.
class JointChannelChain {
public:
  JointChannelChain(std::size_t x_size, std::size_t z_size, StochasticMatrix w)
      : x_size_(x_size), z_size_(z_size), w_(std::move(w)) {
    check_dims();
    init_ = stationary_distribution(w_);
  }

  JointChannelChain(std::size_t x_size, std::size_t z_size, StochasticMatrix w,
                    std::vector<double> initial)
      : x_size_(x_size), z_size_(z_size), w_(std::move(w)), init_(std::move(initial)) {
    check_dims();
    if (init_.size() != w_.dim()) throw DomainError("JointChannelChain: initial has wrong length");
    validate_distribution(init_, "JointChannelChain initial");
  }

  /// Additive noise chain (singleton Z).
  static JointChannelChain additive(StochasticMatrix w) {
    const std::size_t d = w.dim();
    return JointChannelChain(d, 1, std::move(w));
  }

  static JointChannelChain additive(StochasticMatrix w, std::vector<double> initial) {
    const std::size_t d = w.dim();
    return JointChannelChain(d, 1, std::move(w), std::move(initial));
  }

  /// A source viewed as a chain with singleton side information.
  static JointChannelChain from_source(const SourceChain& s) {
    return JointChannelChain(s.m_size(), 1, s.matrix(), s.initial());
  }

  std::size_t x_size() const noexcept { return x_size_; }
  std::size_t z_size() const noexcept { return z_size_; }
  std::size_t dim() const noexcept { return w_.dim(); }
  bool singleton() const noexcept { return z_size_ == 1; }
  std::size_t index(std::size_t x, std::size_t z) const noexcept { return z * x_size_ + x; }
  const StochasticMatrix& matrix() const noexcept { return w_; }
  const std::vector<double>& initial() const noexcept { return init_; }

  /// W(x, z | x', z').
  double operator()(std::size_t x, std::size_t z, std::size_t xp, std::size_t zp) const {
    return w_(index(x, z), index(xp, zp));
  }

  /// Initial law as a table with rows x and columns z.
  JointTable initial_table() const {
    JointTable t(x_size_, z_size_);
    for (std::size_t z = 0; z < z_size_; ++z)
      for (std::size_t x = 0; x < x_size_; ++x) t(x, z) = init_[index(x, z)];
    return t;
  }

  JointChannelChain with_initial(std::vector<double> initial) const {
    return JointChannelChain(x_size_, z_size_, w_, std::move(initial));
  }

private:
  void check_dims() const {
    if (x_size_ == 0 || z_size_ == 0) throw DomainError("JointChannelChain: empty alphabet");
    if (x_size_ * z_size_ != w_.dim()) {
      throw DomainError("JointChannelChain: matrix dimension " + std::to_string(w_.dim()) +
                        " does not equal x_size*z_size = " + std::to_string(x_size_ * z_size_));
    }
  }

  std::size_t x_size_;
  std::size_t z_size_;
  StochasticMatrix w_;
  std::vector<double> init_;
};

struct Assumption1Result {
  bool holds = false;
  SquareMatrix z_marginal;  // W_Z(z|z'), valid when holds
  explicit operator bool() const noexcept { return holds; }
};

struct Assumption2Result {
  bool holds = false;
  bool singleton = false;
  explicit operator bool() const noexcept { return holds; }
};

inline const std::vector<double>& default_assumption2_grid() {
  static const std::vector<double> grid{-0.05, -0.5, -1.0, -2.0, -5.0, -10.0};
  return grid;
}

/// Sum over x of W(x, z | x', z')^power, checked to be independent of x'.
/// Returns nullopt when it is not.
inline std::optional<SquareMatrix> x_summed_matrix(const JointChannelChain& c, double power,
                                                   double tol = 1e-10) {
  SquareMatrix out(c.z_size());
  for (std::size_t z = 0; z < c.z_size(); ++z) {
    for (std::size_t zp = 0; zp < c.z_size(); ++zp) {
      double first = 0.0;
      for (std::size_t xp = 0; xp < c.x_size(); ++xp) {
        double s = 0.0;
        for (std::size_t x = 0; x < c.x_size(); ++x) {
          const double w = c(x, z, xp, zp);
          if (w > 0.0) s += power == 1.0 ? w : std::pow(w, power);
        }
        if (xp == 0) {
          first = s;
        } else if (std::abs(s - first) > tol) {
          return std::nullopt;
        }
      }
      out(z, zp) = first;
    }
  }
  return out;
}

inline Assumption1Result check_assumption1(const JointChannelChain& c) {
  auto m = x_summed_matrix(c, 1.0);
  if (!m) return {};
  return Assumption1Result{true, std::move(*m)};
}

inline Assumption2Result check_assumption2(
    const JointChannelChain& c, const std::vector<double>& theta_grid = default_assumption2_grid()) {
  if (c.singleton()) return Assumption2Result{true, true};
  if (!check_assumption1(c)) return {};
  for (double t : theta_grid) {
    if (!x_summed_matrix(c, 1.0 - t)) return {};
  }
  return Assumption2Result{true, false};
}

}  // namespace jscc

#endif  // JSCC_MARKOV_HPP
