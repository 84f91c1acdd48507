#ifndef JSCC_MATRIX_HPP
#define JSCC_MATRIX_HPP

#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "jscc/error.hpp"

namespace jscc {

/// Dense square matrix, row-major. For transition matrices the row is the
/// "to" state and the column the "from" state.
class SquareMatrix {
public:
  SquareMatrix() = default;

  explicit SquareMatrix(std::size_t dim, double fill = 0.0)
      : dim_(dim), data_(dim * dim, fill) {}

  SquareMatrix(std::initializer_list<std::initializer_list<double>> rows) {
    dim_ = rows.size();
    data_.reserve(dim_ * dim_);
    for (const auto& row : rows) {
      if (row.size() != dim_) {
        throw DomainError("SquareMatrix: rows must all have length " + std::to_string(dim_));
      }
      data_.insert(data_.end(), row.begin(), row.end());
    }
  }

  static SquareMatrix from_rows(const std::vector<std::vector<double>>& rows) {
    SquareMatrix m(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != rows.size()) {
        throw DomainError("SquareMatrix: row " + std::to_string(i) + " has length " +
                          std::to_string(rows[i].size()) + ", expected " +
                          std::to_string(rows.size()));
      }
      for (std::size_t j = 0; j < rows.size(); ++j) m(i, j) = rows[i][j];
    }
    return m;
  }

  static SquareMatrix identity(std::size_t dim) {
    SquareMatrix m(dim);
    for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
    return m;
  }

  std::size_t dim() const noexcept { return dim_; }

  double& operator()(std::size_t row, std::size_t col) { return data_[row * dim_ + col]; }
  double operator()(std::size_t row, std::size_t col) const { return data_[row * dim_ + col]; }

  std::span<const double> data() const noexcept { return data_; }

  SquareMatrix transposed() const {
    SquareMatrix t(dim_);
    for (std::size_t i = 0; i < dim_; ++i)
      for (std::size_t j = 0; j < dim_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  SquareMatrix scaled(double c) const {
    SquareMatrix s = *this;
    for (double& x : s.data_) x *= c;
    return s;
  }

  std::vector<double> apply(std::span<const double> v) const {
    std::vector<double> out(dim_, 0.0);
    for (std::size_t i = 0; i < dim_; ++i) {
      double acc = 0.0;
      for (std::size_t j = 0; j < dim_; ++j) acc += (*this)(i, j) * v[j];
      out[i] = acc;
    }
    return out;
  }

  bool operator==(const SquareMatrix&) const = default;

private:
  std::size_t dim_ = 0;
  std::vector<double> data_;
};

/// Column-stochastic nonnegative matrix: entry (to, from) = W(to | from).
class StochasticMatrix {
public:
  static constexpr double kTolerance = 1e-12;

  StochasticMatrix() = default;

  explicit StochasticMatrix(SquareMatrix m) : m_(std::move(m)) {
    if (m_.dim() == 0) throw DomainError("StochasticMatrix: dimension must be at least 1");
    for (std::size_t from = 0; from < m_.dim(); ++from) {
      double sum = 0.0;
      for (std::size_t to = 0; to < m_.dim(); ++to) {
        const double x = m_(to, from);
        if (!(x >= 0.0) || !std::isfinite(x)) {
          throw DomainError("StochasticMatrix: entry (" + std::to_string(to) + ", " +
                            std::to_string(from) + ") is negative or not finite");
        }
        sum += x;
      }
      if (std::abs(sum - 1.0) > kTolerance) {
        throw DomainError("StochasticMatrix: column " + std::to_string(from) + " sums to " +
                          std::to_string(sum) + ", expected 1");
      }
    }
  }

  StochasticMatrix(std::initializer_list<std::initializer_list<double>> rows)
      : StochasticMatrix(SquareMatrix(rows)) {}

  std::size_t dim() const noexcept { return m_.dim(); }
  double operator()(std::size_t to, std::size_t from) const { return m_(to, from); }
  const SquareMatrix& matrix() const noexcept { return m_; }

private:
  SquareMatrix m_;
};

/// Joint probability table P(x, y): row index x, column index y.
class JointTable {
public:
  JointTable() = default;

  JointTable(std::size_t x_size, std::size_t y_size)
      : x_size_(x_size), y_size_(y_size), p_(x_size * y_size, 0.0) {}

  JointTable(std::size_t x_size, std::size_t y_size, std::vector<double> p)
      : x_size_(x_size), y_size_(y_size), p_(std::move(p)) {
    if (p_.size() != x_size_ * y_size_) throw DomainError("JointTable: size mismatch");
    validate();
  }

  static JointTable from_rows(const std::vector<std::vector<double>>& rows) {
    if (rows.empty()) throw DomainError("JointTable: empty");
    JointTable t(rows.size(), rows.front().size());
    for (std::size_t x = 0; x < rows.size(); ++x) {
      if (rows[x].size() != t.y_size_) throw DomainError("JointTable: ragged rows");
      for (std::size_t y = 0; y < t.y_size_; ++y) t(x, y) = rows[x][y];
    }
    t.validate();
    return t;
  }

  /// Distribution on X alone (trivial Y).
  static JointTable single(std::span<const double> px) {
    return JointTable(px.size(), 1, std::vector<double>(px.begin(), px.end()));
  }

  std::size_t x_size() const noexcept { return x_size_; }
  std::size_t y_size() const noexcept { return y_size_; }

  double& operator()(std::size_t x, std::size_t y) { return p_[x * y_size_ + y]; }
  double operator()(std::size_t x, std::size_t y) const { return p_[x * y_size_ + y]; }

  std::vector<double> y_marginal() const {
    std::vector<double> py(y_size_, 0.0);
    for (std::size_t x = 0; x < x_size_; ++x)
      for (std::size_t y = 0; y < y_size_; ++y) py[y] += (*this)(x, y);
    return py;
  }

  std::vector<double> x_marginal() const {
    std::vector<double> px(x_size_, 0.0);
    for (std::size_t x = 0; x < x_size_; ++x)
      for (std::size_t y = 0; y < y_size_; ++y) px[x] += (*this)(x, y);
    return px;
  }

  void validate(double tol = 1e-10) const {
    double sum = 0.0;
    for (double v : p_) {
      if (!(v >= 0.0) || !std::isfinite(v)) throw DomainError("JointTable: negative entry");
      sum += v;
    }
    if (std::abs(sum - 1.0) > tol) {
      throw DomainError("JointTable: entries sum to " + std::to_string(sum));
    }
  }

private:
  std::size_t x_size_ = 0;
  std::size_t y_size_ = 0;
  std::vector<double> p_;
};

inline void validate_distribution(std::span<const double> p, const char* what,
                                  double tol = 1e-12) {
  double sum = 0.0;
  for (double v : p) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw DomainError(std::string(what) + ": negative or non-finite probability");
    }
    sum += v;
  }
  if (std::abs(sum - 1.0) > tol) {
    throw DomainError(std::string(what) + ": probabilities sum to " + std::to_string(sum));
  }
}

}  // namespace jscc

#endif  // JSCC_MATRIX_HPP
