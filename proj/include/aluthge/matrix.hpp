#pragma once

#include <cmath>
#include <complex>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "aluthge/errors.hpp"

namespace aluthge {

using Complex = std::complex<double>;
using Dense = Eigen::MatrixXcd;
using Index = Eigen::Index;

/// Dense complex matrix with finite entries. Immutable once built; all
/// library operations return new values.
class ComplexMatrix {
 public:
  explicit ComplexMatrix(Dense entries) : m_(std::move(entries)) { validate(); }

  ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows) {
    const auto r = static_cast<Index>(rows.size());
    const auto c = r == 0 ? Index{0} : static_cast<Index>(rows.begin()->size());
    m_.resize(r, c);
    Index i = 0;
    for (const auto& row : rows) {
      if (static_cast<Index>(row.size()) != c) throw InvalidInput("ragged matrix literal");
      Index j = 0;
      for (const auto& v : row) m_(i, j++) = v;
      ++i;
    }
    validate();
  }

  static ComplexMatrix identity(Index n) { return ComplexMatrix(Dense::Identity(n, n)); }
  static ComplexMatrix zero(Index rows, Index cols) { return ComplexMatrix(Dense::Zero(rows, cols)); }

  static ComplexMatrix from_row_major(Index rows, Index cols, std::span<const Complex> entries) {
    if (rows <= 0 || cols <= 0) throw InvalidInput("matrix dimensions must be positive");
    if (static_cast<Index>(entries.size()) != rows * cols)
      throw InvalidInput("entries length " + std::to_string(entries.size()) + " != rows*cols " +
                         std::to_string(rows * cols));
    Dense m(rows, cols);
    for (Index i = 0; i < rows; ++i)
      for (Index j = 0; j < cols; ++j) m(i, j) = entries[static_cast<std::size_t>(i * cols + j)];
    return ComplexMatrix(std::move(m));
  }

  Index rows() const noexcept { return m_.rows(); }
  Index cols() const noexcept { return m_.cols(); }
  bool square() const noexcept { return m_.rows() == m_.cols(); }
  Complex operator()(Index i, Index j) const { return m_(i, j); }
  const Dense& dense() const noexcept { return m_; }

  std::vector<Complex> row_major() const {
    std::vector<Complex> out;
    out.reserve(static_cast<std::size_t>(m_.size()));
    for (Index i = 0; i < m_.rows(); ++i)
      for (Index j = 0; j < m_.cols(); ++j) out.push_back(m_(i, j));
    return out;
  }

  friend bool operator==(const ComplexMatrix& a, const ComplexMatrix& b) {
    return a.rows() == b.rows() && a.cols() == b.cols() && a.m_ == b.m_;
  }

  friend ComplexMatrix operator+(const ComplexMatrix& a, const ComplexMatrix& b) {
    require_same_shape(a, b, "+");
    return ComplexMatrix(a.m_ + b.m_);
  }
  friend ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b) {
    require_same_shape(a, b, "-");
    return ComplexMatrix(a.m_ - b.m_);
  }
  friend ComplexMatrix operator*(Complex s, const ComplexMatrix& a) { return ComplexMatrix(s * a.m_); }

 private:
  static void require_same_shape(const ComplexMatrix& a, const ComplexMatrix& b, const char* op) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
      throw InvalidInput(std::string("shape mismatch in '") + op + "': " + shape(a) + " vs " + shape(b));
  }
  static std::string shape(const ComplexMatrix& a) {
    return std::to_string(a.rows()) + "x" + std::to_string(a.cols());
  }

  void validate() const {
    if (m_.rows() <= 0 || m_.cols() <= 0) throw InvalidInput("matrix dimensions must be positive");
    for (Index k = 0; k < m_.size(); ++k) {
      const Complex v = m_.data()[k];
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
        throw NonFiniteValue("matrix entry is not finite");
    }
  }

  Dense m_;
};

inline ComplexMatrix multiply(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows())
    throw InvalidInput("multiply: a.cols (" + std::to_string(a.cols()) + ") != b.rows (" +
                       std::to_string(b.rows()) + ")");
  return ComplexMatrix(a.dense() * b.dense());
}

inline ComplexMatrix adjoint(const ComplexMatrix& a) { return ComplexMatrix(a.dense().adjoint()); }

inline double frobenius_norm(const ComplexMatrix& a) { return a.dense().norm(); }

inline void require_square(const ComplexMatrix& a, const char* op) {
  if (!a.square())
    throw InvalidInput(std::string(op) + ": square matrix required, got " + std::to_string(a.rows()) +
                       "x" + std::to_string(a.cols()));
}

}  // namespace aluthge
