#pragma once

#include <string>

#include "aluthge/polar.hpp"

namespace aluthge {

struct TransformResult {
  ComplexMatrix transformed;
  PolarFactors factors;
  std::string pair;
};

/// f(|A|) U g(|A|) from already computed polar factors.
inline TransformResult aluthge_general(const PolarFactors& factors, const FunctionPair& pair) {
  const ComplexMatrix f = factors.apply(pair.f);
  const ComplexMatrix g = factors.apply(pair.g);
  return {multiply(multiply(f, factors.isometry), g), factors, pair.label};
}

/// Generalized Aluthge transform f(|A|) U g(|A|).
inline TransformResult aluthge_general(const ComplexMatrix& a, const FunctionPair& pair) {
  return aluthge_general(polar_decompose(a), pair);
}

/// |A|^t U |A|^(1-t); t = 1 gives the Duggal transform |A| U.
inline TransformResult aluthge_t(const ComplexMatrix& a, double t) {
  return aluthge_general(a, make_power_pair(t));
}

/// [[a, b], [c, d]] for n x n blocks.
inline ComplexMatrix block2x2(const ComplexMatrix& a, const ComplexMatrix& b, const ComplexMatrix& c,
                              const ComplexMatrix& d) {
  const auto n = a.rows();
  for (const ComplexMatrix* m : {&a, &b, &c, &d})
    if (m->rows() != n || m->cols() != n)
      throw InvalidInput("block2x2: all blocks must be " + std::to_string(n) + "x" + std::to_string(n));
  Dense out(2 * n, 2 * n);
  out << a.dense(), b.dense(), c.dense(), d.dense();
  return ComplexMatrix(std::move(out));
}

/// [[0, a], [b, 0]].
inline ComplexMatrix offdiag_embed(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (!a.square() || !b.square() || a.rows() != b.rows())
    throw InvalidInput("offdiag_embed: a and b must be square of equal size");
  const auto zero = ComplexMatrix::zero(a.rows(), a.rows());
  return block2x2(zero, a, b, zero);
}

}  // namespace aluthge
