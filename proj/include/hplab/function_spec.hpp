#pragma once

#include <complex>
#include <string>
#include <vector>

#include "hplab/expression.hpp"

namespace hplab {

/// One factor ((A - 1/φ)/(B - 1/φ))^{1/2} of 𝔣.
struct ParamPair {
  ComplexLiteral A;
  ComplexLiteral B;

  bool is_real() const { return A.is_real() && B.is_real(); }
};

enum class Regime {
  Real,             ///< all A_j < B_j real, ordered as in the defining class
  ConjugatePairs,   ///< at least one pair A_j = conj(B_j) not real
};

/// Parameters {A_j, B_j} plus the rational expression selecting f = r(z, 𝔣).
struct FunctionSpec {
  std::vector<ParamPair> pairs;
  ExpressionAST expression = ExpressionAST::variable(Variable::W);

  std::size_t m() const { return pairs.size(); }
  /// Classifies and validates; throws ValidationError on any violation.
  Regime validate() const;
  Regime regime() const { return validate(); }

  /// m = 1, A = -3, B = -2, f = 𝔣
  static FunctionSpec reference();
};

/// Joukowski map J(t) = (t + 1/t)/2.
std::complex<double> joukowski(std::complex<double> t);

}  // namespace hplab
