#pragma once

#include <string>
#include <vector>

#include "qhi/scalar.hpp"

namespace qhi {

// mantissa * exp(logScale); keeps products of many tensor entries inside double range
struct ScaledComplex {
  Complex mantissa{0};
  double logScale = 0;

  static ScaledComplex from(Complex z);
  ScaledComplex normalized() const;
  Complex value() const;  // may overflow to inf
  double logAbs() const;  // -inf for zero
  double arg() const { return std::arg(mantissa); }
  ScaledComplex operator*(const ScaledComplex& o) const;
  ScaledComplex operator/(const ScaledComplex& o) const;
  ScaledComplex pow(int n) const;
  ScaledComplex conj() const { return {std::conj(mantissa), logScale}; }
};

// |a - b| / max(|a|, |b|), computed without leaving log scale
double relativeDifference(const ScaledComplex& a, const ScaledComplex& b);

// Dense tensor whose legs all have dimension N; data is row-major in leg order.
struct Tensor {
  std::vector<int> legs;
  std::vector<Complex> data;
  double logScale = 0;
};

// Tensors are numbered 0..n-1; the result of step i gets number n+i.
struct ContractionStep {
  int left = -1, right = -1;
  std::vector<int> legs;  // open legs of the result
  double cost = 0;        // N^{|legs(left) U legs(right)|}
};

struct ContractionPlan {
  int inputs = 0;
  int N = 0;
  std::vector<ContractionStep> steps;
  double traceCost = 0;  // self-contractions inside single input tensors
  double cost = 0;       // traceCost + sum of step costs
  double naiveCost = 0;  // N^{#labels} * #tensors
  double largest = 0;    // elements of the largest tensor the plan creates
  std::string method;    // "exhaustive" or "greedy"
};

enum class PlanMethod { Auto, Greedy, Exhaustive };

// Every label must occur exactly twice over the network (a closed network). Exhaustive subset
// search is used up to 8 tensors under Auto; above that Auto keeps the cheaper of pairwise greedy
// and blob sweeps from several starts. Throws BudgetExceeded when the largest
// intermediate has more than `budget` elements, InvalidArgument on malformed labels.
ContractionPlan planContraction(const std::vector<std::vector<int>>& legs, int N, double budget = 1e8,
                                PlanMethod method = PlanMethod::Auto);

// Execute a plan; the result is the scalar value of the closed network.
ScaledComplex contract(std::vector<Tensor> tensors, const ContractionPlan& plan);

// Pairwise contraction over shared labels (repeated labels inside one tensor are traced first).
Tensor contractPair(const Tensor& a, const Tensor& b, int N);
Tensor traceSelf(const Tensor& a, int N);

}  // namespace qhi
