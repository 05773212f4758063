#pragma once

#include <optional>
#include <vector>

#include "qhi/statesum.hpp"

namespace qhi {

struct GrowthSample {
  int N = 0;
  double logAbsK = 0;    // log |K_N|
  double logAbsPsi = 0;  // log |Psi(T_N)|
  ScaledComplex k;
};

struct GrowthFit {
  std::vector<GrowthSample> samples;
  // log|K_N| ~ slope N^2/(2 pi) + intercept, weighted by N
  double slope = 0, slopeError = 0, intercept = 0;
  std::vector<double> residuals;
  // log|Psi| ~ psiSlope N/(2 pi) + c, the alternative estimator
  double psiSlope = 0, psiSlopeError = 0;
  int nMin = 0, nMax = 0;
};

// Least-squares fit of the samples (at least two). Throws InvalidArgument.
GrowthFit fitGrowth(const std::vector<GrowthSample>& samples);

// Evaluate K_N for every N in Ns and fit. Throws BudgetExceeded.
GrowthFit sweep(const Triangulation& T, const Decoration<Complex>& D, const std::vector<int>& Ns,
                const StateSumOptions& opt = {});

// Largest odd N whose contraction plan fits the budget (0 if none up to nMax).
int maxFeasibleN(const Triangulation& T, const std::vector<Branching>& b, double budget, int nMax = 41);

// 8 log K_N = 8N (C + N R)/(2 pi i) + log D. From phases alone (C, R, D) is fixed only up to
// R -> R + a pi^2/16, C -> C + (b - a) pi^2/4, arg D -> arg D + 2 pi (a/8 + (b - a)/2 - c) for
// integers a, b, c when N runs over consecutive odd values; fits are reported in the
// canonical branch 0 <= Re R < pi^2/16, 0 <= Re C < pi^2/4, -pi < arg D <= pi.
struct AnsatzParameters {
  Complex C, R, D;
};
AnsatzParameters canonicalBranch(const AnsatzParameters& p);
// the representative whose Re R is nearest to `reference`
AnsatzParameters branchNearest(const AnsatzParameters& p, double reference);

struct ComplexFitProbe {
  std::vector<int> Ns;
  std::vector<ScaledComplex> k8;   // K_N^8 samples
  std::vector<double> unwrapped;   // continued phase of K_N^8
  AnsatzParameters fit;            // canonical branch
  double residual = 0;             // rms of the complex log residual
};

// K_N^8 from the ansatz, exactly.
ScaledComplex ansatzSample(const AnsatzParameters& p, int N);

// Fit K^8 samples at consecutive odd N (at least four). Throws PhaseUnwrapFailure when the
// phase continuation is ambiguous, InvalidArgument on bad input.
ComplexFitProbe fitAnsatz(const std::vector<int>& Ns, const std::vector<ScaledComplex>& k8);

ComplexFitProbe complexProbe(const Triangulation& T, const Decoration<Complex>& D, const std::vector<int>& Ns,
                             const StateSumOptions& opt = {});

}  // namespace qhi
