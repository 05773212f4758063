#include "qhi/asymptotics.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <numbers>

#include "qhi/errors.hpp"

namespace qhi {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kRStep = kPi * kPi / 16;
constexpr double kCStep = kPi * kPi / 4;

struct LineFit {
  double slope = 0, intercept = 0, slopeError = 0;
  std::vector<double> residuals;
};

LineFit weightedLine(const std::vector<double>& x, const std::vector<double>& y, const std::vector<double>& w) {
  const size_t n = x.size();
  double sw = 0, sx = 0, sy = 0;
  for (size_t i = 0; i < n; ++i) {
    sw += w[i];
    sx += w[i] * x[i];
    sy += w[i] * y[i];
  }
  double mx = sx / sw, my = sy / sw, sxx = 0, sxy = 0;
  for (size_t i = 0; i < n; ++i) {
    sxx += w[i] * (x[i] - mx) * (x[i] - mx);
    sxy += w[i] * (x[i] - mx) * (y[i] - my);
  }
  LineFit f;
  if (sxx == 0) fail(ErrorKind::InvalidArgument, "fit needs at least two distinct N");
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double ss = 0;
  for (size_t i = 0; i < n; ++i) {
    double r = y[i] - (f.slope * x[i] + f.intercept);
    f.residuals.push_back(r);
    ss += w[i] * r * r;
  }
  // weights are relative, so normalize them to the sample count
  f.slopeError = n > 2 ? std::sqrt(ss / (n - 2) / sxx) : 0.0;
  return f;
}

// apply the lattice shift (a, b, c)
AnsatzParameters shifted(const AnsatzParameters& p, long long a, long long b, long long c) {
  AnsatzParameters q = p;
  q.R += a * kRStep;
  q.C += static_cast<double>(b - a) * kCStep;
  q.D *= std::polar(1.0, 2 * kPi * (a / 8.0 + (b - a) / 2.0 - c));
  return q;
}

}  // namespace

GrowthFit fitGrowth(const std::vector<GrowthSample>& samples) {
  if (samples.size() < 2) fail(ErrorKind::InvalidArgument, "growth fit needs at least two samples");
  GrowthFit g;
  g.samples = samples;
  std::vector<double> xk, yk, xp, yp, w;
  g.nMin = samples.front().N;
  g.nMax = samples.front().N;
  for (const auto& s : samples) {
    double N = s.N;
    xk.push_back(N * N / (2 * kPi));
    yk.push_back(s.logAbsK);
    xp.push_back(N / (2 * kPi));
    yp.push_back(s.logAbsPsi);
    w.push_back(N);
    g.nMin = std::min(g.nMin, s.N);
    g.nMax = std::max(g.nMax, s.N);
  }
  LineFit k = weightedLine(xk, yk, w);
  g.slope = k.slope;
  g.slopeError = k.slopeError;
  g.intercept = k.intercept;
  g.residuals = k.residuals;
  LineFit p = weightedLine(xp, yp, w);
  g.psiSlope = p.slope;
  g.psiSlopeError = p.slopeError;
  return g;
}

GrowthFit sweep(const Triangulation& T, const Decoration<Complex>& D, const std::vector<int>& Ns,
                const StateSumOptions& opt) {
  std::vector<GrowthSample> samples;
  for (int N : Ns) {
    auto r = evaluate(T, D, RootSystem::make(N), opt);
    samples.push_back({N, r.k.logAbs(), r.psi.logAbs(), r.k});
  }
  return fitGrowth(samples);
}

int maxFeasibleN(const Triangulation& T, const std::vector<Branching>& b, double budget, int nMax) {
  int best = 0;
  for (int N = 3; N <= nMax; N += 2) {
    try {
      planStateSum(T, b, N, budget);
      best = N;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::BudgetExceeded) throw;
      break;
    }
  }
  return best;
}

AnsatzParameters canonicalBranch(const AnsatzParameters& p) {
  long long a = static_cast<long long>(std::floor(p.R.real() / kRStep));
  AnsatzParameters q = shifted(p, -a, -a, 0);
  long long b = static_cast<long long>(std::floor(q.C.real() / kCStep));
  q = shifted(q, 0, -b, 0);
  // arg D is normalized by std::arg itself; snap tiny negative overshoots
  if (q.R.real() < 0) q.R = {0, q.R.imag()};
  if (q.C.real() < 0) q.C = {0, q.C.imag()};
  return q;
}

AnsatzParameters branchNearest(const AnsatzParameters& p, double reference) {
  AnsatzParameters q = canonicalBranch(p);
  long long a = std::llround((reference - q.R.real()) / kRStep);
  return shifted(q, a, a, 0);
}

ScaledComplex ansatzSample(const AnsatzParameters& p, int N) {
  Complex L = 8.0 * N * (p.C + static_cast<double>(N) * p.R) / Complex(0, 2 * kPi) + std::log(p.D);
  return ScaledComplex{std::polar(1.0, std::remainder(L.imag(), 2 * kPi)), L.real()};
}

ComplexFitProbe fitAnsatz(const std::vector<int>& Ns, const std::vector<ScaledComplex>& k8) {
  const size_t n = Ns.size();
  if (n < 4 || k8.size() != n) fail(ErrorKind::InvalidArgument, "ansatz fit needs at least four samples");
  for (size_t i = 0; i < n; ++i) {
    if (Ns[i] % 2 == 0) fail(ErrorKind::InvalidArgument, "ansatz fit expects odd N");
    if (i > 0 && Ns[i] != Ns[i - 1] + 2) fail(ErrorKind::InvalidArgument, "ansatz fit expects consecutive odd N");
  }
  ComplexFitProbe out;
  out.Ns = Ns;
  out.k8 = k8;
  // continue the phase by quadratic extrapolation from the previous three samples
  std::vector<double> psi(n);
  for (size_t i = 0; i < n; ++i) {
    double phi = k8[i].arg();
    if (i < 3) {
      psi[i] = phi;
      continue;
    }
    double pred = psi[i - 3] - 3 * psi[i - 2] + 3 * psi[i - 1];  // equal spacing
    double m = std::round((pred - phi) / (2 * kPi));
    psi[i] = phi + 2 * kPi * m;
    if (std::abs(psi[i] - pred) > kPi / 2)
      fail(ErrorKind::PhaseUnwrapFailure, "phase jump at N = " + std::to_string(Ns[i]) + " is ambiguous");
  }
  out.unwrapped = psi;

  Eigen::MatrixXd A(n, 3);
  Eigen::VectorXd re(n), im(n);
  for (size_t i = 0; i < n; ++i) {
    double N = Ns[i];
    A(i, 0) = 8 * N / (2 * kPi);
    A(i, 1) = 8 * N * N / (2 * kPi);
    A(i, 2) = 1;
    re(i) = k8[i].logAbs();
    im(i) = psi[i];
  }
  auto qr = A.colPivHouseholderQr();
  Eigen::Vector3d xr = qr.solve(re);  // (Im C, Im R, log|D|)
  Eigen::Vector3d xi = qr.solve(im);  // (-Re C, -Re R, arg D)
  AnsatzParameters p;
  p.C = {-xi(0), xr(0)};
  p.R = {-xi(1), xr(1)};
  p.D = std::polar(std::exp(xr(2)), xi(2));
  Eigen::VectorXd rr = A * xr - re, ri = A * xi - im;
  out.residual = std::sqrt((rr.squaredNorm() + ri.squaredNorm()) / n);
  out.fit = canonicalBranch(p);
  return out;
}

ComplexFitProbe complexProbe(const Triangulation& T, const Decoration<Complex>& D, const std::vector<int>& Ns,
                             const StateSumOptions& opt) {
  std::vector<ScaledComplex> k8;
  for (int N : Ns) k8.push_back(evaluate(T, D, RootSystem::make(N), opt).k.pow(8));
  return fitAnsatz(Ns, k8);
}

}  // namespace qhi
