#include "qhi/quantum.hpp"

#include <cmath>
#include <cstdint>
#include <istream>
#include <ostream>

#include "qhi/errors.hpp"

namespace qhi {

RootSystem RootSystem::make(int N, double cut) {
  if (N < 3 || N % 2 == 0) fail(ErrorKind::EvenN, "N must be odd and at least 3, got " + std::to_string(N));
  return {N, cut};
}

Complex RootSystem::omega() const { return std::polar(1.0, 2 * std::numbers::pi / N); }

Complex RootSystem::omegaPow(long long k) const {
  long long r = ((k % N) + N) % N;
  return std::polar(1.0, 2 * std::numbers::pi * static_cast<double>(r) / N);
}

double RootSystem::argument(Complex z) const {
  double a = std::arg(z);
  while (a > cut) a -= 2 * std::numbers::pi;
  while (a <= cut - 2 * std::numbers::pi) a += 2 * std::numbers::pi;
  return a;
}

Complex RootSystem::log(Complex z) const { return {std::log(std::abs(z)), argument(z)}; }

Complex RootSystem::root(Complex z) const {
  if (z == Complex(0, 0)) return 0;
  return std::polar(std::pow(std::abs(z), 1.0 / N), argument(z) / N);
}

CyclicRep cyclicRep(const Borel<Complex>& z, const RootSystem& R) {
  if (z.x == Complex(0, 0)) fail(ErrorKind::NotFull, "cyclic representations need x != 0");
  return {R.root(z.t), R.root(z.x)};
}

int halfCharge(long long c, int N) {
  long long inv2 = (N + 1) / 2;
  long long r = ((c % N) + N) % N;
  return static_cast<int>((r * inv2) % N);
}

ReducedDecoration reduceModN(const Triangulation& T, const Decoration<Complex>& D, const RootSystem& R) {
  RootSystem::make(R.N, R.cut);
  ReducedDecoration out;
  out.roots = R;
  for (int s = 0; s < T.numEdges(); ++s) out.reps.push_back(cyclicRep(D.z[s], R));
  for (int t = 0; t < T.size(); ++t) {
    std::array<int, 6> h{};
    for (int e = 0; e < 6; ++e) h[e] = halfCharge(D.c[t][e], R.N);
    out.cN.push_back(h);
  }
  return out;
}

Complex cyclicDilog(Complex x, Complex y, Complex z, int n, int N) {
  if (n < 0 || n >= N) fail(ErrorKind::InvalidArgument, "state out of range");
  Complex xN = std::pow(x, N), yN = std::pow(y, N), zN = std::pow(z, N);
  double scale = std::max({1.0, std::abs(xN), std::abs(yN), std::abs(zN)});
  if (std::abs(xN + yN - zN) > 1e-10 * scale) fail(ErrorKind::ConstraintViolated, "x^N + y^N != z^N");
  const Complex w = std::polar(1.0, 2 * std::numbers::pi / N);
  Complex out = 1, wj = 1;
  for (int j = 1; j <= n; ++j) {
    wj *= w;
    Complex d = z - x * wj;
    if (std::abs(d) <= 1e-14 * (std::abs(z) + std::abs(x))) fail(ErrorKind::PoleHit, "z = x w^j");
    out *= y / d;
  }
  return out;
}

Complex qBinomial(int n, int k, Complex q) {
  if (k < 0 || k > n) return 0;
  Complex num = 1, den = 1;
  for (int j = 0; j < k; ++j) {
    num *= 1.0 - std::pow(q, n - j);
    den *= 1.0 - std::pow(q, j + 1);
  }
  return num / den;
}

namespace {

Complex ipow(Complex z, long long n) {
  bool inv = n < 0;
  unsigned long long m = inv ? -n : n;
  Complex r = 1;
  while (m) {
    if (m & 1) r *= z;
    z *= z;
    m >>= 1;
  }
  return inv ? 1.0 / r : r;
}

int weightShift(const CyclicRep& a, const CyclicRep& b, const CyclicRep& c, const RootSystem& R) {
  Complex r = c.kappa() / (a.kappa() * b.kappa());
  const int N = R.N;
  long long s = std::llround(std::arg(r) * N / (2 * std::numbers::pi));
  s = ((s % N) + N) % N;
  if (std::abs(r - R.omegaPow(s)) > 1e-8 * std::max(1.0, std::abs(r)))
    fail(ErrorKind::FormulaDomain, "edge weights do not close up around a face");
  return static_cast<int>(s);
}

struct Coefficients {
  int N;
  std::array<int, 4> s;
  CyclicRep r01, r02, r03, r12, r13, r23;
  std::vector<Complex> binom;  // binom[n*N+k]
  Complex w;

  Complex qb(int n, int k) const { return k < 0 || k > n ? Complex(0) : binom[n * N + k]; }
  int mod(long long v) const { return static_cast<int>(((v % N) + N) % N); }

  // Delta E^{a1}(e_{a3} x e_{s3-a3}) component on e_{a3+k} x e_{.}, weighted by eta02^{-a1}
  Complex a(int a3, int a1, int k) const {
    if (k > a1) return 0;
    return qb(a1, k) * ipow(r01.eta(), k) * ipow(r01.kappa() * ipow(w, a3) * r12.eta(), a1 - k) *
           ipow(r02.eta(), -a1);
  }
  // Delta E^{be}(e_{a0} x e_{s0-a0}) component on e_{a0+k} x e_{.}, weighted by eta13^{-be}
  Complex b(int a0, int a2, int k) const {
    int be = mod(s[2] - a2);
    if (k > be) return 0;
    return qb(be, k) * ipow(r12.eta(), k) * ipow(r12.kappa() * ipow(w, a0) * r23.eta(), be - k) *
           ipow(r13.eta(), -be);
  }
};

Coefficients coefficients(const std::array<CyclicRep, 6>& reps, const RootSystem& R) {
  Coefficients c;
  c.N = R.N;
  c.r01 = reps[edgeIndex(0, 1)];
  c.r02 = reps[edgeIndex(0, 2)];
  c.r03 = reps[edgeIndex(0, 3)];
  c.r12 = reps[edgeIndex(1, 2)];
  c.r13 = reps[edgeIndex(1, 3)];
  c.r23 = reps[edgeIndex(2, 3)];
  c.s[3] = weightShift(c.r01, c.r12, c.r02, R);
  c.s[1] = weightShift(c.r02, c.r23, c.r03, R);
  c.s[0] = weightShift(c.r12, c.r23, c.r13, R);
  c.s[2] = weightShift(c.r01, c.r13, c.r03, R);
  c.w = R.omega();
  c.binom.assign(static_cast<size_t>(R.N) * R.N, 0);
  for (int n = 0; n < R.N; ++n)
    for (int k = 0; k <= n; ++k) c.binom[n * R.N + k] = qBinomial(n, k, c.w);
  return c;
}

Eigen::MatrixXcd checkedInverse(const Eigen::MatrixXcd& A, const char* what) {
  Eigen::FullPivLU<Eigen::MatrixXcd> lu(A);
  if (!lu.isInvertible()) fail(ErrorKind::FormulaDomain, std::string("singular ") + what);
  Eigen::MatrixXcd inv = lu.inverse();
  if (!inv.allFinite()) fail(ErrorKind::FormulaDomain, std::string("non-finite inverse of ") + what);
  return inv;
}

}  // namespace

Intertwiner intertwiner(const std::array<CyclicRep, 6>& reps, const RootSystem& R, TensorRoute route) {
  const int N = R.N;
  Coefficients c = coefficients(reps, R);
  Intertwiner out;
  out.N = N;
  out.shifts = c.s;
  const int n2 = N * N;
  out.M = Eigen::MatrixXcd::Zero(n2, n2);
  out.Minv = Eigen::MatrixXcd::Zero(n2, n2);

  if (route == TensorRoute::Dense) {
    const int n3 = n2 * N;
    Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(n2, n3), B = Eigen::MatrixXcd::Zero(n2, n3);
    auto col = [&](int m, int p, int r) { return (m * N + p) * N + r; };
    for (int a3 = 0; a3 < N; ++a3)
      for (int a1 = 0; a1 < N; ++a1)
        for (int k = 0; k <= a1; ++k)
          A(a3 * N + a1, col(c.mod(a3 + k), c.mod(c.s[3] - a3 + a1 - k), c.mod(c.s[1] - a1))) += c.a(a3, a1, k);
    for (int a0 = 0; a0 < N; ++a0)
      for (int a2 = 0; a2 < N; ++a2) {
        int be = c.mod(c.s[2] - a2);
        for (int k = 0; k <= be; ++k)
          B(a0 * N + a2, col(a2, c.mod(a0 + k), c.mod(c.s[0] - a0 + be - k))) += c.b(a0, a2, k);
      }
    // A = M B
    Eigen::MatrixXcd Mt = B.transpose().colPivHouseholderQr().solve(A.transpose());
    out.M = Mt.transpose();
    double res = (out.M * B - A).cwiseAbs().maxCoeff();
    if (!(res <= 1e-8 * std::max(1.0, A.cwiseAbs().maxCoeff())))
      fail(ErrorKind::FormulaDomain, "the two bracketings are not related by a change of basis");
    out.Minv = checkedInverse(out.M, "intertwiner");
    return out;
  }

  // slice m of B is the N x N matrix Q[a0][p]; A has one entry per slice
  for (int m = 0; m < N; ++m) {
    Eigen::MatrixXcd Q = Eigen::MatrixXcd::Zero(N, N);
    for (int a0 = 0; a0 < N; ++a0)
      for (int p = 0; p < N; ++p) Q(a0, p) = c.b(a0, m, c.mod(p - a0));
    Eigen::MatrixXcd Qi = checkedInverse(Q, "weight slice");
    for (int a3 = 0; a3 < N; ++a3)
      for (int a1 = 0; a1 < N; ++a1) {
        int k = c.mod(m - a3);
        if (k > a1) continue;
        int p = c.mod(c.s[3] - a3 + a1 - k);
        Complex ca = c.a(a3, a1, k);
        for (int a0 = 0; a0 < N; ++a0) out.M(a3 * N + a1, a0 * N + m) = ca * Qi(p, a0);
      }
  }
  // slice a1 of A is the N x N matrix Rs[a3][m]
  for (int a1 = 0; a1 < N; ++a1) {
    Eigen::MatrixXcd Rs = Eigen::MatrixXcd::Zero(N, N);
    for (int a3 = 0; a3 < N; ++a3)
      for (int m = 0; m < N; ++m) Rs(a3, m) = c.a(a3, a1, c.mod(m - a3));
    Eigen::MatrixXcd Ri = checkedInverse(Rs, "weight slice");
    const int r = c.mod(c.s[1] - a1);
    for (int a0 = 0; a0 < N; ++a0)
      for (int a2 = 0; a2 < N; ++a2) {
        int be = c.mod(c.s[2] - a2);
        int k = c.mod(c.s[0] - a0 + be - r);
        if (k > be) continue;
        Complex cb = c.b(a0, a2, k);
        for (int a3 = 0; a3 < N; ++a3) out.Minv(a0 * N + a2, a3 * N + a1) = cb * Ri(a2, a3);
      }
  }
  return out;
}

StateTensor buildStateTensor(const DecoratedTetrahedron<Complex>& d, const RootSystem& R, TensorRoute route) {
  RootSystem::make(R.N, R.cut);
  std::array<CyclicRep, 6> reps;
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) reps[edgeIndex(i, j)] = cyclicRep(d.zAt(i, j), R);
  Intertwiner X = intertwiner(reps, R, route);
  const int N = R.N;
  // y^{c (1-N)/2} per edge; the exponent is an integer because N is odd
  Complex factor = 1;
  for (int e = 0; e < 6; ++e) {
    int i = d.b.rank[kEdgeVertex[e][0]], j = d.b.rank[kEdgeVertex[e][1]];
    factor *= ipow(reps[edgeIndex(i, j)].y, static_cast<long long>(d.c[e]) * (1 - N) / 2);
  }
  StateTensor t;
  t.N = N;
  t.sign = d.sign;
  t.b = d.b;
  t.data.assign(static_cast<size_t>(N) * N * N * N, 0);
  for (int a0 = 0; a0 < N; ++a0)
    for (int a1 = 0; a1 < N; ++a1)
      for (int a2 = 0; a2 < N; ++a2)
        for (int a3 = 0; a3 < N; ++a3) {
          Complex v = d.sign > 0 ? X.M(a3 * N + a1, a0 * N + a2) : X.Minv(a0 * N + a2, a3 * N + a1);
          t.data[StateTensor::index(N, a0, a1, a2, a3)] = factor * v;
        }
  return t;
}

void writeTensor(std::ostream& os, const StateTensor& t, int tetId) {
  const std::int32_t head[3] = {t.N, tetId, t.sign};
  os.write(reinterpret_cast<const char*>(head), sizeof head);
  const int N = t.N;
  std::array<int, 4> s{};
  for (s[0] = 0; s[0] < N; ++s[0])
    for (s[1] = 0; s[1] < N; ++s[1])
      for (s[2] = 0; s[2] < N; ++s[2])
        for (s[3] = 0; s[3] < N; ++s[3]) {
          const Complex& v = t(s[t.b.order[0]], s[t.b.order[1]], s[t.b.order[2]], s[t.b.order[3]]);
          double re = v.real(), im = v.imag();
          os.write(reinterpret_cast<const char*>(&re), sizeof re);
          os.write(reinterpret_cast<const char*>(&im), sizeof im);
        }
}

StateTensor readTensor(std::istream& is, int* tetId) {
  std::int32_t head[3];
  if (!is.read(reinterpret_cast<char*>(head), sizeof head)) fail(ErrorKind::ParseError, "truncated tensor header");
  if (head[0] < 1 || head[0] > 64) fail(ErrorKind::ParseError, "implausible N in tensor header");
  StateTensor t;
  t.N = head[0];
  t.sign = head[2];
  if (tetId) *tetId = head[1];
  const size_t n = static_cast<size_t>(t.N) * t.N * t.N * t.N;
  t.data.resize(n);
  for (size_t i = 0; i < n; ++i) {
    double re, im;
    if (!is.read(reinterpret_cast<char*>(&re), sizeof re) || !is.read(reinterpret_cast<char*>(&im), sizeof im))
      fail(ErrorKind::ParseError, "truncated tensor data");
    t.data[i] = {re, im};
  }
  return t;
}

}  // namespace qhi
