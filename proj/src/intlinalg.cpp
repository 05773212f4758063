#include "qhi/intlinalg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "qhi/errors.hpp"

namespace qhi {

namespace {

long long checked(__int128 v) {
  if (v > static_cast<__int128>(INT64_MAX) || v < static_cast<__int128>(INT64_MIN))
    fail(ErrorKind::Overflow, "integer elimination overflow");
  return static_cast<long long>(v);
}

long long absll(long long v) { return v < 0 ? -v : v; }

}  // namespace

IntegerSolution solveInteger(const IMat& A, const IVec& b, int n) {
  const int m = static_cast<int>(A.size());
  IMat M = A;
  IVec rhs = b;
  IMat V(n, IVec(n, 0));
  for (int i = 0; i < n; ++i) V[i][i] = 1;

  auto swapCols = [&](int a, int c) {
    if (a == c) return;
    for (auto& row : M) std::swap(row[a], row[c]);
    for (auto& row : V) std::swap(row[a], row[c]);
  };
  auto swapRows = [&](int a, int c) {
    if (a == c) return;
    std::swap(M[a], M[c]);
    std::swap(rhs[a], rhs[c]);
  };

  int r = 0;
  for (int k = 0; k < std::min(m, n); ++k) {
    int bi = -1, bj = -1;
    long long best = 0;
    for (int i = k; i < m; ++i)
      for (int j = k; j < n; ++j)
        if (M[i][j] != 0 && (bi < 0 || absll(M[i][j]) < best)) {
          best = absll(M[i][j]);
          bi = i;
          bj = j;
        }
    if (bi < 0) break;
    swapRows(k, bi);
    swapCols(k, bj);
    for (;;) {
      bool clean = true;
      for (int i = k + 1; i < m; ++i) {
        if (M[i][k] == 0) continue;
        long long q = M[i][k] / M[k][k];
        if (q != 0) {
          for (int j = k; j < n; ++j) M[i][j] = checked(static_cast<__int128>(M[i][j]) - static_cast<__int128>(q) * M[k][j]);
          rhs[i] = checked(static_cast<__int128>(rhs[i]) - static_cast<__int128>(q) * rhs[k]);
        }
        if (M[i][k] != 0) clean = false;
      }
      for (int j = k + 1; j < n; ++j) {
        if (M[k][j] == 0) continue;
        long long q = M[k][j] / M[k][k];
        if (q != 0) {
          for (int i = 0; i < m; ++i) M[i][j] = checked(static_cast<__int128>(M[i][j]) - static_cast<__int128>(q) * M[i][k]);
          for (int i = 0; i < n; ++i) V[i][j] = checked(static_cast<__int128>(V[i][j]) - static_cast<__int128>(q) * V[i][k]);
        }
        if (M[k][j] != 0) clean = false;
      }
      if (clean) break;
      // move the smallest remainder into the pivot
      int ri = -1, cj = -1;
      long long small = absll(M[k][k]);
      for (int i = k + 1; i < m; ++i)
        if (M[i][k] != 0 && absll(M[i][k]) < small) { small = absll(M[i][k]); ri = i; cj = -1; }
      for (int j = k + 1; j < n; ++j)
        if (M[k][j] != 0 && absll(M[k][j]) < small) { small = absll(M[k][j]); cj = j; ri = -1; }
      if (ri >= 0) swapRows(k, ri);
      else if (cj >= 0) swapCols(k, cj);
    }
    r = k + 1;
  }

  IntegerSolution sol;
  IVec y(n, 0);
  for (int i = 0; i < r; ++i) {
    if (rhs[i] % M[i][i] != 0) {
      sol.obstruction = i;
      return sol;
    }
    y[i] = rhs[i] / M[i][i];
  }
  for (int i = r; i < m; ++i)
    if (rhs[i] != 0) {
      sol.obstruction = i;
      return sol;
    }
  sol.consistent = true;
  sol.particular.assign(n, 0);
  for (int i = 0; i < n; ++i) {
    __int128 acc = 0;
    for (int j = 0; j < n; ++j) acc += static_cast<__int128>(V[i][j]) * y[j];
    sol.particular[i] = checked(acc);
  }
  for (int j = r; j < n; ++j) {
    IVec col(n);
    for (int i = 0; i < n; ++i) col[i] = V[i][j];
    sol.kernel.push_back(col);
  }
  sol.kernel = lllReduce(sol.kernel);
  return sol;
}

std::vector<IVec> lllReduce(std::vector<IVec> B) {
  const int k = static_cast<int>(B.size());
  if (k <= 1) return B;
  const int n = static_cast<int>(B[0].size());
  using LD = long double;
  auto dot = [&](const std::vector<LD>& a, const std::vector<LD>& c) {
    LD s = 0;
    for (int i = 0; i < n; ++i) s += a[i] * c[i];
    return s;
  };
  auto toLD = [&](const IVec& v) {
    std::vector<LD> o(n);
    for (int i = 0; i < n; ++i) o[i] = static_cast<LD>(v[i]);
    return o;
  };
  std::vector<std::vector<LD>> Bs(k);
  std::vector<std::vector<LD>> mu(k, std::vector<LD>(k, 0));
  std::vector<LD> norms(k);
  auto gramSchmidt = [&]() {
    for (int i = 0; i < k; ++i) {
      Bs[i] = toLD(B[i]);
      for (int j = 0; j < i; ++j) {
        mu[i][j] = norms[j] > 0 ? dot(toLD(B[i]), Bs[j]) / norms[j] : 0;
        for (int t = 0; t < n; ++t) Bs[i][t] -= mu[i][j] * Bs[j][t];
      }
      norms[i] = dot(Bs[i], Bs[i]);
    }
  };
  gramSchmidt();
  int i = 1;
  int guard = 0;
  while (i < k && guard++ < 100000) {
    for (int j = i - 1; j >= 0; --j) {
      long long q = std::llround(mu[i][j]);
      if (q != 0) {
        for (int t = 0; t < n; ++t) B[i][t] = checked(static_cast<__int128>(B[i][t]) - static_cast<__int128>(q) * B[j][t]);
        gramSchmidt();
      }
    }
    if (norms[i] >= (0.75L - mu[i][i - 1] * mu[i][i - 1]) * norms[i - 1]) {
      ++i;
    } else {
      std::swap(B[i], B[i - 1]);
      gramSchmidt();
      i = std::max(1, i - 1);
    }
  }
  return B;
}

long long maxNorm(const IVec& v) {
  long long m = 0;
  for (long long x : v) m = std::max(m, absll(x));
  return m;
}

namespace {

bool better(const IVec& a, const IVec& b) {
  long long na = maxNorm(a), nb = maxNorm(b);
  if (na != nb) return na < nb;
  return a < b;
}

}  // namespace

IVec minimizeMaxNorm(const IVec& x, const std::vector<IVec>& kernel,
                     const std::function<bool(const IVec&)>& accept, int radius) {
  const int k = static_cast<int>(kernel.size());
  auto ok = [&](const IVec& v) { return !accept || accept(v); };
  bool have = false;
  IVec best;
  auto offer = [&](const IVec& v) {
    if (!ok(v)) return;
    if (!have || better(v, best)) {
      best = v;
      have = true;
    }
  };
  auto add = [&](IVec v, const IVec& d, long long s) {
    for (size_t i = 0; i < v.size(); ++i) v[i] += s * d[i];
    return v;
  };

  // local descent from x first, so the box search is centred on a good point;
  // an acceptable start stays acceptable
  IVec centre = x;
  const bool keep = ok(x);
  for (bool moved = true; moved;) {
    moved = false;
    for (int j = 0; j < k; ++j)
      for (long long s : {1LL, -1LL}) {
        IVec c = add(centre, kernel[j], s);
        if (better(c, centre) && (!keep || ok(c))) {
          centre = c;
          moved = true;
        }
      }
  }

  long long boxSize = 1;
  for (int j = 0; j < k && boxSize <= 400000; ++j) boxSize *= (2 * radius + 1);
  if (k == 0) {
    offer(centre);
  } else if (boxSize <= 400000) {
    std::vector<int> coef(k, -radius);
    for (;;) {
      IVec v = centre;
      for (int j = 0; j < k; ++j)
        if (coef[j]) v = add(v, kernel[j], coef[j]);
      offer(v);
      int j = 0;
      while (j < k && coef[j] == radius) coef[j++] = -radius;
      if (j == k) break;
      ++coef[j];
    }
  } else {
    // large kernels: pairwise moves around the descent point
    offer(centre);
    for (int a = 0; a < k; ++a)
      for (long long s : {1LL, -1LL}) {
        IVec v = add(centre, kernel[a], s);
        offer(v);
        for (int b = a + 1; b < k; ++b)
          for (long long t : {1LL, -1LL}) offer(add(v, kernel[b], t));
      }
  }
  if (!have) fail(ErrorKind::NoSolution, "no admissible lattice point in the search box");
  return best;
}

}  // namespace qhi
