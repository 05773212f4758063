#include "qhi/tensornet.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "qhi/errors.hpp"

namespace qhi {

ScaledComplex ScaledComplex::from(Complex z) { return ScaledComplex{z, 0}.normalized(); }

ScaledComplex ScaledComplex::normalized() const {
  double m = std::abs(mantissa);
  if (m == 0 || !std::isfinite(m)) return {mantissa, m == 0 ? 0 : logScale};
  return {mantissa / m, logScale + std::log(m)};
}

Complex ScaledComplex::value() const { return mantissa * std::exp(logScale); }

double ScaledComplex::logAbs() const {
  double m = std::abs(mantissa);
  return m == 0 ? -std::numeric_limits<double>::infinity() : std::log(m) + logScale;
}

ScaledComplex ScaledComplex::operator*(const ScaledComplex& o) const {
  return ScaledComplex{mantissa * o.mantissa, logScale + o.logScale}.normalized();
}

ScaledComplex ScaledComplex::operator/(const ScaledComplex& o) const {
  return ScaledComplex{mantissa / o.mantissa, logScale - o.logScale}.normalized();
}

ScaledComplex ScaledComplex::pow(int n) const {
  ScaledComplex z = normalized();
  if (std::abs(z.mantissa) == 0) return n == 0 ? from(1) : z;
  return ScaledComplex{std::polar(1.0, n * std::arg(z.mantissa)), n * z.logScale};
}

double relativeDifference(const ScaledComplex& a, const ScaledComplex& b) {
  double la = a.logAbs(), lb = b.logAbs();
  if (std::isinf(la) && std::isinf(lb)) return 0;
  double ref = std::max(la, lb);
  Complex x = a.mantissa * std::exp(a.logScale - ref);
  Complex y = b.mantissa * std::exp(b.logScale - ref);
  return std::abs(x - y);
}

namespace {

double power(int N, size_t k) { return std::pow(static_cast<double>(N), static_cast<double>(k)); }

std::vector<int> onceLabels(const std::vector<int>& legs) {
  std::vector<int> out;
  for (int l : legs)
    if (std::count(legs.begin(), legs.end(), l) == 1) out.push_back(l);
  return out;
}

bool hasRepeat(const std::vector<int>& legs) { return onceLabels(legs).size() != legs.size(); }

// labels occurring once in a ∪ b (symmetric difference, a's order first)
std::vector<int> resultLegs(const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<int> out;
  for (int l : a)
    if (std::find(b.begin(), b.end(), l) == b.end()) out.push_back(l);
  for (int l : b)
    if (std::find(a.begin(), a.end(), l) == a.end()) out.push_back(l);
  return out;
}

size_t unionSize(const std::vector<int>& a, const std::vector<int>& b) {
  size_t n = a.size();
  for (int l : b)
    if (std::find(a.begin(), a.end(), l) == a.end()) ++n;
  return n;
}

void finish(ContractionPlan& p, double budget) {
  p.cost = p.traceCost;
  p.largest = 1;
  for (const auto& s : p.steps) {
    p.cost += s.cost;
    p.largest = std::max(p.largest, power(p.N, s.legs.size()));
  }
  if (p.largest > budget)
    fail(ErrorKind::BudgetExceeded, "largest intermediate has " + std::to_string(p.largest) + " elements");
}

void greedy(ContractionPlan& p, const std::vector<std::vector<int>>& eff) {
  std::vector<std::pair<int, std::vector<int>>> active;
  for (size_t i = 0; i < eff.size(); ++i) active.push_back({static_cast<int>(i), eff[i]});
  int next = static_cast<int>(eff.size());
  while (active.size() > 1) {
    int bi = -1, bj = -1;
    bool bestShares = false;
    double bestSize = 0, bestCost = 0;
    for (size_t i = 0; i < active.size(); ++i)
      for (size_t j = i + 1; j < active.size(); ++j) {
        const auto& a = active[i].second;
        const auto& b = active[j].second;
        bool shares = unionSize(a, b) < a.size() + b.size();
        double size = power(p.N, resultLegs(a, b).size());
        double cost = power(p.N, unionSize(a, b));
        bool better = bi < 0 || (shares && !bestShares) ||
                      (shares == bestShares && (size < bestSize || (size == bestSize && cost < bestCost)));
        if (better) {
          bi = static_cast<int>(i);
          bj = static_cast<int>(j);
          bestShares = shares;
          bestSize = size;
          bestCost = cost;
        }
      }
    ContractionStep s;
    s.left = active[bi].first;
    s.right = active[bj].first;
    s.legs = resultLegs(active[bi].second, active[bj].second);
    s.cost = bestCost;
    p.steps.push_back(s);
    active.erase(active.begin() + bj);
    active.erase(active.begin() + bi);
    active.push_back({next++, s.legs});
  }
}

// Grow one blob from `start`, absorbing the tensor sharing most legs with it. On ring- and
// torus-like networks this finds the narrow cut that pairwise greedy misses.
void sweep(ContractionPlan& p, const std::vector<std::vector<int>>& eff, int start) {
  const int n = static_cast<int>(eff.size());
  std::vector<bool> used(n, false);
  used[start] = true;
  int blobId = start, next = n;
  std::vector<int> blob = eff[start];
  for (int step = 1; step < n; ++step) {
    int bi = -1;
    size_t bestShared = 0, bestSize = 0;
    for (int i = 0; i < n; ++i) {
      if (used[i]) continue;
      size_t shared = blob.size() + eff[i].size() - unionSize(blob, eff[i]);
      size_t size = resultLegs(blob, eff[i]).size();
      if (bi < 0 || shared > bestShared || (shared == bestShared && size < bestSize)) {
        bi = i;
        bestShared = shared;
        bestSize = size;
      }
    }
    ContractionStep s;
    s.left = blobId;
    s.right = bi;
    s.legs = resultLegs(blob, eff[bi]);
    s.cost = power(p.N, unionSize(blob, eff[bi]));
    p.steps.push_back(s);
    used[bi] = true;
    blob = s.legs;
    blobId = next++;
  }
}

void exhaustive(ContractionPlan& p, const std::vector<std::vector<int>>& eff) {
  const int n = static_cast<int>(eff.size());
  const int full = (1 << n) - 1;
  std::vector<std::vector<int>> open(full + 1);
  for (int mask = 1; mask <= full; ++mask) {
    std::map<int, int> count;
    std::vector<int> order;
    for (int i = 0; i < n; ++i)
      if (mask >> i & 1)
        for (int l : eff[i]) {
          if (!count[l]++) order.push_back(l);
        }
    for (int l : order)
      if (count[l] == 1) open[mask].push_back(l);
  }
  std::vector<double> best(full + 1, 0);
  std::vector<int> split(full + 1, 0);
  for (int mask = 1; mask <= full; ++mask) {
    if ((mask & (mask - 1)) == 0) continue;
    best[mask] = std::numeric_limits<double>::infinity();
    const int low = mask & -mask;
    // enumerate splits with the lowest element on the left to avoid duplicates
    for (int s = (mask - 1) & mask; s > 0; s = (s - 1) & mask) {
      if (!(s & low)) continue;
      int r = mask ^ s;
      double c = best[s] + best[r] + power(p.N, unionSize(open[s], open[r]));
      if (c < best[mask]) {
        best[mask] = c;
        split[mask] = s;
      }
    }
  }
  // emit steps bottom-up
  std::map<int, int> idOf;
  for (int i = 0; i < n; ++i) idOf[1 << i] = i;
  int next = n;
  auto emit = [&](auto&& self, int mask) -> int {
    if (idOf.count(mask)) return idOf[mask];
    int s = split[mask], r = mask ^ s;
    int a = self(self, s), b = self(self, r);
    ContractionStep st;
    st.left = a;
    st.right = b;
    st.legs = resultLegs(open[s], open[r]);
    st.cost = power(p.N, unionSize(open[s], open[r]));
    p.steps.push_back(st);
    return idOf[mask] = next++;
  };
  emit(emit, full);
}

Eigen::MatrixXcd matricize(const Tensor& t, const std::vector<int>& rows, const std::vector<int>& cols, int N) {
  const size_t r = t.legs.size();
  std::vector<size_t> rowStride(r, 0), colStride(r, 0);
  size_t nr = 1, nc = 1;
  for (auto it = rows.rbegin(); it != rows.rend(); ++it) {
    size_t k = std::find(t.legs.begin(), t.legs.end(), *it) - t.legs.begin();
    rowStride[k] = nr;
    nr *= N;
  }
  for (auto it = cols.rbegin(); it != cols.rend(); ++it) {
    size_t k = std::find(t.legs.begin(), t.legs.end(), *it) - t.legs.begin();
    colStride[k] = nc;
    nc *= N;
  }
  Eigen::MatrixXcd M(nr, nc);
  std::vector<int> digit(r, 0);
  size_t ri = 0, ci = 0;
  for (size_t flat = 0; flat < t.data.size(); ++flat) {
    M(ri, ci) = t.data[flat];
    for (size_t k = r; k-- > 0;) {
      ri += rowStride[k];
      ci += colStride[k];
      if (++digit[k] < N) break;
      digit[k] = 0;
      ri -= rowStride[k] * N;
      ci -= colStride[k] * N;
    }
  }
  return M;
}

void normalize(Tensor& t) {
  double m = 0;
  for (const auto& v : t.data) m = std::max(m, std::abs(v));
  if (m == 0 || !std::isfinite(m)) return;
  for (auto& v : t.data) v /= m;
  t.logScale += std::log(m);
}

}  // namespace

ContractionPlan planContraction(const std::vector<std::vector<int>>& legs, int N, double budget, PlanMethod method) {
  ContractionPlan p;
  p.inputs = static_cast<int>(legs.size());
  p.N = N;
  if (legs.empty()) fail(ErrorKind::InvalidArgument, "empty network");
  std::map<int, int> count;
  for (const auto& l : legs)
    for (int x : l) ++count[x];
  for (auto [label, c] : count)
    if (c != 2) fail(ErrorKind::InvalidArgument, "label " + std::to_string(label) + " occurs " + std::to_string(c) + " times");
  std::vector<std::vector<int>> eff;
  for (const auto& l : legs) {
    if (hasRepeat(l)) {
      std::vector<int> d = l;
      std::sort(d.begin(), d.end());
      p.traceCost += power(N, std::unique(d.begin(), d.end()) - d.begin());
    }
    eff.push_back(onceLabels(l));
  }
  p.naiveCost = power(N, count.size()) * static_cast<double>(legs.size());
  bool useExhaustive = method == PlanMethod::Exhaustive || (method == PlanMethod::Auto && legs.size() <= 8);
  if (useExhaustive && legs.size() > 16) fail(ErrorKind::InvalidArgument, "exhaustive planning is limited to 16 tensors");
  p.method = useExhaustive ? "exhaustive" : "greedy";
  if (legs.size() > 1) {
    if (useExhaustive) exhaustive(p, eff);
    else greedy(p, eff);
  }
  if (method == PlanMethod::Auto && !useExhaustive) {
    // compare with blob sweeps from a spread of starting tensors
    finish(p, std::numeric_limits<double>::infinity());
    const int n = static_cast<int>(legs.size());
    const int starts = std::min(n, 24);
    for (int k = 0; k < starts; ++k) {
      ContractionPlan q = p;
      q.steps.clear();
      q.method = "sweep";
      sweep(q, eff, k * n / starts);
      finish(q, std::numeric_limits<double>::infinity());
      bool qFits = q.largest <= budget, pFits = p.largest <= budget;
      if ((qFits && !pFits) || (qFits == pFits && q.cost < p.cost)) p = q;
    }
  }
  finish(p, budget);
  return p;
}

Tensor traceSelf(const Tensor& a, int N) {
  Tensor out;
  out.legs = onceLabels(a.legs);
  out.logScale = a.logScale;
  // walk the distinct labels only: N^{distinct} reads of the diagonal
  std::vector<int> distinct;
  for (int l : a.legs)
    if (std::find(distinct.begin(), distinct.end(), l) == distinct.end()) distinct.push_back(l);
  const size_t u = distinct.size();
  std::vector<size_t> srcStride(u, 0), dstStride(u, 0);
  {
    size_t s = 1;
    for (size_t k = a.legs.size(); k-- > 0;) {
      srcStride[std::find(distinct.begin(), distinct.end(), a.legs[k]) - distinct.begin()] += s;
      s *= N;
    }
    s = 1;
    for (size_t k = out.legs.size(); k-- > 0;) {
      dstStride[std::find(distinct.begin(), distinct.end(), out.legs[k]) - distinct.begin()] = s;
      s *= N;
    }
  }
  out.data.assign(static_cast<size_t>(power(N, out.legs.size())), 0);
  std::vector<int> digit(u, 0);
  for (;;) {
    size_t src = 0, dst = 0;
    for (size_t k = 0; k < u; ++k) {
      src += srcStride[k] * digit[k];
      dst += dstStride[k] * digit[k];
    }
    out.data[dst] += a.data[src];
    size_t k = u;
    while (k-- > 0) {
      if (++digit[k] < N) break;
      digit[k] = 0;
    }
    if (k == static_cast<size_t>(-1)) break;
  }
  normalize(out);
  return out;
}

Tensor contractPair(const Tensor& a0, const Tensor& b0, int N) {
  const Tensor a = hasRepeat(a0.legs) ? traceSelf(a0, N) : a0;
  const Tensor b = hasRepeat(b0.legs) ? traceSelf(b0, N) : b0;
  std::vector<int> shared, freeA, freeB;
  for (int l : a.legs) (std::find(b.legs.begin(), b.legs.end(), l) != b.legs.end() ? shared : freeA).push_back(l);
  for (int l : b.legs)
    if (std::find(a.legs.begin(), a.legs.end(), l) == a.legs.end()) freeB.push_back(l);
  Eigen::MatrixXcd C = matricize(a, freeA, shared, N) * matricize(b, shared, freeB, N);
  Tensor out;
  out.legs = freeA;
  out.legs.insert(out.legs.end(), freeB.begin(), freeB.end());
  out.logScale = a.logScale + b.logScale;
  out.data.resize(C.size());
  for (Eigen::Index i = 0; i < C.rows(); ++i)
    for (Eigen::Index j = 0; j < C.cols(); ++j) out.data[i * C.cols() + j] = C(i, j);
  normalize(out);
  return out;
}

ScaledComplex contract(std::vector<Tensor> tensors, const ContractionPlan& plan) {
  const int n = static_cast<int>(tensors.size());
  if (n != plan.inputs) fail(ErrorKind::InvalidArgument, "plan does not match the network");
  for (auto& t : tensors)
    if (hasRepeat(t.legs)) t = traceSelf(t, plan.N);
  tensors.resize(n + plan.steps.size());
  for (size_t i = 0; i < plan.steps.size(); ++i) {
    const auto& s = plan.steps[i];
    tensors[n + i] = contractPair(tensors[s.left], tensors[s.right], plan.N);
    tensors[s.left] = Tensor{};
    tensors[s.right] = Tensor{};
  }
  const Tensor& last = tensors.back();
  if (!last.legs.empty() || last.data.size() != 1) fail(ErrorKind::InvalidArgument, "network is not closed");
  return ScaledComplex{last.data[0], last.logScale}.normalized();
}

}  // namespace qhi
