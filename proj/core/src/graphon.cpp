#include "dust/graphon.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>

#include "dust/error.hpp"
#include "dust/graph.hpp"

namespace dust {
namespace {

constexpr double kBreakpointTolerance = 1e-12;

void validate_breakpoints(std::span<const double> b) {
  detail::require(b.size() >= 2, "graphon needs at least one block");
  detail::require(b.front() == 0.0, "first breakpoint must be 0");
  detail::require(b.back() == 1.0, "last breakpoint must be 1");
  for (std::size_t i = 1; i < b.size(); ++i) {
    detail::require(b[i] > b[i - 1], "breakpoints must be strictly increasing");
  }
}

std::vector<double> flatten(const std::vector<std::vector<double>>& rows) {
  std::vector<double> flat;
  for (const auto& row : rows) {
    detail::require(row.size() == rows.size(), "values must be a square matrix");
    flat.insert(flat.end(), row.begin(), row.end());
  }
  return flat;
}

}  // namespace

// ---------------------------------------------------------------- StepKernel

StepKernel::StepKernel(std::vector<double> breakpoints,
                       std::vector<double> values)
    : breakpoints_(std::move(breakpoints)), values_(std::move(values)) {
  validate_breakpoints(breakpoints_);
  const std::size_t m = breakpoints_.size() - 1;
  detail::require(values_.size() == m * m,
                  "values must be an m x m matrix for m blocks");
  lengths_.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    lengths_[i] = breakpoints_[i + 1] - breakpoints_[i];
  }
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      const double v = values_[i * m + j];
      detail::require(std::isfinite(v) && v >= -1.0 && v <= 1.0,
                      "kernel values must lie in [-1, 1]");
      detail::require(v == values_[j * m + i], "values must be symmetric");
    }
  }
}

StepKernel::StepKernel(std::vector<double> breakpoints,
                       const std::vector<std::vector<double>>& values)
    : StepKernel(std::move(breakpoints), flatten(values)) {}

std::size_t StepKernel::block_of(double x) const {
  detail::require(x >= 0.0 && x <= 1.0, "coordinate outside [0, 1]");
  const auto it =
      std::upper_bound(breakpoints_.begin(), breakpoints_.end(), x);
  const auto idx = static_cast<std::size_t>(it - breakpoints_.begin());
  return std::min(idx == 0 ? 0 : idx - 1, block_count() - 1);
}

double StepKernel::operator()(double x, double y) const {
  return value(block_of(x), block_of(y));
}

StepKernel StepKernel::refined(std::span<const double> breakpoints) const {
  std::vector<double> fine(breakpoints.begin(), breakpoints.end());
  validate_breakpoints(fine);
  const std::size_t m = fine.size() - 1;
  std::vector<std::size_t> source(m);
  for (std::size_t k = 0; k < m; ++k) {
    source[k] = block_of(0.5 * (fine[k] + fine[k + 1]));
  }
  std::vector<double> vals(m * m);
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = 0; b < m; ++b) {
      vals[a * m + b] = value(source[a], source[b]);
    }
  }
  return StepKernel(std::move(fine), std::move(vals));
}

StepKernel StepKernel::rearranged(std::span<const std::size_t> order) const {
  const std::size_t m = block_count();
  detail::require(order.size() == m, "rearrangement must list every block");
  std::vector<char> seen(m, 0);
  for (auto i : order) {
    detail::require(i < m && !seen[i], "rearrangement must be a permutation");
    seen[i] = 1;
  }
  std::vector<double> bps(m + 1, 0.0);
  for (std::size_t a = 0; a < m; ++a) bps[a + 1] = bps[a] + lengths_[order[a]];
  bps.back() = 1.0;
  std::vector<double> vals(m * m);
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = 0; b < m; ++b) {
      vals[a * m + b] = value(order[a], order[b]);
    }
  }
  return StepKernel(std::move(bps), std::move(vals));
}

StepKernel StepKernel::operator-() const {
  std::vector<double> vals(values_.size());
  std::transform(values_.begin(), values_.end(), vals.begin(),
                 [](double v) { return v == 0.0 ? 0.0 : -v; });
  return StepKernel(breakpoints_, std::move(vals));
}

// ---------------------------------------------------------------- StepGraphon

namespace {
StepKernel checked_graphon_kernel(StepKernel kernel) {
  for (double v : kernel.values()) {
    detail::require(v >= 0.0 && v <= 1.0, "graphon values must lie in [0, 1]");
  }
  return kernel;
}
}  // namespace

StepGraphon::StepGraphon(std::vector<double> breakpoints,
                         const std::vector<std::vector<double>>& values)
    : kernel_(checked_graphon_kernel(StepKernel(std::move(breakpoints), values))) {}

StepGraphon::StepGraphon(StepKernel kernel)
    : kernel_(checked_graphon_kernel(std::move(kernel))) {}

StepGraphon StepGraphon::constant(double p) {
  return StepGraphon({0.0, 1.0}, {{p}});
}

StepGraphon StepGraphon::two_block(double split, double within, double across) {
  return StepGraphon({0.0, split, 1.0}, {{within, across}, {across, within}});
}

std::vector<double> StepGraphon::block_degrees() const {
  const std::size_t m = block_count();
  const auto len = lengths();
  std::vector<double> deg(m, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    long double acc = 0.0L;
    for (std::size_t j = 0; j < m; ++j) acc += value(i, j) * len[j];
    deg[i] = static_cast<double>(acc);
  }
  return deg;
}

double StepGraphon::degree(double x) const {
  return block_degrees()[block_of(x)];
}

double StepGraphon::edge_density() const {
  const auto deg = block_degrees();
  const auto len = lengths();
  long double acc = 0.0L;
  for (std::size_t i = 0; i < deg.size(); ++i) acc += len[i] * deg[i];
  return static_cast<double>(acc);
}

double alpha_w(const StepGraphon& w) {
  const auto len = w.lengths();
  const auto deg = w.block_degrees();
  long double mass = 0.0L;
  long double second = 0.0L;
  for (std::size_t i = 0; i < deg.size(); ++i) {
    mass += static_cast<long double>(len[i]) * deg[i];
    second += static_cast<long double>(len[i]) * deg[i] * deg[i];
  }
  if (mass <= 0.0L) {
    throw ValidationError("alpha_w undefined: graphon integrates to zero");
  }
  return static_cast<double>(second / (mass * mass));
}

bool is_connected(const StepGraphon& w) {
  const std::size_t m = w.block_count();
  if (m == 1) return w.value(0, 0) > 0.0;
  std::vector<char> seen(m, 0);
  std::vector<std::size_t> stack{0};
  seen[0] = 1;
  std::size_t reached = 1;
  while (!stack.empty()) {
    const auto i = stack.back();
    stack.pop_back();
    for (std::size_t j = 0; j < m; ++j) {
      if (!seen[j] && w.value(i, j) > 0.0) {
        seen[j] = 1;
        ++reached;
        stack.push_back(j);
      }
    }
  }
  return reached == m;
}

double cut_integral(const StepGraphon& w, std::span<const std::size_t> blocks) {
  const std::size_t m = w.block_count();
  std::vector<char> in(m, 0);
  for (auto b : blocks) {
    detail::require(b < m, "block index out of range");
    in[b] = 1;
  }
  const auto len = w.lengths();
  long double acc = 0.0L;
  for (std::size_t i = 0; i < m; ++i) {
    if (!in[i]) continue;
    for (std::size_t j = 0; j < m; ++j) {
      if (!in[j]) acc += static_cast<long double>(len[i]) * len[j] * w.value(i, j);
    }
  }
  return static_cast<double>(acc);
}

StepGraphon graphon_of_graph(const WeightedGraph& g) {
  const std::size_t n = g.size();
  detail::require(n >= 1, "graph must have at least one vertex");
  std::vector<double> bps(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    bps[i] = static_cast<double>(i) / static_cast<double>(n);
  }
  bps.back() = 1.0;
  std::vector<double> vals(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = g.row(static_cast<Vertex>(i));
    std::copy(row.begin(), row.end(), vals.begin() + static_cast<std::ptrdiff_t>(i * n));
  }
  return StepGraphon(StepKernel(std::move(bps), std::move(vals)));
}

std::vector<double> common_breakpoints(std::span<const double> a,
                                       std::span<const double> b) {
  std::vector<double> merged;
  merged.reserve(a.size() + b.size());
  std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(merged));
  std::vector<double> out;
  for (double x : merged) {
    if (out.empty() || x - out.back() > kBreakpointTolerance) {
      out.push_back(x);
    }
  }
  out.front() = 0.0;
  if (1.0 - out.back() <= kBreakpointTolerance) {
    out.back() = 1.0;
  } else {
    out.push_back(1.0);
  }
  return out;
}

StepKernel difference(const StepKernel& a, const StepKernel& b) {
  const auto bps = common_breakpoints(a.breakpoints(), b.breakpoints());
  const auto ra = a.refined(bps);
  const auto rb = b.refined(bps);
  const std::size_t m = ra.block_count();
  std::vector<double> vals(m * m);
  for (std::size_t i = 0; i < m * m; ++i) {
    vals[i] = ra.values()[i] - rb.values()[i];
  }
  return StepKernel(bps, std::move(vals));
}

// ---------------------------------------------------------------- cut norm

double rectangle_integral(const StepKernel& u, std::span<const std::size_t> s,
                          std::span<const std::size_t> t) {
  const auto len = u.lengths();
  long double acc = 0.0L;
  for (auto i : s) {
    for (auto j : t) {
      acc += static_cast<long double>(len[i]) * len[j] * u.value(i, j);
    }
  }
  return static_cast<double>(acc);
}

namespace {

std::vector<std::size_t> bits_to_blocks(const std::vector<char>& bits) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i]) out.push_back(i);
  }
  return out;
}

// Weighted matrix a_ij = len_i len_j U_ij.
std::vector<double> weighted_matrix(const StepKernel& u) {
  const std::size_t m = u.block_count();
  const auto len = u.lengths();
  std::vector<double> a(m * m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      a[i * m + j] = len[i] * len[j] * u.value(i, j);
    }
  }
  return a;
}

// Given column sums c_j = sum_{i in S} a_ij, returns the best T and the
// signed value it achieves (positive part or negative part, whichever has
// larger magnitude).
double best_response(std::span<const double> col, std::vector<char>& t_bits) {
  double pos = 0.0;
  double neg = 0.0;
  for (double c : col) {
    if (c > 0.0) pos += c;
    if (c < 0.0) neg += c;
  }
  const bool take_positive = pos >= -neg;
  for (std::size_t j = 0; j < col.size(); ++j) {
    t_bits[j] = take_positive ? (col[j] > 0.0) : (col[j] < 0.0);
  }
  return take_positive ? pos : neg;
}

CutNormResult cut_norm_exact(const StepKernel& u) {
  const std::size_t m = u.block_count();
  if (m > kExactCutNormMaxBlocks) {
    throw BudgetExceeded("exact cut norm refused for " + std::to_string(m) +
                         " blocks (limit " +
                         std::to_string(kExactCutNormMaxBlocks) + ")");
  }
  const auto a = weighted_matrix(u);
  std::vector<double> col(m, 0.0);
  std::vector<char> s_bits(m, 0);
  double best = 0.0;
  std::uint64_t best_gray = 0;
  const std::uint64_t total = std::uint64_t{1} << m;
  std::uint64_t gray = 0;
  for (std::uint64_t step = 1; step < total; ++step) {
    const auto flip = static_cast<std::size_t>(std::countr_zero(step));
    gray ^= std::uint64_t{1} << flip;
    const double sign = (gray >> flip) & 1U ? 1.0 : -1.0;
    const double* row = &a[flip * m];
    double pos = 0.0;
    double neg = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      col[j] += sign * row[j];
      const double c = col[j];
      pos += c > 0.0 ? c : 0.0;
      neg += c < 0.0 ? c : 0.0;
    }
    const double v = std::max(pos, -neg);
    if (v > best) {
      best = v;
      best_gray = gray;
    }
  }
  CutNormResult result;
  result.exact = true;
  if (best_gray == 0) return result;
  for (std::size_t i = 0; i < m; ++i) s_bits[i] = (best_gray >> i) & 1U;
  std::fill(col.begin(), col.end(), 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    if (!s_bits[i]) continue;
    for (std::size_t j = 0; j < m; ++j) col[j] += a[i * m + j];
  }
  std::vector<char> t_bits(m, 0);
  best_response(col, t_bits);
  result.witness_s = bits_to_blocks(s_bits);
  result.witness_t = bits_to_blocks(t_bits);
  result.value =
      std::abs(rectangle_integral(u, result.witness_s, result.witness_t));
  return result;
}

CutNormResult cut_norm_heuristic(const StepKernel& u, std::uint64_t seed,
                                 std::size_t restarts) {
  const std::size_t m = u.block_count();
  const auto a = weighted_matrix(u);
  Rng rng(derive_seed(seed, 0, Stream::cut_norm));

  auto column_sums = [&](const std::vector<char>& s_bits) {
    std::vector<double> col(m, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
      if (!s_bits[i]) continue;
      for (std::size_t j = 0; j < m; ++j) col[j] += a[i * m + j];
    }
    return col;
  };
  auto objective = [&](const std::vector<char>& s_bits,
                       const std::vector<char>& t_bits) {
    const auto col = column_sums(s_bits);
    double acc = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      if (t_bits[j]) acc += col[j];
    }
    return acc;
  };

  double best = -1.0;
  std::vector<char> best_s(m, 0);
  std::vector<char> best_t(m, 0);
  std::vector<char> s_bits(m);
  std::vector<char> t_bits(m);
  for (std::size_t r = 0; r < std::max<std::size_t>(restarts, 1); ++r) {
    for (auto& b : s_bits) b = static_cast<char>(rng() & 1U);
    double current = -1.0;
    for (int iter = 0; iter < 100; ++iter) {
      const double v1 = std::abs(best_response(column_sums(s_bits), t_bits));
      // U is symmetric, so the best S against T is a best response to T.
      const double v2 = std::abs(best_response(column_sums(t_bits), s_bits));
      const double v = std::max(v1, v2);
      if (v <= current + 1e-15) break;
      current = v;
    }
    // Single-block flips on both sides.
    double signed_value = objective(s_bits, t_bits);
    bool improved = true;
    while (improved) {
      improved = false;
      for (auto* bits : {&s_bits, &t_bits}) {
        for (std::size_t i = 0; i < m; ++i) {
          (*bits)[i] ^= 1;
          const double v = objective(s_bits, t_bits);
          if (std::abs(v) > std::abs(signed_value) + 1e-15) {
            signed_value = v;
            improved = true;
          } else {
            (*bits)[i] ^= 1;
          }
        }
      }
    }
    if (std::abs(signed_value) > best) {
      best = std::abs(signed_value);
      best_s = s_bits;
      best_t = t_bits;
    }
  }
  CutNormResult result;
  result.exact = false;
  result.witness_s = bits_to_blocks(best_s);
  result.witness_t = bits_to_blocks(best_t);
  result.value =
      std::abs(rectangle_integral(u, result.witness_s, result.witness_t));
  return result;
}

}  // namespace

CutNormResult cut_norm(const StepKernel& u, CutNormMode mode,
                       std::uint64_t seed, std::size_t restarts) {
  if (mode == CutNormMode::exact) return cut_norm_exact(u);
  return cut_norm_heuristic(u, seed, restarts);
}

double spectral_norm(const StepKernel& u) {
  const std::size_t m = u.block_count();
  const auto len = u.lengths();
  Eigen::MatrixXd a(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          std::sqrt(len[i] * len[j]) * u.value(i, j);
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("eigenvalue solver failed");
  }
  return solver.eigenvalues().cwiseAbs().maxCoeff();
}

// ---------------------------------------------------------------- cut distance

namespace {

double aligned_norm(const StepKernel& diff, std::string& method) {
  if (diff.block_count() <= kExactCutNormMaxBlocks) {
    method = "exact-cut-norm";
    return cut_norm(diff, CutNormMode::exact).value;
  }
  method = "spectral-bound";
  double l1 = 0.0;
  const auto len = diff.lengths();
  for (std::size_t i = 0; i < diff.block_count(); ++i) {
    for (std::size_t j = 0; j < diff.block_count(); ++j) {
      l1 += len[i] * len[j] * std::abs(diff.value(i, j));
    }
  }
  return std::min(l1, spectral_norm(diff));
}

StepKernel degree_sorted(const StepGraphon& w) {
  const auto deg = w.block_degrees();
  std::vector<std::size_t> order(deg.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return deg[x] < deg[y]; });
  return w.kernel().rearranged(order);
}

}  // namespace

CutDistanceResult cut_distance_upper(const StepGraphon& a, const StepGraphon& b,
                                     AlignmentStrategy strategy) {
  CutDistanceResult result;
  if (strategy == AlignmentStrategy::degree_sort) {
    const auto diff = difference(degree_sorted(a), degree_sorted(b));
    result.refined_blocks = diff.block_count();
    result.value = aligned_norm(diff, result.method);
    return result;
  }

  const auto bps = common_breakpoints(a.breakpoints(), b.breakpoints());
  const std::size_t m = bps.size() - 1;
  if (m > kExactPermutationMaxBlocks) {
    throw BudgetExceeded("exact-permutation alignment refused for " +
                         std::to_string(m) + " refined blocks (limit " +
                         std::to_string(kExactPermutationMaxBlocks) + ")");
  }
  const auto ra = a.kernel().refined(bps);
  const auto rb = b.kernel().refined(bps);
  const auto len = ra.lengths();

  // Permutations of equal-length blocks keep the partition fixed, so the
  // rearranged kernel shares rb's breakpoints.
  std::vector<std::size_t> perm(m);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  double best = std::numeric_limits<double>::infinity();
  do {
    bool preserves = true;
    for (std::size_t i = 0; i < m && preserves; ++i) {
      preserves = std::abs(len[perm[i]] - len[i]) <= kBreakpointTolerance;
    }
    if (!preserves) continue;
    std::vector<double> vals(m * m);
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < m; ++j) {
        vals[i * m + j] = ra.value(perm[i], perm[j]) - rb.value(i, j);
      }
    }
    const StepKernel diff(bps, std::move(vals));
    best = std::min(best, cut_norm(diff, CutNormMode::exact).value);
  } while (std::next_permutation(perm.begin(), perm.end()));
  result.value = best;
  result.method = "exact-cut-norm";
  result.refined_blocks = m;
  return result;
}

}  // namespace dust
