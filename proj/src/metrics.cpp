#include "haplomin/metrics.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <limits>

namespace haplomin {

std::int64_t mec_score(const FragmentMatrix& F, const Haplotype& h) {
  if (h.size() != static_cast<std::size_t>(F.rows())) {
    throw std::invalid_argument("mec_score: haplotype length must equal rows");
  }
  std::int64_t total = 0;
  for (int j = 0; j < F.cols(); ++j) {
    auto col = F.column(j);
    std::int64_t d = 0;
    for (const auto& obs : col) {
      if (static_cast<int>(obs.value) != h[obs.index]) ++d;
    }
    total += std::min(d, static_cast<std::int64_t>(col.size()) - d);
  }
  return total;
}

double normalized_mec(const FragmentMatrix& F, const Haplotype& h) {
  return static_cast<double>(mec_score(F, h)) /
         (static_cast<double>(F.rows()) * static_cast<double>(F.cols()));
}

BruteforceResult mec_bruteforce(const FragmentMatrix& F) {
  const int m = F.rows();
  if (m > 22) {
    throw std::invalid_argument("mec_bruteforce: row count exceeds 22");
  }

  // Per column: bitmask of covered rows and the rows observed as -1.
  struct ColBits {
    std::uint32_t mask = 0;
    std::uint32_t neg = 0;
    int cov = 0;
  };
  std::vector<ColBits> cols(F.cols());
  for (int j = 0; j < F.cols(); ++j) {
    for (const auto& obs : F.column(j)) {
      cols[j].mask |= 1u << obs.index;
      if (obs.value < 0) cols[j].neg |= 1u << obs.index;
      cols[j].cov++;
    }
  }

  std::int64_t best = std::numeric_limits<std::int64_t>::max();
  std::uint32_t best_bits = 0;
  const std::uint64_t half = 1ull << (m - 1);
  for (std::uint64_t g = 0; g < half; ++g) {
    // Bit i set means h_i = -1; bit 0 stays clear to pin h_0 = +1.
    auto hbits = static_cast<std::uint32_t>(g << 1);
    std::int64_t mec = 0;
    for (const auto& c : cols) {
      int d = std::popcount((hbits ^ c.neg) & c.mask);
      mec += std::min(d, c.cov - d);
      if (mec >= best) break;
    }
    if (mec < best) {
      best = mec;
      best_bits = hbits;
    }
  }

  std::vector<std::int8_t> signs(m);
  for (int i = 0; i < m; ++i) {
    signs[i] = (best_bits >> i) & 1u ? -1 : 1;
  }
  return BruteforceResult{best, Haplotype(std::move(signs))};
}

double reconstruction_rate(const Haplotype& truth, const Haplotype& estimate) {
  if (truth.size() != estimate.size() || truth.size() == 0) {
    throw std::invalid_argument(
        "reconstruction_rate: haplotypes must share a positive length");
  }
  std::size_t d = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (truth[i] != estimate[i]) ++d;
  }
  std::size_t err = std::min(d, truth.size() - d);
  return 1.0 - static_cast<double>(err) / static_cast<double>(truth.size());
}

double principal_angle_dist(const std::vector<double>& u,
                            const std::vector<double>& w) {
  if (u.size() != w.size() || u.empty()) {
    throw std::invalid_argument(
        "principal_angle_dist: vectors must share a positive length");
  }
  std::vector<double> a = u, b = w;
  if (normalize(a) == 0.0 || normalize(b) == 0.0) {
    throw std::invalid_argument("principal_angle_dist: zero vector");
  }
  double c = dot(a, b);
  // Residual form of sin(theta). Taking the smaller of the two projection
  // residuals keeps the function exactly symmetric in its arguments.
  double r1 = 0.0, r2 = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    double x = b[i] - c * a[i];
    double y = a[i] - c * b[i];
    r1 += x * x;
    r2 += y * y;
  }
  return std::min(1.0, std::sqrt(std::min(r1, r2)));
}

double incoherence(const std::vector<double>& u) {
  if (u.empty()) throw std::invalid_argument("incoherence: empty vector");
  double n = norm2(u);
  if (std::abs(n - 1.0) > 1e-9) {
    throw std::invalid_argument("incoherence: vector must have unit norm");
  }
  double mx = 0.0;
  for (double x : u) mx = std::max(mx, std::abs(x));
  return std::sqrt(static_cast<double>(u.size())) * mx;
}

std::int64_t observed_mismatches(const FragmentMatrix& F,
                                 const std::vector<double>& dense_row_major) {
  const auto n = static_cast<std::size_t>(F.cols());
  if (dense_row_major.size() != static_cast<std::size_t>(F.rows()) * n) {
    throw std::invalid_argument("observed_mismatches: dense size mismatch");
  }
  std::int64_t count = 0;
  for (int j = 0; j < F.cols(); ++j) {
    for (const auto& obs : F.column(j)) {
      double x = dense_row_major[static_cast<std::size_t>(obs.index) * n + j];
      int sign = x >= 0.0 ? 1 : -1;
      if (sign != static_cast<int>(obs.value)) ++count;
    }
  }
  return count;
}

namespace {

std::string format_g(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", x);
  return buf;
}

std::string opt_cell(const std::optional<double>& x) {
  return x ? format_g(*x) : std::string();
}

}  // namespace

std::string EvalReport::csv_header() {
  return "mec,normalized_mec,reconstruction_rate,dist_u,dist_v,incoherence_u,"
         "incoherence_v";
}

std::string EvalReport::csv_row() const {
  return std::to_string(mec) + "," + format_g(normalized_mec) + "," +
         opt_cell(reconstruction) + "," + opt_cell(dist_u) + "," +
         opt_cell(dist_v) + "," + opt_cell(incoherence_u) + "," +
         opt_cell(incoherence_v);
}

EvalReport evaluate(const FragmentMatrix& F, const Haplotype& estimate,
                    const GroundTruth* truth) {
  EvalReport r;
  r.mec = mec_score(F, estimate);
  r.normalized_mec = normalized_mec(F, estimate);
  if (truth) {
    r.reconstruction = reconstruction_rate(truth->haplotype, estimate);
    std::vector<double> ue(estimate.size()), ut(truth->haplotype.size());
    for (std::size_t i = 0; i < ue.size(); ++i) ue[i] = estimate[i];
    for (std::size_t i = 0; i < ut.size(); ++i) ut[i] = truth->haplotype[i];
    r.dist_u = principal_angle_dist(ue, ut);
  }
  return r;
}

}  // namespace haplomin
