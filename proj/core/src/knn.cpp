#include <algorithm>

#include "oddsmith/models.hpp"

namespace oddsmith {

std::vector<std::size_t> nearest_neighbors(const Matrix& train, std::span<const double> query,
                                           std::size_t k) {
  const std::size_t n = train.rows();
  k = std::min(k, n);
  std::vector<std::pair<double, std::size_t>> cand(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = train.row(i);
    double acc = 0.0;
    for (std::size_t f = 0; f < row.size(); ++f) {
      const double diff = query[f] - row[f];
      acc += diff * diff;
    }
    cand[i] = {acc, i};
  }
  // Distance ties go to the earlier training row.
  std::partial_sort(cand.begin(), cand.begin() + static_cast<std::ptrdiff_t>(k), cand.end());
  std::vector<std::size_t> out(k);
  for (std::size_t i = 0; i < k; ++i) out[i] = cand[i].second;
  return out;
}

}  // namespace oddsmith
