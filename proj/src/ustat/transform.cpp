#include <cmath>
#include <vector>

#include "mcar/error.hpp"
#include "mcar/ustat.hpp"

namespace mcar {

IncompleteMatrix apply_transform(const IncompleteMatrix& m, Transform t) {
  if (t == Transform::Identity) return m;
  IncompleteMatrix out = m;
  for (std::size_t j = 0; j < m.cols(); ++j) {
    std::vector<std::size_t> rows;
    std::vector<double> vals;
    for (std::size_t i = 0; i < m.rows(); ++i)
      if (m.observed(i, j)) {
        rows.push_back(i);
        vals.push_back(m.value(i, j));
      }
    if (t == Transform::Log) {
      for (std::size_t k = 0; k < rows.size(); ++k) {
        if (!(vals[k] > 0.0))
          throw InvalidInput("log transform: column '" + m.names()[j] + "' has a non-positive value");
        out.set_value(rows[k], j, std::log(vals[k]));
      }
    } else {
      const auto ranks = average_ranks(vals);
      for (std::size_t k = 0; k < rows.size(); ++k) out.set_value(rows[k], j, ranks[k]);
    }
  }
  return out;
}

}  // namespace mcar
