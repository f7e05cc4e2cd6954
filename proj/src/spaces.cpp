#include "flagvar/spaces.hpp"

#include <cmath>
#include <numeric>

#include "flagvar/error.hpp"

namespace flagvar {

FlagPtr cp_space(int n) {
  if (n < 1) throw Error(ErrorKind::Configuration, "CP^{2n+1} needs n >= 1");
  std::vector<int> theta(n);
  std::iota(theta.begin(), theta.end(), 1);
  return build_flag(build_realization(build_root_system(Family::C, n + 1)), theta);
}

FlagPtr su3_maximal_flag() { return build_flag(build_realization(build_root_system(Family::A, 2)), {}); }

double cp_rate(int n) { return 1.0 / std::sqrt(2.0 * n + 4.0); }

}  // namespace flagvar
