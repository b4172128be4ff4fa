#include "cforge/polynomial_map.hpp"

namespace cforge {

cplx PolynomialMap::operator()(cplx zeta) const {
  cplx acc{};
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * zeta + *it;
  return acc;
}

cplx PolynomialMap::derivative(cplx zeta) const {
  cplx acc{};
  for (std::size_t k = coeffs.size(); k-- > 1;) {
    acc = acc * zeta + static_cast<double>(k) * coeffs[k];
  }
  return acc;
}

}  // namespace cforge
