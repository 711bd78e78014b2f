#include "schottky/representation.hpp"

namespace schottky {

Representation Representation::trivial(int two_d) {
  Representation rep;
  rep.dimension = 1;
  rep.images.assign(two_d, MatrixXcd::Ones(1, 1));
  return rep;
}

double Representation::unitarity_defect() const {
  double worst = 0.0;
  for (const auto& u : images) {
    MatrixXcd g = u.adjoint() * u;
    g.diagonal().array() -= 1.0;
    worst = std::max(worst, g.cwiseAbs().maxCoeff());
  }
  return worst;
}

double Representation::pairing_defect(int d) const {
  double worst = 0.0;
  int two_d = static_cast<int>(images.size());
  for (int i = 0; i < two_d; ++i) {
    int ibar = (i + d) % two_d;
    MatrixXcd g = images[ibar] * images[i];
    g.diagonal().array() -= 1.0;
    worst = std::max(worst, g.cwiseAbs().maxCoeff());
  }
  return worst;
}

}  // namespace schottky
