#pragma once

#include <cmath>
#include <stdexcept>

namespace hsbi {

/// Linear elastic material. Configs specify (rho, cp, cs); Lame parameters
/// are derived internally.
struct ElasticMaterial {
  double rho = 0.0;     // density [kg/m^3]
  double mu = 0.0;      // shear modulus [Pa]
  double lambda = 0.0;  // first Lame parameter [Pa]

  ElasticMaterial() = default;

  static ElasticMaterial from_lame(double rho, double mu, double lambda) {
    ElasticMaterial m;
    m.rho = rho;
    m.mu = mu;
    m.lambda = lambda;
    m.validate();
    return m;
  }

  static ElasticMaterial from_wavespeeds(double rho, double cp, double cs) {
    ElasticMaterial m;
    m.rho = rho;
    m.mu = rho * cs * cs;
    m.lambda = rho * cp * cp - 2.0 * m.mu;
    m.validate();
    return m;
  }

  double cs() const { return std::sqrt(mu / rho); }
  double cp() const { return std::sqrt((lambda + 2.0 * mu) / rho); }

  void validate() const {
    if (!(rho > 0.0)) throw std::invalid_argument("material: rho must be > 0");
    if (!(mu > 0.0)) throw std::invalid_argument("material: mu must be > 0");
    if (!(lambda + 2.0 * mu / 3.0 > 0.0))
      throw std::invalid_argument("material: bulk modulus must be > 0");
    if (!(cp() > cs()))
      throw std::invalid_argument("material: cp must exceed cs");
  }
};

inline std::pair<double, double> derive_wavespeeds(const ElasticMaterial& m) {
  m.validate();
  return {m.cp(), m.cs()};
}

}  // namespace hsbi
