#include "schottky/schottky_data.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace schottky {

Complex Disc::boundary_point(double theta) const {
  return Complex(center + radius * std::cos(theta), radius * std::sin(theta));
}

bool Disc::contains_closed(Complex z, double rel_slack) const {
  return std::abs(z - Complex(center, 0.0)) <= radius * (1.0 + rel_slack);
}

Mobius Mobius::sign_normalized() const {
  if (c > 0.0 || (c == 0.0 && a < 0.0)) return {-a, -b, -c, -d};
  return *this;
}

Mobius pairing_mobius(const Disc& image, const Disc& source) {
  // [[ -c_i, c_i c_ibar + r_i r_ibar ], [ -1, c_ibar ]] has determinant
  // r_i * r_ibar; scale to unit determinant. Lower-left stays negative.
  double s = 1.0 / std::sqrt(image.radius * source.radius);
  return Mobius{-image.center * s,
                (image.center * source.center + image.radius * source.radius) * s,
                -s, source.center * s};
}

SchottkyData build_symmetric_schottky(const std::vector<double>& centers,
                                      const std::vector<double>& radii) {
  if (centers.size() != radii.size() || centers.size() < 4 || centers.size() % 2 != 0)
    throw std::invalid_argument("need 2d >= 4 paired discs");
  int two_d = static_cast<int>(centers.size());
  SchottkyData data;
  data.d = two_d / 2;
  for (int i = 0; i < two_d; ++i) {
    if (radii[i] <= 0.0) throw std::invalid_argument("disc radius must be positive");
    data.discs.push_back({centers[i], radii[i]});
  }
  for (int i = 0; i < two_d; ++i)
    for (int j = i + 1; j < two_d; ++j) {
      double gap = std::abs(centers[i] - centers[j]) - (radii[i] + radii[j]);
      if (gap <= kMinDiscSeparation) {
        std::ostringstream msg;
        msg << "disc closures " << i << " and " << j << " overlap (gap " << gap << ")";
        throw std::invalid_argument(msg.str());
      }
    }
  for (int i = 0; i < two_d; ++i)
    data.generators.push_back(
        pairing_mobius(data.discs[i], data.discs[data.conj(i)]).sign_normalized());
  return data;
}

SchottkyData reference_schottky() {
  return build_symmetric_schottky({-6.0, -2.0, 6.0, 2.0}, {1.0, 1.0, 1.0, 1.0});
}

ValidationReport validate_schottky(const SchottkyData& data, double tol) {
  ValidationReport report;
  int two_d = data.alphabet_size();
  if (data.d < 2 || static_cast<int>(data.discs.size()) != two_d ||
      static_cast<int>(data.generators.size()) != two_d) {
    report.violations.push_back("shape: need d >= 2 with 2d discs and 2d generators");
    return report;
  }
  for (int i = 0; i < two_d; ++i)
    if (data.discs[i].radius <= 0.0)
      report.violations.push_back("radius: disc " + std::to_string(i) + " not positive");

  bool disjoint = true;
  for (int i = 0; i < two_d && disjoint; ++i)
    for (int j = i + 1; j < two_d; ++j) {
      double gap = std::abs(data.discs[i].center - data.discs[j].center) -
                   (data.discs[i].radius + data.discs[j].radius);
      if (gap <= kMinDiscSeparation) {
        report.violations.push_back("disjointness: closures of discs " + std::to_string(i) +
                                    " and " + std::to_string(j) + " too close");
        disjoint = false;
        break;
      }
    }

  for (int i = 0; i < two_d; ++i) {
    double err = std::abs(data.generators[i].det() - 1.0);
    report.max_determinant_error = std::max(report.max_determinant_error, err);
  }
  if (report.max_determinant_error > 1e-12)
    report.violations.push_back("unit-determinant: max error " +
                                std::to_string(report.max_determinant_error));

  for (int i = 0; i < two_d; ++i) {
    const Mobius p = data.generators[data.conj(i)] * data.generators[i];
    double fwd = std::max({std::abs(p.a - 1.0), std::abs(p.b), std::abs(p.c), std::abs(p.d - 1.0)});
    double rev = std::max({std::abs(p.a + 1.0), std::abs(p.b), std::abs(p.c), std::abs(p.d + 1.0)});
    if (std::min(fwd, rev) > tol) {
      report.violations.push_back("inverse-pairing: generators " + std::to_string(i) + " and " +
                                  std::to_string(data.conj(i)));
    }
  }

  // Mapping property, sampled: gamma_i sends the boundary circle of
  // D_conj(i) onto the boundary circle of D_i and far exterior points into
  // the closure of D_i.
  if (disjoint) {
    constexpr int kBoundarySamples = 64;
    for (int i = 0; i < two_d; ++i) {
      const Disc& src = data.discs[data.conj(i)];
      const Disc& img = data.discs[i];
      double worst = 0.0;
      for (int k = 0; k < kBoundarySamples; ++k) {
        double theta = 2.0 * std::numbers::pi * k / kBoundarySamples;
        Complex w = data.generators[i].apply(src.boundary_point(theta));
        worst = std::max(worst, std::abs(std::abs(w - Complex(img.center, 0.0)) - img.radius));
      }
      // A few exterior probes, including the image of infinity (= a/c).
      if (std::abs(data.generators[i].c) > 0.0) {
        Complex winf(data.generators[i].a / data.generators[i].c, 0.0);
        if (!img.contains_closed(winf, tol))
          worst = std::max(worst, std::abs(winf - Complex(img.center, 0.0)) - img.radius);
      }
      for (double t : {3.0, 10.0, 100.0}) {
        Complex z(src.center + t * src.radius, t * src.radius);
        Complex w = data.generators[i].apply(z);
        if (!img.contains_closed(w, tol))
          worst = std::max(worst, std::abs(w - Complex(img.center, 0.0)) - img.radius);
      }
      report.max_boundary_error = std::max(report.max_boundary_error, worst);
    }
    if (report.max_boundary_error > tol)
      report.violations.push_back("boundary-mapping: max error " +
                                  std::to_string(report.max_boundary_error));
  }
  return report;
}

std::string SchottkyData::to_json() const {
  nlohmann::json j;
  j["d"] = d;
  for (const auto& disc : discs)
    j["discs"].push_back({{"center", disc.center}, {"radius", disc.radius}});
  for (const auto& g : generators) j["generators"].push_back({g.a, g.b, g.c, g.d});
  return j.dump(2);
}

SchottkyData SchottkyData::from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  int d = j.at("d").get<int>();
  std::vector<double> centers, radii;
  for (const auto& disc : j.at("discs")) {
    centers.push_back(disc.at("center").get<double>());
    radii.push_back(disc.at("radius").get<double>());
  }
  if (static_cast<int>(centers.size()) != 2 * d)
    throw std::invalid_argument("expected 2d disc entries");
  if (!j.contains("generators")) return build_symmetric_schottky(centers, radii);

  SchottkyData data;
  data.d = d;
  for (std::size_t i = 0; i < centers.size(); ++i) data.discs.push_back({centers[i], radii[i]});
  for (const auto& g : j.at("generators")) {
    if (g.size() != 4) throw std::invalid_argument("generator entries must hold 4 floats");
    data.generators.push_back(
        {g[0].get<double>(), g[1].get<double>(), g[2].get<double>(), g[3].get<double>()});
  }
  if (static_cast<int>(data.generators.size()) != 2 * d)
    throw std::invalid_argument("expected 2d generators");
  return data;
}

}  // namespace schottky
