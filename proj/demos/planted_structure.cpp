// Plants a cylinder family over Z_3^4 avoiding {0,1}^4, hides it behind a
// little noise, then recovers the structure and checks the certificate.

#include <cstdio>
#include <random>

#include "sumset_lab/certificate_json.hpp"
#include "sumset_lab/sumset_lab.hpp"

using namespace sumset_lab;

int main() {
  const auto g = make_group({3});
  const auto z0 = GroupSubset::of(g, {0, 1});
  const std::size_t n = 4;
  const CoordinateSet planted{2};

  // 1 + 1 = 2, so x_2 = 1 and y_2 = 1 never sum into {0,1}
  std::vector<TensorSet> bases{TensorSet::from_predicate(3, 1, [](auto y) { return y[0] == 1; }),
                               TensorSet::from_predicate(3, 1, [](auto y) { return y[0] == 1; })};
  const auto family = cylinder_family(g, z0, planted, bases, n);

  std::mt19937_64 rng(7);
  std::vector<TensorSet> sets;
  for (const auto& f : family) {
    const auto full = f.materialize();
    TensorSet e(3, n);
    for (PointIndex p = 0; p < e.points(); ++p)
      if (full.contains(p) && rng() % 20 != 0) e.insert(p);
    sets.push_back(e);
  }
  std::printf("densities: %s %s\n", format_rational(density(sets[0])).c_str(),
              format_rational(density(sets[1])).c_str());
  std::printf("tuples summing into Z0^n: %s\n", std::to_string(count_tuples_into(g, sets, z0)).c_str());

  StructureParams params;
  params.epsilon = Rational(1, 10);
  params.beta = Rational(1, 10);
  const auto cert = extract_structure(g, z0, sets, params);
  std::printf("certificate:\n%s\n", certificate_to_json(cert).dump(2).c_str());

  const auto report = verify_certificate(g, z0, sets, cert, params.epsilon);
  std::printf("verification: %s\n", report.passed ? "PASS" : "FAIL");
  return report.passed ? 0 : 1;
}
