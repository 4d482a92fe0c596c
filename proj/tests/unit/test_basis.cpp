#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "gcm/basis.hpp"
#include "oracles.hpp"

using namespace gcm;

namespace {

constexpr double kPi = std::numbers::pi;

BasisSpec spec_for(QuantScheme s, std::size_t dim = 50) {
  BasisSpec b;
  b.scheme = s;
  b.a_osc = 1.7;
  b.K = 1.3;
  b.hbar = 0.2;
  b.dimension = dim;
  return b;
}

}  // namespace

TEST(Basis, SchemeNames) {
  for (auto s : kAllSchemes) EXPECT_EQ(parse_scheme(to_string(s)), s);
  EXPECT_EQ(to_string(QuantScheme::TwoDEven), "2d-even");
  EXPECT_EQ(to_string(QuantScheme::TwoDOdd), "2d-odd");
  EXPECT_EQ(to_string(QuantScheme::FiveD), "5d");
  EXPECT_THROW(parse_scheme("3d"), std::invalid_argument);
}

TEST(Basis, Derived) {
  const auto b = spec_for(QuantScheme::TwoDEven);
  EXPECT_DOUBLE_EQ(b.k(), std::sqrt(2.0 * 1.7 * 1.3) / 0.2);
  EXPECT_DOUBLE_EQ(b.omega(), std::sqrt(2.0 * 1.7 / 1.3));
  auto bad = b;
  bad.a_osc = 0.0;
  EXPECT_THROW(bad.validate(), std::invalid_argument);
  bad = b;
  bad.dimension = 0;
  EXPECT_THROW(bad.validate(), std::invalid_argument);
}

TEST(Basis, OscillatorEnergies) {
  const auto b2 = spec_for(QuantScheme::TwoDEven);
  const double hw = b2.hbar * b2.omega();
  EXPECT_DOUBLE_EQ(oscillator_energy({0, 0}, b2), hw);
  EXPECT_DOUBLE_EQ(oscillator_energy({2, 1}, b2), 8.0 * hw);
  EXPECT_DOUBLE_EQ(oscillator_energy({0, 0}, spec_for(QuantScheme::FiveD)), 2.5 * hw);
}

TEST(Basis, EnumerationExamples) {
  auto s = enumerate_basis(spec_for(QuantScheme::TwoDEven, 3));
  EXPECT_EQ(s, (std::vector<BasisState>{{0, 0}, {1, 0}, {0, 1}}));
  s = enumerate_basis(spec_for(QuantScheme::TwoDOdd, 2));
  EXPECT_EQ(s, (std::vector<BasisState>{{0, 1}, {1, 1}}));
  s = enumerate_basis(spec_for(QuantScheme::FiveD, 3));
  EXPECT_EQ(s, (std::vector<BasisState>{{0, 0}, {1, 0}, {0, 1}}));
}

TEST(Basis, EnumerationMatchesIndependentListAndIsPrefixStable) {
  for (auto scheme : kAllSchemes) {
    const auto big = enumerate_basis(spec_for(scheme, 3000));
    EXPECT_EQ(big, oracle::basis_states(scheme, 3000));
    for (std::size_t d : {1u, 17u, 500u, 2999u}) {
      const auto small = enumerate_basis(spec_for(scheme, d));
      ASSERT_EQ(small.size(), d);
      EXPECT_TRUE(std::equal(small.begin(), small.end(), big.begin()));
    }
    for (const auto& st : big) {
      EXPECT_TRUE(is_valid_state(scheme, st));
      if (scheme == QuantScheme::TwoDOdd) EXPECT_GE(st.m_ang, 1);
    }
  }
  EXPECT_FALSE(is_valid_state(QuantScheme::TwoDOdd, {3, 0}));
  EXPECT_FALSE(is_valid_state(QuantScheme::FiveD, {-1, 0}));
}

TEST(Basis, GroundStateClosedForm) {
  const auto b = spec_for(QuantScheme::TwoDEven);
  const double k = b.k();
  for (double beta : {0.0, 0.1, 0.3, 0.9}) {
    EXPECT_NEAR(radial_wavefunction({0, 0}, b, beta), std::sqrt(2.0 * k) * std::exp(-k * beta * beta / 2),
                1e-13 * std::sqrt(2.0 * k));
  }
  EXPECT_NEAR(wavefunction({0, 0}, b, {0.0, 0.0}), std::sqrt(k / kPi), 1e-13);
  EXPECT_EQ(radial_wavefunction({3, 2}, b, 1e3), 0.0);
}

TEST(Basis, LaguerreOrder) {
  EXPECT_EQ(laguerre_alpha(QuantScheme::TwoDEven, 4), 12.0);
  EXPECT_EQ(laguerre_alpha(QuantScheme::FiveD, 4), 13.5);
}

TEST(Basis, RadialOrthonormality) {
  for (auto scheme : {QuantScheme::TwoDEven, QuantScheme::FiveD}) {
    const auto b = spec_for(scheme);
    const int measure = scheme == QuantScheme::FiveD ? 4 : 1;
    for (int m = 0; m <= 5; ++m)
      for (int n1 = 0; n1 <= 10; ++n1)
        for (int n2 = 0; n2 <= n1; ++n2) {
          const double v = oracle::integrate_half_line([&](double beta) {
            return radial_wavefunction({n1, m}, b, beta) * radial_wavefunction({n2, m}, b, beta) *
                   std::pow(beta, measure);
          });
          EXPECT_NEAR(v, n1 == n2 ? 1.0 : 0.0, 1e-10) << to_string(scheme) << " " << n1 << n2 << m;
        }
  }
}

TEST(Basis, RadialBatchMatchesSingle) {
  for (auto scheme : kAllSchemes) {
    const auto b = spec_for(scheme);
    std::vector<double> out(40);
    for (double beta : {0.0, 0.05, 0.3, 1.1}) {
      radial_wavefunctions(3, b, beta, out);
      for (int n = 0; n < 40; ++n)
        EXPECT_NEAR(out[n], radial_wavefunction({n, 3}, b, beta), 1e-12 * (1.0 + std::abs(out[n])));
    }
  }
}

TEST(Basis, AngularValues) {
  EXPECT_DOUBLE_EQ(angular_wavefunction(0, QuantScheme::TwoDEven, 0.77), 1.0 / std::sqrt(2.0 * kPi));
  EXPECT_DOUBLE_EQ(angular_wavefunction(0, QuantScheme::FiveD, 0.77), 0.5);
  std::vector<double> out(12);
  for (auto scheme : kAllSchemes)
    for (double g : {0.0, 0.3, 1.9, 4.4}) {
      angular_wavefunctions(scheme, g, out);
      for (int m = 0; m < 12; ++m)
        EXPECT_NEAR(out[m], angular_wavefunction(m, scheme, g), 1e-13);
    }
}

TEST(Basis, AngularOrthonormality) {
  for (auto scheme : kAllSchemes) {
    const int lo = scheme == QuantScheme::TwoDOdd ? 1 : 0;
    for (int a = lo; a <= 10; ++a)
      for (int b = lo; b <= 10; ++b) {
        const auto f = [&](double g) {
          const double w = scheme == QuantScheme::FiveD ? std::abs(std::sin(3 * g)) : 1.0;
          return angular_wavefunction(a, scheme, g) * angular_wavefunction(b, scheme, g) * w;
        };
        double v = 0.0;
        for (int lobe = 0; lobe < 6; ++lobe)
          v += oracle::integrate_interval(f, lobe * kPi / 3, (lobe + 1) * kPi / 3);
        EXPECT_NEAR(v, a == b ? 1.0 : 0.0, 1e-12) << to_string(scheme) << a << b;
      }
  }
}

TEST(Basis, PlaneOrthonormalityOfSample) {
  const auto b = spec_for(QuantScheme::TwoDEven);
  const auto states = enumerate_basis(spec_for(QuantScheme::TwoDEven, 10));
  for (std::size_t i = 0; i < states.size(); ++i)
    for (std::size_t j = 0; j <= i; ++j) {
      const double radial = oracle::integrate_half_line([&](double beta) {
        return radial_wavefunction(states[i], b, beta) * radial_wavefunction(states[j], b, beta) * beta;
      });
      double angular = 0.0;
      for (int lobe = 0; lobe < 6; ++lobe)
        angular += oracle::integrate_interval(
            [&](double g) {
              return angular_wavefunction(states[i].m_ang, b.scheme, g) *
                     angular_wavefunction(states[j].m_ang, b.scheme, g);
            },
            lobe * kPi / 3, (lobe + 1) * kPi / 3);
      EXPECT_NEAR(radial * angular, i == j ? 1.0 : 0.0, 1e-10);
    }
}

TEST(Basis, SymmetryUnderRotationAndReflection) {
  for (auto scheme : kAllSchemes) {
    const auto b = spec_for(scheme, 60);
    for (const auto& st : enumerate_basis(b))
      for (double g : {0.1, 0.8, 2.5}) {
        const ShapeCoords c{0.4, g};
        const double v = wavefunction(st, b, c);
        EXPECT_NEAR(wavefunction(st, b, {0.4, g + 2 * kPi / 3}), v, 1e-10 * (1 + std::abs(v)));
        const double sign = scheme == QuantScheme::TwoDOdd ? -1.0 : 1.0;
        EXPECT_NEAR(wavefunction(st, b, {0.4, -g}), sign * v, 1e-10 * (1 + std::abs(v)));
      }
  }
}

TEST(Basis, DecaysAtLargeBeta) {
  for (auto scheme : kAllSchemes) {
    const auto b = spec_for(scheme);
    EXPECT_EQ(wavefunction({5, 2}, b, {200.0, 0.3}), 0.0);
  }
}
