#include <jwm/theta.hpp>

#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"

using namespace jwm;

namespace {

const PrecisionContext ctx(30);

Complex big(long double re, long double im) {
   return Complex(Real(static_cast<double>(re)), Real(static_cast<double>(im)));
}

TEST(Theta, TripleProduct) {
   PrecisionScope s(ctx);
   for (auto [tr, ti, zr, zi] : std::vector<std::array<long double, 4>>{
            {0, 1, 0.3L, 0.1L}, {0.2L, 0.8L, -0.45L, 0.2L}, {-0.4L, 1.7L, 0.1L, -0.6L}}) {
      Complex v = theta_char(big(tr, ti), big(zr, zi), ctx);
      auto o = oracle::theta_triple_product({tr, ti}, {zr, zi});
      EXPECT_LT(abs(v - big(o.real(), o.imag())), 1e-15 * (1 + std::abs(o)));
   }
}

TEST(Theta, DerivativeAtZeroIsEtaCubed) {
   PrecisionScope s(ctx);
   Complex tau(Real("0.1"), Real("0.9"));
   Complex d = theta_char_dz(tau, Complex(), ctx);
   auto eta = oracle::eta_product({0.1L, 0.9L});
   auto expect = -2.0L * std::acos(-1.0L) * eta * eta * eta;
   EXPECT_LT(abs(d - big(expect.real(), expect.imag())), 1e-14);
   EXPECT_LT(abs(theta_char(tau, Complex(), ctx)), pow10(-28));
}

TEST(Theta, QuasiPeriodicity) {
   PrecisionScope s(ctx);
   std::mt19937_64 rng(4);
   std::uniform_real_distribution<double> u(-1, 1);
   Complex tau(Real("0.3"), Real("1.1"));
   Complex ipi(Real(0), real_pi());
   for (int t = 0; t < 10; ++t) {
      Complex z(Real(u(rng)), Real(u(rng)));
      Complex v = theta_char(tau, z, ctx);
      EXPECT_LT(abs(theta_char(tau, z + Complex(1), ctx) + v), pow10(-26));
      Complex f = -cexp(-(ipi * tau) - ipi * z * Real(2));
      EXPECT_LT(abs(theta_char(tau, z + tau, ctx) - f * v), pow10(-25) * (1 + abs(f * v)));
   }
}

TEST(Theta, DzMatchesFiniteDifference) {
   PrecisionScope s(ctx);
   Complex tau(Real("-0.2"), Real("0.95")), z(Real("1.7"), Real("2.3"));
   Real h = pow10(-8);
   Complex fd = (theta_char(tau, z + Complex(h), ctx) - theta_char(tau, z - Complex(h), ctx)) / Complex(Real(2 * h));
   Complex d = theta_char_dz(tau, z, ctx);
   EXPECT_LT(abs(fd - d) / abs(d), 1e-14);
   Complex ld = theta_char_log_derivative(tau, z, ctx);
   EXPECT_LT(abs(ld - d / theta_char(tau, z, ctx)) / abs(ld), pow10(-25));
}

TEST(Theta, PoleOnDivisor) {
   PrecisionScope s(ctx);
   Complex tau(Real("0.1"), Real("1.2"));
   EXPECT_THROW(theta_char_log_derivative(tau, tau * 2 + Complex(3), ctx), PoleError);
}

TEST(GramMatrix, Validation) {
   EXPECT_THROW(GramMatrix({{2, 1}, {0, 2}}), std::invalid_argument);
   EXPECT_THROW(GramMatrix({{1, 2}, {2, 1}}), std::invalid_argument);
   EXPECT_THROW(GramMatrix({{2, 1}}), std::invalid_argument);
   GramMatrix a2({{2, -1}, {-1, 2}});
   EXPECT_TRUE(a2.even());
   EXPECT_NEAR(a2.min_eigenvalue(), 1.0, 0.6);
   EXPECT_LE(a2.min_eigenvalue(), 1.0);
   EXPECT_FALSE(GramMatrix::identity(2).even());
}

TEST(ThetaLattice, ProductMatchesLatticeSum) {
   PrecisionScope s(ctx);
   Complex tau(Real("0.15"), Real("1.05"));
   std::vector<Complex> z{Complex(Real("0.1"), Real("0.2")), Complex(Real("-0.3"), Real("0.05")),
                          Complex(Real("0.27"), Real("-0.11"))};
   for (int g = 1; g <= 3; ++g) {
      std::vector<Complex> zg(z.begin(), z.begin() + g);
      Characteristic ch{std::vector<Real>(g, Real(0.5)), std::vector<Real>(g, Real(0.5))};
      Complex a = theta_product(tau, zg, ctx), b = theta_lattice_char(tau, zg, GramMatrix::identity(g), ch, ctx);
      EXPECT_LT(abs(a - b), pow10(-26)) << g;
   }
}

TEST(ThetaLattice, EvenLatticeQuasiPeriodicity) {
   PrecisionScope s(ctx);
   GramMatrix a2({{2, -1}, {-1, 2}});
   Complex tau(Real("0.1"), Real("0.8"));
   std::vector<Complex> z{Complex(Real("0.2"), Real("0.1")), Complex(Real("-0.1"), Real("0.3"))};
   Complex v = theta_lattice(tau, z, a2, ctx);
   // m = (1, -1): (m, m) = 6, (z, m) = z^T G m
   std::vector<long> m{1, -1};
   std::vector<Complex> zs{z[0] + tau * Real(m[0]) + Complex(2), z[1] + tau * Real(m[1])};
   Real mm(0);
   Complex zm;
   for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
         mm += Real(m[i] * m[j] * a2(i, j));
         zm += z[i] * Real(m[j] * a2(i, j));
      }
   Complex ipi(Real(0), real_pi());
   Complex expect = cexp(-(ipi * tau * mm) - ipi * zm * Real(2)) * v;
   EXPECT_LT(abs(theta_lattice(tau, zs, a2, ctx) - expect), pow10(-25) * (1 + abs(expect)));
   EXPECT_THROW(theta_lattice(tau, z, GramMatrix::identity(2), ctx), std::invalid_argument);
}

TEST(ThetaLattice, DirectDoubleSum) {
   PrecisionScope s(ctx);
   // g = 2, G = I with characteristic (1/2, 1/2) at tau = i, z = (1/3, 1/5)
   Complex tau = Complex::i();
   std::vector<Complex> z{Complex(Real(1) / 3), Complex(Real(1) / 5)};
   Characteristic ch{{Real(0.5), Real(0.5)}, {Real(0.5), Real(0.5)}};
   Complex v = theta_lattice_char(tau, z, GramMatrix::identity(2), ch, ctx);
   const long double pi = std::acos(-1.0L);
   oracle::cld acc = 0;
   for (int a = -12; a <= 12; ++a)
      for (int b = -12; b <= 12; ++b) {
         long double la = a + 0.5L, lb = b + 0.5L;
         acc += std::exp(oracle::cld(-pi * (la * la + lb * lb),
                                     2 * pi * (la * (1.0L / 3 + 0.5L) + lb * (1.0L / 5 + 0.5L))));
      }
   EXPECT_LT(abs(v - big(acc.real(), acc.imag())), 1e-15);
}

TEST(RaisingOperator, ProductFormAndInvariance) {
   PrecisionScope s(ctx);
   Complex tau(Real("0.05"), Real("1.15"));
   std::vector<Complex> z{Complex(Real("0.21"), Real("0.17")), Complex(Real("-0.33"), Real("0.4"))};
   for (int j = 0; j < 2; ++j) {
      Complex a = raising_log_derivative_product(tau, z, j, ctx);
      std::vector<Complex> zs = z;
      zs[0] += tau * Real(2) - Complex(1);
      zs[1] += tau * Real(-1) + Complex(3);
      EXPECT_LT(abs(raising_log_derivative_product(tau, zs, j, ctx) - a), pow10(-24));
   }
   GramMatrix a2({{2, -1}, {-1, 2}});
   Complex r = raising_log_derivative(tau, z, 1, a2, ctx);
   std::vector<Complex> zs{z[0] + tau, z[1] - tau * Real(2)};
   EXPECT_LT(abs(raising_log_derivative(tau, zs, 1, a2, ctx) - r), pow10(-24));
}

}  // namespace
