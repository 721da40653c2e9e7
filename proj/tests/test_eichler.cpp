#include <jwm/eichler.hpp>

#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"

using namespace jwm;

namespace {

const PrecisionContext ctx(40);

std::complex<double> dbl(const Complex& z) { return {static_cast<double>(z.re), static_cast<double>(z.im)}; }

std::vector<long> small_coeffs(const CuspForm& f, long n) {
   std::vector<long> a;
   for (const auto& c : f.coeffs(n)) a.push_back(static_cast<long>(c));
   return a;
}

TEST(Eichler, RayQuadratureOracle) {
   PrecisionScope s(ctx);
   auto d = builtin_form("delta");
   auto a = small_coeffs(d, 60);
   for (auto tau : {std::complex<double>(0, 1.2), std::complex<double>(0.3, 0.9)})
      for (int l : {0, 1, 5, 10}) {
         Complex v = eichler_series(d, l, Complex(Real(tau.real()), Real(tau.imag())), ctx);
         auto o = oracle::eichler_ray(a, tau, l);
         EXPECT_LT(std::abs(dbl(v) - o), 1e-9 * std::abs(o)) << l;
      }
}

TEST(Eichler, SeriesMatchesQuadratureOnGrid) {
   PrecisionScope s(ctx);
   for (const char* name : {"delta", "eta3p8"}) {
      auto f = builtin_form(name);
      int k = f.weight();
      for (const char* x : {"-0.3", "0", "0.4"})
         for (const char* y : {"0.5", "1", "2"})
            for (int l : {0, 1, k - 2}) {
               Complex tau{Real(x), Real(y)};
               Complex a = eichler_series(f, l, tau, ctx), b = eichler_quadrature(f, l, tau, ctx);
               EXPECT_LT(abs(a - b), pow10(-(ctx.digits() - 2 * ctx.guard())) * (1 + abs(a)));
            }
   }
}

TEST(Eichler, GoldenVectors) {
   PrecisionScope s(ctx);
   auto d = builtin_form("delta");
   auto v = eichler_vector(d, Complex(Real(0), Real(2)), SL2Z::S(), ctx);
   std::vector<double> re{0, 7431.817430, 0, -1400.899032, 0, 277.055319, 0, -56.821709, 0, 11.983426, 0};
   std::vector<double> im{-17511.494570, 0, 3204.517440, 0, -619.775633, 0, 124.975219, 0, -26.014701, 0, 5.550045};
   for (int l = 0; l <= 10; ++l) {
      EXPECT_NEAR(static_cast<double>(v.components[l].re) * 1e7, re[l], 1e-6);
      EXPECT_NEAR(static_cast<double>(v.components[l].im) * 1e7, im[l], 1e-6);
   }
   auto f = builtin_form("eta3p8");
   Complex tau(Real("0.5"), Real(sqrt(Real(7)) / 2));
   auto w = eichler_vector(f, tau, SL2Z::S(), ctx);
   std::vector<std::complex<double>> expect{{5.792643, 7.706733}, {-5.792643, 1.954292}, {0, -3.908585}};
   for (int l = 0; l < 3; ++l) EXPECT_LT(std::abs(dbl(w.components[l]) * 1e5 - expect[l]), 1e-6);
   auto e0 = eichler_vector(f, tau, SL2Z::identity(), ctx);
   EXPECT_TRUE(e0.basis_tag == SL2Z::identity());
   EXPECT_LT(abs(e0.components[0] + Complex(Real(0), Real("3.908585e-5"))), 1e-11);
}

TEST(Eichler, DerivativeIsMinusF) {
   PrecisionScope s(ctx);
   auto d = builtin_form("delta");
   Complex tau(Real(0), Real(2));
   Real h = pow10(-10);
   for (int l : {0, 3}) {
      Complex fd = (eichler_series(d, l, tau + Complex(h), ctx) - eichler_series(d, l, tau - Complex(h), ctx)) /
                   Complex(Real(2 * h));
      Complex expect = -(evaluate(d, tau, ctx) * cpow(tau, static_cast<long>(l)));
      EXPECT_LT(abs(fd - expect) / abs(expect), 1e-15);
   }
}

TEST(Eichler, VanishesAtCusp) {
   PrecisionScope s(ctx);
   auto v = eichler_vector(builtin_form("delta"), Complex(Real(0), Real(30)), SL2Z::T(), ctx);
   for (const auto& c : v.components) EXPECT_LT(abs(c), pow10(-30));
}

TEST(Periods, TrivialAndGolden) {
   PrecisionScope s(ctx);
   auto d = builtin_form("delta");
   for (const auto& c : period_vector(d, SL2Z::T(), ctx)) EXPECT_TRUE(c == Complex());
   auto p = period_vector(d, SL2Z::S(), ctx);
   Real alpha("0.00595896498957823785384"), beta("0.00370771046494806529450");
   EXPECT_LT(abs(p[0] - Complex(Real(0), alpha)), 1e-22);
   EXPECT_LT(abs(p[10] + Complex(Real(0), alpha)), 1e-22);
   EXPECT_LT(abs(p[1] + Complex(beta)), 1e-22);
   EXPECT_LT(abs(p[2] / p[0] - Complex(Real(-691) / 1620)), pow10(-30));
   EXPECT_LT(abs(p[4] / p[0] - Complex(Real(691) / 2520)), pow10(-30));
   EXPECT_LT(abs(p[3] / p[1] - Complex(Real(-25) / 48)), pow10(-30));
   EXPECT_LT(abs(p[5] / p[1] - Complex(Real(5) / 12)), pow10(-30));
   // CM periods lie on the recovered lattice
   auto f = builtin_form("eta3p8");
   auto pl = period_lattice(f, ctx);
   for (const auto& g : {SL2Z(4, -1, 9, -2), SL2Z(7, -4, 9, -5)})
      for (const auto& c : period_vector(f, g, ctx)) {
         auto [x, y] = pl.basis.coordinates(c);
         EXPECT_LT(abs(x - round(x)) + abs(y - round(y)), pow10(-30));
      }
}

TEST(Periods, CocycleRelation) {
   PrecisionScope s(ctx);
   auto f = builtin_form("eta3p8");
   SL2Z g1(4, -1, 9, -2), g2(7, -4, 9, -5);
   auto p12 = period_vector(f, g1 * g2, ctx);
   auto p1 = period_vector(f, g1, ctx), p2 = period_vector(f, g2, ctx);
   auto tp1 = n_matrix(g2.inverse(), 4).apply(p1);
   for (int l = 0; l < 3; ++l) EXPECT_LT(abs(p12[l] - (p2[l] + tp1[l])), pow10(-35));
}

TEST(RecoverLattice, TrivialAndErrors) {
   PrecisionScope s(ctx);
   Complex i = Complex::i();
   auto pl = recover_lattice(std::vector<Complex>{Complex(1), i, Complex(3) + i * 2}, ctx);
   EXPECT_LT(abs(abs(pl.basis.volume()) - 1), pow10(-30));
   EXPECT_LT(pl.residual, pow10(-30));
   auto half = recover_lattice(std::vector<Complex>{Complex(1), i, Complex(Real(0.5)), i / Real(3)}, ctx);
   EXPECT_LT(abs(half.basis.volume() - Real(1) / 6), pow10(-30));
   EXPECT_THROW(recover_lattice(std::vector<Complex>{Complex(1), Complex(2)}, ctx), LatticeRecoveryError);
   EXPECT_THROW(recover_lattice(std::vector<Complex>{Complex(1), i, Complex(sqrt(Real(2)))}, ctx), LatticeRecoveryError);
}

TEST(RecoverLattice, Idempotent) {
   PrecisionScope s(ctx);
   auto pl = period_lattice(builtin_form("eta3p8"), ctx);
   std::mt19937_64 rng(12);
   std::uniform_int_distribution<int> u(-50, 50);
   std::vector<Complex> vals;
   for (int t = 0; t < 20; ++t) vals.push_back(pl.basis.omega1() * Real(u(rng)) + pl.basis.omega2() * Real(u(rng)));
   vals.push_back(pl.basis.omega1());
   vals.push_back(pl.basis.omega2());
   auto again = recover_lattice(vals, ctx);
   EXPECT_LT(abs(again.basis.omega1() - pl.basis.omega1()), pow10(-30));
   EXPECT_LT(abs(again.basis.omega2() - pl.basis.omega2()), pow10(-30));
}

TEST(PeriodLattice, Delta) {
   PrecisionScope s(ctx);
   auto pl = period_lattice(builtin_form("delta"), ctx);
   EXPECT_LT(abs(pl.basis.omega1() - Complex(Real(0), Real("2.62740960739781210486576914277e-7"))), 1e-35);
   EXPECT_LT(abs(abs(pl.basis.omega2()) - Real("7.72439680197513603021502890197e-5")), 1e-33);
   EXPECT_EQ(pl.generators.size(), 22u);
}

TEST(PeriodLattice, Eta11MatchesEllipticCurve) {
   PrecisionScope s(ctx);
   auto pl = period_lattice(builtin_form("eta11"), ctx);
   // 2 pi Lambda_f is the period lattice of 11a1
   Complex w1 = pl.basis.omega1() * Real(2 * real_pi()), w2 = pl.basis.omega2() * Real(2 * real_pi());
   Real vol = abs(cross(w1, w2));
   EXPECT_NEAR(static_cast<double>(vol), 1.26920930427955 * 1.45881661693850, 1e-10);
   // rotated by i: the Eichler integral carries the factor i/(2 pi n)
   Complex omega(Real(0), Real("1.26920930427955"));
   auto [x, y] = Lattice2D(w1, w2).coordinates(omega);
   EXPECT_NEAR(static_cast<double>(x), std::round(static_cast<double>(x)), 1e-10);
   EXPECT_NEAR(static_cast<double>(y), std::round(static_cast<double>(y)), 1e-10);
}

TEST(Defect, DeltaCorrectionIntegers) {
   PrecisionScope s(ctx);
   auto d = builtin_form("delta");
   auto pl = period_lattice(d, ctx);
   auto r = modularity_defect(d, pl.basis.omega1(), -pl.basis.omega2(), SL2Z(2, 5, 1, 3), Complex(Real(0), Real(2)),
                              SL2Z::S(), ctx);
   std::vector<std::pair<long, long>> expect{{-23814000, 0}, {11895660, 12960}, {-5251302, -12912}, {1943634, 9159},
                                             {-503319, -5456}, {-14030, 2860},   {136923, -1336},   {-123396, 551},
                                             {81046, -192},    {-45360, 48},     {22680, 0}};
   for (int l = 0; l <= 10; ++l) {
      EXPECT_EQ(r.coords[l].first, expect[l].first);
      EXPECT_EQ(r.coords[l].second, expect[l].second);
   }
   auto t = modularity_defect(d, pl.basis.omega1(), pl.basis.omega2(), SL2Z::T(), Complex(Real(0), Real(2)),
                              SL2Z::identity(), ctx);
   for (const auto& c : t.coords) EXPECT_TRUE(c.first == 0 && c.second == 0);
}

TEST(Defect, InLatticeForGeneratorsAtRandomPoints) {
   PrecisionScope s(ctx);
   std::mt19937_64 rng(21);
   std::uniform_real_distribution<double> u(-0.5, 0.5), v(0.3, 1.2);
   for (const char* name : {"delta", "eta3p8"}) {
      auto f = builtin_form(name);
      auto pl = period_lattice(f, ctx);
      for (const auto& g : f.group().generators)
         for (int t = 0; t < 3; ++t) {
            Complex tau(Real(u(rng)), Real(v(rng)));
            auto r = modularity_defect(f, pl.basis.omega1(), pl.basis.omega2(), g, tau, SL2Z::identity(), ctx);
            EXPECT_LT(r.residual, pow10(-(ctx.digits() / 2)));
            // M = gamma gives -P_gamma
            auto q = modularity_defect(f, pl.basis.omega1(), pl.basis.omega2(), g, tau, g, ctx);
            auto p = period_vector(f, g, ctx);
            for (std::size_t l = 0; l < p.size(); ++l) EXPECT_LT(abs(q.values[l] + p[l]), pow10(-30));
         }
   }
}

TEST(Defect, MinusIdentityIsEven) {
   PrecisionScope s(ctx);
   auto f = builtin_form("eta3p8");
   auto pl = period_lattice(f, ctx);
   auto r = modularity_defect(f, pl.basis.omega1(), pl.basis.omega2(), SL2Z::minus_identity(),
                              Complex(Real("0.1"), Real("0.7")), SL2Z::identity(), ctx);
   for (const auto& c : r.coords) EXPECT_TRUE(c.first == 0 && c.second == 0);
}

TEST(Defect, RejectsNonModular) {
   PrecisionScope s(ctx);
   auto f = builtin_form("eta3p8");
   auto pl = period_lattice(f, ctx);
   EXPECT_THROW(modularity_defect(f, pl.basis.omega1(), pl.basis.omega2(), SL2Z::S(), Complex(Real("0.1"), Real("1.1")),
                                  SL2Z::identity(), ctx),
                ModularityError);
}

}  // namespace
