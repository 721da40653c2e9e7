#include <jwm/qforms.hpp>

#include <gtest/gtest.h>

#include <cstdio>
#include <fstream>

#include "oracles.hpp"

using namespace jwm;

namespace {

const PrecisionContext ctx(40);

Complex to_big(const oracle::cld& z) {
   return Complex(Real(static_cast<double>(z.real())), Real(static_cast<double>(z.imag())));
}

TEST(Coefficients, Delta) {
   auto d = delta_coefficients(30);
   std::vector<long> expect{0, 1, -24, 252, -1472, 4830, -6048, -16744, 84480, -113643, -115920};
   for (int n = 0; n <= 10; ++n) EXPECT_EQ(d.coeff(n), expect[n]);
   auto o = oracle::eta_quotient_bruteforce({{1, 24}}, 1, 30);
   for (int n = 0; n <= 30; ++n) EXPECT_EQ(d.coeff(n), o[n]);
   // multiplicativity of Ramanujan tau
   EXPECT_EQ(d.coeff(6), d.coeff(2) * d.coeff(3));
   EXPECT_EQ(d.coeff(4), d.coeff(2) * d.coeff(2) - 2048);
}

TEST(Coefficients, Eta3Pow8) {
   auto f = eta3_pow8_coefficients(60);
   EXPECT_EQ(f.coeff(1), 1);
   EXPECT_EQ(f.coeff(4), -8);
   EXPECT_EQ(f.coeff(7), 20);
   EXPECT_EQ(f.coeff(13), -70);
   EXPECT_EQ(f.coeff(16), 64);
   EXPECT_EQ(f.coeff(19), 56);
   for (int n = 0; n <= 60; ++n)
      if (n % 3 != 1) EXPECT_EQ(f.coeff(n), 0) << n;
   auto o = oracle::eta_quotient_bruteforce({{3, 8}}, 1, 60);
   for (int n = 0; n <= 60; ++n) EXPECT_EQ(f.coeff(n), o[n]);
}

TEST(Coefficients, Eta11) {
   auto f = eta11_coefficients(20);
   // a_p = p + 1 - #E(F_p) for 11a1
   std::vector<long> expect{0, 1, -2, -1, 2, 1, 2, -2, 0, -2, -2, 1, -2, 4, 4, -1, -4, -2, 4, 0, 2};
   for (int n = 0; n <= 20; ++n) EXPECT_EQ(f.coeff(n), expect[n]) << n;
}

TEST(Coefficients, AutoExtendAndTruncation) {
   auto d = delta_coefficients(4);
   EXPECT_EQ(d.coeff(12), Integer(-370944));
   EXPECT_GE(d.n_max(), 12);
   EXPECT_THROW(CuspForm("x", 3, full_modular_group(), {0, 1}), std::invalid_argument);
   EXPECT_THROW(CuspForm("x", 4, full_modular_group(), {1, 1}), std::invalid_argument);
   CuspForm fixed("tab", 12, full_modular_group(), {0, 1, -24});
   EXPECT_THROW(fixed.coeff(5), TruncationError);
}

TEST(Import, TextAndJson) {
   std::string txt = testing::TempDir() + "delta.txt";
   {
      std::ofstream o(txt);
      o << "# tau(n)\n1 1\n2 -24\n3 252\n";
   }
   auto f = import_cusp_form(txt, 12, 1);
   EXPECT_EQ(f.weight(), 12);
   EXPECT_EQ(f.coeff(3), 252);
   EXPECT_EQ(f.group().kind, GroupDescriptor::Kind::full);
   std::string js = testing::TempDir() + "f.json";
   {
      std::ofstream o(js);
      o << R"({"weight": 4, "level": 9, "coeffs": [[1, 1], [4, -8], [7, "20"]]})";
   }
   auto g = import_cusp_form(js);
   EXPECT_EQ(g.weight(), 4);
   EXPECT_EQ(g.group().level, 9);
   EXPECT_EQ(g.coeff(7), 20);
   EXPECT_EQ(g.coeff(5), 0);
   EXPECT_THROW(import_cusp_form(txt), std::invalid_argument);
   EXPECT_THROW(import_cusp_form("/nonexistent/file"), std::runtime_error);
   std::remove(txt.c_str());
   std::remove(js.c_str());
}

TEST(Groups, ContainsAndGenerators) {
   auto g9 = gamma0(9);
   EXPECT_TRUE(g9.contains(SL2Z(4, -1, 9, -2)));
   EXPECT_FALSE(g9.contains(SL2Z::S()));
   for (const auto& g : g9.generators) EXPECT_TRUE(g9.contains(g));
   for (const auto& g : gamma0_9_example().generators) EXPECT_TRUE(g9.contains(g));
   auto g5 = gamma1(5);
   for (const auto& g : g5.generators) EXPECT_TRUE(g5.contains(g));
   EXPECT_FALSE(g5.contains(SL2Z(2, 1, 5, 3)));
   EXPECT_EQ(full_modular_group().generators.size(), 2u);
}

TEST(Eta, Values) {
   PrecisionScope s(ctx);
   Complex i = Complex::i();
   // eta(i) = Gamma(1/4) / (2 pi^{3/4})
   Real g14 = boost::multiprecision::tgamma(Real(1) / 4);
   Real expect = g14 / (2 * pow(real_pi(), Real(3) / 4));
   EXPECT_LT(abs(dedekind_eta(i, ctx) - Complex(expect)), pow10(-38));
   Complex shift = cexp(Complex(Real(0), Real(real_pi() / 12)));
   EXPECT_LT(abs(dedekind_eta(i + Complex(1), ctx) - shift * dedekind_eta(i, ctx)), pow10(-38));
   Complex t(Real("0.1"), Real("0.7"));
   EXPECT_LT(abs(dedekind_eta(t, ctx) - to_big(oracle::eta_product({0.1L, 0.7L}))), 1e-15);
   EXPECT_THROW(dedekind_eta(Complex(Real(1), Real(0)), ctx), std::domain_error);
}

TEST(Delta, EqualsEtaPower24AndIsModular) {
   PrecisionScope s(ctx);
   auto d = builtin_form("delta");
   std::mt19937_64 rng(1);
   std::uniform_real_distribution<double> u(-0.5, 0.5), v(0.8, 1.5);
   for (int t = 0; t < 5; ++t) {
      Complex tau(Real(u(rng)), Real(v(rng)));
      Complex a = evaluate(d, tau, ctx), b = cpow(dedekind_eta(tau, ctx), 24L);
      EXPECT_LT(abs(a - b) / abs(b), pow10(-(ctx.digits() - ctx.guard())));
      auto m = oracle::random_sl2z(rng, 2);
      SL2Z g(m.a, m.b, m.c, m.d);
      Complex lhs = evaluate(d, g.act(tau), ctx), rhs = cpow(j_factor(g, tau), 12L) * a;
      EXPECT_LT(abs(lhs - rhs) / abs(rhs), pow10(-(ctx.digits() - ctx.guard())));
   }
}

TEST(Eta3Pow8, ModularOnGamma09) {
   PrecisionScope s(ctx);
   auto f = builtin_form("eta3p8");
   Complex tau(Real("0.13"), Real("0.4"));
   for (SL2Z g : {SL2Z(4, -1, 9, -2), SL2Z(7, -4, 9, -5), SL2Z::T()}) {
      Complex lhs = evaluate(f, g.act(tau), ctx), rhs = cpow(j_factor(g, tau), 4L) * evaluate(f, tau, ctx);
      EXPECT_LT(abs(lhs - rhs) / abs(rhs), pow10(-(ctx.digits() - ctx.guard())));
   }
}

TEST(Eisenstein, G2) {
   PrecisionScope s(ctx);
   Complex i = Complex::i();
   EXPECT_LT(abs(eisenstein_g2(i, ctx) - Complex(real_pi())), pow10(-38));
   EXPECT_LT(abs(eisenstein_g2_star(i, ctx)), pow10(-38));
   EXPECT_LT(abs(eisenstein_g2_star(i + Complex(1), ctx)), pow10(-38));
   Complex t2 = i * 2;
   EXPECT_LT(abs(eisenstein_g2_star(t2, ctx) - (eisenstein_g2(t2, ctx) - Complex(real_pi() / 2))), pow10(-38));
   EXPECT_LT(abs(eisenstein_g2(i * 30, ctx) - Complex(real_pi() * real_pi() / 3)), pow10(-38));
   for (auto z : {oracle::cld(0, 2), oracle::cld(0.3L, 0.9L)}) {
      Complex tau(Real(static_cast<double>(z.real())), Real(static_cast<double>(z.imag())));
      EXPECT_LT(abs(eisenstein_g2(tau, ctx) - to_big(oracle::g2_cot_sum(z))), 1e-14);
   }
}

TEST(Eisenstein, G2StarIsModular) {
   PrecisionScope s(ctx);
   std::mt19937_64 rng(2);
   Complex tau(Real("0.21"), Real("1.3"));
   for (int t = 0; t < 5; ++t) {
      auto m = oracle::random_sl2z(rng, 2);
      SL2Z g(m.a, m.b, m.c, m.d);
      Complex j = j_factor(g, tau);
      EXPECT_LT(abs(eisenstein_g2_star(g.act(tau), ctx) - j * j * eisenstein_g2_star(tau, ctx)), pow10(-30));
      Complex quasi = j * j * eisenstein_g2(tau, ctx) - Complex(Real(0), Real(2 * real_pi() * g.c)) * j;
      EXPECT_LT(abs(eisenstein_g2(g.act(tau), ctx) - quasi), pow10(-30));
   }
}

TEST(Eisenstein, G2nOnLattices) {
   PrecisionScope s(ctx);
   Complex i = Complex::i();
   EXPECT_LT(abs(eisenstein_g2n(Lattice2D::standard(i), 3, ctx)), pow10(-35));
   Complex rho(Real(-0.5), Real(sqrt(Real(3)) / 2));
   EXPECT_LT(abs(eisenstein_g2n(Lattice2D::standard(rho), 2, ctx)), pow10(-35));
   // G4(Z + iZ) = Gamma(1/4)^8 / (960 pi^2)
   Real g14 = boost::multiprecision::tgamma(Real(1) / 4);
   Real g4 = pow(g14, 8) / (960 * real_pi() * real_pi());
   EXPECT_LT(abs(eisenstein_g2n(Lattice2D::standard(i), 2, ctx) - Complex(g4)), pow10(-35));
   // homogeneity and basis independence
   Lattice2D lat(Complex(Real("0.3"), Real("0.1")), Complex(Real("-0.2"), Real("0.9")));
   Complex c(Real("1.5"), Real("-0.5"));
   Complex a = eisenstein_g2n(lat, 3, ctx), b = eisenstein_g2n(lat.scaled(c), 3, ctx);
   EXPECT_LT(abs(b * cpow(c, 6L) - a) / abs(a), pow10(-35));
   Lattice2D other(lat.omega1() * 2 + lat.omega2(), lat.omega1() + lat.omega2());
   EXPECT_LT(abs(eisenstein_g2n(other, 3, ctx) - a) / abs(a), pow10(-35));
}

TEST(Evaluate, UpperHalfPlaneRequired) {
   PrecisionScope s(ctx);
   auto d = builtin_form("delta");
   EXPECT_THROW(evaluate(d, Complex(Real(0), Real(-1)), ctx), std::domain_error);
   EXPECT_LT(abs(evaluate(d, Complex(Real(0), Real(10)), ctx) - e2pi(Complex(Real(0), Real(10)))) /
                 abs(e2pi(Complex(Real(0), Real(10)))),
             1e-25);
}

}  // namespace
