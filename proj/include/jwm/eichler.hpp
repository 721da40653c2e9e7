#pragma once

#include <jwm/lattice.hpp>
#include <jwm/numeric.hpp>
#include <jwm/qforms.hpp>
#include <jwm/symrep.hpp>

#include <array>
#include <sstream>
#include <string>
#include <vector>

namespace jwm {

// components[l] = int_tau^{i inf} f(t) t^l dt taken against the basis
// (X1,X2) = basis_tag^-1 o (e1,e2), expressed in standard coordinates.
struct EichlerValue {
   int k = 2;
   std::vector<Complex> components;
   SL2Z basis_tag;
};

namespace detail {

inline long eichler_terms(const CuspForm& f, const Complex& tau, const PrecisionContext& ctx) {
   return series_terms(tau, f.weight() + 2, ctx);
}

// S_j = sum_n a_n (i/(2 pi n))^{j+1} q^n for j = 0..w
inline std::vector<Complex> eichler_moment_sums(const CuspForm& f, const Complex& tau, int w,
                                                const PrecisionContext& ctx) {
   long n = eichler_terms(f, tau, ctx);
   auto a = f.real_coeffs(n);
   Real inv2pi = 1 / (2 * real_pi());
   Complex q = e2pi(tau), qn(1);
   std::vector<Complex> s(w + 1);
   for (long m = 1; m <= n; ++m) {
      qn *= q;
      if (a[m] == 0) continue;
      Real r = inv2pi / m;
      Complex t = qn * a[m];
      for (int j = 0; j <= w; ++j) {
         t = Complex(Real(-t.im * r), Real(t.re * r));  // times i r
         s[j] += t;
      }
   }
   return s;
}

}  // namespace detail

// E_l(tau) = sum_n a_n q^n sum_{j<=l} l!/(l-j)! (i/(2 pi n))^{j+1} tau^{l-j}
inline std::vector<Complex> eichler_standard(const CuspForm& f, const Complex& tau_in, const PrecisionContext& ctx) {
   PrecisionScope scope(ctx);
   Complex tau = promote(tau_in);
   require_upper_half_plane(tau);
   const int w = f.weight() - 2;
   auto s = detail::eichler_moment_sums(f, tau, w, ctx);
   std::vector<Complex> tp(w + 1);
   tp[0] = Complex(1);
   for (int j = 1; j <= w; ++j) tp[j] = tp[j - 1] * tau;
   std::vector<Complex> e(w + 1);
   for (int l = 0; l <= w; ++l) {
      Real fall(1);
      Complex acc;
      for (int j = 0; j <= l; ++j) {
         acc += s[j] * tp[l - j] * fall;
         fall *= (l - j);
      }
      e[l] = acc;
   }
   return e;
}

inline Complex eichler_series(const CuspForm& f, int l, const Complex& tau, const PrecisionContext& ctx) {
   if (l < 0 || l > f.weight() - 2) throw std::out_of_range("l must lie in 0..k-2");
   return eichler_standard(f, tau, ctx)[l];
}

// Termwise antiderivative: I_0 = -e^{c tau}/c, I_m = -tau^m e^{c tau}/c - (m/c) I_{m-1}, c = 2 pi i n.
inline Complex eichler_quadrature(const CuspForm& f, int l, const Complex& tau_in, const PrecisionContext& ctx) {
   if (l < 0 || l > f.weight() - 2) throw std::out_of_range("l must lie in 0..k-2");
   PrecisionScope scope(ctx);
   Complex tau = promote(tau_in);
   require_upper_half_plane(tau);
   long n = detail::eichler_terms(f, tau, ctx);
   auto a = f.real_coeffs(n);
   Real two_pi = 2 * real_pi();
   Complex q = e2pi(tau), qn(1), total;
   for (long m = 1; m <= n; ++m) {
      qn *= q;
      if (a[m] == 0) continue;
      Complex c(Real(0), Real(two_pi * m));
      Complex ec = qn / c;
      Complex I = -ec, tm(1);
      for (int j = 1; j <= l; ++j) {
         tm *= tau;
         I = -(tm * ec) - I * Real(j) / c;
      }
      total += I * a[m];
   }
   return total;
}

inline EichlerValue eichler_vector(const CuspForm& f, const Complex& tau, const SL2Z& m, const PrecisionContext& ctx) {
   PrecisionScope scope(ctx);
   auto e = eichler_standard(f, tau, ctx);
   if (!(m == SL2Z::identity())) e = n_matrix(m.inverse(), f.weight()).apply(e);
   return {f.weight(), std::move(e), m};
}

// P_gamma = int_{gamma^-1 inf}^{inf} f(t) (t e1 + e2)^{k-2} dt in standard
// coordinates, from E(z0) - N(gamma^-1) E(gamma z0) at z0 = -d/c + i/|c|.
inline std::vector<Complex> period_vector(const CuspForm& f, const SL2Z& g, const PrecisionContext& ctx) {
   PrecisionScope scope(ctx);
   const int w = f.weight() - 2;
   if (g.c == 0) return std::vector<Complex>(w + 1);
   Complex z0(Real(Real(-g.d) / g.c), Real(Real(1) / std::labs(g.c)));
   Complex gz0 = g.act(z0);
   auto e0 = eichler_standard(f, z0, ctx);
   auto e1 = n_matrix(g.inverse(), f.weight()).apply(eichler_standard(f, gz0, ctx));
   for (int l = 0; l <= w; ++l) e0[l] -= e1[l];
   return e0;
}

inline Complex period_integral(const CuspForm& f, const SL2Z& g, int l, const PrecisionContext& ctx) {
   if (l < 0 || l > f.weight() - 2) throw std::out_of_range("l must lie in 0..k-2");
   return period_vector(f, g, ctx)[l];
}

inline SymVector period_polynomial(const CuspForm& f, const SL2Z& g, const PrecisionContext& ctx) {
   return SymVector(f.weight(), period_vector(f, g, ctx));
}

struct LatticeRecoveryError : std::runtime_error {
   using std::runtime_error::runtime_error;
};

struct ModularityError : std::runtime_error {
   using std::runtime_error::runtime_error;
};

struct LabeledValue {
   Complex value;
   std::string label;
};

struct PeriodLattice {
   Lattice2D basis;
   std::vector<LabeledValue> generators;
   Real residual;
};

// z = x w1 + y w2 for any R-basis (orientation not required)
inline std::pair<Real, Real> basis_coordinates(const Complex& w1, const Complex& w2, const Complex& z) {
   Real det = cross(w1, w2);
   return {Real(cross(z, w2) / det), Real(cross(w1, z) / det)};
}

namespace detail {

struct Rational {
   Integer p, q;
};

// Best continued-fraction approximation of x with denominator <= dmax that
// lies within tol of x.
inline bool rational_approx(const Real& x, long dmax, const Real& tol, Rational& out) {
   Integer h0 = 0, h1 = 1, k0 = 1, k1 = 0;
   Real r = x;
   for (int it = 0; it < 64; ++it) {
      Real fl = mp::floor(r);
      Integer a = nearest_integer(fl);
      Integer h2 = a * h1 + h0, k2 = a * k1 + k0;
      if (k2 > dmax) return false;
      h0 = h1;
      h1 = h2;
      k0 = k1;
      k1 = k2;
      if (abs(x - to_real(h1) / to_real(k1)) < tol) {
         out = {h1, k1};
         return true;
      }
      Real frac = r - fl;
      if (frac == 0) return false;
      r = 1 / frac;
   }
   return false;
}

// Hermite basis (g1, h), (0, g2) of the Z-span of integer vectors in Z^2.
inline std::array<std::array<Integer, 2>, 2> hnf2(std::vector<std::array<Integer, 2>> rows) {
   auto absv = [](const Integer& x) { return x < 0 ? Integer(-x) : x; };
   while (true) {
      int piv = -1;
      for (int i = 0; i < static_cast<int>(rows.size()); ++i)
         if (rows[i][0] != 0 && (piv < 0 || absv(rows[i][0]) < absv(rows[piv][0]))) piv = i;
      if (piv < 0) throw LatticeRecoveryError("rank deficient integer lattice");
      bool done = true;
      for (int i = 0; i < static_cast<int>(rows.size()); ++i) {
         if (i == piv || rows[i][0] == 0) continue;
         Integer t = rows[i][0] / rows[piv][0];
         rows[i][0] -= t * rows[piv][0];
         rows[i][1] -= t * rows[piv][1];
         if (rows[i][0] != 0) done = false;
      }
      if (done) {
         std::array<Integer, 2> r1 = rows[piv];
         if (r1[0] < 0) r1 = {-r1[0], -r1[1]};
         Integer g2 = 0;
         for (int i = 0; i < static_cast<int>(rows.size()); ++i)
            if (i != piv) g2 = boost::multiprecision::gcd(g2, absv(rows[i][1]));
         if (g2 == 0) throw LatticeRecoveryError("rank deficient integer lattice");
         Integer h = r1[1] % g2;
         if (h < 0) h += g2;
         return {{{r1[0], h}, {Integer(0), g2}}};
      }
   }
}

}  // namespace detail

inline PeriodLattice recover_lattice(const std::vector<LabeledValue>& values, const PrecisionContext& ctx,
                                     long denominator_bound = 10000) {
   PrecisionScope scope(ctx);
   std::vector<LabeledValue> vals;
   Real maxabs(0);
   for (const auto& v : values) {
      vals.push_back({promote(v.value), v.label});
      maxabs = std::max(maxabs, Real(abs(vals.back().value)));
   }
   if (maxabs == 0) throw LatticeRecoveryError("all values vanish");
   Real eps = pow10(-(ctx.digits() / 2));
   std::vector<LabeledValue> nonzero;
   for (const auto& v : vals)
      if (abs(v.value) > eps * maxabs) nonzero.push_back(v);
   if (nonzero.size() < 2) throw LatticeRecoveryError("need two R-independent values");

   // starting pair: the largest value and the one most independent of it
   std::size_t i1 = 0;
   for (std::size_t i = 1; i < nonzero.size(); ++i)
      if (abs(nonzero[i].value) > abs(nonzero[i1].value)) i1 = i;
   std::size_t i2 = i1;
   Real best(0);
   for (std::size_t i = 0; i < nonzero.size(); ++i) {
      Real s = abs(cross(nonzero[i1].value, nonzero[i].value)) / (abs(nonzero[i1].value) * abs(nonzero[i].value));
      if (s > best) {
         best = s;
         i2 = i;
      }
   }
   if (best < eps) throw LatticeRecoveryError("values are R-linearly dependent");
   auto [b1, b2] = gauss_reduce(nonzero[i1].value, nonzero[i2].value);

   std::vector<LabeledValue> pending;
   for (std::size_t i = 0; i < nonzero.size(); ++i)
      if (i != i1 && i != i2) pending.push_back(nonzero[i]);
   while (!pending.empty()) {
      std::vector<LabeledValue> next;
      for (const auto& v : pending) {
         auto [x, y] = basis_coordinates(b1, b2, v.value);
         Real tol = eps * (1 + abs(x) + abs(y));
         detail::Rational rx, ry;
         if (!detail::rational_approx(x, denominator_bound, tol, rx) ||
             !detail::rational_approx(y, denominator_bound, tol, ry)) {
            next.push_back(v);
            continue;
         }
         if (rx.q == 1 && ry.q == 1) continue;
         Integer L = boost::multiprecision::lcm(rx.q, ry.q);
         auto h = detail::hnf2({{L, Integer(0)}, {Integer(0), L}, {rx.p * (L / rx.q), ry.p * (L / ry.q)}});
         Real Lr = to_real(L);
         Complex f1 = b1 / Lr, f2 = b2 / Lr;
         Complex c1 = f1 * to_real(h[0][0]) + f2 * to_real(h[0][1]);
         Complex c2 = f2 * to_real(h[1][1]);
         std::tie(b1, b2) = gauss_reduce(c1, c2);
      }
      if (next.size() == pending.size())
         throw LatticeRecoveryError("coordinates are not rational with denominator <= " +
                                    std::to_string(denominator_bound));
      pending = std::move(next);
   }
   Lattice2D lat(b1, b2);
   Real residual(0);
   for (const auto& v : vals) residual = std::max(residual, Real(nearest_lattice_point(lat, v.value).distance));
   if (residual > eps * maxabs) throw LatticeRecoveryError("residual above tolerance");
   return {lat, vals, residual};
}

inline PeriodLattice recover_lattice(const std::vector<Complex>& values, const PrecisionContext& ctx,
                                     long denominator_bound = 10000) {
   std::vector<LabeledValue> v;
   for (std::size_t i = 0; i < values.size(); ++i) v.push_back({values[i], "value " + std::to_string(i)});
   return recover_lattice(v, ctx, denominator_bound);
}

inline std::string matrix_label(const SL2Z& g) {
   std::ostringstream os;
   os << "(" << g.a << "," << g.b << ";" << g.c << "," << g.d << ")";
   return os.str();
}

inline std::vector<LabeledValue> period_generators(const CuspForm& f, const PrecisionContext& ctx) {
   std::vector<LabeledValue> out;
   for (const SL2Z& g : f.group().generators) {
      auto p = period_vector(f, g, ctx);
      for (std::size_t l = 0; l < p.size(); ++l)
         out.push_back({p[l], "gamma=" + matrix_label(g) + " l=" + std::to_string(l)});
   }
   return out;
}

inline PeriodLattice period_lattice(const CuspForm& f, const PrecisionContext& ctx) {
   return recover_lattice(period_generators(f, ctx), ctx);
}

struct DefectResult {
   std::vector<Complex> values;
   std::vector<std::pair<Integer, Integer>> coords;
   Real residual;
};

// N(M^-1) [E(gamma tau) - N(gamma) E(tau)] in coordinates against (w1, w2).
// M = gamma gives N(gamma^-1) E(gamma tau) - E(tau) = -P_gamma.
inline DefectResult modularity_defect(const CuspForm& f, const Complex& w1, const Complex& w2, const SL2Z& g,
                                      const Complex& tau_in, const SL2Z& m, const PrecisionContext& ctx) {
   PrecisionScope scope(ctx);
   Complex tau = promote(tau_in);
   const int k = f.weight();
   auto eg = eichler_standard(f, g.act(tau), ctx);
   auto et = n_matrix(g, k).apply(eichler_standard(f, tau, ctx));
   std::vector<Complex> d(eg.size());
   for (std::size_t l = 0; l < d.size(); ++l) d[l] = eg[l] - et[l];
   if (!(m == SL2Z::identity())) d = n_matrix(m.inverse(), k).apply(d);
   DefectResult out{d, {}, Real(0)};
   Complex pw1 = promote(w1), pw2 = promote(w2);
   Real scale = std::max(Real(abs(pw1)), Real(abs(pw2)));
   for (const auto& v : d) {
      auto [x, y] = basis_coordinates(pw1, pw2, v);
      Real xr = mp::round(x), yr = mp::round(y);
      Real dist = abs(v - pw1 * xr - pw2 * yr) / scale;
      out.residual = std::max(out.residual, dist);
      out.coords.emplace_back(nearest_integer(xr), nearest_integer(yr));
   }
   if (out.residual > pow10(-(ctx.digits() / 2)))
      throw ModularityError("modularity defect is not in the period lattice");
   return out;
}

}  // namespace jwm
