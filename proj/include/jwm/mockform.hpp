#pragma once

#include <jwm/eichler.hpp>
#include <jwm/lattice.hpp>
#include <jwm/numeric.hpp>
#include <jwm/qforms.hpp>
#include <jwm/symrep.hpp>
#include <jwm/weierstrass.hpp>

#include <algorithm>
#include <optional>
#include <vector>

namespace jwm {

class MockFormContext {
 public:
   MockFormContext(CuspForm f, const PrecisionContext& ctx)
       : f_(std::move(f)), ctx_(ctx), lattice_(period_lattice(f_, ctx)), wl_(lattice_.basis, ctx) {}

   // explicit lattice, e.g. a superlattice of the recovered one
   MockFormContext(CuspForm f, PeriodLattice lattice, const PrecisionContext& ctx)
       : f_(std::move(f)), ctx_(ctx), lattice_(std::move(lattice)), wl_(lattice_.basis, ctx) {}

   const CuspForm& form() const { return f_; }
   int weight() const { return f_.weight(); }
   const PrecisionContext& context() const { return ctx_; }
   const PeriodLattice& lattice() const { return lattice_; }
   const WeierstrassLattice& weierstrass() const { return wl_; }

 private:
   CuspForm f_;
   PrecisionContext ctx_;
   PeriodLattice lattice_;
   WeierstrassLattice wl_;
};

struct PoleInfo {
   int component = -1;
   Complex lattice_point;
   Complex offset;  // z - lattice_point
   LaurentExpansion principal;
};

struct FValue {
   SymVector value;       // standard basis (e1, e2)
   SymVector components;  // zeta* applied to N(M^-1) E, basis tag M
   Complex tau;
   SL2Z m;
   bool pole_flag = false;
   std::vector<PoleInfo> poles;
};

// component j = sum_i N(M)_{ij} zeta*(z_i)
inline std::vector<Complex> directional_zeta(const MockFormContext& mf, const std::vector<Complex>& z, const SL2Z& m) {
   PrecisionScope scope(mf.context());
   const int k = mf.weight();
   if (static_cast<int>(z.size()) != k - 1) throw std::invalid_argument("vector length must be k-1");
   std::vector<Complex> zs;
   for (const auto& zi : z) zs.push_back(mf.weierstrass().zeta_star(zi));
   return n_matrix(m, k).transpose().apply(zs);
}

inline FValue f_value(const MockFormContext& mf, const Complex& tau_in, const SL2Z& m) {
   const auto& ctx = mf.context();
   PrecisionScope scope(ctx);
   const int k = mf.weight();
   Complex tau = promote(tau_in);
   auto ev = eichler_vector(mf.form(), tau, m, ctx);
   FValue out;
   out.tau = tau;
   out.m = m;
   std::vector<Complex> zs(ev.components.size());
   for (std::size_t l = 0; l < zs.size(); ++l) {
      const Complex& z = ev.components[l];
      if (mf.weierstrass().is_pole(z)) {
         auto np = nearest_lattice_point(mf.weierstrass().reduced(), z);
         out.pole_flag = true;
         out.poles.push_back({static_cast<int>(l), np.point, z - np.point, mf.weierstrass().laurent(5)});
         continue;
      }
      zs[l] = mf.weierstrass().zeta_star(z);
   }
   out.components = SymVector(k, zs, m);
   out.value = SymVector(k, m == SL2Z::identity() ? zs : n_matrix(m, k).apply(zs));
   return out;
}

struct InvarianceResult {
   Real deviation;
   std::vector<Complex> lhs, rhs;
};

// F(gamma tau, M) against N(gamma) F(tau, gamma^-1 M)
inline InvarianceResult rho_invariance(const MockFormContext& mf, const SL2Z& g, const Complex& tau, const SL2Z& m) {
   PrecisionScope scope(mf.context());
   if (!mf.form().group().contains(g)) throw std::invalid_argument("gamma is not in the group of the form");
   auto left = f_value(mf, g.act(promote(tau)), m);
   auto right = f_value(mf, tau, g.inverse() * m);
   if (left.pole_flag || right.pole_flag) throw PoleError("pole at an evaluation point");
   InvarianceResult r{Real(0), left.value.entries, n_matrix(g, mf.weight()).apply(right.value.entries)};
   for (std::size_t i = 0; i < r.lhs.size(); ++i) r.deviation = std::max(r.deviation, Real(abs(r.lhs[i] - r.rhs[i])));
   return r;
}

inline Real rho_invariance_check(const MockFormContext& mf, const SL2Z& g, const Complex& tau, const SL2Z& m) {
   return rho_invariance(mf, g, tau, m).deviation;
}

struct ShadowResult {
   std::vector<Complex> computed;  // xi_0 F by finite differences
   std::vector<Complex> expected;  // (2 pi i / Vol) f(tau) (tau e1 + e2)^{k-2}
   int sign = 0;                   // computed ~ sign * expected
   Real deviation;                 // max componentwise relative deviation
};

namespace detail {

inline Real relative_deviation(const std::vector<Complex>& a, const std::vector<Complex>& b, int sign) {
   Real scale(0), dev(0);
   for (const auto& x : b) scale = std::max(scale, Real(abs(x)));
   for (std::size_t i = 0; i < a.size(); ++i) {
      Complex d = a[i] - b[i] * Real(sign);
      Real denom = std::max(Real(abs(b[i])), Real(scale * pow10(-(active_context().digits() / 2))));
      dev = std::max(dev, Real(abs(d) / denom));
   }
   return dev;
}

}  // namespace detail

// xi_0 F = -2i conj(dF/dtaubar), dF/dtaubar from the 4-point stencil
inline ShadowResult shadow_check(const MockFormContext& mf, const Complex& tau_in, const SL2Z& m, const Real& h_in) {
   PrecisionScope scope(mf.context());
   Complex tau = promote(tau_in);
   Real h = promote(h_in);
   auto F = [&](const Complex& t) {
      auto v = f_value(mf, t, m);
      if (v.pole_flag) throw PoleError("pole within the finite-difference stencil");
      return v.value.entries;
   };
   Complex hr(h), hi(Real(0), h);
   auto fp = F(tau + hr), fm = F(tau - hr), gp = F(tau + hi), gm = F(tau - hi);
   ShadowResult r;
   const std::size_t n = fp.size();
   Complex i1(Real(0), Real(1));
   for (std::size_t l = 0; l < n; ++l) {
      Complex dbar = ((fp[l] - fm[l]) + i1 * (gp[l] - gm[l])) / Real(4 * h);
      r.computed.push_back(Complex(Real(0), Real(-2)) * conj(dbar));
   }
   Complex c = Complex(Real(0), Real(2 * real_pi() / mf.lattice().basis.volume())) * evaluate(mf.form(), tau, mf.context());
   Complex tp(1);
   for (std::size_t l = 0; l < n; ++l) {
      r.expected.push_back(c * tp);
      tp *= tau;
   }
   Real dp = detail::relative_deviation(r.computed, r.expected, 1);
   Real dm = detail::relative_deviation(r.computed, r.expected, -1);
   r.sign = dm < dp ? -1 : 1;
   r.deviation = std::min(dp, dm);
   return r;
}

inline Real default_shadow_step(const PrecisionContext& ctx) {
   PrecisionScope scope(ctx);
   return pow10(-(ctx.digits() / 6));
}

// Holomorphic Laurent part composed with the q-series e(q) = sum_{n>=1} e_n q^n:
// sum_p c_p e(q)^p + pole_coeff / e(q), coefficients of q^-1 .. q^n_terms.
inline std::vector<Complex> compose_laurent(const LaurentExpansion& le, const std::vector<Complex>& e, int n_terms) {
   if (e.size() < 2 || e[1] == Complex()) throw std::invalid_argument("series must have a nonzero q^1 term");
   const int len = n_terms + 2;
   // u = e / q
   std::vector<Complex> u(len);
   for (int i = 0; i < len && i + 1 < static_cast<int>(e.size()); ++i) u[i] = e[i + 1];
   auto mul = [len](const std::vector<Complex>& a, const std::vector<Complex>& b) {
      std::vector<Complex> c(len);
      for (int i = 0; i < len; ++i) {
         if (a[i] == Complex()) continue;
         for (int j = 0; i + j < len; ++j) c[i + j] += a[i] * b[j];
      }
      return c;
   };
   // inverse of u by the usual recurrence
   std::vector<Complex> inv(len);
   inv[0] = Complex(1) / u[0];
   for (int n = 1; n < len; ++n) {
      Complex s;
      for (int j = 1; j <= n; ++j) s += u[j] * inv[n - j];
      inv[n] = -(s * inv[0]);
   }
   // out[i] holds the coefficient of q^{i-1}
   std::vector<Complex> out(len);
   for (int i = 0; i < len; ++i) out[i] = le.pole_coeff * inv[i];
   auto hol = le.holomorphic_odd_part();
   std::vector<Complex> up(len);
   up[0] = Complex(1);
   int p_done = 0;
   for (const auto& [p, c] : hol) {
      if (p > len - 1) break;
      while (p_done < p) {
         up = mul(up, u);
         ++p_done;
      }
      // c e^p = c q^p u^p contributes to q^{p + j}
      for (int j = 0; p + j + 1 < len; ++j) out[p + j + 1] += c * up[j];
   }
   return out;
}

// Component-0 holomorphic part, normalized by its q^-1 coefficient (the prefactor).
inline QExpansion holomorphic_part_q(const MockFormContext& mf, int component, int n_terms) {
   if (component != 0) throw std::invalid_argument("only component 0 has a q-expansion");
   if (n_terms < 1) throw std::invalid_argument("n_terms must be positive");
   PrecisionScope scope(mf.context());
   auto a = mf.form().real_coeffs(n_terms + 2);
   Real inv2pi = 1 / (2 * real_pi());
   std::vector<Complex> e(n_terms + 3);
   for (int n = 1; n <= n_terms + 2; ++n) e[n] = Complex(Real(0), Real(a[n] * inv2pi / n));
   int order = n_terms + 2;
   if (order % 2 == 0) ++order;
   auto le = mf.weierstrass().laurent(std::max(3, order));
   auto c = compose_laurent(le, e, n_terms);
   QExpansion qe;
   qe.n_min = -1;
   qe.prefactor = c[0];
   for (const auto& x : c) qe.coeffs.push_back(TauPolynomial({x / c[0]}));
   return qe;
}

struct PoleHit {
   Complex tau;
   SL2Z m;
   int component = 0;
   Complex lattice_point;
   Real distance;  // relative to the shortest lattice vector
   bool cusp = false;
};

struct ScanRegion {
   Real re_min, re_max, im_min, im_max;
};

namespace detail {

struct ComponentDistance {
   Complex z, dz, point;
   Real distance;
};

inline ComponentDistance component_distance(const MockFormContext& mf, const Complex& tau, const SL2Z& m, int l) {
   const int k = mf.weight();
   auto ev = eichler_vector(mf.form(), tau, m, mf.context());
   // dE_j/dtau = -f(tau) tau^j
   Complex f = evaluate(mf.form(), tau, mf.context());
   std::vector<Complex> d(k - 1);
   Complex tp(1);
   for (int j = 0; j < k - 1; ++j) {
      d[j] = -(f * tp);
      tp *= tau;
   }
   if (!(m == SL2Z::identity())) d = n_matrix(m.inverse(), k).apply(d);
   const auto& red = mf.weierstrass().reduced();
   auto np = nearest_lattice_point(red, ev.components[l]);
   return {ev.components[l], d[l], np.point, Real(np.distance / abs(red.omega1()))};
}

}  // namespace detail

// Grid scan for tau with (N(M^-1) E(tau))_l within eps of the lattice,
// hits refined by Newton steps on z_l(tau) - lambda.
inline std::vector<PoleHit> pole_scan(const MockFormContext& mf, const ScanRegion& region, int nx, int ny,
                                      const std::vector<SL2Z>& ms, const Real& eps) {
   PrecisionScope scope(mf.context());
   if (!(region.im_min > 0) || region.re_max < region.re_min || region.im_max < region.im_min || nx < 1 || ny < 1)
      throw std::invalid_argument("invalid scan region");
   const int k = mf.weight();
   std::vector<PoleHit> hits;
   Real tol = pow10(-(mf.context().digits() / 2));
   for (const auto& m : ms)
      for (int ix = 0; ix < nx; ++ix)
         for (int iy = 0; iy < ny; ++iy) {
            Real x = nx == 1 ? region.re_min : Real(region.re_min + (region.re_max - region.re_min) * ix / (nx - 1));
            Real y = ny == 1 ? region.im_min : Real(region.im_min + (region.im_max - region.im_min) * iy / (ny - 1));
            Complex tau(x, y);
            for (int l = 0; l < k - 1; ++l) {
               auto cd = detail::component_distance(mf, tau, m, l);
               if (!(cd.distance < eps)) continue;
               PoleHit hit{tau, m, l, cd.point, cd.distance, false};
               Complex t = tau;
               Complex lambda = cd.point;
               for (int it = 0; it < 60; ++it) {
                  if (cd.dz == Complex()) break;
                  Complex step = (cd.z - lambda) / cd.dz;
                  Complex tn = t - step;
                  if (!(tn.im > 0) || tn.im > 2 * region.im_max + 1) {
                     hit.cusp = lambda == Complex();
                     break;
                  }
                  t = tn;
                  cd = detail::component_distance(mf, t, m, l);
                  if (cd.distance < hit.distance) hit = {t, m, l, cd.point, cd.distance, false};
                  if (cd.distance < tol) break;
               }
               if (hit.cusp) {
                  hit.tau = tau;
                  hit.distance = detail::component_distance(mf, tau, m, l).distance;
               }
               bool dup = false;
               for (const auto& h : hits)
                  if (h.m == hit.m && h.component == hit.component && h.cusp == hit.cusp &&
                      abs(h.tau - hit.tau) < Real(hit.cusp ? 0 : 1e-6))
                     dup = true;
               if (!dup) hits.push_back(hit);
            }
         }
   std::sort(hits.begin(), hits.end(), [](const PoleHit& a, const PoleHit& b) {
      if (a.tau.re != b.tau.re) return a.tau.re < b.tau.re;
      if (a.tau.im != b.tau.im) return a.tau.im < b.tau.im;
      return a.component < b.component;
   });
   return hits;
}

}  // namespace jwm
