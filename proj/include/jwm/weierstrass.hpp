#pragma once

#include <jwm/lattice.hpp>
#include <jwm/numeric.hpp>
#include <jwm/qforms.hpp>
#include <jwm/theta.hpp>

#include <map>
#include <vector>

namespace jwm {

inline Complex quasi_period_u(const Complex& tau, const PrecisionContext& ctx) { return eisenstein_g2(tau, ctx); }

// Laurent expansion of zeta* at 0:
// pole_coeff/z + sum odd_coeffs[p] z^p + linear_z z + antiholo_zbar conj(z)
struct LaurentExpansion {
   Complex pole_coeff = Complex(1);
   std::map<int, Complex> odd_coeffs;
   Complex linear_z;
   Complex antiholo_zbar;

   Complex operator()(const Complex& z) const {
      Complex s = pole_coeff / z + linear_z * z + antiholo_zbar * conj(z);
      for (const auto& [p, c] : odd_coeffs) s += c * cpow(z, static_cast<long>(p));
      return s;
   }

   // Holomorphic part as a coefficient list: index p -> coefficient of z^p (p >= 1 odd).
   std::map<int, Complex> holomorphic_odd_part() const {
      std::map<int, Complex> h = odd_coeffs;
      h[1] += linear_z;
      return h;
   }
};

// Weierstrass data on a fixed lattice, evaluated through the reduced basis
// omega1, tau = omega2/omega1 in the fundamental domain.
class WeierstrassLattice {
 public:
   WeierstrassLattice(const Lattice2D& lat, const PrecisionContext& ctx) : ctx_(ctx), orig_(lat), red_(lat.reduced()) {
      PrecisionScope scope(ctx_);
      red_ = Lattice2D(promote(lat.omega1()), promote(lat.omega2())).reduced();
      tau_ = red_.tau();
      g2_ = eisenstein_g2(tau_, ctx_);
      Real pi = real_pi();
      g2star_ = g2_ - Complex(Real(pi / tau_.im));
      s_ = g2star_ / (red_.omega1() * red_.omega1());
      vol_ = red_.volume();
   }

   const Lattice2D& reduced() const { return red_; }
   const PrecisionContext& context() const { return ctx_; }
   Complex s_lattice() const { return s_; }
   Real volume() const { return vol_; }
   Complex tau() const { return tau_; }

   // distance from z to the lattice, in units of |omega1| (the shortest vector)
   Real relative_lattice_distance(const Complex& z) const {
      PrecisionScope scope(ctx_);
      auto np = nearest_lattice_point(red_, promote(z));
      return np.distance / abs(red_.omega1());
   }

   bool is_pole(const Complex& z) const {
      PrecisionScope scope(ctx_);
      return relative_lattice_distance(z) < pow10(-(ctx_.digits() / 2));
   }

   Complex zeta_star(const Complex& z_in) const {
      PrecisionScope scope(ctx_);
      Complex z = promote(z_in);
      if (is_pole(z)) throw PoleError("zeta* evaluated on the lattice");
      Complex u = z / red_.omega1();
      Real pi = real_pi();
      Complex v = theta_char_log_derivative(tau_, u, ctx_) + Complex(Real(0), Real(2 * pi * u.im / tau_.im));
      return v / red_.omega1();
   }

   Complex zeta_raw(const Complex& z_in) const {
      PrecisionScope scope(ctx_);
      Complex z = promote(z_in);
      if (is_pole(z)) throw PoleError("zeta evaluated on the lattice");
      Complex u = z / red_.omega1();
      Complex v = theta_char_log_derivative(tau_, u, ctx_) + g2_ * u;
      return v / red_.omega1();
   }

   LaurentExpansion laurent(int max_order) const {
      if (max_order < 3) throw std::invalid_argument("max_order must be at least 3");
      PrecisionScope scope(ctx_);
      LaurentExpansion le;
      for (int p = 3; p <= max_order; p += 2) le.odd_coeffs[p] = -eisenstein_g2n(red_, (p + 1) / 2, ctx_);
      le.linear_z = -s_;
      le.antiholo_zbar = Complex(Real(-real_pi() / vol_));
      return le;
   }

 private:
   PrecisionContext ctx_;
   Lattice2D orig_;
   Lattice2D red_;
   Complex tau_;
   Complex g2_;
   Complex g2star_;
   Complex s_;
   Real vol_;
};

inline Complex zeta_raw(const Lattice2D& lat, const Complex& z, const PrecisionContext& ctx) {
   return WeierstrassLattice(lat, ctx).zeta_raw(z);
}

inline Complex zeta_star(const Lattice2D& lat, const Complex& z, const PrecisionContext& ctx) {
   return WeierstrassLattice(lat, ctx).zeta_star(z);
}

inline Complex s_lattice(const Lattice2D& lat, const PrecisionContext& ctx) {
   return WeierstrassLattice(lat, ctx).s_lattice();
}

inline LaurentExpansion laurent_zeta_star(const Lattice2D& lat, int max_order, const PrecisionContext& ctx) {
   return WeierstrassLattice(lat, ctx).laurent(max_order);
}

// Jacobi-Weierstrass sigma on the standard lattice with the product theta:
// sigma(z) = e^{u(tau) Q(z)} theta(tau, z), Q(z) = (z,z)/2.
inline Complex sigma(const Complex& tau_in, const std::vector<Complex>& z, const PrecisionContext& ctx) {
   PrecisionScope scope(ctx);
   Complex tau = promote(tau_in);
   Complex u = quasi_period_u(tau, ctx);
   Complex q;
   for (const auto& zi : z) q += promote(zi) * promote(zi);
   return cexp(u * q / Real(2)) * theta_product(tau, z, ctx);
}

// zeta_j = d/dz_j log sigma = theta'/theta(z_j) + u z_j
inline Complex zeta_j(const Complex& tau_in, const std::vector<Complex>& z, int j, const PrecisionContext& ctx) {
   PrecisionScope scope(ctx);
   Complex tau = promote(tau_in), zj = promote(z.at(j));
   return theta_char_log_derivative(tau, zj, ctx) + quasi_period_u(tau, ctx) * zj;
}

// wp_{ji} = d/dz_i zeta_j by central differences with one Richardson step.
inline Complex wp_ji(const Complex& tau_in, const std::vector<Complex>& z_in, int i, int j, const PrecisionContext& ctx) {
   PrecisionScope scope(ctx);
   Complex tau = promote(tau_in);
   std::vector<Complex> z;
   for (const auto& zi : z_in) z.push_back(promote(zi));
   Real h = pow10(-(ctx.digits() / 3));
   auto diff = [&](const Real& step) {
      std::vector<Complex> zp = z, zm = z;
      zp.at(i) += Complex(step);
      zm.at(i) -= Complex(step);
      return (zeta_j(tau, zp, j, ctx) - zeta_j(tau, zm, j, ctx)) / Complex(Real(2 * step));
   };
   Complex d1 = diff(h), d2 = diff(Real(h / 2));
   return (d2 * 4 - d1) / Complex(Real(3));
}

}  // namespace jwm
