#pragma once

#include <jwm/numeric.hpp>
#include <jwm/qforms.hpp>

#include <cmath>
#include <stdexcept>
#include <vector>

namespace jwm {

struct PoleError : std::runtime_error {
   using std::runtime_error::runtime_error;
};

class GramMatrix {
 public:
   explicit GramMatrix(std::vector<std::vector<long>> g) : g_(std::move(g)) {
      const std::size_t n = g_.size();
      if (n == 0) throw std::invalid_argument("empty Gram matrix");
      for (const auto& row : g_)
         if (row.size() != n) throw std::invalid_argument("Gram matrix must be square");
      for (std::size_t i = 0; i < n; ++i)
         for (std::size_t j = 0; j < n; ++j)
            if (g_[i][j] != g_[j][i]) throw std::invalid_argument("Gram matrix must be symmetric");
      for (std::size_t m = 1; m <= n; ++m)
         if (minor(m) <= 0) throw std::invalid_argument("Gram matrix is not positive definite");
   }

   static GramMatrix identity(int g, long scale = 1) {
      std::vector<std::vector<long>> m(g, std::vector<long>(g, 0));
      for (int i = 0; i < g; ++i) m[i][i] = scale;
      return GramMatrix(m);
   }

   int size() const { return static_cast<int>(g_.size()); }
   long operator()(int i, int j) const { return g_[i][j]; }

   bool even() const {
      for (int i = 0; i < size(); ++i)
         if (g_[i][i] % 2) return false;
      return true;
   }

   // lower bound for the smallest eigenvalue: 1/trace(G^-1) via Cholesky
   double min_eigenvalue() const {
      const int n = size();
      std::vector<long double> l(n * n, 0), inv(n * n, 0);
      for (int j = 0; j < n; ++j) {
         long double d = g_[j][j];
         for (int p = 0; p < j; ++p) d -= l[j * n + p] * l[j * n + p];
         l[j * n + j] = std::sqrt(d);
         for (int i = j + 1; i < n; ++i) {
            long double s = g_[i][j];
            for (int p = 0; p < j; ++p) s -= l[i * n + p] * l[j * n + p];
            l[i * n + j] = s / l[j * n + j];
         }
      }
      long double tr = 0;
      for (int c = 0; c < n; ++c)
         for (int i = c; i < n; ++i) {
            long double s = i == c ? 1 : 0;
            for (int p = c; p < i; ++p) s -= l[i * n + p] * inv[p * n + c];
            inv[i * n + c] = s / l[i * n + i];
            tr += inv[i * n + c] * inv[i * n + c];
         }
      return static_cast<double>(1 / tr) * (1 - 1e-12);
   }

   long max_abs_row_sum() const {
      long best = 0;
      for (const auto& row : g_) {
         long s = 0;
         for (long x : row) s += std::labs(x);
         best = std::max(best, s);
      }
      return best;
   }

 private:
   Integer minor(std::size_t m) const {
      std::vector<Integer> a;
      for (std::size_t i = 0; i < m; ++i)
         for (std::size_t j = 0; j < m; ++j) a.push_back(g_[i][j]);
      Integer prev = 1;
      int sign = 1;
      for (std::size_t p = 0; p < m; ++p) {
         if (a[p * m + p] == 0) {
            std::size_t s = p + 1;
            while (s < m && a[s * m + p] == 0) ++s;
            if (s == m) return 0;
            for (std::size_t c = 0; c < m; ++c) std::swap(a[p * m + c], a[s * m + c]);
            sign = -sign;
         }
         for (std::size_t r = p + 1; r < m; ++r)
            for (std::size_t c = p + 1; c < m; ++c)
               a[r * m + c] = (a[r * m + c] * a[p * m + p] - a[r * m + p] * a[p * m + c]) / prev;
         prev = a[p * m + p];
      }
      return sign * a[(m - 1) * m + (m - 1)];
   }

   std::vector<std::vector<long>> g_;
};

namespace detail {

// Sums over n in 1/2 + Z at a reduced point, scaled by e^{-pi i tau/4}:
// value, z-derivative, sum of |terms|.
struct ThetaCore {
   Complex value;
   Complex deriv;
   Real abs_sum;
};

inline ThetaCore theta_char_core(const Complex& tau, const Complex& z, const PrecisionContext& ctx) {
   Real pi = real_pi();
   Complex ipi(Real(0), pi);
   Complex a = cexp(ipi * tau);               // e^{pi i tau}
   Complex a2 = a * a;
   Complex wh = cexp(ipi * (z + Complex(Real(0.5))));  // w^{1/2}
   Complex w = wh * wh;
   Complex winv = cexp(-(ipi * (z + Complex(Real(0.5))) * Real(2)));
   Complex A(1);                               // a^{n^2 - 1/4}
   Complex step = a2;                          // a^{2m+2}
   Complex W = wh, V = cexp(-(ipi * (z + Complex(Real(0.5)))));
   ThetaCore out{Complex(), Complex(), Real(0)};
   Real tol = pow10(-ctx.tail_digits());
   Real two_pi = 2 * pi;
   for (long m = 0;; ++m) {
      Real n = Real(m) + Real(0.5);
      Complex p = A * W, q = A * V;
      out.value += p + q;
      out.deriv += (p - q) * Complex(Real(0), Real(two_pi * n));
      Real mag = abs(p) + abs(q);
      out.abs_sum += mag;
      if (m > 2 && mag * (1 + n) < tol * out.abs_sum) break;
      if (m > 100000) throw std::runtime_error("theta series failed to converge");
      A *= step;
      step *= a2;
      W *= w;
      V *= winv;
   }
   return out;
}

// z = zr + m tau + n with |Im zr| <= Im tau / 2 and |Re(zr)| <= 1/2
struct Reduction {
   Complex zr;
   Real m;
   Real n;
};

inline Reduction reduce_mod_lattice(const Complex& tau, const Complex& z) {
   Real m = mp::round(z.im / tau.im);
   Complex t = z - tau * m;
   Real n = mp::round(t.re);
   return {t - Complex(n), m, n};
}

}  // namespace detail

inline Complex theta_char(const Complex& tau_in, const Complex& z_in, const PrecisionContext& ctx) {
   PrecisionScope scope(ctx);
   Complex tau = promote(tau_in), z = promote(z_in);
   require_upper_half_plane(tau);
   auto r = detail::reduce_mod_lattice(tau, z);
   auto core = detail::theta_char_core(tau, r.zr, ctx);
   // theta(zr + m tau + n) = (-1)^{m+n} e^{-pi i m^2 tau - 2 pi i m zr} theta(zr)
   Real pi = real_pi();
   Complex factor = cexp(Complex(Real(0), Real(-pi)) * (tau * Real(r.m * r.m - Real(0.25)) + r.zr * (2 * r.m)));
   if (mp::fmod(mp::abs(r.m + r.n), Real(2)) == 1) factor = -factor;
   return factor * core.value;
}

inline Complex theta_char_dz(const Complex& tau_in, const Complex& z_in, const PrecisionContext& ctx) {
   PrecisionScope scope(ctx);
   Complex tau = promote(tau_in), z = promote(z_in);
   require_upper_half_plane(tau);
   auto r = detail::reduce_mod_lattice(tau, z);
   auto core = detail::theta_char_core(tau, r.zr, ctx);
   Real pi = real_pi();
   Complex factor = cexp(Complex(Real(0), Real(-pi)) * (tau * Real(r.m * r.m - Real(0.25)) + r.zr * (2 * r.m)));
   if (mp::fmod(mp::abs(r.m + r.n), Real(2)) == 1) factor = -factor;
   return factor * (core.deriv - core.value * Complex(Real(0), Real(2 * pi * r.m)));
}

// theta'/theta at z; throws PoleError on the divisor (z in Z + tau Z).
inline Complex theta_char_log_derivative(const Complex& tau, const Complex& z, const PrecisionContext& ctx) {
   auto r = detail::reduce_mod_lattice(tau, z);
   auto core = detail::theta_char_core(tau, r.zr, ctx);
   if (abs(core.value) < pow10(-ctx.digits()) * core.abs_sum) throw PoleError("point on the theta divisor");
   Real pi = real_pi();
   return core.deriv / core.value - Complex(Real(0), Real(2 * pi * r.m));
}

struct Characteristic {
   std::vector<Real> alpha;
   std::vector<Real> beta;
};

namespace detail {

struct LatticeThetaResult {
   Complex value;
   std::vector<Complex> grad;
   Real abs_sum;
};

// sum over l in Z^g + alpha of e^{pi i (l,l) tau + 2 pi i (l, z + beta)}, box enumeration.
inline LatticeThetaResult theta_lattice_sum(const Complex& tau, const std::vector<Complex>& z, const GramMatrix& G,
                                            const Characteristic* ch, const PrecisionContext& ctx) {
   const int g = G.size();
   double y = static_cast<double>(tau.im);
   double lam = G.min_eigenvalue();
   double zim = 0;
   for (const auto& zi : z) zim = std::max(zim, std::fabs(static_cast<double>(zi.im)));
   double target = (ctx.tail_digits() + 5) * std::log(10.0);
   long R = static_cast<long>(std::ceil(std::sqrt(target / (M_PI * lam * y)))) + 2 +
            static_cast<long>(std::ceil(G.max_abs_row_sum() * zim / (lam * y)));
   Real pi = real_pi();
   std::vector<long> idx(g, -R);
   LatticeThetaResult out{Complex(), std::vector<Complex>(g), Real(0)};
   std::vector<Complex> zb(g);
   for (int i = 0; i < g; ++i) zb[i] = z[i] + (ch ? Complex(ch->beta[i]) : Complex());
   std::vector<Real> l(g);
   while (true) {
      for (int i = 0; i < g; ++i) l[i] = Real(idx[i]) + (ch ? ch->alpha[i] : Real(0));
      Real q(0);
      std::vector<Real> Gl(g, Real(0));
      for (int i = 0; i < g; ++i)
         for (int j = 0; j < g; ++j) Gl[i] += l[j] * G(i, j);
      for (int i = 0; i < g; ++i) q += l[i] * Gl[i];
      Complex lz;
      for (int i = 0; i < g; ++i) lz += zb[i] * Gl[i];
      Complex e = cexp(Complex(Real(0), pi) * (tau * q + lz * 2));
      out.value += e;
      out.abs_sum += abs(e);
      for (int i = 0; i < g; ++i) out.grad[i] += e * Complex(Real(0), Real(2 * pi * Gl[i]));
      int p = 0;
      while (p < g && ++idx[p] > R) idx[p++] = -R;
      if (p == g) break;
   }
   return out;
}

}  // namespace detail

inline Complex theta_lattice(const Complex& tau_in, const std::vector<Complex>& z_in, const GramMatrix& G,
                             const PrecisionContext& ctx) {
   PrecisionScope scope(ctx);
   Complex tau = promote(tau_in);
   require_upper_half_plane(tau);
   if (static_cast<int>(z_in.size()) != G.size()) throw std::invalid_argument("z has wrong length");
   if (!G.even()) throw std::invalid_argument("lattice theta needs an even Gram matrix");
   std::vector<Complex> z(z_in.size()), zr(z_in.size());
   std::vector<Real> m(z_in.size());
   for (std::size_t i = 0; i < z.size(); ++i) {
      z[i] = promote(z_in[i]);
      auto r = detail::reduce_mod_lattice(tau, z[i]);
      zr[i] = z[i] - tau * r.m;
      m[i] = r.m;
   }
   auto res = detail::theta_lattice_sum(tau, zr, G, nullptr, ctx);
   // theta(zr + m tau) = e^{-pi i tau (m,m) - 2 pi i (zr, m)} theta(zr)
   Real mm(0);
   Complex zm;
   for (int i = 0; i < G.size(); ++i)
      for (int j = 0; j < G.size(); ++j) {
         mm += m[i] * m[j] * G(i, j);
         zm += zr[i] * (m[j] * G(i, j));
      }
   Real pi = real_pi();
   return cexp(Complex(Real(0), Real(-pi)) * (tau * mm + zm * 2)) * res.value;
}

inline Complex theta_lattice_char(const Complex& tau_in, const std::vector<Complex>& z_in, const GramMatrix& G,
                                  const Characteristic& ch, const PrecisionContext& ctx) {
   PrecisionScope scope(ctx);
   Complex tau = promote(tau_in);
   require_upper_half_plane(tau);
   std::vector<Complex> z;
   for (const auto& zi : z_in) z.push_back(promote(zi));
   Characteristic c{{}, {}};
   for (const auto& a : ch.alpha) c.alpha.push_back(promote(a));
   for (const auto& b : ch.beta) c.beta.push_back(promote(b));
   return detail::theta_lattice_sum(tau, z, G, &c, ctx).value;
}

inline Complex theta_product(const Complex& tau, const std::vector<Complex>& z, const PrecisionContext& ctx) {
   PrecisionScope scope(ctx);
   Complex p(1);
   for (const auto& zi : z) p *= theta_char(tau, zi, ctx);
   return p;
}

// (Y+ theta)/theta for the lattice theta with Gram matrix G,
// Y+ = d/dz_j + 2 pi i Im((G z)_j)/Im(tau).
inline Complex raising_log_derivative(const Complex& tau_in, const std::vector<Complex>& z_in, int j,
                                      const GramMatrix& G, const PrecisionContext& ctx) {
   PrecisionScope scope(ctx);
   Complex tau = promote(tau_in);
   require_upper_half_plane(tau);
   const int g = G.size();
   if (static_cast<int>(z_in.size()) != g || j < 0 || j >= g) throw std::invalid_argument("bad index or length");
   std::vector<Complex> z(g), zr(g);
   std::vector<Real> m(g);
   for (int i = 0; i < g; ++i) {
      z[i] = promote(z_in[i]);
      auto r = detail::reduce_mod_lattice(tau, z[i]);
      zr[i] = z[i] - tau * r.m;
      m[i] = r.m;
   }
   auto res = detail::theta_lattice_sum(tau, zr, G, nullptr, ctx);
   if (abs(res.value) < pow10(-ctx.digits()) * res.abs_sum) throw PoleError("point on the theta divisor");
   Real pi = real_pi();
   Real Gm(0), Gzim(0);
   for (int i = 0; i < g; ++i) {
      Gm += m[i] * G(j, i);
      Gzim += z[i].im * G(j, i);
   }
   Complex dlog = res.grad[j] / res.value - Complex(Real(0), Real(2 * pi * Gm));
   return dlog + Complex(Real(0), Real(2 * pi * Gzim / tau.im));
}

// Product theta (standard lattice with characteristic (1/2, 1/2)): the factors
// separate, so component j only sees z_j.
inline Complex raising_log_derivative_product(const Complex& tau_in, const std::vector<Complex>& z_in, int j,
                                              const PrecisionContext& ctx) {
   PrecisionScope scope(ctx);
   Complex tau = promote(tau_in), zj = promote(z_in.at(j));
   require_upper_half_plane(tau);
   Real pi = real_pi();
   return theta_char_log_derivative(tau, zj, ctx) + Complex(Real(0), Real(2 * pi * zj.im / tau.im));
}

}  // namespace jwm
