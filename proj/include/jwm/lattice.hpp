#pragma once

#include <jwm/numeric.hpp>

#include <stdexcept>
#include <utility>

namespace jwm {

struct DegenerateLattice : std::invalid_argument {
   using std::invalid_argument::invalid_argument;
};

// Im(conj(a) b)
inline Real cross(const Complex& a, const Complex& b) { return a.re * b.im - a.im * b.re; }
inline Real dot(const Complex& a, const Complex& b) { return a.re * b.re + a.im * b.im; }

// Gauss reduction: |w1| <= |w2|, |Re(w2/w1)| <= 1/2, Im(w2/w1) > 0,
// and w1 normalized to Re > 0 (or Re = 0, Im > 0).
inline std::pair<Complex, Complex> gauss_reduce(Complex w1, Complex w2) {
   if (abs(cross(w1, w2)) == 0) throw DegenerateLattice("lattice basis is R-linearly dependent");
   if (norm(w2) < norm(w1)) std::swap(w1, w2);
   for (int iter = 0; iter < 10000; ++iter) {
      Real m = mp::round(dot(w1, w2) / norm(w1));
      if (m != 0) w2 -= w1 * m;
      if (norm(w2) < norm(w1)) {
         std::swap(w1, w2);
         continue;
      }
      break;
   }
   if (w1.re < 0 || (w1.re == 0 && w1.im < 0)) w1 = -w1;
   if (cross(w1, w2) < 0) w2 = -w2;
   return {w1, w2};
}

class Lattice2D {
 public:
   Lattice2D(const Complex& w1, const Complex& w2) : w1_(w1), w2_(w2) {
      Real v = cross(w1_, w2_);
      if (v == 0) throw DegenerateLattice("degenerate lattice");
      if (v < 0) w2_ = -w2_;
   }

   static Lattice2D standard(const Complex& tau) { return Lattice2D(Complex(1), tau); }

   const Complex& omega1() const { return w1_; }
   const Complex& omega2() const { return w2_; }
   Complex tau() const { return w2_ / w1_; }
   Real volume() const { return cross(w1_, w2_); }

   Lattice2D reduced() const {
      auto [a, b] = gauss_reduce(w1_, w2_);
      return Lattice2D(a, b);
   }

   // z = x w1 + y w2 with real (x, y)
   std::pair<Real, Real> coordinates(const Complex& z) const {
      Real v = volume();
      return {Real(cross(z, w2_) / v), Real(cross(w1_, z) / v)};
   }

   Complex point(const Real& x, const Real& y) const { return w1_ * x + w2_ * y; }

   Lattice2D scaled(const Complex& c) const { return Lattice2D(w1_ * c, w2_ * c); }

 private:
   Complex w1_;
   Complex w2_;
};

// Nearest lattice point in a reduced basis (checks the 3x3 neighbourhood of
// the rounded coordinates).
struct NearestPoint {
   Integer a, b;
   Complex point;
   Real distance;
};

inline NearestPoint nearest_lattice_point(const Lattice2D& lat, const Complex& z) {
   auto [x, y] = lat.coordinates(z);
   Real x0 = mp::round(x), y0 = mp::round(y);
   NearestPoint best{0, 0, Complex(), Real(-1)};
   for (int dx = -1; dx <= 1; ++dx)
      for (int dy = -1; dy <= 1; ++dy) {
         Real xa = x0 + dx, ya = y0 + dy;
         Complex p = lat.point(xa, ya);
         Real d = abs(z - p);
         if (best.distance < 0 || d < best.distance) best = {nearest_integer(xa), nearest_integer(ya), p, d};
      }
   return best;
}

}  // namespace jwm
