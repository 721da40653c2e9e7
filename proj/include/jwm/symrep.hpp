#pragma once

#include <jwm/numeric.hpp>

#include <stdexcept>
#include <vector>

namespace jwm {

struct SL2Z {
   long a = 1, b = 0, c = 0, d = 1;

   SL2Z() = default;
   SL2Z(long a_, long b_, long c_, long d_) : a(a_), b(b_), c(c_), d(d_) {
      if (a * d - b * c != 1) throw std::invalid_argument("matrix is not in SL2(Z)");
   }

   static SL2Z identity() { return {}; }
   static SL2Z S() { return {0, -1, 1, 0}; }
   static SL2Z T() { return {1, 1, 0, 1}; }
   static SL2Z minus_identity() { return {-1, 0, 0, -1}; }

   SL2Z inverse() const { return {d, -b, -c, a}; }
   SL2Z transpose() const { return {a, c, b, d}; }

   friend SL2Z operator*(const SL2Z& m, const SL2Z& n) {
      return {m.a * n.a + m.b * n.c, m.a * n.b + m.b * n.d, m.c * n.a + m.d * n.c, m.c * n.b + m.d * n.d};
   }
   friend bool operator==(const SL2Z& m, const SL2Z& n) {
      return m.a == n.a && m.b == n.b && m.c == n.c && m.d == n.d;
   }

   // M tau = (a tau + b)/(c tau + d)
   Complex act(const Complex& tau) const { return (Complex(a) * tau + Complex(b)) / (Complex(c) * tau + Complex(d)); }
};

inline Complex j_factor(const SL2Z& m, const Complex& tau) { return Complex(m.c) * tau + Complex(m.d); }

inline Integer binomial(long n, long k) {
   if (k < 0 || k > n) return 0;
   Integer r = 1;
   for (long i = 1; i <= k; ++i) r = r * (n - k + i) / i;
   return r;
}

class SymRepMatrix {
 public:
   SymRepMatrix() = default;
   SymRepMatrix(int k, std::vector<Integer> entries) : k_(k), e_(std::move(entries)) {
      if (static_cast<int>(e_.size()) != dim() * dim()) throw std::invalid_argument("bad SymRepMatrix size");
   }

   static SymRepMatrix identity(int k) {
      SymRepMatrix m(k, std::vector<Integer>((k - 1) * (k - 1), 0));
      for (int i = 0; i < k - 1; ++i) m(i, i) = 1;
      return m;
   }

   int k() const { return k_; }
   int dim() const { return k_ - 1; }
   const Integer& operator()(int r, int c) const { return e_[r * dim() + c]; }
   Integer& operator()(int r, int c) { return e_[r * dim() + c]; }

   SymRepMatrix transpose() const {
      SymRepMatrix t(k_, e_);
      for (int r = 0; r < dim(); ++r)
         for (int c = 0; c < dim(); ++c) t(r, c) = (*this)(c, r);
      return t;
   }

   friend SymRepMatrix operator*(const SymRepMatrix& x, const SymRepMatrix& y) {
      if (x.k_ != y.k_) throw std::invalid_argument("weight mismatch");
      SymRepMatrix z(x.k_, std::vector<Integer>(x.e_.size(), 0));
      for (int r = 0; r < x.dim(); ++r)
         for (int s = 0; s < x.dim(); ++s) {
            if (x(r, s) == 0) continue;
            for (int c = 0; c < x.dim(); ++c) z(r, c) += x(r, s) * y(s, c);
         }
      return z;
   }
   friend bool operator==(const SymRepMatrix& x, const SymRepMatrix& y) { return x.k_ == y.k_ && x.e_ == y.e_; }

   Integer determinant() const {
      // Bareiss fraction-free elimination
      int n = dim();
      std::vector<Integer> m = e_;
      Integer prev = 1;
      int sign = 1;
      for (int p = 0; p < n; ++p) {
         if (m[p * n + p] == 0) {
            int s = p + 1;
            while (s < n && m[s * n + p] == 0) ++s;
            if (s == n) return 0;
            for (int c = 0; c < n; ++c) std::swap(m[p * n + c], m[s * n + c]);
            sign = -sign;
         }
         for (int r = p + 1; r < n; ++r)
            for (int c = p + 1; c < n; ++c)
               m[r * n + c] = (m[r * n + c] * m[p * n + p] - m[r * n + p] * m[p * n + c]) / prev;
         prev = m[p * n + p];
      }
      return sign * m[(n - 1) * n + (n - 1)];
   }

   template <class V>
   std::vector<V> apply(const std::vector<V>& v) const {
      if (static_cast<int>(v.size()) != dim()) throw std::invalid_argument("dimension mismatch");
      std::vector<V> out(dim());
      for (int r = 0; r < dim(); ++r) {
         V acc{};
         for (int c = 0; c < dim(); ++c) {
            const Integer& x = (*this)(r, c);
            if (x == 0) continue;
            acc = acc + scale(x, v[c]);
         }
         out[r] = acc;
      }
      return out;
   }

 private:
   static Complex scale(const Integer& x, const Complex& z) { return z * to_real(x); }
   static Integer scale(const Integer& x, const Integer& z) { return x * z; }

   int k_ = 2;
   std::vector<Integer> e_{1};
};

// N_{lt} = sum_i binom(l,i) binom(k-2-l,t-i) a^i c^{t-i} b^{l-i} d^{k-2-t-l+i}
inline SymRepMatrix n_matrix(const SL2Z& m, int k) {
   if (k < 2 || k % 2) throw std::invalid_argument("weight must be even and at least 2");
   const int w = k - 2;
   auto ipow = [](long base, long e) {
      Integer r = 1;
      for (long i = 0; i < e; ++i) r *= base;
      return r;
   };
   SymRepMatrix n(k, std::vector<Integer>((w + 1) * (w + 1), 0));
   for (int l = 0; l <= w; ++l)
      for (int t = 0; t <= w; ++t) {
         Integer s = 0;
         for (int i = std::max(0, t - (w - l)); i <= std::min(l, t); ++i)
            s += binomial(l, i) * binomial(w - l, t - i) * ipow(m.a, i) * ipow(m.c, t - i) * ipow(m.b, l - i) *
                 ipow(m.d, w - t - l + i);
         n(l, t) = s;
      }
   return n;
}

// Coefficients z_l of sum z_l binom(k-2,l) X1^l X2^{k-2-l}, (X1,X2) = tag o (e1,e2).
struct SymVector {
   int k = 2;
   std::vector<Complex> entries{Complex()};
   SL2Z basis_tag;

   SymVector() = default;
   SymVector(int k_, std::vector<Complex> e, SL2Z tag = {}) : k(k_), entries(std::move(e)), basis_tag(tag) {
      if (static_cast<int>(entries.size()) != k - 1) throw std::invalid_argument("SymVector needs k-1 entries");
   }
};

// Standard coordinates of a tagged vector are N(tag) * entries. Re-expressing in
// the basis M o (X1,X2) = (tag * M) o (e1,e2) multiplies the entries by N(M^-1).
inline SymVector act_basis(const SL2Z& m, const SymVector& v) {
   return SymVector(v.k, n_matrix(m.inverse(), v.k).apply(v.entries), v.basis_tag * m);
}

inline std::vector<Complex> standard_coordinates(const SymVector& v) {
   if (v.basis_tag == SL2Z::identity()) return v.entries;
   return n_matrix(v.basis_tag, v.k).apply(v.entries);
}

// Coefficient of e1^i e2^{k-2-i} (binomial included) of the abstract element.
inline std::vector<Complex> expand_standard(const SymVector& v) {
   std::vector<Complex> out = standard_coordinates(v);
   for (std::size_t i = 0; i < out.size(); ++i) out[i] *= to_real(binomial(v.k - 2, static_cast<long>(i)));
   return out;
}

inline SymVector sym_power_of_point(const Complex& tau, int k) {
   std::vector<Complex> e(k - 1);
   Complex p(1);
   for (int l = 0; l <= k - 2; ++l) {
      e[l] = p;
      p *= tau;
   }
   return SymVector(k, std::move(e));
}

}  // namespace jwm
