#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <boost/multiprecision/mpfr.hpp>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace jwm {

namespace mp = boost::multiprecision;

using Real = mp::mpfr_float;
using Integer = mp::cpp_int;

struct PrecisionError : std::runtime_error {
   using std::runtime_error::runtime_error;
};

// digits: significant decimal digits requested; guard: extra digits carried
// internally; tail_digits: q-series tails are cut below 10^-tail_digits.
class PrecisionContext {
 public:
   explicit PrecisionContext(int digits = 128, int guard = 15, int tail_digits = -1)
       : digits_(digits), guard_(guard), tail_digits_(tail_digits < 0 ? digits + guard : tail_digits) {
      if (digits_ < 15) throw PrecisionError("digits must be at least 15");
      if (guard_ < 10) throw PrecisionError("guard must be at least 10");
      if (tail_digits_ < digits_) throw PrecisionError("series_tail_tol must not exceed 10^-digits");
   }

   int digits() const { return digits_; }
   int guard() const { return guard_; }
   int tail_digits() const { return tail_digits_; }
   int working_digits() const { return digits_ + guard_; }

   PrecisionContext with_digits(int d) const { return PrecisionContext(d, guard_); }

 private:
   int digits_;
   int guard_;
   int tail_digits_;
};

namespace detail {
inline thread_local const PrecisionContext* active_ctx = nullptr;
}

// Sets the thread's MPFR default precision for the lifetime of the scope.
class PrecisionScope {
 public:
   explicit PrecisionScope(const PrecisionContext& ctx)
       : saved_prec_(Real::default_precision()), saved_ctx_(detail::active_ctx), ctx_(ctx) {
      Real::default_precision(static_cast<unsigned>(ctx.working_digits()));
      detail::active_ctx = &ctx_;
   }
   ~PrecisionScope() {
      Real::default_precision(saved_prec_);
      detail::active_ctx = saved_ctx_;
   }
   PrecisionScope(const PrecisionScope&) = delete;
   PrecisionScope& operator=(const PrecisionScope&) = delete;

 private:
   unsigned saved_prec_;
   const PrecisionContext* saved_ctx_;
   PrecisionContext ctx_;
};

inline const PrecisionContext& active_context() {
   static const PrecisionContext fallback(30, 10);
   return detail::active_ctx ? *detail::active_ctx : fallback;
}

// Copy at the current default precision (inputs may carry a lower one).
inline Real promote(const Real& x) {
   Real r;
   mpfr_set(r.backend().data(), x.backend().data(), MPFR_RNDN);
   return r;
}

inline Real real_pi() {
   Real r;
   mpfr_const_pi(r.backend().data(), MPFR_RNDN);
   return r;
}

inline Real pow10(long e) {
   Real r(10);
   return pow(r, Real(e));
}

inline Real to_real(const Integer& n) {
   if (n >= std::numeric_limits<long>::min() && n <= std::numeric_limits<long>::max()) return Real(static_cast<long>(n));
   return Real(n);
}

inline Real zeta_ui(unsigned long s) {
   Real r;
   mpfr_zeta_ui(r.backend().data(), s, MPFR_RNDN);
   return r;
}

inline long nearest_long(const Real& x) { return static_cast<long>(mp::round(x).convert_to<long long>()); }

inline Integer nearest_integer(const Real& x) {
   mpz_t z;
   mpz_init(z);
   mpfr_get_z(z, x.backend().data(), MPFR_RNDN);
   char* buf = mpz_get_str(nullptr, 10, z);
   Integer r(buf);
   void (*freefunc)(void*, size_t);
   mp_get_memory_functions(nullptr, nullptr, &freefunc);
   freefunc(buf, std::strlen(buf) + 1);
   mpz_clear(z);
   return r;
}

class Complex {
 public:
   Real re;
   Real im;

   Complex() : re(0), im(0) {}
   Complex(const Real& r) : re(r), im(0) {}
   Complex(Real r, Real i) : re(std::move(r)), im(std::move(i)) {}
   Complex(int r) : re(r), im(0) {}
   Complex(long r) : re(r), im(0) {}
   Complex(double r) : re(r), im(0) {}

   static Complex i() { return Complex(Real(0), Real(1)); }

   Complex& operator+=(const Complex& o) {
      re += o.re;
      im += o.im;
      return *this;
   }
   Complex& operator-=(const Complex& o) {
      re -= o.re;
      im -= o.im;
      return *this;
   }
   Complex& operator*=(const Complex& o) {
      Real r = re * o.re - im * o.im;
      im = re * o.im + im * o.re;
      re = std::move(r);
      return *this;
   }
   Complex& operator*=(const Real& s) {
      re *= s;
      im *= s;
      return *this;
   }
   Complex& operator/=(const Complex& o);
   Complex& operator/=(const Real& s) {
      re /= s;
      im /= s;
      return *this;
   }
   Complex operator-() const { return Complex(Real(-re), Real(-im)); }
};

inline Complex operator+(Complex a, const Complex& b) { return a += b; }
inline Complex operator-(Complex a, const Complex& b) { return a -= b; }
inline Complex operator*(Complex a, const Complex& b) { return a *= b; }
inline Complex operator*(Complex a, const Real& s) { return a *= s; }
inline Complex operator*(const Real& s, Complex a) { return a *= s; }
inline Complex operator*(Complex a, int s) { return a *= Real(s); }
inline Complex operator*(int s, Complex a) { return a *= Real(s); }
inline Complex operator/(Complex a, const Real& s) { return a /= s; }

inline Real norm(const Complex& z) { return z.re * z.re + z.im * z.im; }
inline Real abs(const Complex& z) { return sqrt(norm(z)); }
inline Real arg(const Complex& z) { return atan2(z.im, z.re); }
inline Complex conj(const Complex& z) { return Complex(z.re, Real(-z.im)); }

inline Complex& Complex::operator/=(const Complex& o) {
   Real n = norm(o);
   const long floor2 = -static_cast<long>(2 * active_context().digits() * 3.3219280948873623);
   if (n == 0 || mpfr_get_exp(n.backend().data()) < floor2)
      throw PrecisionError("division by a value below 10^-digits");
   Real r = (re * o.re + im * o.im) / n;
   im = (im * o.re - re * o.im) / n;
   re = std::move(r);
   return *this;
}
inline Complex operator/(Complex a, const Complex& b) { return a /= b; }

inline bool operator==(const Complex& a, const Complex& b) { return a.re == b.re && a.im == b.im; }

inline Complex promote(const Complex& z) { return Complex(promote(z.re), promote(z.im)); }

inline Complex cexp(const Complex& z) {
   Real m = exp(z.re);
   return Complex(Real(m * cos(z.im)), Real(m * sin(z.im)));
}

inline Complex clog(const Complex& z) { return Complex(Real(log(abs(z))), arg(z)); }

inline Complex csqrt(const Complex& z) {
   if (z.re == 0 && z.im == 0) return Complex();
   Real r = abs(z);
   Real a = sqrt((r + abs(z.re)) / 2);
   if (z.re >= 0) return Complex(a, Real(z.im / (2 * a)));
   Real b = z.im >= 0 ? a : Real(-a);
   return Complex(Real(abs(z.im) / (2 * a)), b);
}

inline Complex cpow(Complex z, long n) {
   if (n < 0) return cpow(Complex(1) / z, -n);
   Complex r(1);
   while (n) {
      if (n & 1) r *= z;
      z *= z;
      n >>= 1;
   }
   return r;
}

inline Complex cpow(const Complex& z, const Complex& w) {
   if (z.re == 0 && z.im == 0) return Complex();
   return cexp(w * clog(z));
}

// e^{2 pi i x}
inline Complex e2pi(const Complex& x) {
   Real tp = 2 * real_pi();
   return cexp(Complex(Real(-tp * x.im), Real(tp * x.re)));
}

inline bool approx_equal(const Complex& a, const Complex& b, const Real& tol) {
   if (tol <= 0) throw std::invalid_argument("tol must be positive");
   return abs(a - b) < tol;
}

// Polynomial in tau, coeffs[j] multiplies tau^j.
class TauPolynomial {
 public:
   TauPolynomial() = default;
   explicit TauPolynomial(std::vector<Complex> c) : coeffs_(std::move(c)) { normalize(); }

   const std::vector<Complex>& coeffs() const { return coeffs_; }
   int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
   bool is_zero() const { return coeffs_.empty(); }

   Complex operator()(const Complex& tau) const {
      Complex acc;
      for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * tau + *it;
      return acc;
   }

   friend TauPolynomial operator+(const TauPolynomial& p, const TauPolynomial& q) {
      std::vector<Complex> c(std::max(p.coeffs_.size(), q.coeffs_.size()));
      for (std::size_t j = 0; j < p.coeffs_.size(); ++j) c[j] += p.coeffs_[j];
      for (std::size_t j = 0; j < q.coeffs_.size(); ++j) c[j] += q.coeffs_[j];
      return TauPolynomial(std::move(c));
   }

 private:
   void normalize() {
      while (!coeffs_.empty() && coeffs_.back().re == 0 && coeffs_.back().im == 0) coeffs_.pop_back();
   }
   std::vector<Complex> coeffs_;
};

inline Complex eval_tau_poly(const TauPolynomial& p, const Complex& tau) { return p(tau); }

// Parses "1.25", "3/7", "sqrt(7)", "sqrt(7)/2", "-sqrt(3)/2" at the current precision.
inline Real parse_real(std::string s) {
   s.erase(std::remove_if(s.begin(), s.end(), [](unsigned char ch) { return std::isspace(ch); }), s.end());
   if (s.empty()) throw std::invalid_argument("empty number");
   bool neg = false;
   if (s[0] == '-' || s[0] == '+') {
      neg = s[0] == '-';
      s = s.substr(1);
   }
   Real den(1);
   auto slash = s.rfind('/');
   if (slash != std::string::npos && s.find(')', slash) == std::string::npos) {
      den = parse_real(s.substr(slash + 1));
      s = s.substr(0, slash);
   }
   Real num;
   if (s.rfind("sqrt(", 0) == 0 && s.back() == ')') {
      num = sqrt(parse_real(s.substr(5, s.size() - 6)));
   } else {
      for (char ch : s)
         if (!(std::isdigit(static_cast<unsigned char>(ch)) || ch == '.' || ch == 'e' || ch == 'E' || ch == '-' ||
               ch == '+'))
            throw std::invalid_argument("malformed number: " + s);
      num = Real(s);
   }
   Real r = num / den;
   return neg ? Real(-r) : r;
}

// "re,im"
inline Complex parse_complex(const std::string& s) {
   auto comma = s.find(',');
   if (comma == std::string::npos) return Complex(parse_real(s));
   return Complex(parse_real(s.substr(0, comma)), parse_real(s.substr(comma + 1)));
}

inline std::string to_string(const Real& x, int digits) { return x.str(digits, std::ios_base::scientific); }

inline std::ostream& operator<<(std::ostream& os, const Complex& z) {
   return os << "(" << z.re.str(20) << ", " << z.im.str(20) << ")";
}

}  // namespace jwm
