#pragma once

#include <jwm/lattice.hpp>
#include <jwm/numeric.hpp>
#include <jwm/symrep.hpp>

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace jwm {

struct GroupDescriptor {
   enum class Kind { full, gamma0, gamma1 };
   Kind kind = Kind::full;
   long level = 1;
   std::vector<SL2Z> generators;

   bool contains(const SL2Z& m) const {
      if (kind == Kind::full) return true;
      auto mod = [this](long x) { return ((x % level) + level) % level; };
      if (mod(m.c) != 0) return false;
      if (kind == Kind::gamma1) return (mod(m.a) == 1 % level && mod(m.d) == 1 % level) ||
                                       (level <= 2 && mod(m.a) == mod(-1) && mod(m.d) == mod(-1));
      return true;
   }

   std::string name() const {
      switch (kind) {
         case Kind::full: return "SL2(Z)";
         case Kind::gamma0: return "Gamma0(" + std::to_string(level) + ")";
         case Kind::gamma1: return "Gamma1(" + std::to_string(level) + ")";
      }
      return "";
   }
};

namespace detail {

inline long mod_n(long x, long n) { return ((x % n) + n) % n; }

// Right-coset key of Gamma g, determined by the bottom row of g.
inline std::pair<long, long> coset_key(const GroupDescriptor& g, const SL2Z& m) {
   const long n = g.level;
   long c = mod_n(m.c, n), d = mod_n(m.d, n);
   if (g.kind == GroupDescriptor::Kind::gamma1) {
      if (n <= 2) return std::min(std::make_pair(c, d), std::make_pair(mod_n(-c, n), mod_n(-d, n)));
      return {c, d};
   }
   std::pair<long, long> best{n, n};
   for (long u = 1; u < std::max(n, 2L); ++u) {
      if (std::gcd(u, n) != 1) continue;
      best = std::min(best, std::make_pair(mod_n(u * c, n), mod_n(u * d, n)));
   }
   return best;
}

}  // namespace detail

// Schreier generators of a congruence subgroup from coset representatives
// over SL2(Z) = <S, T>.
inline std::vector<SL2Z> schreier_generators(const GroupDescriptor& grp) {
   if (grp.kind == GroupDescriptor::Kind::full || grp.level == 1) return {SL2Z::S(), SL2Z::T()};
   std::map<std::pair<long, long>, SL2Z> reps;
   std::vector<SL2Z> queue{SL2Z::identity()};
   reps[detail::coset_key(grp, SL2Z::identity())] = SL2Z::identity();
   const SL2Z gens[2] = {SL2Z::S(), SL2Z::T()};
   for (std::size_t qi = 0; qi < queue.size(); ++qi) {
      for (const SL2Z& g : gens) {
         SL2Z h = queue[qi] * g;
         auto key = detail::coset_key(grp, h);
         if (!reps.count(key)) {
            reps[key] = h;
            queue.push_back(h);
         }
      }
   }
   std::vector<SL2Z> out;
   auto seen = [&out](const SL2Z& m) {
      for (const SL2Z& x : out)
         if (x == m || x == m.inverse()) return true;
      return false;
   };
   for (const auto& [key, r] : reps)
      for (const SL2Z& g : gens) {
         SL2Z h = r * g;
         SL2Z s = h * reps.at(detail::coset_key(grp, h)).inverse();
         if (s == SL2Z::identity() || seen(s)) continue;
         if (!grp.contains(s)) throw std::logic_error("Schreier generator outside the group");
         out.push_back(s);
      }
   return out;
}

inline GroupDescriptor full_modular_group() { return {GroupDescriptor::Kind::full, 1, {SL2Z::S(), SL2Z::T()}}; }

inline GroupDescriptor gamma0(long n) {
   GroupDescriptor g{GroupDescriptor::Kind::gamma0, n, {}};
   g.generators = schreier_generators(g);
   return g;
}

inline GroupDescriptor gamma1(long n) {
   GroupDescriptor g{GroupDescriptor::Kind::gamma1, n, {}};
   g.generators = schreier_generators(g);
   return g;
}

// Eta quotient prod_i eta(m_i tau)^{e_i} = q^{shift} prod_i prod_n (1 - q^{m_i n})^{e_i}.
// Coefficients of the product part by the logarithmic-derivative recurrence
// n P_n = -sum_j c_j P_{n-j}, c_j = sum_i e_i m_i sigma_1(j / m_i).
inline std::vector<Integer> eta_product_series(const std::vector<std::pair<long, long>>& factors, long n_max) {
   std::vector<long> sigma1(n_max + 1, 0);
   for (long d = 1; d <= n_max; ++d)
      for (long m = d; m <= n_max; m += d) sigma1[m] += d;
   std::vector<Integer> c(n_max + 1, 0);
   for (long j = 1; j <= n_max; ++j)
      for (auto [m, e] : factors)
         if (j % m == 0) c[j] += Integer(e) * m * sigma1[j / m];
   std::vector<Integer> p(n_max + 1, 0);
   p[0] = 1;
   for (long n = 1; n <= n_max; ++n) {
      Integer s = 0;
      for (long j = 1; j <= n; ++j)
         if (c[j] != 0 && p[n - j] != 0) s += c[j] * p[n - j];
      p[n] = -s / n;
   }
   return p;
}

namespace detail {

struct CoefficientStore {
   std::function<std::vector<Integer>(long)> generator;  // returns a_0..a_n
   mutable std::mutex mu;
   std::vector<Integer> coeffs;  // index n
   std::vector<long> small;  // valid where fits[n]
   std::vector<bool> fits;

   void set(std::vector<Integer> c) {
      coeffs = std::move(c);
      small.assign(coeffs.size(), 0);
      fits.assign(coeffs.size(), false);
      for (std::size_t n = 0; n < coeffs.size(); ++n) {
         if (coeffs[n] >= std::numeric_limits<long>::min() && coeffs[n] <= std::numeric_limits<long>::max()) {
            small[n] = static_cast<long>(coeffs[n]);
            fits[n] = true;
         }
      }
   }
};

}  // namespace detail

struct TruncationError : std::runtime_error {
   using std::runtime_error::runtime_error;
};

class CuspForm {
 public:
   CuspForm(std::string name, int weight, GroupDescriptor group, std::vector<Integer> coeffs_from_0,
            std::function<std::vector<Integer>(long)> generator = {})
       : name_(std::move(name)), weight_(weight), group_(std::move(group)),
         store_(std::make_shared<detail::CoefficientStore>()) {
      if (weight_ < 2 || weight_ % 2) throw std::invalid_argument("weight must be even and at least 2");
      if (coeffs_from_0.empty() || coeffs_from_0[0] != 0) throw std::invalid_argument("a_0 must be 0 for a cusp form");
      if (coeffs_from_0.size() < 2) throw std::invalid_argument("n_max must be at least 1");
      store_->generator = std::move(generator);
      store_->set(std::move(coeffs_from_0));
   }

   const std::string& name() const { return name_; }
   int weight() const { return weight_; }
   const GroupDescriptor& group() const { return group_; }

   long n_max() const {
      std::lock_guard<std::mutex> lock(store_->mu);
      return static_cast<long>(store_->coeffs.size()) - 1;
   }

   // Extends built-in expansions on demand; imported tables cannot grow.
   void ensure(long n) const {
      std::lock_guard<std::mutex> lock(store_->mu);
      if (static_cast<long>(store_->coeffs.size()) > n) return;
      if (!store_->generator)
         throw TruncationError("cusp form '" + name_ + "' needs " + std::to_string(n) + " coefficients, only " +
                               std::to_string(store_->coeffs.size() - 1) + " available");
      long target = std::max<long>(n, 2 * static_cast<long>(store_->coeffs.size()));
      store_->set(store_->generator(target));
   }

   Integer coeff(long n) const {
      ensure(n);
      std::lock_guard<std::mutex> lock(store_->mu);
      return store_->coeffs[n];
   }

   // a_1..a_n as reals at the current precision (index 0 unused).
   std::vector<Real> real_coeffs(long n) const {
      ensure(n);
      std::lock_guard<std::mutex> lock(store_->mu);
      std::vector<Real> out(n + 1);
      for (long j = 0; j <= n; ++j) {
         if (store_->fits[j]) {
            Real r;
            mpfr_set_si(r.backend().data(), store_->small[j], MPFR_RNDN);
            out[j] = std::move(r);
         } else {
            out[j] = Real(store_->coeffs[j]);
         }
      }
      return out;
   }

   std::vector<Integer> coeffs(long n) const {
      ensure(n);
      std::lock_guard<std::mutex> lock(store_->mu);
      return std::vector<Integer>(store_->coeffs.begin(), store_->coeffs.begin() + n + 1);
   }

 private:
   std::string name_;
   int weight_;
   GroupDescriptor group_;
   std::shared_ptr<detail::CoefficientStore> store_;
};

inline std::function<std::vector<Integer>(long)> eta_quotient_generator(std::vector<std::pair<long, long>> factors,
                                                                         long shift) {
   return [factors, shift](long n_max) {
      std::vector<Integer> p = eta_product_series(factors, std::max(0L, n_max - shift));
      std::vector<Integer> a(n_max + 1, 0);
      for (long n = shift; n <= n_max; ++n) a[n] = p[n - shift];
      return a;
   };
}

inline CuspForm delta_coefficients(long n_max) {
   auto gen = eta_quotient_generator({{1, 24}}, 1);
   return CuspForm("delta", 12, full_modular_group(), gen(n_max), gen);
}

inline GroupDescriptor gamma0_9_example() {
   return {GroupDescriptor::Kind::gamma0, 9, {SL2Z::T(), SL2Z::minus_identity(), {4, -1, 9, -2}, {7, -4, 9, -5}}};
}

inline CuspForm eta3_pow8_coefficients(long n_max) {
   auto gen = eta_quotient_generator({{3, 8}}, 1);
   return CuspForm("eta3p8", 4, gamma0_9_example(), gen(n_max), gen);
}

// eta(tau)^2 eta(11 tau)^2, the weight-2 newform of level 11.
inline CuspForm eta11_coefficients(long n_max) {
   auto gen = eta_quotient_generator({{1, 2}, {11, 2}}, 1);
   return CuspForm("eta11", 2, gamma0(11), gen(n_max), gen);
}

inline CuspForm builtin_form(const std::string& name, long n_max = 64) {
   if (name == "delta") return delta_coefficients(n_max);
   if (name == "eta3p8") return eta3_pow8_coefficients(n_max);
   if (name == "eta11") return eta11_coefficients(n_max);
   throw std::invalid_argument("unknown built-in form '" + name + "'");
}

// Text: one "n a_n" pair per line ('#' comments). JSON: {"weight", "level",
// "group": "gamma0"|"gamma1"|"full", "coeffs": [[n, a_n], ...]} or a bare list
// of pairs (weight/level then come from the arguments).
inline CuspForm import_cusp_form(const std::string& path, int weight = 0, long level = 0,
                                 const std::string& group_kind = "gamma0") {
   std::ifstream in(path);
   if (!in) throw std::runtime_error("cannot open " + path);
   std::stringstream buf;
   buf << in.rdbuf();
   std::string text = buf.str();
   std::vector<std::pair<long, Integer>> pairs;
   std::string kind = group_kind;
   auto first = text.find_first_not_of(" \t\r\n");
   if (first != std::string::npos && (text[first] == '{' || text[first] == '[')) {
      auto j = nlohmann::json::parse(text);
      const nlohmann::json* list = &j;
      if (j.is_object()) {
         if (j.contains("weight")) weight = j["weight"].get<int>();
         if (j.contains("level")) level = j["level"].get<long>();
         if (j.contains("group")) kind = j["group"].get<std::string>();
         list = &j.at("coeffs");
      }
      for (const auto& e : *list) {
         const auto& v = e[1];
         Integer a = v.is_string() ? Integer(v.get<std::string>()) : Integer(v.get<long long>());
         pairs.emplace_back(e[0].get<long>(), a);
      }
   } else {
      std::istringstream ls(text);
      std::string line;
      while (std::getline(ls, line)) {
         auto h = line.find('#');
         if (h != std::string::npos) line = line.substr(0, h);
         std::istringstream fs(line);
         long n;
         std::string a;
         if (fs >> n >> a) pairs.emplace_back(n, Integer(a));
      }
   }
   if (weight == 0 || level == 0) throw std::invalid_argument("imported form needs weight and level");
   long n_max = 0;
   for (auto& p : pairs) {
      if (p.first < 0) throw std::invalid_argument("negative index in coefficient list");
      n_max = std::max(n_max, p.first);
   }
   std::vector<Integer> a(n_max + 1, 0);
   for (auto& p : pairs) a[p.first] = p.second;
   GroupDescriptor g = kind == "full" || level == 1 ? full_modular_group() : kind == "gamma1" ? gamma1(level) : gamma0(level);
   return CuspForm(path, weight, g, std::move(a));
}

inline CuspForm resolve_form(const std::string& name_or_path, int weight = 0, long level = 0) {
   if (name_or_path == "delta" || name_or_path == "eta3p8" || name_or_path == "eta11") return builtin_form(name_or_path);
   return import_cusp_form(name_or_path, weight, level);
}

inline void require_upper_half_plane(const Complex& tau) {
   if (tau.im <= 0) throw std::domain_error("tau must lie in the upper half-plane");
}

// Number of q-series terms so that n^power |q|^n stays below 10^-tail beyond it.
inline long series_terms(const Complex& tau, int power, const PrecisionContext& ctx, long floor_terms = 32) {
   double y = static_cast<double>(tau.im);
   double lq = 2 * M_PI * y;  // -log|q|
   double target = ctx.tail_digits() * std::log(10.0);
   long n = floor_terms;
   while (lq * n - power * std::log(static_cast<double>(n)) < target) n = static_cast<long>(n * 1.25) + 1;
   return n;
}

// f(tau) = sum a_n q^n
inline Complex evaluate(const CuspForm& f, const Complex& tau_in, const PrecisionContext& ctx) {
   PrecisionScope scope(ctx);
   Complex tau = promote(tau_in);
   require_upper_half_plane(tau);
   long n = series_terms(tau, f.weight(), ctx);
   auto a = f.real_coeffs(n);
   Complex q = e2pi(tau), qn(1), s;
   for (long j = 1; j <= n; ++j) {
      qn *= q;
      if (a[j] != 0) s += qn * a[j];
   }
   return s;
}

inline Complex dedekind_eta(const Complex& tau_in, const PrecisionContext& ctx) {
   PrecisionScope scope(ctx);
   Complex tau = promote(tau_in);
   require_upper_half_plane(tau);
   Complex q = e2pi(tau), qn(1), prod(1);
   Real tol = pow10(-ctx.tail_digits());
   for (long n = 1;; ++n) {
      qn *= q;
      prod -= prod * qn;
      if (abs(qn) < tol && n >= 32) break;
   }
   return e2pi(tau / Real(24)) * prod;
}

inline Complex eisenstein_g2(const Complex& tau_in, const PrecisionContext& ctx) {
   PrecisionScope scope(ctx);
   Complex tau = promote(tau_in);
   require_upper_half_plane(tau);
   long n = series_terms(tau, 2, ctx);
   std::vector<long> sigma1(n + 1, 0);
   for (long d = 1; d <= n; ++d)
      for (long m = d; m <= n; m += d) sigma1[m] += d;
   Complex q = e2pi(tau), qn(1), s;
   for (long j = 1; j <= n; ++j) {
      qn *= q;
      s += qn * Real(sigma1[j]);
   }
   Real pi = real_pi();
   return Complex(Real(pi * pi / 3)) - s * Real(8 * pi * pi);
}

inline Complex eisenstein_g2_star(const Complex& tau_in, const PrecisionContext& ctx) {
   PrecisionScope scope(ctx);
   Complex tau = promote(tau_in);
   return eisenstein_g2(tau, ctx) - Complex(Real(real_pi() / tau.im));
}

// G_{2k}(tau) = 2 zeta(2k) + 2 (2 pi i)^{2k}/(2k-1)! sum_d d^{2k-1} q^d/(1-q^d)
inline Complex eisenstein_g2k_tau(const Complex& tau_in, int k, const PrecisionContext& ctx) {
   if (k < 2) throw std::invalid_argument("G_2k needs k >= 2");
   PrecisionScope scope(ctx);
   Complex tau = promote(tau_in);
   require_upper_half_plane(tau);
   long n = series_terms(tau, 2 * k, ctx);
   Complex q = e2pi(tau), qd(1), s;
   for (long d = 1; d <= n; ++d) {
      qd *= q;
      s += qd / (Complex(1) - qd) * pow(Real(d), 2 * k - 1);
   }
   Real pi = real_pi();
   Real fact(1);
   for (int j = 2; j <= 2 * k - 1; ++j) fact *= j;
   Real pref = 2 * pow(2 * pi, 2 * k) / fact;
   if (k % 2) pref = -pref;  // i^{2k} = (-1)^k
   return Complex(Real(2 * zeta_ui(2 * k))) + s * pref;
}

inline Complex eisenstein_g2n(const Lattice2D& lat, int n, const PrecisionContext& ctx) {
   PrecisionScope scope(ctx);
   Lattice2D r = Lattice2D(promote(lat.omega1()), promote(lat.omega2())).reduced();
   Complex g = eisenstein_g2k_tau(r.tau(), n, ctx);
   return g * cpow(r.omega1(), -2L * n);
}

// Formal q-expansion: prefactor * sum_{n >= n_min} coeffs[n - n_min](tau) q^n.
struct QExpansion {
   int n_min = 0;
   std::vector<TauPolynomial> coeffs;
   Complex prefactor = Complex(1);

   Complex coefficient(int n) const {
      int i = n - n_min;
      if (i < 0 || i >= static_cast<int>(coeffs.size()) || coeffs[i].is_zero()) return Complex();
      return coeffs[i].coeffs()[0];
   }

   Complex operator()(const Complex& tau) const {
      Complex q = e2pi(tau);
      Complex s, qn = cpow(q, static_cast<long>(n_min));
      for (const auto& c : coeffs) {
         s += c(tau) * qn;
         qn *= q;
      }
      return prefactor * s;
   }
};

}  // namespace jwm
