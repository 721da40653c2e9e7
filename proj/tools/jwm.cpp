#include <jwm/json_io.hpp>
#include <jwm/jwm.hpp>

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>

#include "fixtures.hpp"

using namespace jwm;

namespace {

enum Exit { ok = 0, pole = 1, tolerance = 2, usage = 3 };

struct ToleranceFailure : std::runtime_error {
   using std::runtime_error::runtime_error;
};

struct Config {
   std::string form = "delta";
   int weight = 0;
   long level = 0;
   int digits = 50;
   int guard = 15;
   int tail_digits = -1;
   std::string tau = "0,2";
   std::string matrix = "1,0,0,1";
   std::string gamma = "2,5,1,3";
   std::string lattice;
   std::string h;
   std::string tol;
   std::string output;
   int terms = 10;
   std::string region = "-0.5,0.5,0.5,2";
   int nx = 11, ny = 11;
   std::vector<std::string> matrices{"1,0,0,1"};
   std::string eps = "0.01";
   bool fixtures = false;
};

SL2Z parse_matrix(const std::string& s) {
   std::vector<long> v;
   std::stringstream ss(s);
   std::string item;
   while (std::getline(ss, item, ',')) v.push_back(std::stol(item));
   if (v.size() != 4) throw std::invalid_argument("matrix must be a,b,c,d");
   return SL2Z(v[0], v[1], v[2], v[3]);
}

Complex parse_tau(const std::string& s) {
   Complex t = parse_complex(s);
   require_upper_half_plane(t);
   return t;
}

// tail tolerance given as 1e-N
int tail_digits_from(const std::string& s) {
   Real t(s);
   if (!(t > 0) || !(t < 1)) throw std::invalid_argument("tail tolerance must lie in (0, 1)");
   return static_cast<int>(mp::floor(-log10(t)).convert_to<long>());
}

PrecisionContext make_context(const Config& c) { return PrecisionContext(c.digits, c.guard, c.tail_digits); }

PeriodLattice lattice_for(const Config& c, const CuspForm& f, const PrecisionContext& ctx) {
   if (c.lattice.empty()) return period_lattice(f, ctx);
   PrecisionScope scope(ctx);
   auto semi = c.lattice.find(';');
   if (semi == std::string::npos) throw std::invalid_argument("lattice must be 're,im;re,im'");
   return {Lattice2D(parse_complex(c.lattice.substr(0, semi)), parse_complex(c.lattice.substr(semi + 1))), {}, Real(0)};
}

void emit(const Config& c, const std::string& command, const json& result) {
   json out{{"schema", 1}, {"command", command}, {"form", c.form}, {"digits", c.digits}, {"result", result}};
   std::string text = out.dump(2);
   if (c.output.empty()) {
      std::cout << text << "\n";
   } else {
      std::ofstream f(c.output);
      if (!f) throw std::runtime_error("cannot write " + c.output);
      f << text << "\n";
   }
}

Real tolerance_or(const Config& c, const Real& fallback) { return c.tol.empty() ? fallback : Real(c.tol); }

int cmd_periods(const Config& c) {
   auto ctx = make_context(c);
   PrecisionScope scope(ctx);
   auto f = resolve_form(c.form, c.weight, c.level);
   auto pl = period_lattice(f, ctx);
   emit(c, "periods", to_json(pl, c.digits));
   return ok;
}

int cmd_eichler(const Config& c) {
   auto ctx = make_context(c);
   PrecisionScope scope(ctx);
   auto f = resolve_form(c.form, c.weight, c.level);
   auto v = eichler_vector(f, parse_tau(c.tau), parse_matrix(c.matrix), ctx);
   emit(c, "eichler", {{"tau", complex_json(parse_tau(c.tau), c.digits)},
                       {"matrix", matrix_json(v.basis_tag)},
                       {"components", complex_list_json(v.components, c.digits)}});
   return ok;
}

int cmd_evaluate(const Config& c) {
   auto ctx = make_context(c);
   PrecisionScope scope(ctx);
   auto f = resolve_form(c.form, c.weight, c.level);
   MockFormContext mf(f, lattice_for(c, f, ctx), ctx);
   auto v = f_value(mf, parse_tau(c.tau), parse_matrix(c.matrix));
   emit(c, "evaluate", to_json(v, c.digits));
   return v.pole_flag ? pole : ok;
}

int cmd_shadow(const Config& c) {
   auto ctx = make_context(c);
   PrecisionScope scope(ctx);
   auto f = resolve_form(c.form, c.weight, c.level);
   MockFormContext mf(f, lattice_for(c, f, ctx), ctx);
   Real h = c.h.empty() ? default_shadow_step(ctx) : Real(c.h);
   auto r = shadow_check(mf, parse_tau(c.tau), parse_matrix(c.matrix), h);
   Real tol = tolerance_or(c, Real("1e-6"));
   json j = to_json(r, c.digits);
   j["h"] = h.str(6);
   j["tolerance"] = tol.str(6);
   emit(c, "shadow", j);
   return r.deviation < tol ? ok : tolerance;
}

int cmd_invariance(const Config& c) {
   auto ctx = make_context(c);
   PrecisionScope scope(ctx);
   auto f = resolve_form(c.form, c.weight, c.level);
   MockFormContext mf(f, lattice_for(c, f, ctx), ctx);
   auto r = rho_invariance(mf, parse_matrix(c.gamma), parse_tau(c.tau), parse_matrix(c.matrix));
   Real tol = tolerance_or(c, pow10(-(ctx.digits() - 2 * ctx.guard())));
   json j = to_json(r, c.digits);
   j["gamma"] = matrix_json(parse_matrix(c.gamma));
   j["tolerance"] = tol.str(6);
   emit(c, "invariance", j);
   return r.deviation < tol ? ok : tolerance;
}

int cmd_polescan(const Config& c) {
   auto ctx = make_context(c);
   PrecisionScope scope(ctx);
   auto f = resolve_form(c.form, c.weight, c.level);
   MockFormContext mf(f, lattice_for(c, f, ctx), ctx);
   std::vector<Real> r;
   std::stringstream ss(c.region);
   std::string item;
   while (std::getline(ss, item, ',')) r.push_back(parse_real(item));
   if (r.size() != 4) throw std::invalid_argument("region must be re_min,re_max,im_min,im_max");
   std::vector<SL2Z> ms;
   for (const auto& m : c.matrices) ms.push_back(parse_matrix(m));
   auto hits = pole_scan(mf, {r[0], r[1], r[2], r[3]}, c.nx, c.ny, ms, Real(c.eps));
   emit(c, "polescan", {{"hits", to_json(hits, c.digits)}});
   return ok;
}

int cmd_qexp(const Config& c) {
   auto ctx = make_context(c);
   PrecisionScope scope(ctx);
   auto f = resolve_form(c.form, c.weight, c.level);
   MockFormContext mf(f, lattice_for(c, f, ctx), ctx);
   emit(c, "qexp", to_json(holomorphic_part_q(mf, 0, c.terms), c.digits));
   return ok;
}

int cmd_fixtures(const Config& c) {
   auto ctx = make_context(c);
   auto rows = fixtures::run(ctx);
   std::size_t width = 0;
   for (const auto& r : rows) width = std::max(width, r.name.size());
   int failed = 0;
   for (const auto& r : rows) {
      std::cerr << (r.pass ? "PASS " : "FAIL ") << r.name << std::string(width - r.name.size() + 2, ' ') << r.detail
                << "\n";
      failed += !r.pass;
   }
   json j = json::array();
   for (const auto& r : rows) j.push_back({{"name", r.name}, {"pass", r.pass}, {"detail", r.detail}});
   emit(c, "fixtures", {{"rows", j}, {"failed", failed}});
   return failed ? tolerance : ok;
}

}  // namespace

int main(int argc, char** argv) {
   Config c;
   if (const char* d = std::getenv("JWM_DIGITS")) c.digits = std::atoi(d);
   std::string tail_env;
   if (const char* t = std::getenv("JWM_TAIL_TOL")) tail_env = t;

   CLI::App app{"Jacobi-Weierstrass mock modular forms"};
   app.require_subcommand(0, 1);
   app.add_flag("--fixtures", c.fixtures, "run the golden fixture table");
   std::string tail_opt;
   auto common = [&](CLI::App* s) {
      s->add_option("--form", c.form, "delta, eta3p8, eta11 or a coefficient file");
      s->add_option("--weight", c.weight, "weight of an imported form");
      s->add_option("--level", c.level, "level of an imported form");
      s->add_option("--digits", c.digits, "significant decimal digits");
      s->add_option("--guard", c.guard, "guard digits");
      s->add_option("--tail-tol", tail_opt, "q-series tail tolerance, e.g. 1e-80");
      s->add_option("-o,--output", c.output, "write JSON here instead of stdout");
   };
   common(&app);
   auto lattice_opt = [&](CLI::App* s) {
      s->add_option("--lattice", c.lattice, "override the period lattice: 're,im;re,im'");
   };
   std::map<std::string, std::function<int(const Config&)>> handlers;
   auto sub = [&](const std::string& name, const std::string& help, std::function<int(const Config&)> fn) {
      auto* s = app.add_subcommand(name, help);
      common(s);
      handlers[name] = std::move(fn);
      return s;
   };
   sub("periods", "period lattice of a form", cmd_periods);
   auto* eich = sub("eichler", "Eichler vector N(M^-1) E(tau)", cmd_eichler);
   eich->add_option("--tau", c.tau, "re,im");
   eich->add_option("--matrix", c.matrix, "a,b,c,d");
   auto* ev = sub("evaluate", "F(tau, M)", cmd_evaluate);
   ev->add_option("--tau", c.tau, "re,im");
   ev->add_option("--matrix", c.matrix, "a,b,c,d");
   lattice_opt(ev);
   auto* sh = sub("shadow", "finite-difference shadow check", cmd_shadow);
   sh->add_option("--tau", c.tau, "re,im");
   sh->add_option("--matrix", c.matrix, "a,b,c,d");
   sh->set_help_flag("--help", "Print this help message and exit");
   sh->add_option("--h", c.h, "finite-difference step");
   sh->add_option("--tol", c.tol, "relative tolerance (default 1e-6)");
   lattice_opt(sh);
   auto* inv = sub("invariance", "rho-invariance F(gamma tau, M) = N(gamma) F(tau, gamma^-1 M)", cmd_invariance);
   inv->add_option("--tau", c.tau, "re,im");
   inv->add_option("--gamma", c.gamma, "a,b,c,d");
   inv->add_option("--matrix", c.matrix, "a,b,c,d");
   inv->add_option("--tol", c.tol, "absolute tolerance (default 10^-(digits-2 guard))");
   lattice_opt(inv);
   auto* ps = sub("polescan", "scan a rectangle for poles", cmd_polescan);
   ps->add_option("--region", c.region, "re_min,re_max,im_min,im_max");
   ps->add_option("--nx", c.nx);
   ps->add_option("--ny", c.ny);
   ps->add_option("--matrices", c.matrices, "list of a,b,c,d");
   ps->add_option("--eps", c.eps, "relative lattice distance threshold");
   lattice_opt(ps);
   auto* qe = sub("qexp", "q-expansion of the holomorphic part of component 0", cmd_qexp);
   qe->add_option("--terms", c.terms);
   lattice_opt(qe);
   sub("fixtures", "golden fixture table", cmd_fixtures);

   try {
      app.parse(argc, argv);
   } catch (const CLI::ParseError& e) {
      int code = app.exit(e);
      return code == 0 ? ok : usage;
   }

   try {
      std::string tail = tail_opt.empty() ? tail_env : tail_opt;
      if (!tail.empty()) {
         PrecisionScope scope(PrecisionContext(std::max(c.digits, 15), 10, std::max(c.digits, 15) + 50));
         c.tail_digits = tail_digits_from(tail);
      }
      if (c.fixtures) return cmd_fixtures(c);
      auto subs = app.get_subcommands();
      if (subs.empty()) {
         std::cerr << app.help();
         return usage;
      }
      return handlers.at(subs.front()->get_name())(c);
   } catch (const PoleError& e) {
      std::cerr << "pole: " << e.what() << "\n";
      return pole;
   } catch (const PrecisionError& e) {
      std::cerr << "precision: " << e.what() << "\n";
      return tolerance;
   } catch (const LatticeRecoveryError& e) {
      std::cerr << "lattice: " << e.what() << "\n";
      return tolerance;
   } catch (const TruncationError& e) {
      std::cerr << "precision: " << e.what() << "\n";
      return tolerance;
   } catch (const ModularityError& e) {
      std::cerr << "modularity: " << e.what() << "\n";
      return tolerance;
   } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      return usage;
   }
}
