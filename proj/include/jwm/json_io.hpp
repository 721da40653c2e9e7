#pragma once

#include <jwm/eichler.hpp>
#include <jwm/mockform.hpp>
#include <jwm/numeric.hpp>
#include <jwm/symrep.hpp>

#include <nlohmann/json.hpp>

#include <string>
#include <vector>

namespace jwm {

using nlohmann::json;

inline json complex_json(const Complex& z, int digits) {
   return json::array({to_string(z.re, digits), to_string(z.im, digits)});
}

inline json complex_list_json(const std::vector<Complex>& v, int digits) {
   json a = json::array();
   for (const auto& z : v) a.push_back(complex_json(z, digits));
   return a;
}

inline json matrix_json(const SL2Z& m) { return json::array({m.a, m.b, m.c, m.d}); }

inline json to_json(const PeriodLattice& pl, int digits) {
   json gens = json::array();
   for (const auto& g : pl.generators) {
      auto [x, y] = pl.basis.coordinates(g.value);
      gens.push_back({{"label", g.label},
                      {"value", complex_json(g.value, digits)},
                      {"coords", {nearest_integer(x).str(), nearest_integer(y).str()}}});
   }
   return {{"omega1", complex_json(pl.basis.omega1(), digits)},
           {"omega2", complex_json(pl.basis.omega2(), digits)},
           {"residual", to_string(pl.residual, 6)},
           {"generators", gens}};
}

inline json to_json(const FValue& v, int digits) {
   json poles = json::array();
   for (const auto& p : v.poles)
      poles.push_back({{"component", p.component},
                       {"lattice_point", complex_json(p.lattice_point, digits)},
                       {"offset", complex_json(p.offset, digits)},
                       {"residue", complex_json(p.principal.pole_coeff, digits)}});
   return {{"tau", complex_json(v.tau, digits)},
           {"matrix", matrix_json(v.m)},
           {"value", complex_list_json(v.value.entries, digits)},
           {"components", complex_list_json(v.components.entries, digits)},
           {"pole", v.pole_flag},
           {"poles", poles}};
}

inline json to_json(const ShadowResult& r, int digits) {
   return {{"computed", complex_list_json(r.computed, digits)},
           {"expected", complex_list_json(r.expected, digits)},
           {"sign", r.sign},
           {"deviation", to_string(r.deviation, 6)}};
}

inline json to_json(const InvarianceResult& r, int digits) {
   return {{"lhs", complex_list_json(r.lhs, digits)},
           {"rhs", complex_list_json(r.rhs, digits)},
           {"deviation", to_string(r.deviation, 6)}};
}

inline json to_json(const std::vector<PoleHit>& hits, int digits) {
   json a = json::array();
   for (const auto& h : hits)
      a.push_back({{"tau", complex_json(h.tau, digits)},
                   {"matrix", matrix_json(h.m)},
                   {"component", h.component},
                   {"lattice_point", complex_json(h.lattice_point, digits)},
                   {"distance", to_string(h.distance, 6)},
                   {"cusp", h.cusp}});
   return a;
}

inline json to_json(const QExpansion& q, int digits) {
   json c = json::array();
   for (std::size_t i = 0; i < q.coeffs.size(); ++i)
      c.push_back({{"n", q.n_min + static_cast<int>(i)}, {"coeff", complex_json(q.coefficient(q.n_min + static_cast<int>(i)), digits)}});
   return {{"prefactor", complex_json(q.prefactor, digits)}, {"coefficients", c}};
}

}  // namespace jwm
