#pragma once

#include <json.hpp>

#include "hidmom/hidden_momentum.hpp"
#include "hidmom/quantum_numbers.hpp"
#include "hidmom/stark.hpp"
#include "hidmom/units.hpp"
#include "hidmom/version.hpp"
#include "hidmom/wavefunction.hpp"

namespace hidmom {

using Json = nlohmann::ordered_json;

inline Json to_json(QuantumNumbers qn) { return Json{{"n", qn.n}, {"l", qn.l}, {"m", qn.m}}; }

inline QuantumNumbers quantum_numbers_from_json(const Json& j) {
  QuantumNumbers qn{j.at("n").get<int>(), j.at("l").get<int>(), j.at("m").get<int>()};
  require_valid(qn);
  return qn;
}

inline Json to_json(Vec3 v) { return Json{{"x", v.x}, {"y", v.y}, {"z", v.z}}; }

inline Json si_factors_json() {
  return Json{{"length_m_per_au", si::length_m_per_au},
              {"energy_J_per_au", si::energy_J_per_au},
              {"velocity_m_s_per_au", si::velocity_m_s_per_au},
              {"momentum_kg_m_s_per_au", si::momentum_kg_m_s_per_au},
              {"electric_field_V_m_per_au", si::electric_field_V_m_per_au},
              {"time_s_per_au", si::time_s_per_au}};
}

/// Superposition wire format: a term list plus the configuration that
/// produced it.
inline Json to_json(const Superposition& s, FieldConfig field, int n_max) {
  Json terms = Json::array();
  for (const auto& [qn, c] : s) {
    terms.push_back(Json{
        {"n", qn.n}, {"l", qn.l}, {"m", qn.m}, {"re", c.real()}, {"im", c.imag()}});
  }
  return Json{{"terms", std::move(terms)},
              {"metadata",
               Json{{"field_au", field.magnitude},
                    {"theta_rad", field.theta},
                    {"n_max", n_max}}}};
}

inline Superposition superposition_from_json(const Json& j) {
  Superposition s;
  for (const auto& term : j.at("terms")) {
    s.set({term.at("n").get<int>(), term.at("l").get<int>(), term.at("m").get<int>()},
          Complex(term.at("re").get<double>(), term.at("im").get<double>()));
  }
  return s;
}

inline Json to_json(const HiddenMomentumReport& r) {
  Json j;
  j["state"] = to_json(r.state);
  j["field"] = Json{{"magnitude_au", r.field.magnitude}, {"theta_rad", r.field.theta}};
  j["n_max"] = r.n_max;
  j["c_au"] = r.c;
  j["momenta_au"] =
      Json{{"p1", r.p1}, {"p2a", r.p2a}, {"p2b", r.p2b}, {"p2_total", r.p2_total}};
  j["momenta_mu_b_e_over_c2"] = Json{{"p1", r.p1_scaled},
                                     {"p2a", r.p2a_scaled},
                                     {"p2b", r.p2b_scaled},
                                     {"p2_total", r.p2_total_scaled}};
  j["v_c_au"] = to_json(r.v_c);
  j["ratio"] = r.ratio;
  j["expected_ratio"] = r.expected ? Json(*r.expected) : Json(nullptr);
  j["residual"] = r.residual ? Json(*r.residual) : Json(nullptr);
  j["method_gap_scaled"] = r.method_gap_scaled;
  j["diagnostics"] = Json{{"method1_au", to_json(r.method1_components)},
                          {"method2_au", to_json(r.method2_components)}};
  j["guard"] =
      Json{{"max_coefficient", r.max_coefficient}, {"breached", r.guard_breached}};
  j["metadata"] = Json{{"library_version", library_version},
                       {"quadrature",
                        Json{{"radial_margin", r.quadrature.radial_margin},
                             {"angular_margin", r.quadrature.angular_margin}}},
                       {"degenerate_same_n_excluded", r.degenerate_same_n_excluded},
                       {"si_factors", si_factors_json()}};
  return j;
}

}  // namespace hidmom
