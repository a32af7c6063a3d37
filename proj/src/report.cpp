#include "amqlab/report.hpp"

namespace amqlab {

std::string format_double(double v) { return Json(v).dump(); }

Json params_json(const ParamList& params) {
  Json out = Json::object();
  for (const auto& [name, value] : params) out[name] = value;
  return out;
}

std::string params_cell(const ParamList& params) {
  std::string out;
  for (const auto& [name, value] : params) {
    if (!out.empty()) out += ';';
    out += name + "=" + std::to_string(value);
  }
  return out;
}

Json to_json(const SimulationReport& r) {
  Json j;
  j["structure"] = r.structure;
  j["params"] = params_json(r.params);
  j["l"] = r.l;
  j["trials"] = r.trials;
  j["seed"] = r.seed;
  j["successes"] = r.successes;
  j["estimate"] = r.estimate;
  j["ci_low"] = r.ci_low;
  j["ci_high"] = r.ci_high;
  j["analytic_exact"] = r.analytic.exact ? Json(r.analytic.exact->to_string()) : Json(nullptr);
  j["analytic_float"] = r.analytic.value;
  j["z"] = r.z;
  j["aborted_trials"] = r.aborted_trials;
  return j;
}

}  // namespace amqlab
