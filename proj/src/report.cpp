#include "resdet/report.hpp"

namespace resdet {

nlohmann::json to_json(cplx z) { return {{"re", z.real()}, {"im", z.imag()}}; }

nlohmann::json to_json(const CheckRecord& r) {
  nlohmann::json j = {{"schema", kSchemaVersion},
                      {"check", r.check},
                      {"inputs", r.inputs},
                      {"lhs", to_json(r.lhs)},
                      {"rhs", to_json(r.rhs)},
                      {"residual", r.residual},
                      {"tolerance", r.tolerance},
                      {"pass", r.pass}};
  if (!r.extra.empty()) j["extra"] = r.extra;
  return j;
}

CheckRecord make_record(std::string check, nlohmann::json inputs, cplx lhs, cplx rhs,
                        double tolerance) {
  CheckRecord r;
  r.check = std::move(check);
  r.inputs = std::move(inputs);
  r.lhs = lhs;
  r.rhs = rhs;
  r.residual = std::abs(lhs - rhs);
  r.tolerance = tolerance;
  r.pass = std::isfinite(r.residual) && r.residual <= tolerance;
  return r;
}

}  // namespace resdet
