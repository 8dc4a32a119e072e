#pragma once

#include <nlohmann/json.hpp>
#include <string>

#include "resdet/numerics.hpp"

namespace resdet {

inline constexpr const char* kSchemaVersion = "1";

// One verification outcome: lhs and rhs are the two independently computed
// sides, residual = |lhs - rhs|, pass iff residual <= tolerance.
struct CheckRecord {
  std::string check;
  nlohmann::json inputs = nlohmann::json::object();
  cplx lhs;
  cplx rhs;
  double residual = 0;
  double tolerance = 0;
  bool pass = false;
  nlohmann::json extra = nlohmann::json::object();
};

nlohmann::json to_json(cplx z);
nlohmann::json to_json(const CheckRecord& r);
// Sets residual and pass from lhs, rhs and tolerance.
CheckRecord make_record(std::string check, nlohmann::json inputs, cplx lhs, cplx rhs,
                        double tolerance);

}  // namespace resdet
