#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace accr {

enum class Verdict { Pass, Fail, Degenerate, NotApplicable };
const char* verdict_name(Verdict v);

// One named check: the formula it tests, the value it produced at every
// sample, the worst residual and the verdict.
struct CheckRecord {
  std::string name;
  std::string anchor;
  Verdict verdict = Verdict::Fail;
  double residual = 0.0;
  std::vector<double> samples;
  std::string detail;
};

struct Report {
  std::string manifold;
  nlohmann::ordered_json config;
  std::vector<CheckRecord> checks;
  nlohmann::ordered_json extra;  // command-specific payload, omitted when null
  double wall_ms = 0.0;

  bool any_failure() const;
  nlohmann::ordered_json to_json(bool include_wall_time = true) const;
  std::string to_table() const;
};

// Numbers are written with 17 significant digits so a report round-trips.
nlohmann::ordered_json check_to_json(const CheckRecord& c);

// 64-bit FNV-1a of the bytes, as 16 lowercase hex digits.
std::string fnv1a_hex(std::string_view bytes);

}  // namespace accr
