#include "accr/report.hpp"

#include <cinttypes>
#include <cstdio>
#include <sstream>

namespace accr {

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Pass:
      return "pass";
    case Verdict::Fail:
      return "fail";
    case Verdict::Degenerate:
      return "degenerate";
    case Verdict::NotApplicable:
      return "n/a";
  }
  return "fail";
}

bool Report::any_failure() const {
  for (const auto& c : checks)
    if (c.verdict == Verdict::Fail) return true;
  return false;
}

nlohmann::ordered_json check_to_json(const CheckRecord& c) {
  nlohmann::ordered_json j;
  j["name"] = c.name;
  j["anchor"] = c.anchor;
  j["verdict"] = verdict_name(c.verdict);
  j["residual"] = c.residual;
  j["samples"] = c.samples;
  if (!c.detail.empty()) j["detail"] = c.detail;
  return j;
}

nlohmann::ordered_json Report::to_json(bool include_wall_time) const {
  nlohmann::ordered_json j;
  j["manifold"] = manifold;
  j["config"] = config;
  auto arr = nlohmann::ordered_json::array();
  for (const auto& c : checks) arr.push_back(check_to_json(c));
  j["checks"] = std::move(arr);
  if (!extra.is_null()) j["result"] = extra;
  if (include_wall_time) j["wall_ms"] = wall_ms;
  return j;
}

std::string Report::to_table() const {
  std::size_t width = 4;
  for (const auto& c : checks) width = std::max(width, c.name.size());
  std::ostringstream os;
  os << "manifold: " << manifold << "\n";
  char buf[64];
  os << "name" << std::string(width - 4 + 2, ' ') << "verdict     residual   anchor\n";
  for (const auto& c : checks) {
    std::snprintf(buf, sizeof buf, "%-10s  %.3e", verdict_name(c.verdict), c.residual);
    os << c.name << std::string(width - c.name.size() + 2, ' ') << buf << "  " << c.anchor;
    if (!c.detail.empty()) os << "  [" << c.detail << "]";
    os << "\n";
  }
  std::size_t pass = 0, fail = 0;
  for (const auto& c : checks) (c.verdict == Verdict::Fail ? fail : pass)++;
  os << pass << " ok, " << fail << " failed\n";
  return os.str();
}

std::string fnv1a_hex(std::string_view bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char ch : bytes) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, h);
  return buf;
}

}  // namespace accr
