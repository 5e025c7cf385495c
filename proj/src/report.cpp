#include "sgq/report.hpp"

#include <json.hpp>
#include <sstream>

namespace sgq {

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::PASS:
      return "PASS";
    case Verdict::FAIL:
      return "FAIL";
    case Verdict::INCONCLUSIVE:
      return "INCONCLUSIVE";
  }
  return "FAIL";
}

std::string CheckReport::text_line() const {
  std::ostringstream os;
  os << "[" << to_string(verdict) << "] " << scenario;
  if (windowed) os << " (" << window.str() << ")";
  os << " — " << statement;
  if (!witness.empty()) os << " [witness: " << witness << "]";
  return os.str();
}

Summary summarize(const std::vector<CheckReport>& reports) {
  Summary s;
  for (const auto& r : reports) {
    if (r.verdict == Verdict::PASS)
      ++s.pass;
    else if (r.verdict == Verdict::FAIL)
      ++s.fail;
    else
      ++s.inconclusive;
  }
  return s;
}

std::string reports_to_text(const std::vector<CheckReport>& reports) {
  std::ostringstream os;
  for (const auto& r : reports) os << r.text_line() << "\n";
  Summary s = summarize(reports);
  os << s.pass << " passed, " << s.fail << " failed, " << s.inconclusive
     << " inconclusive\n";
  return os.str();
}

std::string reports_to_json(const std::vector<CheckReport>& reports,
                            std::optional<long long> wall_millis) {
  nlohmann::json checks = nlohmann::json::array();
  for (const auto& r : reports) {
    nlohmann::json j;
    j["scenario"] = r.scenario;
    j["verdict"] = to_string(r.verdict);
    j["statement"] = r.statement;
    if (!r.witness.empty()) j["witness"] = r.witness;
    if (r.windowed) {
      j["window"] = {{"deg_min", r.window.deg_min},
                     {"deg_max", r.window.deg_max},
                     {"weight_min", r.window.weight_min},
                     {"weight_max", r.window.weight_max},
                     {"size_bound", r.window.size_bound}};
    } else {
      j["window"] = nullptr;
    }
    j["millis"] = r.millis;
    checks.push_back(std::move(j));
  }
  Summary s = summarize(reports);
  nlohmann::json out;
  out["checks"] = std::move(checks);
  out["summary"] = {{"pass", s.pass},
                    {"fail", s.fail},
                    {"inconclusive", s.inconclusive}};
  if (wall_millis) out["summary"]["wall_millis"] = *wall_millis;
  return out.dump(2) + "\n";
}

}  // namespace sgq
