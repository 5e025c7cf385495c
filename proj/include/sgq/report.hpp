#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sgq/complexes.hpp"

namespace sgq {

enum class Verdict { PASS, FAIL, INCONCLUSIVE };

std::string to_string(Verdict v);

struct CheckReport {
  std::string scenario;
  Verdict verdict = Verdict::FAIL;
  std::string statement;
  std::string witness;
  Window window;
  bool windowed = true;
  long long millis = 0;

  std::string text_line() const;
};

struct Summary {
  int pass = 0;
  int fail = 0;
  int inconclusive = 0;
};

Summary summarize(const std::vector<CheckReport>& reports);
std::string reports_to_text(const std::vector<CheckReport>& reports);
// With wall_millis set, the summary object carries the total wall time.
std::string reports_to_json(const std::vector<CheckReport>& reports,
                            std::optional<long long> wall_millis = {});

}  // namespace sgq
