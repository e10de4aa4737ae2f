#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace isoperim {

enum class Status {
  pass,
  fail,
  inconclusive,
  // Holds only if an upstream certification holds, and that one was skipped
  // or failed.
  contingent,
  // Result cited from prior work; backed here by a non-rigorous scan only.
  cited,
};

const char* to_string(Status s);

struct ReportItem {
  std::string id;
  Status status = Status::fail;
  std::string detail;
  std::optional<double> margin{};
  int depth = 0;
  int precision = 0;
  double seconds = 0.0;
  bool optional = false;
};

struct Report {
  std::string suite;
  std::vector<ReportItem> items;
  std::vector<std::pair<std::string, std::string>> fingerprint;

  bool passed() const;
  ReportItem& add(ReportItem item);
  void merge(const Report& other);
  const ReportItem* find(const std::string& id) const;
};

// One line per item plus a header and an overall verdict. Timings are shown
// but nothing else depends on them.
std::string render_text(const Report& report);
// Structured form (JSON) written by `--report-out`.
std::string render_structured(const Report& report);

}  // namespace isoperim
