#include "isoperim/report.hpp"

#include <cstdio>
#include <sstream>

#include "json.hpp"

namespace isoperim {

const char* to_string(Status s) {
  switch (s) {
    case Status::pass: return "PASS";
    case Status::fail: return "FAIL";
    case Status::inconclusive: return "INCONCLUSIVE";
    case Status::contingent: return "CONTINGENT";
    case Status::cited: return "CITED";
  }
  return "?";
}

bool Report::passed() const {
  for (const auto& item : items) {
    if (item.optional) continue;
    if (item.status != Status::pass && item.status != Status::cited) return false;
  }
  return true;
}

ReportItem& Report::add(ReportItem item) {
  items.push_back(std::move(item));
  return items.back();
}

void Report::merge(const Report& other) {
  for (const auto& item : other.items) items.push_back(item);
}

const ReportItem* Report::find(const std::string& id) const {
  for (const auto& item : items) {
    if (item.id == id) return &item;
  }
  return nullptr;
}

std::string render_text(const Report& report) {
  std::ostringstream out;
  out << "== " << report.suite << " ==\n";
  for (const auto& [key, value] : report.fingerprint) out << "  " << key << " = " << value << "\n";
  for (const auto& item : report.items) {
    char line[160];
    std::snprintf(line, sizeof line, "%-13s %-34s", to_string(item.status), item.id.c_str());
    out << line;
    if (item.margin) {
      std::snprintf(line, sizeof line, " margin=%.6g", *item.margin + 0.0);  // + 0.0 turns -0 into 0
      out << line;
    }
    if (item.depth > 0) out << " depth=" << item.depth;
    if (item.precision > 0) out << " prec=" << item.precision;
    if (item.seconds > 0) {
      std::snprintf(line, sizeof line, " time=%.2fs", item.seconds);
      out << line;
    }
    if (item.optional) out << " (optional)";
    if (!item.detail.empty()) out << "  " << item.detail;
    out << "\n";
  }
  out << "overall: " << (report.passed() ? "PASS" : "FAIL") << "\n";
  return out.str();
}

std::string render_structured(const Report& report) {
  nlohmann::ordered_json doc;
  doc["suite"] = report.suite;
  nlohmann::ordered_json fp = nlohmann::ordered_json::object();
  for (const auto& [key, value] : report.fingerprint) fp[key] = value;
  doc["fingerprint"] = fp;
  doc["items"] = nlohmann::ordered_json::array();
  for (const auto& item : report.items) {
    nlohmann::ordered_json j;
    j["id"] = item.id;
    j["status"] = to_string(item.status);
    if (item.margin) j["margin"] = *item.margin;
    j["depth"] = item.depth;
    j["precision"] = item.precision;
    j["seconds"] = item.seconds;
    j["optional"] = item.optional;
    j["detail"] = item.detail;
    doc["items"].push_back(std::move(j));
  }
  doc["overall"] = report.passed() ? "PASS" : "FAIL";
  return doc.dump(2) + "\n";
}

}  // namespace isoperim
