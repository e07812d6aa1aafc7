#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "lich/cli.hpp"

namespace lich::cli {
namespace {

using nlohmann::json;

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

// Numbers keep the shortest round-trip form used by the JSON report.
std::string cell(const json& v) {
  if (v.is_null()) return "";
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

struct Row {
  std::string section, name, value, tolerance, status, reference;
};

void emit(std::ostringstream& os, const Row& r) {
  os << csv_field(r.section) << ',' << csv_field(r.name) << ',' << csv_field(r.value) << ','
     << csv_field(r.tolerance) << ',' << csv_field(r.status) << ',' << csv_field(r.reference) << '\n';
}

std::vector<Row> rows(const json& report) {
  std::vector<Row> out;
  if (const json& c = report.value("curvature", json()); c.is_object()) {
    for (const char* key : {"scalar", "sectional_min", "sectional_max", "a0"})
      out.push_back({"curvature", key, cell(c.at(key)), "", "computed", c.at("space").get<std::string>()});
    if (c.contains("quadratic_form")) {
      const json& q = c["quadratic_form"];
      const std::string tag = "p=" + cell(q["p"]) + " class=" + cell(q["class"]);
      out.push_back({"curvature", "quadratic_form_min " + tag, cell(q["range_min"]), "", cell(q["sign"]), "exact range"});
      out.push_back({"curvature", "quadratic_form_max " + tag, cell(q["range_max"]), "", cell(q["sign"]), "exact range"});
    }
  }
  if (const json& s = report.value("spectrum", json()); s.is_object()) {
    out.push_back({"spectrum", "kernel_dim", cell(s["kernel_dim"]), cell(s["kernel_tol"]), "computed",
                   cell(s["kernel_tol_rule"])});
    const json& ev = s["eigenvalues"];
    const json& res = s["residuals"];
    const double tol = s["residual_tolerance"].get<double>();
    for (std::size_t i = 0; i < ev.size(); ++i) {
      const bool ok = res[i].is_number() && res[i].get<double>() <= tol;
      out.push_back({"spectrum", "eigenvalue_" + std::to_string(i), cell(ev[i]), cell(s["residual_tolerance"]),
                     ok ? "converged" : "unconverged", "residual=" + cell(res[i])});
    }
  }
  for (const json& v : report.value("verdicts", json::array())) {
    const json& a = v["applies_to"];
    out.push_back({"verdicts",
                   cell(v["family"]) + " p=" + cell(a["p"]) + " class=" + cell(a["class"]) + " c=" + cell(a["c"]),
                   cell(v["predicted_kernel"]), "", v["rule_label"].get<std::string>().empty() ? "no rule" : "fired",
                   cell(v["rule_label"]) + (v["rule_fired"].get<std::string>().empty() ? "" : ": " + cell(v["rule_fired"]))});
  }
  for (const json& id : report.value("identities", json::array()))
    out.push_back({"identities", cell(id["name"]), cell(id["value"]), cell(id["comparison"]) + " " + cell(id["tolerance"]),
                   id["pass"].get<bool>() ? "PASS" : "FAIL", cell(id["checks"])});
  if (report.contains("error"))
    out.push_back({"error", cell(report["error"]["kind"]), "", "", "ERROR", cell(report["error"]["message"])});
  return out;
}

}  // namespace

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string csv_path(const std::string& report_path) {
  return std::filesystem::path(report_path).replace_extension(".csv").string();
}

std::string summary_csv(const json& report) {
  std::ostringstream os;
  emit(os, {"section", "name", "value", "tolerance", "status", "reference"});
  for (const Row& r : rows(report)) emit(os, r);
  return os.str();
}

std::string summary_text(const json& report) {
  std::ostringstream os;
  const json& cfg = report["config"];
  os << "lich " << cell(cfg["task"]) << " on " << cell(cfg["space"]) << "\n";
  for (const Row& r : rows(report)) {
    os << "  [" << r.section << "] " << r.name << " = " << r.value;
    if (!r.tolerance.empty()) os << " (tol " << r.tolerance << ")";
    if (!r.status.empty()) os << " " << r.status;
    os << "\n";
  }
  os << "exit status " << cell(report["status"]["exit_code"]) << "\n";
  return os.str();
}

void write_report(const json& report, const std::string& path) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream json_out(path);
  if (!json_out) throw std::runtime_error("cannot write report '" + path + "'");
  json_out << report.dump(2) << "\n";
  const std::string csv = csv_path(path);
  std::ofstream csv_out(csv);
  if (!csv_out) throw std::runtime_error("cannot write summary '" + csv + "'");
  csv_out << summary_csv(report);
}

}  // namespace lich::cli
