#include "json.hpp"
#include <ostream>
#include <sstream>

#include "packfem/bench.hpp"

namespace packfem {

namespace {

using Json = nlohmann::ordered_json;

Json to_json(const ProfileReport& r) {
  Json j;
  j["config"] = Json::object();
  for (const auto& [k, v] : r.config) j["config"][k] = v;
  j["environment"] = Json::object();
  for (const auto& [k, v] : r.environment) j["environment"][k] = v;

  j["categories"] = Json::object();
  for (std::size_t c = 0; c < kAllCategories.size(); ++c) {
    const auto& row = r.categories[c];
    Json cj;
    cj["time_us"] = row.time_us;
    cj["percent"] = row.percent;
    for (std::size_t e = 0; e < kAllEquations.size(); ++e) cj["equations"][equation_name(kAllEquations[e])] = row.equation_percent[e];
    j["categories"][category_name(kAllCategories[c])] = cj;
  }
  j["equations"] = Json::object();
  for (std::size_t e = 0; e < kAllEquations.size(); ++e) j["equations"][equation_name(kAllEquations[e])] = r.equations[e];

  j["kernels"] = Json::object();
  for (const auto& [name, t] : r.kernels)
    j["kernels"][name] = {{"median_us", t.median_us}, {"mean_us", t.mean_us}, {"min_us", t.min_us}, {"reps", t.reps}};
  j["checksums"] = Json::object();
  for (const auto& [name, v] : r.checksums) j["checksums"][name] = v;
  if (r.solver) {
    j["solver"] = {{"iterations", r.solver->iterations},
                   {"converged", r.solver->converged},
                   {"true_residual", r.solver->true_residual},
                   {"residuals", r.solver->residual_history}};
  }
  j["steps"] = Json::array();
  for (const auto& s : r.steps)
    j["steps"].push_back({{"time_us", s.time_us},
                          {"iterations", s.iterations},
                          {"constraint_before", s.constraint_before},
                          {"constraint_after", s.constraint_after}});
  return j;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
  return out + "\"";
}

// Flattens the JSON tree: (section, key, field, value), one row per leaf.
void emit_csv(const Json& j, std::ostream& out) {
  out << "section,key,field,value\n";
  auto leaf = [](const Json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); };
  for (const auto& [section, body] : j.items()) {
    if (body.is_object()) {
      for (const auto& [key, val] : body.items()) {
        if (val.is_object()) {
          for (const auto& [field, x] : val.items()) {
            if (x.is_object())
              for (const auto& [sub, y] : x.items())
                out << section << ',' << csv_field(key) << ',' << csv_field(field + "." + sub) << ',' << csv_field(leaf(y)) << '\n';
            else
              out << section << ',' << csv_field(key) << ',' << csv_field(field) << ',' << csv_field(leaf(x)) << '\n';
          }
        } else if (val.is_array()) {
          for (std::size_t i = 0; i < val.size(); ++i)
            out << section << ',' << csv_field(key) << ',' << i << ',' << csv_field(leaf(val[i])) << '\n';
        } else {
          out << section << ',' << csv_field(key) << ",," << csv_field(leaf(val)) << '\n';
        }
      }
    } else if (body.is_array()) {
      for (std::size_t i = 0; i < body.size(); ++i)
        for (const auto& [field, x] : body[i].items())
          out << section << ',' << i << ',' << csv_field(field) << ',' << csv_field(leaf(x)) << '\n';
    }
  }
}

}  // namespace

ReportFormat report_format_from_name(const std::string& name) {
  if (name == "json") return ReportFormat::Json;
  if (name == "csv") return ReportFormat::Csv;
  throw ConfigError("unknown output format '" + name + "'");
}

void emit_report(const ProfileReport& report, ReportFormat format, std::ostream& out) {
  const Json j = to_json(report);
  if (format == ReportFormat::Json)
    out << j.dump(2) << '\n';
  else
    emit_csv(j, out);
}

std::string emit_report(const ProfileReport& report, ReportFormat format) {
  std::ostringstream os;
  emit_report(report, format, os);
  return os.str();
}

}  // namespace packfem
