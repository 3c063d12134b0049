#ifndef MORPHSIM_REPORT_HPP_
#define MORPHSIM_REPORT_HPP_

#include <string>
#include <vector>

#include <json.hpp>

namespace morphsim {

enum class ReportFormat { text, json };

// Everything a command run produces, in a machine-readable shape.  The JSON
// form round-trips: parse(format_report(r, json)) == r.
struct Report {
  std::string command;
  nlohmann::json inputs = nlohmann::json::object();
  nlohmann::json verdict = nlohmann::json::object();
  nlohmann::json counterexample;  // null or a trace array
  nlohmann::json stats = nlohmann::json::object();
  std::string error;
  int exit_code = 0;

  bool operator==(const Report&) const = default;
};

std::string format_report(const Report& r, ReportFormat fmt);
Report parse_report_json(const std::string& text);

struct CommandResult {
  int exit_code = 0;
  Report report;
  std::string output;  // what the CLI prints (report or LTS dump)
};

// Exit codes: 0 property holds / success, 1 property fails (counterexample
// in the report), 2 usage or parse error, 3 resource limit.
CommandResult run_command(const std::vector<std::string>& args);

}  // namespace morphsim

#endif  // MORPHSIM_REPORT_HPP_
