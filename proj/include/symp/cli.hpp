#pragma once

#include <cstdint>
#include <string>

#include "json.hpp"
#include "symp/types.hpp"

namespace symp {

// command: cz, rs, rs2, maslov, rho, normal-form, ext.
// Path commands take {"n", "path"}; rho, normal-form and ext take {"matrix": rows} or a bare
// list of rows.
struct JobRequest {
  std::string command;
  std::string input_text;
  Tolerances tol;
  std::uint64_t seed = 0;
};

struct JobReport {
  int exit_code = 0;   // 0 ok, 1 parse error, 2 contract error
  std::string json;    // one line, sorted keys
  std::string trace;   // CSV, empty when the command has none
};

JobReport run_job(const JobRequest& req);

}  // namespace symp
