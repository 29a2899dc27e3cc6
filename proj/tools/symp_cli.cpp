#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "symp/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Symplectic path indices"};
  symp::JobRequest req;
  std::string input, trace_path;
  app.add_option("--input", input, "JSON input file")->required();
  app.add_option("--command", req.command, "cz, rs, rs2, maslov, rho, normal-form, ext")
      ->required();
  app.add_option("--tol-eig", req.tol.tol_eig);
  app.add_option("--tol-kernel", req.tol.tol_kernel);
  app.add_option("--tol-form", req.tol.tol_form);
  app.add_option("--seed", req.seed);
  app.add_option("--max-refine", req.tol.max_refine);
  app.add_option("--trace", trace_path, "CSV trace output");
  CLI11_PARSE(app, argc, argv);

  std::ifstream in(input);
  if (!in) {
    std::cout << R"({"error":{"kind":"parse","message":"cannot read input file"}})" << '\n';
    return 1;
  }
  std::stringstream buf;
  buf << in.rdbuf();
  req.input_text = buf.str();

  const symp::JobReport rep = symp::run_job(req);
  std::cout << rep.json << '\n';
  if (rep.exit_code == 0 && !trace_path.empty()) {
    if (rep.trace.empty()) {
      std::cerr << "no trace for command " << req.command << '\n';
    } else {
      std::ofstream(trace_path) << rep.trace;
    }
  }
  return rep.exit_code;
}
