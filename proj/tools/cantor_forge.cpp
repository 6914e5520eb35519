// cantor-forge: command-line front end for job documents.

#include "cantor/job.hpp"

#include "CLI11.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

int main(int argc, char** argv) {
  CLI::App app{"Attractors of second-generation IFS and sums of Cantor sets"};
  app.set_version_flag("--version", "cantor-forge 0.1.0");

  std::string command;
  std::string spec_path;
  std::string out_dir = ".";
  cantor::job::Overrides o;
  std::string alpha, mode;
  std::size_t depth = 0;
  double tol = 0;

  std::vector<std::string> commands(std::begin(cantor::job::kCommands), std::end(cantor::job::kCommands));
  app.add_option("command", command, "What to compute")->required()->check(CLI::IsMember(commands));
  app.add_option("--spec", spec_path, "Job document (JSON)")->required();
  app.add_option("--out", out_dir, "Output directory")->capture_default_str();
  auto* a_opt = app.add_option("--alpha", alpha, "Contraction ratio, e.g. 9/20");
  auto* d_opt = app.add_option("--depth", depth, "Cover depth")->check(CLI::Range(1, 24));
  auto* t_opt = app.add_option("--tol", tol, "Tolerance")->check(CLI::PositiveNumber);
  auto* m_opt = app.add_option("--mode", mode, "empirical or certified")
                    ->check(CLI::IsMember({"empirical", "certified"}));
  app.add_flag("--svg", o.svg, "Also write plot.svg");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  o.command = command;
  if (*a_opt) o.alpha = alpha;
  if (*d_opt) o.depth = depth;
  if (*t_opt) o.tol = tol;
  if (*m_opt) o.mode = mode;

  std::ifstream in(spec_path, std::ios::binary);
  if (!in) {
    std::cerr << "error: cannot read " << spec_path << "\n";
    return 2;
  }
  std::stringstream buf;
  buf << in.rdbuf();
  return cantor::job::run_document(buf.str(), o, out_dir, std::cout, std::cerr);
}
