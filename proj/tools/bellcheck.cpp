#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bell/cli.hpp"
#include "bell/errors.hpp"
#include "bell/version.hpp"

namespace {

void write_output(const bell::cli::RunReport& report, const std::string& out_format,
                  const std::string& out_file) {
  std::string text =
      out_format == "csv" ? report.to_csv() : report.to_json().dump(2) + "\n";
  if (out_file.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(out_file);
    if (!out) throw bell::invalid_input_error("cannot write file: " + out_file);
    out << text;
  }
}

std::vector<int> parse_k_tuple(const std::string& spec) {
  std::vector<int> k;
  std::string token;
  for (char c : spec) {
    if (c == ',') {
      if (!token.empty()) k.push_back(std::stoi(token));
      token.clear();
    } else {
      token += c;
    }
  }
  if (!token.empty()) k.push_back(std::stoi(token));
  return k;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical and symbolic checks of Mermin-Klyshko Bell bounds"};
  app.set_version_flag("--version", bell::kVersion);
  app.require_subcommand(1);

  std::string out_format = "json";
  std::string out_file;
  app.add_option("--out", out_format, "Output format")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--out-file", out_file, "Write the report to a file instead of stdout");

  int n = 2;
  int n_max = 4;
  std::uint64_t seed = 1;
  std::uint64_t trials = 100000;
  std::string settings_file, state_file, model_file, mode = "quantum";
  std::string expr, k_spec = "0", model_out;
  bool square = false, counterpart = false;

  CLI::App* bounds = app.add_subcommand(
      "bounds", "Exact LHV bound, quantum norm, GHZ value and spectrum residuals");
  bounds->add_option("--n", n, "Number of parties")->required();
  bounds->add_option("--seed", seed, "Random seed");
  bounds->add_option("--settings", settings_file, "Settings JSON file");

  CLI::App* gap = app.add_subcommand(
      "chen-gap", "Separable maximum of V_n against the claimed LHV bound 2");
  gap->add_option("--n-max", n_max, "Largest party count (2..6)")->required();
  gap->add_option("--seed", seed, "Random seed");

  CLI::App* synth = app.add_subcommand(
      "synthesize", "Build the LHV model reproducing a separable state's correlations");
  synth->add_option("--state", state_file, "Separable state JSON file")->required();
  synth->add_option("--settings", settings_file, "Settings JSON file")->required();
  synth->add_option("--model-out", model_out, "Also write the LHV model to this file");

  CLI::App* expand = app.add_subcommand(
      "expand", "Canonicalize a polynomial under classical or quantum rewriting");
  expand->add_option("expr", expr, "Polynomial text, e.g. \"1/2 A B + 1/2 A B'\"")->required();
  expand->add_option("--mode", mode, "Rewrite mode")
      ->check(CLI::IsMember({"classical", "quantum"}));
  expand->add_option("--n", n, "Party count (default: inferred)");
  expand->add_flag("--square", square, "Square the polynomial before canonicalizing");
  expand->add_flag("--counterpart", counterpart,
                   "Also emit the classical counterpart and its maximum (quantum mode)");

  CLI::App* sample = app.add_subcommand(
      "sample", "Monte Carlo estimate of one correlation of an LHV model");
  sample->add_option("--model", model_file, "LHV model JSON file")->required();
  sample->add_option("--k", k_spec, "Setting tuple, e.g. 0,1,0");
  sample->add_option("--trials", trials, "Number of outcome draws");
  sample->add_option("--seed", seed, "Random seed");

  for (CLI::App* sub : app.get_subcommands({})) sub->fallthrough();

  CLI11_PARSE(app, argc, argv);

  try {
    bell::cli::RunReport report;
    if (bounds->parsed()) {
      std::optional<std::string> sf;
      if (!settings_file.empty()) sf = settings_file;
      report = bell::cli::cmd_bounds(n, sf, seed);
    } else if (gap->parsed()) {
      report = bell::cli::cmd_chen_gap(n_max, seed);
    } else if (synth->parsed()) {
      std::optional<std::string> mo;
      if (!model_out.empty()) mo = model_out;
      report = bell::cli::cmd_synthesize(state_file, settings_file, mo);
    } else if (expand->parsed()) {
      const int n_arg = expand->count("--n") ? n : -1;
      report = bell::cli::cmd_expand(expr, mode, n_arg, square, counterpart);
    } else if (sample->parsed()) {
      report = bell::cli::cmd_sample(model_file, parse_k_tuple(k_spec), trials, seed);
    }
    write_output(report, out_format, out_file);
    return report.claim_failed ? 1 : 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
