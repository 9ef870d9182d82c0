// gradbench: vanilla vs smart finite-difference gradient experiments.

#include "smartgrad/smartgrad.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

namespace {

namespace sb = smartgrad::bench;

constexpr int exit_invalid = 2;

// Writes to path, or to stdout when path is empty.
template <typename Write>
void emit(const std::string& path, Write&& write) {
  if (path.empty()) {
    write(std::cout);
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw smartgrad::precondition_error("cannot open '" + path + "' for writing");
  write(out);
}

smartgrad::Vector parse_point(const std::string& text) {
  std::vector<double> values;
  std::stringstream ss(text);
  for (std::string tok; std::getline(ss, tok, ',');) {
    std::size_t used = 0;
    const double v = std::stod(tok, &used);
    if (used != tok.size()) throw smartgrad::precondition_error("bad coordinate '" + tok + "'");
    values.push_back(v);
  }
  if (values.size() != 2) throw smartgrad::precondition_error("--x0 expects two comma-separated values");
  return Eigen::Map<smartgrad::Vector>(values.data(), 2);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite-difference gradient accuracy benchmarks (vanilla vs smart basis)"};
  app.require_subcommand(1);

  std::string function;
  int dim = 0;
  int reps = 100;
  std::uint64_t seed = 0;
  double step = smartgrad::FdScheme::default_step;
  std::string scheme_name = "central1";
  std::string out_path;

  auto* bench = app.add_subcommand("bench", "Compare vanilla and smart gradients along BFGS runs (CSV)");
  bench->add_option("--function", function, "Test function")->required();
  bench->add_option("--dim", dim, "Dimension")->required();
  bench->add_option("--reps", reps, "Repetitions")->capture_default_str();
  bench->add_option("--seed", seed, "Random seed")->capture_default_str();
  bench->add_option("--step", step, "Finite-difference step")->capture_default_str();
  bench->add_option("--scheme", scheme_name, "central1 | central4 | forward1")
      ->check(CLI::IsMember({"central1", "central4", "forward1"}))
      ->capture_default_str();
  bench->add_option("--out", out_path, "Output CSV (default stdout)");

  std::string x0_text = "-0.29,0.40";
  double angle_step = std::numbers::pi / 1000.0;
  auto* rotate = app.add_subcommand("rotate", "Gradient error of 2-D Rosenbrock over rotated bases (CSV)");
  rotate->add_option("--x0", x0_text, "Point as a,b")->capture_default_str();
  rotate->add_option("--angle-step", angle_step, "Rotation increment in radians")->capture_default_str();
  rotate->add_option("--step", step, "Finite-difference step")->capture_default_str();
  rotate->add_option("--out", out_path, "Output CSV (default stdout)");

  auto* hessian = app.add_subcommand("hessian", "Smart Hessian at the mode found by smart-gradient BFGS");
  hessian->add_option("--function", function, "Test function")->required();
  hessian->add_option("--dim", dim, "Dimension")->required();
  hessian->add_option("--seed", seed, "Random seed")->capture_default_str();

  std::string in_path;
  auto* summarize = app.add_subcommand("summarize", "Average MSE per method and improvement ratio");
  summarize->add_option("--in", in_path, "Bench CSV")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return exit_invalid;
  }

  try {
    if (*bench) {
      const auto scheme = smartgrad::FdScheme::parse(scheme_name, step);
      const auto records = sb::run_comparison(function, dim, reps, seed, scheme);
      emit(out_path, [&](std::ostream& os) { sb::write_csv(os, records); });
    } else if (*rotate) {
      const auto records = sb::run_rotation_scan(parse_point(x0_text), angle_step, smartgrad::FdScheme::central1(step));
      emit(out_path, [&](std::ostream& os) { sb::write_rotate_csv(os, records); });
    } else if (*hessian) {
      const auto demo = sb::run_hessian_demo(function, dim, seed);
      sb::print_hessian_demo(std::cout, function, demo);
    } else if (*summarize) {
      std::ifstream in(in_path, std::ios::binary);
      if (!in) throw smartgrad::precondition_error("cannot open '" + in_path + "'");
      const auto cells = sb::summarize_by_cell(sb::read_csv(in));
      if (cells.empty()) throw smartgrad::precondition_error("no records in '" + in_path + "'");
      std::cout << std::left << std::setw(22) << "function" << std::setw(6) << "dim" << std::setw(16)
                << "avg_mse_vanilla" << std::setw(16) << "avg_mse_smart" << "improvement\n";
      for (const auto& [key, s] : cells) {
        std::cout << std::left << std::setw(22) << key.first << std::setw(6) << key.second << std::scientific
                  << std::setprecision(3) << std::setw(16) << s.vanilla_mse << std::setw(16) << s.smart_mse
                  << std::fixed << std::setprecision(2) << s.improvement() << '\n';
        std::cout.unsetf(std::ios::floatfield);
      }
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_invalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
