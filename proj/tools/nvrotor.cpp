// Command-line front end: sweep, converge and figure subcommands.

#include <exception>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "nvrotor/runner.hpp"

namespace {

using namespace nvrotor;

std::optional<Frame> parse_frame(const std::string& s) {
  if (s == "body") return Frame::Body;
  if (s == "space") return Frame::Space;
  return std::nullopt;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Eigenstates and spin-rotation entanglement of a levitated NV nanodiamond"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = ".";
  std::optional<int> jmax;
  std::string frame;
  std::optional<unsigned> threads;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "YAML configuration file")->check(CLI::ExistingFile);
    sub->add_option("--out", out_dir, "Output directory");
    sub->add_option("--jmax", jmax, "Angular-momentum cutoff (Jmax or Lmax)")
        ->check(CLI::PositiveNumber);
    sub->add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);
  };

  CLI::App* sweep = app.add_subcommand("sweep", "Level/entanglement sweep over B and T");
  add_common(sweep);
  sweep->add_option("--frame", frame, "Frame: body or space")
      ->check(CLI::IsMember({"body", "space"}));

  CLI::App* converge = app.add_subcommand("converge", "Cutoff convergence report");
  add_common(converge);

  std::string tag;
  CLI::App* figure = app.add_subcommand("figure", "Write a canned figure dataset");
  add_common(figure);
  figure->add_option("tag", tag, "Figure tag: 3a 3b 3c 4a 4b 4c 5")->required();
  double distribution_field = 1.0;
  figure->add_option("--field", distribution_field, "Field for tag 3c, tesla")
      ->check(CLI::NonNegativeNumber);

  CLI11_PARSE(app, argc, argv);

  try {
    runner::RunConfig cfg;
    if (!config_path.empty()) {
      cfg = runner::load_config(config_path);
    } else {
      cfg = runner::parse_config("", "<defaults>");
    }
    if (threads) {
      cfg.sweep.threads = *threads;
      cfg.convergence.threads = *threads;
    }
    if (*sweep) {
      if (jmax) cfg.sweep.cutoff = *jmax;
      if (!frame.empty()) cfg.sweep.frame = *parse_frame(frame);
      const auto path = runner::run_sweep(cfg.sweep, out_dir);
      std::cout << path.string() << '\n';
    } else if (*converge) {
      if (jmax) cfg.convergence.base_cutoff = *jmax;
      for (const auto& path : runner::convergence_report(cfg.convergence, out_dir))
        std::cout << path.string() << '\n';
    } else {
      runner::FigureOptions opts;
      opts.cutoff = jmax;
      opts.threads = cfg.sweep.threads;
      opts.params = cfg.sweep.params;
      opts.distribution_field = distribution_field;
      std::cout << runner::reproduce_figure(tag, out_dir, opts).string() << '\n';
    }
  } catch (const std::exception& e) {
    std::cerr << "nvrotor: error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
