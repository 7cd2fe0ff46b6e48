#include <cstdlib>
#include <iostream>

#include <CLI11.hpp>

#include "report.hpp"

using namespace imcoalg;
using namespace imcoalg::cli;

namespace {

struct Options {
  bool json_out = false;
  std::string output;
  bool timing = false;
  bool close_valuations = false;
  std::size_t max_stage = 5000;
  std::size_t max_depth = 4;
};

struct Loaded {
  FrameFile frame;
  std::string bytes;
};

Loaded load(const std::string& path, const Options& o) {
  std::string text = read_file(path);
  try {
    return {parse_frame_file(text, {o.close_valuations}), text};
  } catch (const SourceError& e) {
    throw SourceError(e.kind(), path + ": " + e.what(), e.line(), e.column(), e.offset());
  }
}

bool is_cap(ErrorKind k) {
  return k == ErrorKind::StageTooLarge || k == ErrorKind::EnumerationTooLarge || k == ErrorKind::TooManyGenerators;
}

void check_depth(std::size_t depth, const Options& o) {
  if (depth < 1) throw Error(ErrorKind::InvalidArgument, "--depth must be at least 1");
  if (depth > o.max_depth)
    throw Error(ErrorKind::StageTooLarge,
                "depth " + std::to_string(depth) + " exceeds --max-depth " + std::to_string(o.max_depth));
}

int emit(Report r, const std::string& digest_input, const Options& o) {
  r.digest = fnv1a(digest_input);
  if (!o.output.empty()) write_file(o.output, r.to_json().dump(2) + "\n");
  if (o.json_out)
    std::cout << r.to_json().dump(2) << "\n";
  else
    std::cout << r.to_text();
  return r.passed() ? ExitCode::pass : ExitCode::check_failure;
}

}  // namespace

int main(int argc, char** argv) {
  Options o;
  if (const char* env = std::getenv("IMCOALG_MAX_STAGE")) {
    try {
      o.max_stage = std::stoul(env);
    } catch (const std::exception&) {
      std::cerr << "error: IMCOALG_MAX_STAGE is not a number\n";
      return ExitCode::usage_error;
    }
  }

  CLI::App app{"Finite models of intuitionistic modal logic as coalgebras."};
  app.require_subcommand(1);
  app.add_flag("--json", o.json_out, "Print the report as JSON");
  app.add_option("-o,--output", o.output, "Also write the JSON report to this file");
  app.add_flag("--timing", o.timing, "Record wall-clock time in the report");
  app.add_flag("--close-valuations", o.close_valuations, "Close non-persistent valuations upward instead of rejecting");
  app.add_option("--max-stage", o.max_stage, "Largest stage built (env IMCOALG_MAX_STAGE)")->capture_default_str();
  app.add_option("--max-depth", o.max_depth, "Deepest complex built")->capture_default_str();

  std::string file, file2, formula, dot_out, json_out;
  std::size_t depth = 2, generators = 1, stages = 1, inner_depth = 1;
  std::size_t distinguish = 0;

  auto* check = app.add_subcommand("check", "Order axioms, mix law, valuation persistence");
  check->add_option("file", file)->required();

  auto* mc = app.add_subcommand("mc", "Truth set of a formula");
  mc->add_option("file", file)->required();
  mc->add_option("formula", formula)->required();

  auto* bisim = app.add_subcommand("bisim", "Largest bisimulation between two frames");
  bisim->add_option("left", file)->required();
  bisim->add_option("right", file2)->required();
  bisim->add_option("--depth", depth, "Depth of the coalgebraic check")->capture_default_str();
  auto* dist = bisim->add_option("--distinguish", distinguish, "Find formulas up to this depth separating unrelated points");

  auto* complex = app.add_subcommand("complex", "Terminal complex over the upsets of the frame's poset");
  complex->add_option("file", file)->required();
  complex->add_option("--depth", depth)->capture_default_str();
  complex->add_option("--dot", dot_out, "Write the stages as DOT");

  auto* lift = app.add_subcommand("lift", "Lift x -> R[x] into the terminal complex");
  lift->add_option("file", file)->required();
  lift->add_option("--depth", depth)->capture_default_str();

  auto* freealg = app.add_subcommand("freealg", "Stages M_0..M_n over the generator poset");
  freealg->add_option("--generators", generators)->capture_default_str();
  freealg->add_option("--stages", stages)->capture_default_str();
  freealg->add_option("--inner-depth", inner_depth)->capture_default_str();
  freealg->add_option("--dot", dot_out, "Write the stages as DOT");

  auto* exp = app.add_subcommand("export", "Write a frame as DOT or JSON");
  exp->add_option("file", file)->required();
  auto* exp_dot = exp->add_option("--dot", dot_out, "DOT output file");
  auto* exp_json = exp->add_option("--json", json_out, "JSON output file");
  exp_dot->excludes(exp_json);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? ExitCode::pass : ExitCode::usage_error;
  }

  ComplexLimits limits;
  limits.max_stage = o.max_stage;
  limits.max_depth = o.max_depth;
  const std::string flags = "close=" + std::to_string(o.close_valuations) + ";stage=" + std::to_string(o.max_stage) +
                            ";depth=" + std::to_string(o.max_depth) + ";";
  const auto start = std::chrono::steady_clock::now();
  auto timed = [&](Report r) {
    if (o.timing)
      r.millis = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    return r;
  };

  try {
    if (check->parsed()) {
      Loaded f = load(file, o);
      return emit(timed(cmd_check(f.frame)), "check;" + flags + f.bytes, o);
    }
    if (mc->parsed()) {
      Loaded f = load(file, o);
      return emit(timed(cmd_mc(f.frame, formula)), "mc;" + flags + formula + ";" + f.bytes, o);
    }
    if (bisim->parsed()) {
      check_depth(depth, o);
      Loaded a = load(file, o), b = load(file2, o);
      std::optional<std::size_t> d;
      if (dist->count()) d = distinguish;
      return emit(timed(cmd_bisim(a.frame, b.frame, depth, d, limits)),
                  "bisim;" + flags + std::to_string(depth) + ";" + std::to_string(distinguish) + ";" + a.bytes + ";" + b.bytes, o);
    }
    if (complex->parsed()) {
      check_depth(depth, o);
      Loaded f = load(file, o);
      std::string dot;
      Report r = cmd_complex(f.frame, depth, limits, &dot);
      if (!dot_out.empty()) write_file(dot_out, dot);
      return emit(timed(std::move(r)), "complex;" + flags + std::to_string(depth) + ";" + f.bytes, o);
    }
    if (lift->parsed()) {
      check_depth(depth, o);
      Loaded f = load(file, o);
      return emit(timed(cmd_lift(f.frame, depth, limits)), "lift;" + flags + std::to_string(depth) + ";" + f.bytes, o);
    }
    if (freealg->parsed()) {
      check_depth(inner_depth, o);
      std::string dot;
      Report r = cmd_freealg(generators, stages, inner_depth, limits, &dot);
      if (!dot_out.empty()) write_file(dot_out, dot);
      return emit(timed(std::move(r)),
                  "freealg;" + flags + std::to_string(generators) + ";" + std::to_string(stages) + ";" +
                      std::to_string(inner_depth),
                  o);
    }
    if (exp->parsed()) {
      Loaded f = load(file, o);
      if (dot_out.empty() && json_out.empty()) throw Error(ErrorKind::InvalidArgument, "export needs --dot or --json");
      if (!dot_out.empty()) write_file(dot_out, to_dot(f.frame.frame));
      if (!json_out.empty()) write_file(json_out, export_json(f.frame).dump(2) + "\n");
      return ExitCode::pass;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return is_cap(e.kind()) ? ExitCode::cap_exceeded : ExitCode::usage_error;
  }
  return ExitCode::usage_error;
}
