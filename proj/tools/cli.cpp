#include "cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <future>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "dslice/dslice.hpp"

namespace dslice::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Program load_program(const std::string& path) {
  try {
    return parse_program(read_file(path));
  } catch (const SyntaxError& e) {
    throw Error(path + ":" + e.what());
  }
}

std::set<std::string> split_vars(const std::string& text) {
  std::set<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    if (!item.empty()) out.insert(item);
  }
  return out;
}

Abstraction parse_mode(const std::string& mode) {
  return mode == "assign" ? Abstraction::kAssign : Abstraction::kCond;
}

std::vector<Input> load_inputs(const std::string& path) {
  json doc;
  try {
    doc = json::parse(read_file(path));
  } catch (const json::parse_error& e) {
    throw Error(path + ": " + e.what());
  }
  if (!doc.is_array()) throw Error(path + ": expected a list of objects");
  std::vector<Input> inputs;
  for (const auto& item : doc) {
    if (!item.is_object()) throw Error(path + ": expected a list of objects");
    Input in;
    for (const auto& [name, value] : item.items()) {
      if (!value.is_number_integer()) {
        throw Error(path + ": value of '" + name + "' is not an integer");
      }
      in[name] = value.get<std::int64_t>();
    }
    inputs.push_back(std::move(in));
  }
  return inputs;
}

json label_array(const std::set<Label>& labels) {
  json a = json::array();
  for (Label l : labels) a.push_back(l.str());
  return a;
}

/// The program a criterion lives in: augmented at `at`, then inlined.
struct Prepared {
  Program program;
  SlicingCriterion criterion;
};

Prepared prepare(const Program& source, const std::string& at,
                 const std::set<std::string>& vars) {
  auto [augmented, c] = augment(source, InsertPoint::parse(at), vars);
  return {inline_calls(augmented), std::move(c)};
}

struct Globals {
  std::uint64_t seed = 0;
  bool weak_cd = false;
};

SliceResult compute_slice(const Pdg& pdg, const SlicingCriterion& c,
                          const std::string& kind, Abstraction mode,
                          const Globals& g) {
  SliceOptions so;
  so.weak_cd = g.weak_cd;
  if (kind == "backward") return backward_slice(pdg, c, so);
  if (kind == "control") return control_slice(pdg, c, so);
  return data_slice(pdg, c, mode);
}

// slice ---------------------------------------------------------------------

struct SliceArgs {
  std::string kind, mode = "cond", at, vars, file;
  bool labels_json = false;
};

int cmd_slice(const SliceArgs& a, const Globals& g, std::ostream& out) {
  Program source = load_program(a.file);
  Prepared p = prepare(source, a.at, split_vars(a.vars));
  Pdg pdg = build_pdg(build_cfg(p.program));
  resolve_vars(pdg.cfg(), p.criterion.vars);
  SliceResult s = compute_slice(pdg, p.criterion, a.kind, parse_mode(a.mode), g);
  out << emit(p.program, s.retained, s.abstractions());
  if (a.labels_json) {
    nlohmann::ordered_json j;
    j["retained"] = label_array(s.retained);
    j["abstract_conds"] = label_array(s.abstracted_conds);
    j["abstract_assigns"] = label_array(s.abstracted_assigns);
    out << j.dump() << "\n";
  }
  return 0;
}

// analyze -------------------------------------------------------------------

struct AnalyzeArgs {
  std::string file, at, vars;
  bool dump_cfg = false, dump_cd = false, dump_pdg = false, weak = false;
  std::vector<std::string> dump_du;
};

int cmd_analyze(const AnalyzeArgs& a, const Globals& g, std::ostream& out) {
  Program program = load_program(a.file);
  if (!a.at.empty()) {
    program = prepare(program, a.at, split_vars(a.vars)).program;
  } else {
    program = inline_calls(program);
  }
  Cfg cfg = build_cfg(program);
  if (a.dump_cfg) out << to_dot(cfg);
  if (!a.dump_du.empty()) {
    Label at;
    try {
      at = parse_label(a.dump_du[0]);
    } catch (const std::invalid_argument& e) {
      throw BadLocation(e.what());
    }
    std::set<std::string> vars = split_vars(a.dump_du[1]);
    resolve_vars(cfg, vars);
    for (const auto& d : du(cfg, reaching_definitions(cfg), at, vars)) {
      out << d.at << ":" << d.var << "\n";
    }
  }
  if (a.dump_cd || a.dump_pdg) {
    Pdg pdg = build_pdg(cfg);
    bool weak = a.weak || g.weak_cd;
    if (a.dump_cd) {
      for (const auto& e : pdg.ctrl_edges()) {
        bool strong = e.strength == CdStrength::kStrong;
        if (!strong && !weak) continue;
        out << cfg.label(e.cond) << ":" << (e.branch ? "true" : "false")
            << " -> " << cfg.label(e.dependent) << " ("
            << (strong ? "strong" : "weak") << ")\n";
      }
    }
    if (a.dump_pdg) out << to_dot(pdg);
  }
  return 0;
}

// verify --------------------------------------------------------------------

struct VerifyArgs {
  std::string kind, mode = "cond", at = "end", vars, inputs, slice, file;
  std::size_t budget = 10000;
  std::size_t branch_budget = 6;
};

int cmd_verify(const VerifyArgs& a, const Globals& g, std::ostream& out) {
  Program source = load_program(a.file);
  Prepared p = prepare(source, a.at, split_vars(a.vars));
  std::vector<Input> inputs = load_inputs(a.inputs);
  CheckOptions opts;
  opts.step_budget = a.budget;
  opts.branch_budget = a.branch_budget;

  Report report;
  if (!a.slice.empty()) {
    Program slice = load_program(a.slice);
    SlicingCriterion c = p.criterion;
    if (a.kind == "control") c.vars.clear();
    report = a.kind == "data" ? check_data(p.program, slice, c, inputs, opts)
                              : check_backward(p.program, slice, c, inputs, opts);
  } else {
    Pdg pdg = build_pdg(build_cfg(p.program));
    resolve_vars(pdg.cfg(), p.criterion.vars);
    SliceResult s =
        compute_slice(pdg, p.criterion, a.kind, parse_mode(a.mode), g);
    report = a.kind == "data" ? check_data(p.program, s, inputs, opts)
                              : check_backward(p.program, s, inputs, opts);
  }
  for (const auto& r : report.inputs) {
    if (r.verdict == Verdict::kPass) continue;
    out << "input " << r.input << ": " << to_string(r.verdict);
    if (!r.detail.empty()) out << ": " << r.detail;
    out << "\n";
  }
  out << report.summary() << "\n";
  return report.exit_code();
}

// stats ---------------------------------------------------------------------

struct StatsArgs {
  std::string dir, mode = "cond";
  std::size_t max_criteria = 10;
  int repeats = 3;
  bool no_timing = false;
  unsigned jobs = 0;
};

int cmd_stats(const StatsArgs& a, const Globals& g, std::ostream& out) {
  if (!fs::is_directory(a.dir)) throw Error("'" + a.dir + "' is not a directory");
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(a.dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".mini") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());

  StatsOptions opts;
  opts.seed = g.seed;
  opts.max_criteria = a.max_criteria;
  opts.mode = parse_mode(a.mode);
  opts.repeats = a.repeats;
  opts.timing = !a.no_timing;

  // Programs are independent; rows keep the sorted file order.
  unsigned jobs = a.jobs ? a.jobs : std::max(1u, std::thread::hardware_concurrency());
  std::vector<StatsRow> rows(files.size());
  std::vector<Program> programs;
  for (const auto& f : files) programs.push_back(load_program(f.string()));
  for (std::size_t begin = 0; begin < files.size(); begin += jobs) {
    std::vector<std::future<StatsRow>> batch;
    std::size_t end = std::min(files.size(), begin + jobs);
    for (std::size_t i = begin; i < end; ++i) {
      batch.push_back(std::async(std::launch::async, [&, i] {
        return compute_stats(files[i].stem().string(), programs[i], opts);
      }));
    }
    for (std::size_t i = begin; i < end; ++i) rows[i] = batch[i - begin].get();
  }
  out << to_csv(rows);
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Backward, control and data slicing for .mini programs",
               "dslice"};
  app.require_subcommand(1);
  Globals globals;
  app.add_option("--seed", globals.seed, "Seed for randomized choices");
  app.add_flag("--weak-cd", globals.weak_cd,
               "Follow weak control dependences in backward slices");

  const std::vector<std::string> kinds{"backward", "control", "data"};
  const std::vector<std::string> modes{"cond", "assign"};

  SliceArgs sa;
  auto* slice = app.add_subcommand("slice", "Print a slice of a program");
  slice->fallthrough();
  slice->add_option("--kind", sa.kind, "Slice kind")
      ->required()
      ->check(CLI::IsMember(kinds));
  slice->add_option("--mode", sa.mode, "Data slice abstraction mode")
      ->check(CLI::IsMember(modes));
  slice->add_option("--at", sa.at,
                    "Criterion location: line, L<n>, after:L<n> or end")
      ->required();
  slice->add_option("--vars", sa.vars, "Comma-separated criterion variables");
  slice->add_flag("--labels-json", sa.labels_json,
                  "Also print the label sets as JSON");
  slice->add_option("file", sa.file, "Source file")->required();

  AnalyzeArgs aa;
  auto* analyze = app.add_subcommand("analyze", "Dump intermediate analyses");
  analyze->fallthrough();
  analyze->add_option("--at", aa.at, "Insert a criterion SKIP first");
  analyze->add_option("--vars", aa.vars, "Variables for --at");
  analyze->add_flag("--dump-cfg", aa.dump_cfg, "Control flow graph as DOT");
  analyze->add_option("--dump-du", aa.dump_du, "Reaching definitions: <label> <vars>")
      ->expected(2);
  analyze->add_flag("--dump-cd", aa.dump_cd, "Control dependences");
  analyze->add_flag("--weak", aa.weak, "Include weak control dependences");
  analyze->add_flag("--dump-pdg", aa.dump_pdg, "Program dependence graph as DOT");
  analyze->add_option("file", aa.file, "Source file")->required();

  VerifyArgs va;
  auto* verify = app.add_subcommand("verify", "Check a slice by execution");
  verify->fallthrough();
  verify->add_option("--kind", va.kind, "Slice kind")
      ->required()
      ->check(CLI::IsMember(kinds));
  verify->add_option("--mode", va.mode, "Data slice abstraction mode")
      ->check(CLI::IsMember(modes));
  verify->add_option("--at", va.at, "Criterion location (default end)");
  verify->add_option("--vars", va.vars, "Comma-separated criterion variables");
  verify->add_option("--inputs", va.inputs, "JSON list of input maps")
      ->required();
  verify->add_option("--slice", va.slice,
                     "Check this slice file instead of computing one");
  verify->add_option("--budget", va.budget, "Step budget per run");
  verify->add_option("--branch-budget", va.branch_budget,
                     "Nondeterministic decisions per trace");
  verify->add_option("file", va.file, "Source file")->required();

  StatsArgs st;
  auto* stats = app.add_subcommand("stats", "Slice size and time statistics");
  stats->fallthrough();
  stats->add_option("--mode", st.mode, "Data slice abstraction mode")
      ->check(CLI::IsMember(modes));
  stats->add_option("--max-criteria", st.max_criteria, "Criteria per program");
  stats->add_option("--repeats", st.repeats, "Timing repetitions");
  stats->add_flag("--no-timing", st.no_timing, "Report zero times");
  stats->add_option("--jobs", st.jobs, "Worker threads (0 = all cores)");
  stats->add_option("corpus", st.dir, "Directory of .mini files")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? 0 : 1;
  }

  try {
    if (slice->parsed()) {
      if (sa.kind != "data" && slice->count("--mode")) {
        err << "warning: --mode only applies to data slices\n";
      }
      return cmd_slice(sa, globals, out);
    }
    if (analyze->parsed()) {
      if (!aa.dump_cfg && aa.dump_du.empty() && !aa.dump_cd && !aa.dump_pdg) {
        err << "error: analyze needs one of --dump-cfg, --dump-du, --dump-cd, "
               "--dump-pdg\n";
        return 1;
      }
      return cmd_analyze(aa, globals, out);
    }
    if (verify->parsed()) return cmd_verify(va, globals, out);
    return cmd_stats(st, globals, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace dslice::cli
