#include "ernn/cli.hpp"

#include <CLI11.hpp>
#include <filesystem>
#include <json.hpp>
#include <sstream>

#include "ernn/errors.hpp"
#include "ernn/gadgets.hpp"
#include "ernn/io.hpp"
#include "ernn/reducer.hpp"
#include "ernn/render.hpp"

namespace ernn::cli {

namespace {

using json = nlohmann::ordered_json;

// Thrown by command bodies to end with a given exit code.
struct Exit {
  int code;
  std::string message;
};

EtrInvFormula load_formula(const std::string& path) { return parse_formula(io::read_file(path)); }

Rational parse_rational_option(const std::string& text, const char* what) {
  try {
    return Rational::parse(text);
  } catch (const std::invalid_argument&) {
    throw Exit{2, std::string("invalid ") + what + " '" + text + "'"};
  }
}

std::string counts_json(const ReductionBundle& b) {
  json j = {{"variables", b.formula.variables().size()},
            {"variable_gadgets", b.counts.variable_gadgets},
            {"inversion_gadgets", b.counts.inversion_gadgets},
            {"lower_bound_gadgets", b.counts.lower_bound_gadgets},
            {"hidden_neurons", b.counts.neurons},
            {"points", b.counts.points},
            {"labels", label_set(b.instance).size()}};
  return j.dump() + "\n";
}

ReductionBundle load_bundle(const std::string& sidecar) {
  return bundle_from_layout(io::layout_from_json(io::read_file(sidecar)));
}

struct Options {
  std::string formula, assignment, network, instance, layout, output, gamma = "0", spacing = "1000", scale = "0";
  std::string cross_dir, kind = "variable";
  long denom_bound = 12;
  std::size_t k = 4;
  long grid = 6;
  bool no_lines = false;
};

int cmd_compile(const Options& o, std::ostream& out) {
  LayoutConfig cfg;
  cfg.spacing = parse_rational_option(o.spacing, "spacing");
  const auto bundle = compile(load_formula(o.formula), cfg);
  io::write_file(o.output, io::instance_to_json(bundle.instance));
  if (!o.layout.empty()) io::write_file(o.layout, io::layout_to_json(bundle.layout));
  out << counts_json(bundle);
  return 0;
}

int cmd_witness(const Options& o, std::ostream& out) {
  const auto f = load_formula(o.formula);
  const auto bundle = load_bundle(o.layout);
  if (!(bundle.formula == f)) throw Exit{2, "layout was compiled from a different formula"};
  const auto net = witness(bundle, parse_assignment(io::read_file(o.assignment)));
  if (o.output.empty()) {
    out << io::network_to_json(net);
  } else {
    io::write_file(o.output, io::network_to_json(net));
  }
  return 0;
}

int cmd_verify(const Options& o, std::ostream& out) {
  const auto net = io::network_from_json(io::read_file(o.network));
  const auto inst = io::instance_from_json(io::read_file(o.instance));
  const Rational gamma = parse_rational_option(o.gamma, "gamma");
  if (gamma.sign() < 0) throw Exit{2, "gamma must be non-negative"};
  const auto r = verify(net, inst, gamma);
  json violations = json::array();
  for (std::size_t i = 0; i < r.violations.size() && i < 20; ++i) {
    const auto& v = r.violations[i];
    violations.push_back({{"index", v.index}, {"residual", {v.residual.y1.to_string(), v.residual.y2.to_string()}}});
  }
  json j = {{"accepted", r.accepted},
            {"loss", r.loss.to_string()},
            {"gamma", gamma.to_string()},
            {"violated_points", r.violations.size()},
            {"violations", violations}};
  if (net.neurons.size() > inst.hidden_count) {
    j["note"] = "network has more hidden neurons than the instance allows";
  }
  out << j.dump() << "\n";
  return r.accepted ? 0 : 1;
}

int cmd_extract(const Options& o, std::ostream& out) {
  const auto bundle = load_bundle(o.layout);
  const auto net = io::network_from_json(io::read_file(o.network));
  out << format_assignment(bundle.formula, extract(bundle, net));
  return 0;
}

int cmd_solve(const Options& o, std::ostream& out) {
  const auto f = load_formula(o.formula);
  if (o.denom_bound < 1) throw Exit{2, "denominator bound must be positive"};
  const auto a = grid_solve(f, o.denom_bound);
  if (!a) {
    out << "not found at scale " << o.denom_bound << "\n";
    return 1;
  }
  out << format_assignment(f, *a);
  return 0;
}

int cmd_roundtrip(const Options& o, std::ostream& out, std::ostream& err) {
  const auto f = load_formula(o.formula);
  if (o.denom_bound < 1) throw Exit{2, "denominator bound must be positive"};
  const auto a = grid_solve(f, o.denom_bound);
  if (!a) {
    out << "not found at scale " << o.denom_bound << "\n";
    return 1;
  }
  LayoutConfig cfg;
  cfg.spacing = parse_rational_option(o.spacing, "spacing");
  const auto bundle = compile(f, cfg);
  const auto net = witness(bundle, *a);
  const auto r = verify(net, bundle.instance, bundle.instance.gamma);
  if (!r.accepted) {
    err << "witness rejected with loss " << r.loss.to_string() << "\n";
    return 1;
  }
  const auto back = extract(bundle, net);
  out << format_assignment(f, back);
  if (back != *a) {
    err << "recovered assignment differs from the solver's\n";
    return 1;
  }
  return 0;
}

int cmd_render(const Options& o, std::ostream& out) {
  const auto layout = io::layout_from_json(io::read_file(o.layout));
  RenderOptions ro;
  ro.scale = parse_rational_option(o.scale, "scale").to_double();
  ro.show_lines = !o.no_lines;
  io::write_file(o.output, render_layout_svg(layout, ro));
  out << o.output << "\n";
  if (!o.cross_dir.empty()) {
    std::filesystem::create_directories(o.cross_dir);
    const std::pair<GadgetKind, GadgetState> figures[] = {
        {GadgetKind::Variable, GadgetState::variable(2)},
        {GadgetKind::Inversion, GadgetState::inversion(Rational(5, 2))},
        {GadgetKind::LowerBound, GadgetState::lower_bound(3)}};
    for (const auto& [kind, state] : figures) {
      const std::string path = (std::filesystem::path(o.cross_dir) / (std::string(to_string(kind)) + ".svg")).string();
      io::write_file(path, render_cross_section_svg(gadget_template(kind), state));
      out << path << "\n";
    }
  }
  return 0;
}

int cmd_oracle(const Options& o, std::ostream& out) {
  GadgetKind kind;
  if (o.kind == "variable") {
    kind = GadgetKind::Variable;
  } else if (o.kind == "inversion") {
    kind = GadgetKind::Inversion;
  } else if (o.kind == "lower_bound") {
    kind = GadgetKind::LowerBound;
  } else {
    throw Exit{2, "unknown gadget kind '" + o.kind + "'"};
  }
  if (o.grid < 1) throw Exit{2, "grid denominator must be positive"};
  const auto profiles = fit_cpwl_1d_oracle(cross_section(gadget_template(kind)), o.k, o.grid);
  out << io::profiles_to_json(profiles);
  return profiles.empty() ? 1 : 0;
}

}  // namespace

CommandResult run(const std::vector<std::string>& args) {
  CLI::App app{"Reduction from ETR-Inv to exact two-layer ReLU network training", "ernn"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");
  Options o;

  auto* compile_cmd = app.add_subcommand("compile", "Compile a formula into a training instance");
  compile_cmd->add_option("formula", o.formula, "Formula file")->required();
  compile_cmd->add_option("-o,--output", o.output, "Instance file to write")->required();
  compile_cmd->add_option("--layout", o.layout, "Layout sidecar file to write");
  compile_cmd->add_option("--spacing", o.spacing, "Gadget spacing (rational)");

  auto* witness_cmd = app.add_subcommand("witness", "Build the witness network of a satisfying assignment");
  witness_cmd->add_option("formula", o.formula, "Formula file")->required();
  witness_cmd->add_option("assignment", o.assignment, "Assignment file (X = p/q per line)")->required();
  witness_cmd->add_option("--layout", o.layout, "Layout sidecar from compile")->required();
  witness_cmd->add_option("-o,--output", o.output, "Network file to write (default stdout)");

  auto* verify_cmd = app.add_subcommand("verify", "Check a network against an instance exactly");
  verify_cmd->add_option("network", o.network, "Network file")->required();
  verify_cmd->add_option("instance", o.instance, "Instance file")->required();
  verify_cmd->add_option("--gamma", o.gamma, "Target total squared error (rational)");

  auto* extract_cmd = app.add_subcommand("extract", "Read an assignment off a fitting network");
  extract_cmd->add_option("network", o.network, "Network file")->required();
  extract_cmd->add_option("--layout", o.layout, "Layout sidecar from compile")->required();

  auto* solve_cmd = app.add_subcommand("solve", "Search the promise range on a rational grid");
  solve_cmd->add_option("formula", o.formula, "Formula file")->required();
  solve_cmd->add_option("--denom-bound", o.denom_bound, "Largest denominator tried");

  auto* roundtrip_cmd = app.add_subcommand("roundtrip", "solve, compile, witness, verify, extract and compare");
  roundtrip_cmd->add_option("formula", o.formula, "Formula file")->required();
  roundtrip_cmd->add_option("--denom-bound", o.denom_bound, "Largest denominator tried");
  roundtrip_cmd->add_option("--spacing", o.spacing, "Gadget spacing (rational)");

  auto* render_cmd = app.add_subcommand("render", "Draw a layout sidecar as SVG");
  render_cmd->add_option("layout", o.layout, "Layout sidecar file")->required();
  render_cmd->add_option("-o,--output", o.output, "SVG file to write")->required();
  render_cmd->add_option("--scale", o.scale, "Pixels per unit (0 fits 1600 px)");
  render_cmd->add_option("--cross-sections", o.cross_dir, "Directory for per-gadget cross-section figures");
  render_cmd->add_flag("--no-lines", o.no_lines, "Draw stripes only");

  auto* oracle_cmd = app.add_subcommand("oracle", "Enumerate 1-D fits of a gadget cross-section as JSON");
  oracle_cmd->add_option("kind", o.kind, "variable, inversion or lower_bound")->required();
  oracle_cmd->add_option("-k,--breakpoints", o.k, "Number of breakpoints");
  oracle_cmd->add_option("--grid", o.grid, "Grid denominator for breakpoints");

  std::ostringstream out, err;
  CommandResult result;
  try {
    std::vector<std::string> rest(args.rbegin(), args.rend());
    if (!rest.empty()) rest.pop_back();
    app.parse(std::move(rest));
  } catch (const CLI::ParseError& e) {
    result.exit_code = app.exit(e, out, err);
    if (result.exit_code != 0) result.exit_code = 2;
    result.out = out.str();
    result.err = err.str();
    return result;
  }

  try {
    if (*compile_cmd) result.exit_code = cmd_compile(o, out);
    else if (*witness_cmd) result.exit_code = cmd_witness(o, out);
    else if (*verify_cmd) result.exit_code = cmd_verify(o, out);
    else if (*extract_cmd) result.exit_code = cmd_extract(o, out);
    else if (*solve_cmd) result.exit_code = cmd_solve(o, out);
    else if (*roundtrip_cmd) result.exit_code = cmd_roundtrip(o, out, err);
    else if (*render_cmd) result.exit_code = cmd_render(o, out);
    else if (*oracle_cmd) result.exit_code = cmd_oracle(o, out);
  } catch (const Exit& e) {
    err << "error: " << e.message << "\n";
    result.exit_code = e.code;
  } catch (const SyntaxError& e) {
    err << "syntax error: " << e.what() << "\n";
    result.exit_code = 2;
  } catch (const UnsatisfiedAssignment& e) {
    err << "rejected: " << e.what() << "\n";
    result.exit_code = 1;
  } catch (const NotFitting& e) {
    err << "rejected: " << e.what() << "\n";
    result.exit_code = 1;
  } catch (const DimensionMismatch& e) {
    err << "rejected: " << e.what() << "\n";
    result.exit_code = 1;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    result.exit_code = 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    result.exit_code = 2;
  }
  result.out = out.str();
  result.err = err.str();
  return result;
}

}  // namespace ernn::cli
