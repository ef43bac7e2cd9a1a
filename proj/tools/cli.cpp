#include "cli.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "optics/optics.hpp"
#include "server.hpp"

namespace optics::tools {

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::ParseError, "cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::InvalidParameter, "cannot write '" + path + "'");
  out << text;
  if (!out) throw Error(ErrorCode::InvalidParameter, "failed writing '" + path + "'");
}

int default_max_events() {
  if (const char* env = std::getenv("OPTICS_MAX_EVENTS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 0 && v <= 1'000'000) return static_cast<int>(v);
    throw UsageError("OPTICS_MAX_EVENTS must be a non-negative integer");
  }
  return kDefaultMaxEvents;
}

/// `--key value` pairs after the scenario name. Hyphens map to underscores.
ParamValues scenario_params(const std::vector<std::string>& extras) {
  ParamValues out;
  for (std::size_t i = 0; i < extras.size(); ++i) {
    const std::string& flag = extras[i];
    if (flag.rfind("--", 0) != 0 || flag.size() < 3) throw UsageError("unexpected argument '" + flag + "'");
    std::string key = flag.substr(2);
    std::string value;
    if (const auto eq = key.find('='); eq != std::string::npos) {
      value = key.substr(eq + 1);
      key = key.substr(0, eq);
    } else {
      if (i + 1 >= extras.size()) throw UsageError("missing value for '" + flag + "'");
      value = extras[++i];
    }
    std::replace(key.begin(), key.end(), '-', '_');
    char* end = nullptr;
    const double num = std::strtod(value.c_str(), &end);
    if (end != value.c_str() && *end == '\0') out[key] = num;
    else out[key] = value;
  }
  return out;
}

Medium material_or_throw(const std::string& name) {
  if (auto m = find_material(name)) return *m;
  throw UsageError("unknown material '" + name + "' (glass, water, crown, flint)");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& err) {
  CLI::App app{"2D geometric optics: scenarios, tracing, sweeps and figures", "optics"};
  app.require_subcommand(1, 1);

  // scenario
  auto* scenario_cmd = app.add_subcommand("scenario", "Build a named scenario and write its scene document");
  std::string scenario_name;
  std::string scenario_out;
  scenario_cmd->add_option("name", scenario_name, "oceanarium | glass_plate | regular_prism | pendant")->required();
  scenario_cmd->add_option("--out", scenario_out, "Scene JSON output path")->required();
  scenario_cmd->allow_extras();

  // trace
  auto* trace_cmd = app.add_subcommand("trace", "Trace every source in a scene");
  std::string trace_scene;
  std::string trace_out;
  std::string trace_svg;
  std::optional<int> trace_max_events;
  trace_cmd->add_option("--scene", trace_scene, "Scene JSON")->required();
  trace_cmd->add_option("--max-events", trace_max_events, "Event cap per ray (default 64, or OPTICS_MAX_EVENTS)")
      ->check(CLI::NonNegativeNumber);
  trace_cmd->add_option("--out", trace_out, "Paths JSON output path")->required();
  trace_cmd->add_option("--svg", trace_svg, "Optional SVG figure output path");

  // sweep
  auto* sweep_cmd = app.add_subcommand("sweep", "Parameter sweeps");
  std::string sweep_kind;
  std::string sweep_out;
  std::string sweep_svg;
  std::optional<std::string> sweep_material;
  std::optional<double> sweep_from, sweep_to, sweep_step;
  std::optional<int> sweep_k;
  double sweep_glass_n = 1.5;
  double sweep_water_n = 1.33;
  double sweep_offset = 0.5;
  sweep_cmd->add_option("kind", sweep_kind, "prism-spread | visibility | pendant-scatter")
      ->required()
      ->check(CLI::IsMember({"prism-spread", "visibility", "pendant-scatter"}));
  sweep_cmd->add_option("--out", sweep_out, "CSV output path")->required();
  sweep_cmd->add_option("--svg", sweep_svg, "Spread curve SVG (prism-spread only)");
  sweep_cmd->add_option("--material", sweep_material, "glass | water | crown | flint");
  sweep_cmd->add_option("--from", sweep_from, "Start angle, degrees");
  sweep_cmd->add_option("--to", sweep_to, "End angle, degrees");
  sweep_cmd->add_option("--step", sweep_step, "Step, degrees")->check(CLI::PositiveNumber);
  sweep_cmd->add_option("--k", sweep_k, "Number of prism faces")->check(CLI::Range(3, 360));
  sweep_cmd->add_option("--glass-n", sweep_glass_n, "Wall glass index (visibility)")->check(CLI::Range(1.0, 4.0));
  sweep_cmd->add_option("--water-n", sweep_water_n, "Water index (visibility)")->check(CLI::Range(1.0, 4.0));
  sweep_cmd->add_option("--offset", sweep_offset, "Sun ray height / radius (pendant-scatter)")
      ->check(CLI::Range(-0.99, 0.99));

  // render
  auto* render_cmd = app.add_subcommand("render", "Render a scene and traced paths to SVG");
  std::string render_scene, render_paths, render_out;
  render_cmd->add_option("--scene", render_scene, "Scene JSON")->required();
  render_cmd->add_option("--paths", render_paths, "Paths JSON")->required();
  render_cmd->add_option("--out", render_out, "SVG output path")->required();

  // serve
  auto* serve_cmd = app.add_subcommand("serve", "Run the HTTP trace service");
  int serve_port = 8080;
  std::string serve_host = "127.0.0.1";
  std::optional<std::string> serve_static;
  serve_cmd->add_option("--port", serve_port, "TCP port")->check(CLI::Range(1, 65535));
  serve_cmd->add_option("--host", serve_host, "Bind address");
  serve_cmd->add_option("--static", serve_static, "Directory served under /");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    err << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kUsageError;
  }

  try {
    if (*scenario_cmd) {
      const SceneDoc scene = instantiate(scenario_name, scenario_params(scenario_cmd->remaining()));
      write_file(scenario_out, serialize_scene(scene));
      return kOk;
    }
    if (*trace_cmd) {
      const int max_events = trace_max_events ? *trace_max_events : default_max_events();
      const Tracer tracer(parse_scene(read_file(trace_scene)));
      const auto paths = tracer.trace_all(max_events);
      write_file(trace_out, serialize_paths(paths));
      if (!trace_svg.empty()) write_file(trace_svg, to_svg(tracer.scene(), paths));
      return kOk;
    }
    if (*render_cmd) {
      const SceneDoc scene = parse_scene(read_file(render_scene));
      require_valid(scene);
      write_file(render_out, to_svg(scene, parse_paths(read_file(render_paths))));
      return kOk;
    }
    if (*serve_cmd) {
      return serve(serve_host, serve_port, serve_static);
    }
    if (*sweep_cmd) {
      if (sweep_kind == "prism-spread") {
        PrismParams p;
        p.sides = sweep_k.value_or(3);
        p.material = material_or_throw(sweep_material.value_or("crown"));
        const auto rows = spread_sweep(regular_prism(p), p.material, deg_to_rad(sweep_from.value_or(20.0)),
                                       deg_to_rad(sweep_to.value_or(85.0)), deg_to_rad(sweep_step.value_or(0.5)));
        write_file(sweep_out, spread_sweep_csv(rows));
        if (!sweep_svg.empty()) write_file(sweep_svg, spread_curve_svg(rows));
        return kOk;
      }
      if (sweep_kind == "visibility") {
        OceanariumParams p;
        p.glass = Medium::constant("glass", sweep_glass_n);
        p.water = Medium::constant("water", sweep_water_n);
        const SceneDoc scene = oceanarium(p);
        const Vec2 eye = default_eye(p);
        const auto rows = underwater_sweep(scene, eye, deg_to_rad(sweep_from.value_or(0.0)),
                                           deg_to_rad(sweep_to.value_or(80.0)), deg_to_rad(sweep_step.value_or(0.5)));
        write_file(sweep_out, underwater_sweep_csv(rows));
        if (const auto cutoff = visibility_cutoff(scene, eye)) {
          err << "visibility cutoff: " << format_number(rad_to_deg(*cutoff)) << " deg\n";
        } else {
          err << "visibility cutoff: none in the reachable range\n";
        }
        return kOk;
      }
      PendantParams base;
      base.sides = sweep_k.value_or(6);
      if (base.sides < 4) throw UsageError("pendant-scatter requires --k >= 4");
      base.material = material_or_throw(sweep_material.value_or("flint"));
      base.offset = sweep_offset;
      const auto rows = pendant_sweep(base, deg_to_rad(sweep_from.value_or(0.0)), deg_to_rad(sweep_to.value_or(60.0)),
                                      deg_to_rad(sweep_step.value_or(0.1)));
      write_file(sweep_out, pendant_sweep_csv(rows));
      const auto best = std::find_if(rows.begin(), rows.end(),
                                     [](const PendantScatter& s) { return s.separation > kPendantSeparation; });
      if (best != rows.end()) {
        err << "scatter found at orientation " << format_number(rad_to_deg(best->orientation)) << " deg, separation "
            << format_number(rad_to_deg(best->separation)) << " deg\n";
      } else {
        err << "no orientation scatters colors through different faces by more than 30 deg\n";
      }
      return kOk;
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  } catch (const SceneError& e) {
    err << "error: scene invalid\n";
    for (const auto& v : e.violations()) err << "  " << v.describe() << "\n";
    return kValidationError;
  } catch (const ParamError& e) {
    err << "error: invalid scenario parameters\n";
    for (const auto& i : e.issues()) err << "  " << i.field << ": " << i.message << "\n";
    return kValidationError;
  } catch (const Error& e) {
    if (e.code() == ErrorCode::UnknownId) {
      err << "error: " << e.what() << "\n";
      return kUsageError;
    }
    err << "error: " << e.what() << "\n";
    return kValidationError;
  }
  return kUsageError;
}

}  // namespace optics::tools
