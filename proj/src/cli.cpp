#include "causalid/cli.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "causalid/errors.hpp"
#include "causalid/identify.hpp"
#include "causalid/model_io.hpp"
#include "causalid/oracle.hpp"
#include "causalid/serialize.hpp"

namespace causalid::cli {

namespace {

constexpr int kReportVersion = 1;

struct GraphSource {
  std::string inline_edges;
  std::string file;
};

struct QueryFlags {
  std::vector<std::string> effect;
  std::vector<std::string> intervention;
  std::vector<std::string> condition;
};

void add_graph_flags(CLI::App* cmd, GraphSource& src) {
  cmd->add_option("--graph", src.inline_edges, "Comma separated edges, e.g. \"X->Z,Z->Y,X<->Y\"");
  cmd->add_option("--graph-file", src.file, "Graph text file, or - for standard input");
}

void add_query_flags(CLI::App* cmd, QueryFlags& q) {
  cmd->add_option("--effect", q.effect, "Outcome variables")->delimiter(',')->required();
  cmd->add_option("--do", q.intervention, "Intervened variables")->delimiter(',');
  cmd->add_option("--cond", q.condition, "Conditioning variables")->delimiter(',');
}

Admg load_graph(const GraphSource& src, std::istream& in, std::ostream& err) {
  if (!src.inline_edges.empty()) {
    if (!src.file.empty()) err << "warning: both --graph and --graph-file given; using --graph\n";
    return parse_graph_text(src.inline_edges);
  }
  if (src.file.empty()) throw ParseError("no graph given (use --graph or --graph-file)");
  std::stringstream text;
  if (src.file == "-") {
    text << in.rdbuf();
  } else {
    std::ifstream file(src.file);
    if (!file) throw ParseError("cannot open graph file '" + src.file + "'");
    text << file.rdbuf();
  }
  return parse_graph_text(text.str());
}

VertexSet to_set(const std::vector<std::string>& names) {
  VertexSet out;
  for (const auto& n : names) {
    std::string t = n;
    t.erase(0, t.find_first_not_of(" \t"));
    t.erase(t.find_last_not_of(" \t") + 1);
    if (!t.empty()) out.insert(t);
  }
  return out;
}

Query to_query(const QueryFlags& q) {
  return Query{to_set(q.effect), to_set(q.intervention), to_set(q.condition)};
}

SimplifyLevel parse_level(const std::string& s) {
  if (s == "full") return SimplifyLevel::full;
  if (s == "basic") return SimplifyLevel::basic;
  return SimplifyLevel::none;
}

std::string effect_label(const Query& q) {
  std::string out = "P";
  if (!q.x.empty()) out += "_" + format_set(q.x);
  out += "(" + format_set(q.y);
  if (!q.z.empty()) out += " | " + format_set(q.z);
  return out + ")";
}

void print_graph(std::ostream& out, const Admg& g) {
  bool any = false;
  for (const auto& [tail, head] : g.directed()) {
    out << (any ? ", " : "") << tail << "->" << head;
    any = true;
  }
  for (const auto& [a, b] : g.bidirected()) {
    out << (any ? ", " : "") << a << "<->" << b;
    any = true;
  }
  if (!any) out << "(no edges)";
}

void print_hedge(std::ostream& out, const HedgeWitness& w) {
  out << "not identifiable: hedge for P_" << format_set(w.sub_x) << "(" << format_set(w.sub_y)
      << ")\n";
  out << "  F  vertices " << format_set(w.forest_f.vertices()) << ": ";
  print_graph(out, w.forest_f);
  out << "\n  F' vertices " << format_set(w.forest_f_sub.vertices()) << ": ";
  print_graph(out, w.forest_f_sub);
  out << "\n";
}

int cmd_identify(const GraphSource& src, const QueryFlags& flags, const std::string& format,
                 const std::string& level, bool verbose, bool thin, std::istream& in,
                 std::ostream& out, std::ostream& err) {
  const Admg g = load_graph(src, in, err);
  const Query q = to_query(flags);
  Trace trace;
  IdentifyOptions options;
  options.simplify = parse_level(level);
  options.thin_hedge = thin;
  options.trace = verbose ? &trace : nullptr;
  const Identification result = identify(q, g, options);
  const auto* expr = std::get_if<Expression>(&result);

  if (format == "ast") {
    nlohmann::json report = {{"version", kReportVersion}, {"identifiable", expr != nullptr}};
    if (expr) {
      report["expression"] = to_json(*expr);
      report["latex"] = to_latex(*expr);
    } else {
      report["hedge"] = to_json(std::get<HedgeWitness>(result));
    }
    if (verbose) report["recursion_log"] = to_json(trace);
    out << report.dump(2) << "\n";
  } else {
    if (verbose) {
      err << "recursion trace for " << effect_label(q) << ":\n";
      for (const auto& e : trace) err << format_trace_entry(e) << "\n";
    }
    if (expr) {
      out << (format == "text" ? to_text(*expr) : to_latex(*expr)) << "\n";
    } else {
      print_hedge(out, std::get<HedgeWitness>(result));
    }
  }
  return expr ? kOk : kNotIdentifiable;
}

std::string format_assignment(const DiscreteScm& m, const Binding& b) {
  std::string out;
  for (const auto& [v, value] : b) {
    if (!out.empty()) out += ",";
    out += v + "=" + m.label(v, value);
  }
  return out;
}

struct VerifyFlags {
  std::string model;
  int trials = 1;
  double tolerance = 1e-9;
  std::uint64_t seed = 0;
};

int cmd_verify(const VerifyFlags& vf, const QueryFlags& flags, std::ostream& out) {
  const DiscreteScm model = load_model(vf.model);
  const Admg g = scm_graph(model);
  const Query q = to_query(flags);
  const Identification result = identify(q, g);
  if (const auto* hedge = std::get_if<HedgeWitness>(&result)) {
    print_hedge(out, *hedge);
    return kNotIdentifiable;
  }
  const Expression e = std::get<Expression>(result);
  out << "expression: " << to_latex(e) << "\n";

  std::map<VertexName, int> domains;
  for (const auto& o : model.observed) domains[o.name] = o.domain;
  const VertexSet extra = set_difference(free_variables(e), set_union(q.y, set_union(q.x, q.z)));
  if (!extra.empty()) out << "free intervention variables: " << format_set(extra) << "\n";

  double worst = 0.0;
  out << std::setprecision(10);
  for (int trial = 0; trial < vf.trials; ++trial) {
    const DiscreteScm m =
        trial == 0 ? model : random_scm(g, vf.seed + static_cast<std::uint64_t>(trial), domains);
    const JointTable observational = joint(m);
    double trial_worst = 0.0;
    for (const auto& xb : all_assignments(q.x, domains)) {
      const JointTable mutilated = interventional(m, xb);
      for (const auto& zb : all_assignments(q.z, domains)) {
        const double pz = mutilated.marginal(zb);
        if (pz == 0.0) continue;
        for (const auto& yb : all_assignments(q.y, domains)) {
          Binding yz = yb;
          yz.insert(zb.begin(), zb.end());
          const double truth = mutilated.marginal(yz) / pz;
          for (const auto& wb : all_assignments(extra, domains)) {
            Binding b = yz;
            b.insert(xb.begin(), xb.end());
            b.insert(wb.begin(), wb.end());
            const double value = evaluate(e, observational, b);
            trial_worst = std::max(trial_worst, std::abs(value - truth));
            if (trial == 0 && wb == all_assignments(extra, domains).front()) {
              out << "P(" << format_assignment(m, yb);
              if (!zb.empty()) out << " | " << format_assignment(m, zb);
              out << (zb.empty() ? " | " : ", ") << "do(" << format_assignment(m, xb)
                  << ")) = " << value << " (oracle " << truth << ")\n";
            }
          }
        }
      }
    }
    out << "trial " << trial << (trial == 0 ? " (model)" : " (random)")
        << ": max deviation " << trial_worst << "\n";
    worst = std::max(worst, trial_worst);
  }
  out << "max deviation: " << worst << " (tolerance " << vf.tolerance << ")\n";
  if (worst > vf.tolerance) {
    out << "FAIL\n";
    return kToleranceExceeded;
  }
  out << "PASS\n";
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Causal effect identification on acyclic directed mixed graphs"};
  app.require_subcommand(1);

  const char* env_format = std::getenv("CAUSALID_FORMAT");
  std::string format = env_format && *env_format ? env_format : "latex";
  std::string level = "full";
  bool verbose = false;
  bool thin = false;
  GraphSource id_src;
  QueryFlags id_query;
  auto* identify_cmd = app.add_subcommand("identify", "Identify P_x(y) or P_x(y|z)");
  add_graph_flags(identify_cmd, id_src);
  add_query_flags(identify_cmd, id_query);
  identify_cmd->add_option("--format", format, "latex, text or ast")
      ->check(CLI::IsMember({"latex", "text", "ast"}));
  identify_cmd->add_option("--simplify", level, "full, basic or none")
      ->check(CLI::IsMember({"full", "basic", "none"}));
  identify_cmd->add_flag("--verbose,-v", verbose, "Print the recursion trace");
  identify_cmd->add_flag("--thin-hedge", thin, "Reduce hedge graphs to one child per vertex");

  VerifyFlags vf;
  QueryFlags verify_query;
  auto* verify_cmd = app.add_subcommand("verify", "Check an identified formula against a model");
  verify_cmd->add_option("model", vf.model, "Model file (JSON)")->required();
  add_query_flags(verify_cmd, verify_query);
  verify_cmd->add_option("--trials", vf.trials, "Number of models to check")
      ->check(CLI::PositiveNumber);
  verify_cmd->add_option("--tolerance", vf.tolerance, "Maximum absolute deviation")
      ->check(CLI::NonNegativeNumber);
  verify_cmd->add_option("--seed", vf.seed, "Seed for the random models");

  GraphSource dot_src;
  auto* dot_cmd = app.add_subcommand("export-dot", "Print the graph in Graphviz format");
  add_graph_flags(dot_cmd, dot_src);

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }

  try {
    if (identify_cmd->parsed()) {
      if (format != "latex" && format != "text" && format != "ast") {
        err << "error: unknown output format '" << format << "'\n";
        return kUsage;
      }
      return cmd_identify(id_src, id_query, format, level, verbose, thin, in, out, err);
    }
    if (verify_cmd->parsed()) return cmd_verify(vf, verify_query, out);
    out << to_dot(load_graph(dot_src, in, err));
    return kOk;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }
}

}  // namespace causalid::cli
