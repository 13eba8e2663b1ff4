#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "commands.hpp"
#include "dofib/errors.hpp"
#include "report.hpp"

using namespace dofib;
using namespace dofib::cli;

namespace {

// Exit codes.
constexpr int kOk = 0;
constexpr int kInputError = 1;
constexpr int kVerificationFailure = 2;
constexpr int kDegenerate = 3;

const char* category(const Error& e) {
  const std::string& k = e.kind();
  if (k == "ParseError") return "parse";
  if (k == "BadSeed") return "input";
  if (k == "Cancelled") return "cancelled";
  return "degeneracy";
}

void write(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(out_path, std::ios::binary);
  if (!f) throw ParseError("cannot write " + out_path);
  f << text;
}

std::string format(const Json& report, bool json) { return json ? report.dump(2) + "\n" : render_text(report); }

int fail(const std::string& cat, const std::string& kind, const std::string& message, bool json, int code) {
  Json err = {{"error", {{"category", cat}, {"kind", kind}, {"message", message}, {"exit_code", code}}}};
  // The error block always goes to stderr so a partial report never mixes with it.
  std::cerr << format(err, json);
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fibrations and birational maps of double octic arrangements"};
  app.require_subcommand(1);
  app.fallthrough();

  Options opt;
  app.add_option("--set", opt.sets, "Specialize a parameter to an exact rational, NAME=VALUE")->take_all();
  app.add_option("--seed", opt.seed, "Seed index (see the seeds and census commands)");
  app.add_flag("--json", opt.json, "Machine-readable report");
  app.add_option("--out", opt.out, "Write the report to PATH");
  app.add_flag("--timing", opt.timing, "Include wall times (not byte-stable)");

  std::vector<std::string> files;
  auto add = [&](const char* name, const char* help, int nfiles, Command cmd) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("files", files, "Input files")->required()->expected(nfiles < 0 ? -1 : nfiles);
    sub->callback([&opt, cmd, name] {
      opt.command = name;
      opt.run = cmd;
    });
    return sub;
  };
  add("analyze", "Incidence of an arrangement: points, lines, genericity conditions", 1, cmd_analyze)
      ->add_flag("--strict", opt.strict, "Refuse decisions that depend on the parameters");
  add("seeds", "Fibration seeds with stable indices", 1, cmd_seeds);
  add("elliptic-point", "Weierstrass model of the fibration from a fourfold or fivefold point", 1, cmd_elliptic_point);
  add("elliptic-skew", "Weierstrass model of the fibration from a pair of skew lines", 1, cmd_elliptic_skew);
  add("kummer", "Kummer fibration from two disjoint point quadruples", 1, cmd_kummer);
  add("sextic", "Double sextic fibration from a double or triple line", 1, cmd_sextic);
  CLI::App* quadric = add("quadric", "Double quadric fibration from a census seed", 1, cmd_quadric);
  quadric->add_option("--planes", opt.planes, "Seed planes a,c,d,b for F_a F_b = l F_c F_d")->delimiter(',');
  quadric->add_option("--scales", opt.scales, "Seed plane scales s0,s1,s2,s3")->delimiter(',');
  CLI::App* node = add("node-elliptic", "Elliptic fibration induced by a node of the double quadric branch", 1,
                       cmd_node_elliptic);
  node->add_option("--planes", opt.planes, "Seed planes a,c,d,b")->delimiter(',');
  node->add_option("--scales", opt.scales, "Seed plane scales s0,s1,s2,s3")->delimiter(',');
  node->add_option("--chart", opt.chart, "Node chart: P0Q1 or P1Q0")->default_val("P0Q1");
  add("census", "All double quadric fibrations of an arrangement", 1, cmd_census)
      ->add_option("--threads", opt.threads, "Worker threads")->default_val(1);
  add("kodaira", "Kodaira fibers of a point fibration along its discriminant lines", 1, cmd_kodaira);
  add("verify-map", "Certify a map of double covers: MAP SOURCE TARGET", 3, cmd_verify_map);
  add("match", "Match two root quadruples by a Möbius transform", 1, cmd_match);
  CLI::App* compose = add("compose", "Compose maps, applied in the given order", -1, cmd_compose);
  compose->add_option("--source", opt.source, "Source cover, to certify the composite");
  compose->add_option("--target", opt.target, "Target cover, to certify the composite");
  add("pipeline-35-71", "End-to-end map construction: X Y BRIDGE", 3, cmd_pipeline);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail("usage", e.get_name(), e.what(), opt.json, kInputError);
  }
  opt.files = files;

  try {
    const auto start = std::chrono::steady_clock::now();
    Outcome result = opt.run(opt);
    if (opt.timing) {
      result.report["seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
    write(format(result.report, opt.json), opt.out);
    return result.verified ? kOk : kVerificationFailure;
  } catch (const Error& e) {
    const char* cat = category(e);
    const std::string c = cat;
    return fail(c, e.kind(), e.what(), opt.json, c == "parse" || c == "input" ? kInputError : kDegenerate);
  } catch (const std::exception& e) {
    return fail("internal", "Exception", e.what(), opt.json, kInputError);
  }
}
