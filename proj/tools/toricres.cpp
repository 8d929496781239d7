#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "toricres/driver.hpp"
#include "toricres/errors.hpp"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw tr::PreconditionError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void emit(const std::string& text, const std::string& out) {
  if (out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(out);
  if (!f) throw tr::PreconditionError("cannot write " + out);
  f << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Toric resolution steps for hypersurface germs"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string field, zvar, values, adversary = "exhaustive", out;
  int trunc = 16;
  std::size_t max_steps = 8;
  app.add_option("--field", field, "Q or Fp:<p>");
  app.add_option("--z", zvar, "designated variable");
  app.add_option("--trunc", trunc, "truncation order")->check(CLI::Range(2, 1 << 16));
  app.add_option("--values", values, "comma list of nonzero chart values");
  app.add_option("--adversary", adversary, "exhaustive or worst")->check(CLI::IsMember({"exhaustive", "worst"}));
  app.add_option("--max-steps", max_steps, "game step bound");
  app.add_option("--out", out, "output path");

  std::string input;
  const std::vector<std::pair<std::string, std::string>> commands{
      {"np", "Newton polyhedron vertices"},
      {"fan", "normal fan of the Newton polyhedron"},
      {"usd", "upward subdivision and its charts"},
      {"check", "Weierstrass type, simpleness, removable faces, inv"},
      {"step", "one subdivision step with every sampled fiber point"},
      {"game", "resolution game against an automatic adversary"},
      {"export-fan", "fan block of a usd report"}};
  for (const auto& [name, help] : commands) app.add_subcommand(name, help)->add_option("file", input)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  const std::string cmd = app.get_subcommands().front()->get_name();
  try {
    const std::string text = read_file(input);
    if (cmd == "export-fan") {
      emit(tr::export_fan(text), out);
      return 0;
    }
    tr::ProblemOverrides ov;
    if (!field.empty()) ov.field = tr::parse_field(field);
    if (!zvar.empty()) ov.z = zvar;
    ov.order = trunc;
    if (!values.empty()) ov.values = tr::parse_values(values);
    const tr::Problem p = tr::parse_problem(text, ov);

    if (cmd == "np") {
      emit(tr::newton_report(p), out);
    } else if (cmd == "fan") {
      emit(tr::fan_text(tr::newton_polyhedron(p.core()).normal_fan()), out);
    } else if (cmd == "usd") {
      const auto rec = tr::problem_usd(p);
      emit(tr::usd_report(p, rec, tr::charts(rec.sigma_star)), out);
    } else if (cmd == "check") {
      emit(tr::check_problem(p).str(p.vars), out);
    } else if (cmd == "step") {
      const auto r = tr::subdivision_step(p);
      emit(r.str(p), out);
      if (r.violations > 0) {
        std::cerr << "error: " << r.violations << " branches violate the step conclusions\n";
        return 3;
      }
    } else if (cmd == "game") {
      const auto adv = adversary == "worst" ? tr::Adversary::worst : tr::Adversary::exhaustive;
      const auto t = tr::play_game(p, adv, max_steps);
      emit(t.str(p, max_steps), out);
      if (t.violations > 0) {
        std::cerr << "error: " << t.violations << " branches violate the step conclusions\n";
        return 3;
      }
      if (!t.won) {
        std::cerr << "error: game stopped: " << t.stop_reason << "\n";
        return 1;
      }
    }
  } catch (const tr::ParseError& e) {
    std::cerr << "parse error at line " << e.line() << ", column " << e.column() << ": " << e.what() << "\n";
    return 2;
  } catch (const tr::PreconditionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const tr::InvariantViolation& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
