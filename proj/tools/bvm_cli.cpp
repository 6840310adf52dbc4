// Command-line front end for the Boolean-valued model toolkit.
//
// Subcommands:
//   models          enumerate finite models of a theory up to isomorphism
//   space           build the point space and print its layout
//   eval            evaluate a formula to a clopen set of points
//   invariance      check a predicate for extensionality and invariance
//   atoms           compute the invariant atoms at an arity
//   synthesize      synthesize a defining formula for an invariant predicate
//   verify          compare a predicate against a candidate formula
//   conservativity  compare sentence truth in models vs. the point space
//
// Exit codes: 0 success, 1 domain or usage error, 2 verification failure
// (a check that ran to completion and found the property false).

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <memory>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "bvm/bvm.hpp"

namespace {

struct Args {
  std::string theory_path;
  int n_max = 0;
  int K = 0;
  std::string mode_name = "balanced";
  std::string out_path;
  std::string formula_text;
  std::string xi_text;
  std::string predicate_path;
  std::string sentences_path;
  int arity = 0;
  int sample = 0;
  unsigned long long seed = 0;
};

long long lcm_up_to(int n) {
  long long acc = 1;
  for (int i = 2; i <= n; ++i) acc = std::lcm(acc, static_cast<long long>(i));
  return acc;
}

bvm::Mode parse_mode(const std::string& name) {
  if (name == "balanced") return bvm::Mode::Balanced;
  if (name == "unbalanced") return bvm::Mode::Unbalanced;
  throw bvm::Error("unknown mode '" + name + "' (expected balanced or unbalanced)");
}

std::vector<int> parse_xi(const std::string& text) {
  std::vector<int> xi;
  if (text.empty()) return xi;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    size_t pos = 0;
    int value = 0;
    try {
      value = std::stoi(item, &pos);
    } catch (const std::exception&) {
      throw bvm::Error("bad --xi entry '" + item + "'");
    }
    if (pos != item.size()) throw bvm::Error("bad --xi entry '" + item + "'");
    xi.push_back(value);
  }
  return xi;
}

std::unique_ptr<bvm::Space> build_space(const Args& args) {
  bvm::Theory theory = bvm::load_theory(args.theory_path);
  bvm::Mode mode = parse_mode(args.mode_name);
  if (mode == bvm::Mode::Balanced) {
    long long need = lcm_up_to(args.n_max);
    if (args.K % need != 0)
      throw bvm::Error("balanced mode needs K divisible by lcm(1.." +
                       std::to_string(args.n_max) + ") = " + std::to_string(need) +
                       ", got K = " + std::to_string(args.K));
  }
  bvm::ModelClass models = bvm::enumerate_models(theory, args.n_max);
  return std::make_unique<bvm::Space>(std::move(models), args.K, mode);
}

// Predicate input: either a saved JSON table or a formula evaluated at the
// given arity.  Exactly one of the two must be provided.
bvm::Predicate load_predicate(const bvm::Space& space, const Args& args) {
  if (!args.predicate_path.empty() && !args.formula_text.empty())
    throw bvm::Error("give either --predicate or --formula, not both");
  if (!args.predicate_path.empty())
    return bvm::predicate_from_json(space, bvm::load_json_file(args.predicate_path));
  if (!args.formula_text.empty()) {
    if (args.arity <= 0)
      throw bvm::Error("--formula needs --arity to build a predicate table");
    bvm::Formula f = bvm::parse_formula(args.formula_text, space.models().theory.sig);
    return bvm::predicate_from_formula(space, f, args.arity);
  }
  throw bvm::Error("need --predicate FILE or --formula TEXT with --arity N");
}

std::vector<bvm::Formula> load_sentences(const std::string& path,
                                         const bvm::Signature& sig) {
  std::ifstream in(path);
  if (!in) throw bvm::Error("cannot open sentence file '" + path + "'");
  std::vector<bvm::Formula> sentences;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    bool blank = line.find_first_not_of(" \t\r\n") == std::string::npos;
    if (blank) continue;
    try {
      sentences.push_back(bvm::parse_formula(line, sig));
    } catch (const bvm::Error& e) {
      throw bvm::Error("sentence file line " + std::to_string(lineno) + ": " +
                       e.what());
    }
  }
  if (sentences.empty())
    throw bvm::Error("sentence file '" + path + "' has no sentences");
  return sentences;
}

void emit(const bvm::Json& j, const std::string& out_path) {
  std::string text = bvm::dump_json(j);
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw bvm::Error("cannot write '" + out_path + "'");
  out << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Boolean-valued model toolkit"};
  app.require_subcommand(1);

  Args args;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--theory", args.theory_path, "theory file")->required();
    cmd->add_option("--max-size", args.n_max, "largest model size")
        ->required()
        ->check(CLI::PositiveNumber);
    cmd->add_option("--out", args.out_path, "write JSON here instead of stdout");
  };
  auto add_space_opts = [&](CLI::App* cmd) {
    add_common(cmd);
    cmd->add_option("--K", args.K, "number of enumeration slots")
        ->required()
        ->check(CLI::PositiveNumber);
    cmd->add_option("--mode", args.mode_name, "balanced|unbalanced")
        ->check(CLI::IsMember({"balanced", "unbalanced"}));
  };
  auto add_predicate_opts = [&](CLI::App* cmd) {
    cmd->add_option("--predicate", args.predicate_path, "predicate JSON file");
    cmd->add_option("--formula", args.formula_text,
                    "formula defining the predicate (with --arity)");
    cmd->add_option("--arity", args.arity, "predicate arity for --formula")
        ->check(CLI::PositiveNumber);
  };

  CLI::App* cmd_models = app.add_subcommand(
      "models", "enumerate finite models up to isomorphism");
  add_common(cmd_models);

  CLI::App* cmd_space =
      app.add_subcommand("space", "build the point space and print its layout");
  add_space_opts(cmd_space);

  CLI::App* cmd_eval =
      app.add_subcommand("eval", "evaluate a formula to a clopen point set");
  add_space_opts(cmd_eval);
  cmd_eval->add_option("--formula", args.formula_text, "formula to evaluate")
      ->required();
  cmd_eval->add_option("--xi", args.xi_text,
                       "comma-separated slot indices for free variables");

  CLI::App* cmd_invariance = app.add_subcommand(
      "invariance", "check a predicate for extensionality and invariance");
  add_space_opts(cmd_invariance);
  add_predicate_opts(cmd_invariance);
  cmd_invariance->add_option(
      "--sample", args.sample,
      "extra random permutations to test beyond the generators");
  cmd_invariance->add_option("--seed", args.seed,
                             "seed for the sampled permutations");

  CLI::App* cmd_atoms =
      app.add_subcommand("atoms", "compute the invariant atoms at an arity");
  add_space_opts(cmd_atoms);
  cmd_atoms->add_option("--arity", args.arity, "atom arity")
      ->required()
      ->check(CLI::PositiveNumber);

  CLI::App* cmd_synthesize = app.add_subcommand(
      "synthesize", "synthesize a defining formula for an invariant predicate");
  add_space_opts(cmd_synthesize);
  add_predicate_opts(cmd_synthesize);

  CLI::App* cmd_verify = app.add_subcommand(
      "verify", "compare a saved predicate against a candidate formula");
  add_space_opts(cmd_verify);
  cmd_verify->add_option("--predicate", args.predicate_path, "predicate JSON file")
      ->required();
  cmd_verify->add_option("--formula", args.formula_text, "candidate formula")
      ->required();

  CLI::App* cmd_conservativity = app.add_subcommand(
      "conservativity",
      "compare sentence truth across models with truth in the point space");
  add_space_opts(cmd_conservativity);
  cmd_conservativity
      ->add_option("--sentences", args.sentences_path,
                   "file of closed sentences, one per line (# comments)")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (app.got_subcommand(cmd_models)) {
      bvm::Theory theory = bvm::load_theory(args.theory_path);
      bvm::ModelClass models = bvm::enumerate_models(theory, args.n_max);
      emit(bvm::models_json(models), args.out_path);
      return 0;
    }

    std::unique_ptr<bvm::Space> space = build_space(args);

    if (app.got_subcommand(cmd_space)) {
      emit(bvm::space_json(*space), args.out_path);
      return 0;
    }
    if (app.got_subcommand(cmd_eval)) {
      bvm::Formula f =
          bvm::parse_formula(args.formula_text, space->models().theory.sig);
      std::vector<int> xi = parse_xi(args.xi_text);
      bvm::ClopenSet value = space->evaluate(f, xi);
      emit(bvm::eval_json(*space, f, xi, value), args.out_path);
      return 0;
    }
    if (app.got_subcommand(cmd_invariance)) {
      bvm::Predicate p = load_predicate(*space, args);
      std::vector<bvm::Permutation> perms = bvm::generator_set(space->K());
      std::mt19937_64 rng(args.seed);
      for (int i = 0; i < args.sample; ++i) {
        std::vector<int> image(space->K());
        std::iota(image.begin(), image.end(), 0);
        std::shuffle(image.begin(), image.end(), rng);
        perms.push_back(bvm::permutation_from_image(image));
      }
      bvm::Json j = bvm::invariance_report_json(*space, p, perms);
      emit(j, args.out_path);
      bool ok = j["extensionality"]["extensional"].get<bool>() &&
                j["invariance"]["invariant"].get<bool>();
      return ok ? 0 : 2;
    }
    if (app.got_subcommand(cmd_atoms)) {
      std::vector<bvm::Predicate> atoms = bvm::invariant_atoms(*space, args.arity);
      emit(bvm::atoms_json(*space, args.arity, atoms), args.out_path);
      return 0;
    }
    if (app.got_subcommand(cmd_synthesize)) {
      bvm::Predicate p = load_predicate(*space, args);
      bvm::SynthesisResult result = bvm::synthesize_definition(*space, p);
      emit(bvm::synthesis_json(*space, result), args.out_path);
      return result.verified ? 0 : 2;
    }
    if (app.got_subcommand(cmd_verify)) {
      bvm::Predicate p = bvm::predicate_from_json(
          *space, bvm::load_json_file(args.predicate_path));
      bvm::Formula f =
          bvm::parse_formula(args.formula_text, space->models().theory.sig);
      bvm::VerifyReport report = bvm::verify_definition(*space, p, f);
      emit(bvm::verify_json(*space, p, f, report), args.out_path);
      return report.matches ? 0 : 2;
    }
    if (app.got_subcommand(cmd_conservativity)) {
      std::vector<bvm::Formula> sentences =
          load_sentences(args.sentences_path, space->models().theory.sig);
      bvm::ConservativityReport report =
          bvm::conservativity_report(*space, sentences);
      emit(bvm::conservativity_json(report), args.out_path);
      return report.all_agree ? 0 : 2;
    }
  } catch (const bvm::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
