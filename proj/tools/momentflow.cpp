// momentflow: moment maps, gradient flows, and orbit verdicts for
// structure-constant tensors from the command line.

#include <CLI11.hpp>

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <thread>
#include <vector>

#include "momentflow/document.hpp"
#include "momentflow/orbit.hpp"
#include "momentflow/report.hpp"
#include "momentflow/rng.hpp"

namespace fs = std::filesystem;
using namespace momentflow;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitNonConvergence = 3;
constexpr int kExitInternal = 4;

struct RunOptions {
  std::string group = "gl";
  bool complexify = false;
  bool kempf_ness = false;
  bool allow_non_lie = false;
  bool history = false;
  std::optional<std::uint64_t> perturb_seed;
  FlowConfig flow;
  std::string output;
  std::string format = "json";
};

GroupTag parse_group(const std::string& group) {
  if (group == "gl") return GroupTag::GL_real;
  if (group == "sl") return GroupTag::SL_real;
  throw InputError("unknown group '" + group + "' (expected gl or sl)");
}

OrderedJson input_json(const BracketDocument& doc) {
  OrderedJson j;
  if (!doc.name.empty()) j["name"] = doc.name;
  j["digest"] = document_digest(doc);
  j["n"] = doc.n;
  j["field"] = doc.complex_field ? "complex" : "real";
  j["entry_count"] = doc.entries.size();
  return j;
}

OrderedJson config_json(const RunOptions& opt) {
  OrderedJson j;
  j["group"] = opt.group;
  j["complexify"] = opt.complexify;
  j["kempf_ness"] = opt.kempf_ness;
  j["allow_non_lie"] = opt.allow_non_lie;
  if (opt.perturb_seed) j["perturb_seed"] = *opt.perturb_seed;
  j["flow"] = to_json(opt.flow);
  return j;
}

int exit_code_for(const FlowResult& r) {
  switch (r.status) {
    case FlowStatus::Converged: return kExitOk;
    case FlowStatus::Diverged: return r.null_cone_indicator ? kExitOk : kExitNonConvergence;
    default: return kExitNonConvergence;
  }
}

/// Flow or check payloads share the model/vector setup.
struct PreparedInput {
  ActionModel model;
  Vec v;
  bool complex_model = false;
  std::optional<Bracket> real_bracket;          // set for real inputs
  std::optional<ComplexBracket> complex_bracket;  // set when complex model used
};

PreparedInput prepare(const BracketDocument& doc, const RunOptions& opt) {
  PreparedInput p;
  const bool complex_model = doc.complex_field || opt.complexify;
  if (doc.complex_field && opt.complexify)
    throw InputError("--complexify applies to real documents only");
  if (complex_model && opt.group == "sl")
    throw InputError("the SL model applies to real tensors only");
  p.complex_model = complex_model;
  if (complex_model) {
    p.model = complex_bracket_action_model(doc.n);
    p.complex_bracket = to_complex_bracket(doc);
    p.v = to_vector(*p.complex_bracket);
    if (!doc.complex_field) p.real_bracket = to_bracket(doc);
  } else {
    p.model = bracket_action_model(doc.n, parse_group(opt.group));
    p.real_bracket = to_bracket(doc);
    p.v = to_vector(*p.real_bracket);
  }
  if (opt.perturb_seed) {
    Rng rng(mix_seed(*opt.perturb_seed, "perturb"));
    if (complex_model) {
      const CMat g = random_well_conditioned_complex(rng, doc.n);
      p.complex_bracket = group_act<Complex>(g, *p.complex_bracket);
      p.v = to_vector(*p.complex_bracket);
      p.real_bracket.reset();
    } else {
      const Mat g = random_well_conditioned(rng, doc.n);
      p.real_bracket = group_act<double>(g, *p.real_bracket);
      p.v = to_vector(*p.real_bracket);
    }
  }
  return p;
}

OrderedJson limit_invariants_json(const PreparedInput& p, const Vec& limit) {
  constexpr double jacobi_tol = 1e-6;
  try {
    if (p.complex_model) {
      const ComplexBracket b = complex_bracket_from_vector(p.model.n, limit);
      return to_json(invariants(b, jacobi_tol));
    }
    const Bracket b = bracket_from_vector(p.model.n, limit);
    return to_json(invariants(b, jacobi_tol));
  } catch (const InputError&) {
    return OrderedJson();  // limit drifted off the Lie variety; report nothing
  }
}

std::pair<OrderedJson, int> run_flow(const BracketDocument& doc, const RunOptions& opt) {
  PreparedInput p = prepare(doc, opt);
  if (p.model.v_norm_sq(p.v) == 0.0) throw InputError("zero bracket");
  if (opt.kempf_ness && opt.group != "sl")
    throw InputError(
        "--kempf-ness requires --group sl: under GL the trace identity "
        "tr m(mu) = -|mu|^2 rules out minimal vectors for nonzero tensors");

  OrderedJson j;
  j["command"] = "flow";
  j["input"] = input_json(doc);
  j["config"] = config_json(opt);

  const FlowResult result = opt.kempf_ness ? flow_kempf_ness(p.model, p.v, opt.flow)
                                           : flow_projective(p.model, p.v, opt.flow);
  j["result"] = to_json(result, opt.history);
  if (result.status == FlowStatus::Converged) {
    const OrderedJson inv = limit_invariants_json(p, result.limit_point);
    if (!inv.is_null()) j["limit_invariants"] = inv;
  }
  return {j, exit_code_for(result)};
}

std::pair<OrderedJson, int> run_check(const BracketDocument& doc, const RunOptions& opt) {
  PreparedInput p = prepare(doc, opt);
  OrderedJson j;
  j["command"] = "check";
  j["input"] = input_json(doc);
  j["config"] = config_json(opt);

  const double defect = p.complex_model ? jacobi_defect(*p.complex_bracket)
                                        : jacobi_defect(*p.real_bracket);
  j["jacobi_defect"] = defect;
  const bool lie = defect < 1e-9;
  j["is_lie"] = lie;
  if (!lie && !opt.allow_non_lie)
    throw InputError("tensor is not a Lie bracket (jacobi defect " + format_double(defect) +
                     "); pass --allow-non-lie for raw moment data");

  const MomentValue mv = moment(p.model, p.v);
  j["moment"] = to_json(mv);
  if (p.model.v_norm_sq(p.v) > 0.0) {
    const CriticalCertificate cert = critical_residual(p.model, p.v);
    j["certificate"] = to_json(cert);
    j["critical"] = cert.residual < opt.flow.tol_residual;
    j["minimal"] = mv.matrix.norm() < opt.flow.tol_grad * mv.vector_norm_sq;
  }
  const int stab = stabilizer_dimension(p.model, p.v);
  j["stabilizer_dimension"] = stab;
  j["algebra_dimension"] = p.model.algebra_dim();
  j["orbit_dimension"] = p.model.algebra_dim() - stab;
  if (lie) {
    j["invariants"] = p.complex_model ? to_json(invariants(*p.complex_bracket, 1e-9))
                                      : to_json(invariants(*p.real_bracket, 1e-9));
  }
  return {j, kExitOk};
}

std::pair<OrderedJson, int> run_compare(const std::vector<BracketDocument>& docs,
                                        const RunOptions& opt) {
  OrderedJson j;
  j["command"] = "compare";
  j["config"] = config_json(opt);
  if (docs.size() == 1) {
    const BracketDocument& doc = docs[0];
    if (doc.complex_field)
      throw InputError("compare takes real documents (the complex side is built internally)");
    j["input"] = input_json(doc);
    const RealComplexReport r = compare_real_complex(
        to_bracket(doc), opt.flow, opt.perturb_seed.value_or(1));
    j["real_complex"] = to_json(r);
    return {j, kExitOk};
  }
  if (docs[0].complex_field || docs[1].complex_field)
    throw InputError("compare takes real documents");
  j["input"] = input_json(docs[0]);
  j["input_second"] = input_json(docs[1]);
  const RealFormsReport r =
      compare_real_forms(to_bracket(docs[0]), to_bracket(docs[1]), opt.flow);
  j["real_forms"] = to_json(r);
  return {j, kExitOk};
}

int worker_count(size_t items) {
  unsigned n = std::thread::hardware_concurrency();
  if (n == 0) n = 1;
  if (const char* env = std::getenv("MOMENTFLOW_THREADS")) {
    const long cap = std::strtol(env, nullptr, 10);
    if (cap > 0) n = std::min<unsigned>(n, static_cast<unsigned>(cap));
  }
  return static_cast<int>(std::min<size_t>(n, std::max<size_t>(items, 1)));
}

std::pair<OrderedJson, int> run_batch(const std::string& selector, const std::string& command,
                                      std::uint64_t seed, const RunOptions& base_opt) {
  std::vector<std::pair<std::string, BracketDocument>> items;
  if (selector.empty() || selector == "catalog") {
    for (const auto& entry : builtin_catalog()) items.emplace_back(entry.name, entry.doc);
  } else {
    if (!fs::is_directory(selector))
      throw InputError("batch selector must be 'catalog' or a directory: " + selector);
    std::vector<fs::path> paths;
    for (const auto& e : fs::directory_iterator(selector))
      if (e.is_regular_file() && e.path().extension() == ".json") paths.push_back(e.path());
    std::sort(paths.begin(), paths.end());
    for (const auto& path : paths) items.emplace_back(path.filename().string(), load_document(path));
  }

  std::vector<OrderedJson> rows(items.size());
  std::atomic<size_t> next{0};
  auto work = [&]() {
    while (true) {
      const size_t idx = next.fetch_add(1);
      if (idx >= items.size()) return;
      const auto& [name, doc] = items[idx];
      RunOptions opt = base_opt;
      // deterministic per-item stream regardless of scheduling
      opt.perturb_seed = base_opt.perturb_seed
                             ? std::optional<std::uint64_t>(mix_seed(seed, name))
                             : std::nullopt;
      OrderedJson row;
      row["item"] = name;
      try {
        auto [report, code] = command == "check" ? run_check(doc, opt)
                              : command == "compare"
                                  ? run_compare({doc}, opt)
                                  : run_flow(doc, opt);
        row["report"] = report;
        row["exit"] = code;
      } catch (const InputError& e) {
        row["error"] = e.what();
        row["exit"] = kExitInput;
      }
      rows[idx] = row;
    }
  };
  std::vector<std::thread> pool;
  const int workers = worker_count(items.size());
  pool.reserve(workers);
  for (int i = 0; i < workers; ++i) pool.emplace_back(work);
  for (auto& th : pool) th.join();

  OrderedJson j;
  j["command"] = "batch";
  j["subcommand"] = command;
  j["selector"] = selector.empty() ? "catalog" : selector;
  j["seed"] = seed;
  j["config"] = config_json(base_opt);
  j["rows"] = OrderedJson::array();
  for (auto& row : rows) j["rows"].push_back(std::move(row));
  return {j, kExitOk};
}

void emit(OrderedJson report, double wall_ms, const RunOptions& opt) {
  OrderedJson timing;
  timing["wall_ms"] = wall_ms;
  report["timing"] = timing;

  std::string text;
  if (opt.format == "csv") {
    std::vector<OrderedJson> rows;
    if (report.contains("rows")) {
      for (auto& row : report["rows"]) rows.push_back(row);
    } else {
      rows.push_back(report);
    }
    text = to_csv(rows);
  } else {
    text = dump_json(report) + "\n";
  }

  if (opt.output.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(opt.output, std::ios::binary);
    if (!out) throw InputError("cannot write output file: " + opt.output);
    out << text;
  }
}

void add_run_options(CLI::App* cmd, RunOptions& opt) {
  cmd->add_option("--group", opt.group, "Acting group: gl or sl")
      ->check(CLI::IsMember({"gl", "sl"}));
  cmd->add_flag("--complexify", opt.complexify,
                "Embed a real tensor into the realified complex representation");
  cmd->add_option("--tol-grad", opt.flow.tol_grad, "Gradient stopping tolerance");
  cmd->add_option("--tol-residual", opt.flow.tol_residual, "Certification residual tolerance");
  cmd->add_option("--max-time", opt.flow.max_flow_time, "Flow time budget");
  cmd->add_option("--max-steps", opt.flow.max_steps, "Accepted step budget");
  cmd->add_option("--record-stride", opt.flow.record_stride, "History sampling stride");
  cmd->add_flag("--allow-non-lie", opt.allow_non_lie, "Accept tensors violating Jacobi");
  cmd->add_option("--output", opt.output, "Write the report to a file instead of stdout");
  cmd->add_option("--format", opt.format, "Report format")->check(CLI::IsMember({"json", "csv"}));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"moment maps, gradient flows, and orbit verdicts for bracket tensors"};
  app.require_subcommand(1);

  RunOptions opt;
  std::string input, input_second, selector, batch_command = "flow";
  std::uint64_t perturb_seed = 0, batch_seed = 0;
  bool batch_perturb = false;

  CLI::App* flow = app.add_subcommand("flow", "Integrate the gradient flow from a bracket");
  flow->add_option("input", input, "Document path or catalog:<name>")->required();
  flow->add_flag("--kempf-ness", opt.kempf_ness, "Norm-minimizing flow on V (SL model)");
  auto* fseed = flow->add_option("--perturb-seed", perturb_seed,
                                 "Move the start by a seeded well-conditioned group element");
  flow->add_flag("--history", opt.history, "Include sampled trajectories in the report");
  add_run_options(flow, opt);

  CLI::App* check = app.add_subcommand("check", "Moment data, certificates and invariants");
  check->add_option("input", input, "Document path or catalog:<name>")->required();
  auto* cseed = check->add_option("--perturb-seed", perturb_seed, "Seeded start perturbation");
  add_run_options(check, opt);

  CLI::App* compare = app.add_subcommand(
      "compare", "Real vs complex verdicts (one input) or real-form comparison (two)");
  compare->add_option("input", input, "Document path or catalog:<name>")->required();
  compare->add_option("second", input_second, "Second document for real-form comparison");
  auto* pseed = compare->add_option("--perturb-seed", perturb_seed,
                                    "Seed for the complex-side perturbation");
  add_run_options(compare, opt);

  CLI::App* batch = app.add_subcommand("batch", "Run a command over the catalog or a directory");
  batch->add_option("selector", selector, "'catalog' (default) or a directory of documents");
  batch->add_option("--command", batch_command, "Command to run per item")
      ->check(CLI::IsMember({"flow", "check", "compare"}));
  batch->add_option("--seed", batch_seed, "Base seed for deterministic per-item streams");
  batch->add_flag("--perturb", batch_perturb, "Perturb each start with a per-item seed");
  add_run_options(batch, opt);

  CLI11_PARSE(app, argc, argv);

  const auto t0 = std::chrono::steady_clock::now();
  try {
    std::pair<OrderedJson, int> out;
    if (*flow) {
      if (*fseed) opt.perturb_seed = perturb_seed;
      out = run_flow(resolve_input(input), opt);
    } else if (*check) {
      if (*cseed) opt.perturb_seed = perturb_seed;
      out = run_check(resolve_input(input), opt);
    } else if (*compare) {
      if (*pseed) opt.perturb_seed = perturb_seed;
      std::vector<BracketDocument> docs{resolve_input(input)};
      if (!input_second.empty()) docs.push_back(resolve_input(input_second));
      out = run_compare(docs, opt);
    } else {
      if (batch_perturb) opt.perturb_seed = batch_seed;
      out = run_batch(selector, batch_command, batch_seed, opt);
    }
    const double wall_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    emit(std::move(out.first), wall_ms, opt);
    return out.second;
  } catch (const InputError& e) {
    std::cerr << "momentflow: error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::logic_error& e) {
    std::cerr << "momentflow: internal error: " << e.what() << "\n";
    return kExitInternal;
  } catch (const std::exception& e) {
    std::cerr << "momentflow: internal error: " << e.what() << "\n";
    return kExitInternal;
  }
}
