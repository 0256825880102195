#include "fjscale/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "fjscale/animals.hpp"
#include "fjscale/dimensions.hpp"
#include "fjscale/families.hpp"
#include "fjscale/network.hpp"
#include "fjscale/percolation.hpp"
#include "fjscale/scalability.hpp"
#include "fjscale/service.hpp"
#include "fjscale/simulation.hpp"

namespace fjscale::cli {

namespace {

using nlohmann::json;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void emit(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
  } else {
    write_file_atomically(path, text);
  }
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw UsageError(path + ": " + e.what());
  }
}

struct FamilyArgs {
  std::string kind = "tandem";
  int index = 1;
  std::vector<int> indices;
  int buffer_size = 1;
  int d = 2;
  int clique = 5;

  void add(CLI::App* cmd, bool single_index, bool many_indices) {
    cmd->add_option("--family", kind, "Family kind")->required();
    if (single_index) cmd->add_option("--index", index, "Family index i");
    if (many_indices) cmd->add_option("--indices", indices, "Family indices")->delimiter(',');
    cmd->add_option("--b", buffer_size, "Buffer size");
    cmd->add_option("--d", d, "Lattice dimension");
    cmd->add_option("--clique", clique, "Clique size for complete_plus_tandem");
  }

  FamilySpec spec() const {
    FamilySpec s;
    s.kind = family_kind_from_string(kind);
    s.index = index;
    s.buffer_size = buffer_size;
    s.lattice_dim = d;
    s.clique_size = clique;
    check_spec(s);
    return s;
  }
};

struct DistArgs {
  std::string dist_json;
  double alpha = 0;

  void add(CLI::App* cmd) {
    cmd->add_option("--dist", dist_json, R"(Distribution as JSON, e.g. {"kind":"pareto","alpha":2.5})");
    cmd->add_option("--alpha", alpha, "Shorthand for pareto(alpha, 1)");
  }

  ServiceDistribution get() const {
    if (!dist_json.empty()) {
      json doc;
      try {
        doc = json::parse(dist_json);
      } catch (const json::exception& e) {
        throw UsageError(std::string("--dist: ") + e.what());
      }
      return distribution_from_json(doc);
    }
    if (alpha > 0) return ServiceDistribution::pareto(alpha, 1.0);
    throw UsageError("give --dist or --alpha");
  }
};

std::string simulate_csv(const FamilySpec& family, const ServiceDistribution& dist,
                         const std::vector<int>& indices, const SimulationConfig& config) {
  std::ostringstream csv;
  csv << "family,index,num_nodes,diameter,alpha,replication,throughput,std_error,seed\n";
  const auto alpha = dist.rv_index();
  const auto curve = throughput_curve(family, dist, indices, config);
  const std::string label = family_label(family);
  const std::string name = label.substr(0, label.rfind('_'));
  for (const auto& p : curve) {
    for (std::size_t r = 0; r < p.estimate.per_replication.size(); ++r) {
      csv << name << ',' << p.index << ',' << p.num_nodes << ',' << p.diameter << ','
          << (alpha ? num(*alpha) : std::string("none")) << ',' << r << ','
          << num(p.estimate.per_replication[r]) << ',' << num(p.estimate.std_error) << ',' << p.seed
          << '\n';
    }
  }
  return csv.str();
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Fork-join queueing network scalability toolkit", "fjscale"};
  app.require_subcommand(1);
  std::uint64_t seed = 1;
  std::string out_path;

  // gen
  auto* gen = app.add_subcommand("gen", "Generate a family member as a network file");
  FamilyArgs gen_family;
  gen_family.add(gen, true, false);
  gen->add_option("--out", out_path, "Output file (stdout if omitted)");

  // metrics
  auto* metrics = app.add_subcommand("metrics", "Topology metrics of a network file");
  std::string net_path;
  metrics->add_option("--network", net_path, "Network JSON file")->required();
  metrics->add_option("--out", out_path, "Output file");

  // simulate
  auto* simulate = app.add_subcommand("simulate", "Throughput curve as CSV");
  std::string config_path;
  FamilyArgs sim_family;
  DistArgs sim_dist;
  SimulationConfig sim_cfg;
  simulate->add_option("--config", config_path, "Experiment config JSON");
  simulate->add_option("--family", sim_family.kind, "Family kind");
  simulate->add_option("--indices", sim_family.indices, "Family indices")->delimiter(',');
  simulate->add_option("--b", sim_family.buffer_size, "Buffer size");
  simulate->add_option("--d", sim_family.d, "Lattice dimension");
  simulate->add_option("--clique", sim_family.clique, "Clique size");
  sim_dist.add(simulate);
  simulate->add_option("--m-max", sim_cfg.m_max, "Jobs per replication (0: 20000*b)");
  simulate->add_option("--warmup", sim_cfg.warmup, "Discarded jobs (default m_max/4)");
  simulate->add_option("--replications", sim_cfg.replications, "Replications");
  simulate->add_option("--out", out_path, "Output CSV");

  // dimension
  auto* dimension = app.add_subcommand("dimension", "Dimension report for a family");
  FamilyArgs dim_family;
  dim_family.add(dimension, false, true);
  EmSearchOptions em_opts;
  dimension->add_option("--lambda-max", em_opts.lambda_max, "Largest accepted multiplicity");
  dimension->add_option("--out", out_path, "Output file");

  // verdict
  auto* verdict = app.add_subcommand("verdict", "Scalability verdict for a family and tail index");
  FamilyArgs ver_family;
  ver_family.add(verdict, false, true);
  double ver_alpha = 0;
  bool computed = false;
  verdict->add_option("--alpha", ver_alpha, "Tail index")->required();
  verdict->add_flag("--computed", computed, "Use estimated dimensions over --indices instead of known values");
  verdict->add_option("--out", out_path, "Output file");

  // lpp
  auto* lpp = app.add_subcommand("lpp", "Heaviest precedence path as JSON lines");
  DistArgs lpp_dist;
  std::int64_t lpp_m = 0;
  int lpp_v = -1;
  std::uint64_t lpp_rep = 0;
  lpp->add_option("--network", net_path, "Network JSON file")->required();
  lpp->add_option("--m", lpp_m, "Job index")->required();
  lpp->add_option("--v", lpp_v, "Node (default: lowest-id sink)");
  lpp->add_option("--replication", lpp_rep, "Replication index");
  lpp_dist.add(lpp);
  lpp->add_option("--out", out_path, "Output file");

  // animal
  auto* animal = app.add_subcommand("animal", "Lattice-animal growth series as CSV");
  DistArgs animal_dist;
  int animal_K = 2;
  std::vector<std::int64_t> animal_sizes{100, 1000, 10000};
  int animal_reps = 16;
  std::string strategy = "best_of";
  animal->add_option("--K", animal_K, "Lattice dimension");
  animal->add_option("--sizes", animal_sizes, "Animal sizes")->delimiter(',');
  animal->add_option("--replications", animal_reps, "Replications");
  animal->add_option("--strategy", strategy, "greedy or best_of");
  animal_dist.add(animal);
  animal->add_option("--out", out_path, "Output CSV");

  // evt
  auto* evt = app.add_subcommand("evt", "Scaled maxima of Pareto samples as CSV");
  double evt_alpha = 2.0;
  std::vector<std::int64_t> evt_n{1000, 10000, 100000};
  int evt_reps = 10000;
  evt->add_option("--alpha", evt_alpha, "Pareto tail index");
  evt->add_option("--n", evt_n, "Sample sizes")->delimiter(',');
  evt->add_option("--replications", evt_reps, "Replications");
  evt->add_option("--out", out_path, "Output CSV");

  for (auto* cmd : {simulate, lpp, animal, evt, dimension})
    cmd->add_option("--seed", seed, "Base seed");

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (gen->parsed()) {
      json doc = to_json(generate(gen_family.spec()));
      doc["schema_version"] = kSchemaVersion;
      emit(out_path, doc.dump(2) + "\n", out);
    } else if (metrics->parsed()) {
      const Network net = load_network(net_path);
      json doc = to_json(compute_metrics(net));
      doc["schema_version"] = kSchemaVersion;
      doc["name"] = net.name();
      doc["num_nodes"] = net.num_nodes();
      emit(out_path, doc.dump(2) + "\n", out);
    } else if (simulate->parsed()) {
      FamilyArgs fam = sim_family;
      ServiceDistribution dist = ServiceDistribution::deterministic(1.0);
      SimulationConfig cfg = sim_cfg;
      std::string target = out_path;
      if (!config_path.empty()) {
        const json doc = read_json_file(config_path);
        try {
          const json& f = doc.at("family");
          fam.kind = f.at("kind").get<std::string>();
          fam.indices = f.at("indices").get<std::vector<int>>();
          fam.buffer_size = f.value("buffer_size", 1);
          fam.d = f.value("d", 2);
          fam.clique = f.value("clique_size", 5);
          dist = distribution_from_json(doc.at("distribution"));
          if (doc.contains("simulation")) {
            const json& s = doc["simulation"];
            cfg.m_max = s.value("m_max", cfg.m_max);
            cfg.warmup = s.value("warmup", cfg.warmup);
            cfg.replications = s.value("replications", cfg.replications);
          }
          if (target.empty()) target = doc.value("output", std::string());
        } catch (const json::exception& e) {
          throw UsageError(config_path + ": " + e.what());
        }
      } else {
        dist = sim_dist.get();
      }
      if (fam.indices.empty()) throw UsageError("no family indices given");
      cfg.seed = seed;
      FamilySpec spec = fam.spec();
      emit(target, simulate_csv(spec, dist, fam.indices, cfg), out);
    } else if (dimension->parsed()) {
      if (dim_family.indices.size() < 3) throw UsageError("dimension needs at least 3 --indices");
      ScalingOptions sc;
      sc.seed = seed;
      json doc = to_json(dimension_report(dim_family.spec(), dim_family.indices, em_opts, sc));
      doc["schema_version"] = kSchemaVersion;
      emit(out_path, doc.dump(2) + "\n", out);
    } else if (verdict->parsed()) {
      FamilySpec spec = ver_family.spec();
      double dim_s, dim_em;
      bool degree_ok = true, level_ok = true;
      if (computed) {
        if (ver_family.indices.size() < 4) throw UsageError("--computed needs at least 4 --indices");
        const auto report = dimension_report(spec, ver_family.indices);
        dim_s = report.scaling.value;
        dim_em = report.dim_em();
        const auto c1 = condition_one(spec, ver_family.indices);
        degree_ok = c1.degree_bounded;
        level_ok = c1.level_bounded;
      } else {
        const GroundTruth gt = ground_truth(spec);
        dim_s = gt.dim_scaling;
        dim_em = gt.dim_extended;
      }
      json doc = verdict_json(theorem_verdict(dim_s, dim_em, ver_alpha, degree_ok, level_ok));
      doc["schema_version"] = kSchemaVersion;
      doc["family"] = to_string(spec.kind);
      doc["dimension_source"] = computed ? "computed" : "known";
      emit(out_path, doc.dump(2) + "\n", out);
    } else if (lpp->parsed()) {
      const Network net = load_network(net_path);
      const ServiceDistribution dist = lpp_dist.get();
      const NodeId v = lpp_v >= 0 ? lpp_v : net.sinks().front();
      if (v >= net.num_nodes()) throw std::invalid_argument("--v is not a node of the network");
      if (lpp_m < 0) throw std::invalid_argument("--m must be >= 0");
      const PathResult path = extract_max_path(net, dist, lpp_m, v, seed, lpp_rep);
      const WeightField field(dist, seed, lpp_rep);
      std::ostringstream lines;
      for (const auto& p : path.nodes)
        lines << json{{"m", p.m}, {"v", p.v}, {"weight", field(p)}}.dump() << '\n';
      emit(out_path, lines.str(), out);
    } else if (animal->parsed()) {
      const auto series = animal_growth_rate(animal_K, animal_sizes, animal_dist.get(), animal_reps, seed,
                                             animal_strategy_from_string(strategy));
      std::ostringstream csv;
      csv << "n,mean,stderr\n";
      for (const auto& p : series) csv << p.n << ',' << num(p.mean) << ',' << num(p.std_error) << '\n';
      emit(out_path, csv.str(), out);
    } else if (evt->parsed()) {
      const ServiceDistribution dist = ServiceDistribution::pareto(evt_alpha, 1.0);
      std::ostringstream csv;
      csv << "n,mean,stderr\n";
      for (std::int64_t n : evt_n) {
        const auto r = evt_max_scaling(dist, n, evt_reps, seed);
        csv << n << ',' << num(r.mean_scaled_max) << ',' << num(r.std_error) << '\n';
      }
      emit(out_path, csv.str(), out);
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const BudgetExceeded& e) {
    err << "budget exceeded: " << e.what() << '\n';
    return kExitBudget;
  } catch (const NetworkError& e) {
    err << "invalid network: " << e.what() << '\n';
    return kExitInvalidInput;
  } catch (const std::invalid_argument& e) {
    err << "invalid input: " << e.what() << '\n';
    return kExitInvalidInput;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitOk;
}

}  // namespace fjscale::cli
