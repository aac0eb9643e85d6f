// GraphRx: graph machine learning core for drug discovery workloads.
// SPDX-License-Identifier: Apache-2.0

#include "graphrx/cli/commands.hpp"

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <numeric>
#include <sstream>

#include <CLI11.hpp>

#include "graphrx/error.hpp"
#include "graphrx/gnn/property.hpp"
#include "graphrx/io/checkpoint.hpp"
#include "graphrx/io/formats.hpp"
#include "graphrx/kg/eval.hpp"
#include "graphrx/kg/train.hpp"
#include "graphrx/rng.hpp"
#include "graphrx/smiles.hpp"

namespace graphrx::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr const char* kVersion = "1.0.0";

// Line-delimited report writer; the first record always echoes the
// effective configuration.
class ReportWriter {
public:
  ReportWriter(const RunConfig& config, const std::string& filename) {
    fs::create_directories(config.out_dir());
    path_ = (fs::path(config.out_dir()) / filename).string();
    out_.open(path_, std::ios::trunc);
    if (!out_) throw IoError("cannot write report " + path_);
    json header = config.echo();
    header["event"] = "config";
    write(header);
  }

  void write(const json& record) { out_ << record.dump() << '\n'; }
  const std::string& path() const { return path_; }

private:
  std::string path_;
  std::ofstream out_;
};

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  return lines;
}

json metrics_json(const kg::DirectionMetrics& m) {
  return json{{"mr", m.mr}, {"mrr", m.mrr}, {"hits1", m.hits1}, {"hits3", m.hits3},
              {"hits10", m.hits10}};
}

json report_json(const kg::EvalReport& report) {
  return json{{"head", metrics_json(report.head)},
              {"tail", metrics_json(report.tail)},
              {"combined", metrics_json(report.combined)}};
}

json property_metrics_json(const gnn::PropertyMetrics& metrics, gnn::TaskKind task) {
  json out;
  if (task == gnn::TaskKind::binary_classification) {
    if (metrics.auroc.has_value())
      out["auroc"] = *metrics.auroc;
    else
      out["auroc"] = "absent";
    out["accuracy"] = metrics.accuracy;
  } else {
    out["rmse"] = metrics.rmse;
    out["mae"] = metrics.mae;
  }
  return out;
}

kg::EmbeddingModel model_from_checkpoint(const io::Checkpoint& checkpoint) {
  kg::ModelConfig config;
  config.kind = kg::model_kind_from_string(checkpoint.model_kind);
  config.dim = checkpoint.config.at("config").at("dim").get<int64_t>();
  config.seed = checkpoint.meta.value("seed", uint64_t(0));
  kg::EmbeddingModel model(config, int64_t(checkpoint.entities.size()),
                           int64_t(checkpoint.relations.size()));
  const Tensor& entity = checkpoint.tensor("entity_table");
  const Tensor& relation = checkpoint.tensor("relation_table");
  if (!entity.same_shape(model.entity_table().value) ||
      !relation.same_shape(model.relation_table().value))
    throw CheckpointError("checkpoint tensors do not match the declared model configuration");
  model.entity_table().value = entity;
  model.relation_table().value = relation;
  return model;
}

void require_store_matches(const io::Checkpoint& checkpoint, const kg::TripletStore& store) {
  if (checkpoint.entities != store.entities() || checkpoint.relations != store.relations())
    throw CheckpointError(
        "checkpoint vocabulary does not match the dataset (different entities or relations)");
}

gnn::PropertyConfig property_config_from(const json& echo, uint64_t seed) {
  const json& c = echo.at("config");
  gnn::PropertyConfig config;
  config.layer = gnn::layer_kind_from_string(c.at("layer"));
  config.num_layers = c.at("layers").get<int64_t>();
  config.hidden = c.at("hidden").get<int64_t>();
  config.readout = gnn::readout_kind_from_string(c.at("readout"));
  config.task = gnn::task_kind_from_string(c.at("task"));
  config.seed = seed;
  return config;
}

}  // namespace

std::string version_line() {
  return std::string("graphrx ") + kVersion + " (checkpoint format " +
         std::to_string(io::kCheckpointFormatVersion) + ", feature scheme " +
         std::to_string(kFeatureSchemeVersion) + ")";
}

int cmd_mol_parse(const RunConfig& config, std::ostream& out, std::ostream& err) {
  std::vector<std::string> lines = read_lines(config.get_text("input"));
  ReportWriter report(config, "report.jsonl");
  int64_t parsed = 0, failed = 0, stereo = 0;
  std::vector<std::string> first_errors;
  for (size_t i = 0; i < lines.size(); ++i) {
    SmilesWarnings warnings;
    try {
      Molecule m = from_smiles(lines[i], &warnings);
      stereo += warnings.discarded_stereo;
      report.write(json{{"event", "molecule"},
                        {"line", i + 1},
                        {"smiles", lines[i]},
                        {"atoms", m.num_atoms()},
                        {"bonds", m.num_bonds()},
                        {"components", m.num_components()},
                        {"formula", m.formula()}});
      ++parsed;
    } catch (const ParseError& e) {
      report.write(json{{"event", "parse_error"}, {"line", i + 1}, {"error", e.what()}});
      if (first_errors.size() < 5)
        first_errors.push_back("line " + std::to_string(i + 1) + ": " + e.what());
      ++failed;
    }
  }
  if (stereo > 0)
    report.write(json{{"event", "warnings"}, {"discarded_stereo", stereo}});
  report.write(json{{"event", "summary"},
                    {"parsed", parsed},
                    {"failed", failed},
                    {"first_errors", first_errors}});
  out << "mol-parse: " << parsed << " parsed, " << failed << " failed -> " << report.path()
      << "\n";
  if (failed > 0) err << "mol-parse: " << failed << " lines failed to parse\n";
  return failed > 0 ? 1 : 0;
}

int cmd_mol_viz(const RunConfig& config, std::ostream& out, std::ostream&) {
  std::vector<std::string> lines = read_lines(config.get_text("input"));
  fs::create_directories(config.out_dir());
  std::string path = (fs::path(config.out_dir()) / "molecules.dot").string();
  std::ofstream dot(path, std::ios::trunc);
  if (!dot) throw IoError("cannot write " + path);
  for (size_t i = 0; i < lines.size(); ++i) {
    Molecule m;
    try {
      m = from_smiles(lines[i]);
    } catch (const ParseError& e) {
      throw ParseError("line " + std::to_string(i + 1) + ": " + e.what());
    }
    dot << io::to_dot(m, "mol_" + std::to_string(i));
  }
  out << "mol-viz: " << lines.size() << " molecules -> " << path << "\n";
  return 0;
}

int cmd_gen_kg(const RunConfig& config, std::ostream& out, std::ostream&) {
  int64_t n = config.get_int("entities");
  if (n < 8) throw ConfigError("gen-kg needs entities >= 8, got " + std::to_string(n));

  auto name = [](int64_t i) { return "e" + std::to_string(i); };
  std::vector<std::array<std::string, 3>> facts;
  for (int64_t i = 0; i < n; ++i) {
    facts.push_back({name(i), "succ", name((i + 1) % n)});
    facts.push_back({name(i), "plus2", name((i + 2) % n)});
    facts.push_back({name((i + 1) % n), "inv_succ", name(i)});
  }
  Rng rng(config.seed());
  rng.shuffle(facts);

  int64_t total = int64_t(facts.size());
  int64_t train_count = total * 8 / 10;
  int64_t valid_count = total / 10;

  fs::create_directories(config.out_dir());
  auto write_split = [&](const std::string& filename, int64_t begin, int64_t end) {
    std::string path = (fs::path(config.out_dir()) / filename).string();
    std::ofstream file(path, std::ios::trunc);
    if (!file) throw IoError("cannot write " + path);
    for (int64_t i = begin; i < end; ++i)
      file << facts[size_t(i)][0] << '\t' << facts[size_t(i)][1] << '\t' << facts[size_t(i)][2]
           << '\n';
  };
  write_split("train.tsv", 0, train_count);
  write_split("valid.tsv", train_count, train_count + valid_count);
  write_split("test.tsv", train_count + valid_count, total);
  out << "gen-kg: " << total << " facts over " << n << " entities -> " << config.out_dir()
      << " (train " << train_count << ", valid " << valid_count << ", test "
      << total - train_count - valid_count << ")\n";
  return 0;
}

int cmd_kg_train(const RunConfig& config, std::ostream& out, std::ostream&) {
  kg::TripletStore store = kg::TripletStore::load_dir(config.get_text("data"));

  kg::ModelConfig model_config;
  model_config.kind = kg::model_kind_from_string(config.get_text("model"));
  model_config.dim = config.get_int("dim");
  model_config.seed = config.seed();
  kg::EmbeddingModel model(model_config, store.num_entities(), store.num_relations());

  std::string resume = config.get_text("resume");
  if (!resume.empty()) {
    io::Checkpoint previous = io::load_checkpoint(resume);
    if (previous.model_kind != config.get_text("model") ||
        previous.config.at("config").at("dim").get<int64_t>() != model_config.dim)
      throw CheckpointError("resume refused: checkpoint is " + previous.model_kind + "/dim " +
                            previous.config.at("config").at("dim").dump() +
                            ", requested " + config.get_text("model") + "/dim " +
                            std::to_string(model_config.dim));
    require_store_matches(previous, store);
    model.entity_table().value = previous.tensor("entity_table");
    model.relation_table().value = previous.tensor("relation_table");
  }

  kg::TrainConfig train_config;
  train_config.epochs = config.get_int("epochs");
  train_config.batch_size = config.get_int("batch_size");
  train_config.lr = float(config.get_real("lr"));
  train_config.negatives = config.get_int("negatives");
  train_config.loss = kg::loss_kind_from_string(config.get_text("loss"));
  train_config.margin = float(config.get_real("margin"));
  train_config.adversarial_temperature = float(config.get_real("adversarial_temperature"));
  train_config.negative_mode = config.get_text("negative_mode") == "filtered"
                                   ? kg::NegativeMode::filtered
                                   : kg::NegativeMode::uniform;
  train_config.optimizer = optimizer_kind_from_string(config.get_text("optimizer"));
  train_config.seed = config.seed();

  ReportWriter metrics(config, "metrics.jsonl");
  kg::TrainResult result = kg::train_kg(store, model, train_config, [&](int64_t epoch, float loss) {
    metrics.write(json{{"event", "epoch"}, {"epoch", epoch}, {"loss", loss}});
  });
  if (result.filter_giveups > 0)
    metrics.write(json{{"event", "warnings"}, {"filter_giveups", result.filter_giveups}});

  double valid_mrr = 0;
  bool filtered = config.get_flag("filtered");
  if (!store.valid().empty()) {
    kg::EvalReport report = kg::evaluate_split(store, model, kg::Split::valid, filtered);
    valid_mrr = report.combined.mrr;
    metrics.write(json{{"event", "eval"},
                       {"split", "valid"},
                       {"filtered", filtered},
                       {"metrics", report_json(report)},
                       {"triples", report.triple_count}});
  }

  io::Checkpoint checkpoint;
  checkpoint.model_kind = config.get_text("model");
  checkpoint.config = config.echo();
  checkpoint.meta = json{{"seed", config.seed()},
                         {"epoch", train_config.epochs},
                         {"metric", valid_mrr}};
  checkpoint.tensors.emplace_back("entity_table", model.entity_table().value);
  checkpoint.tensors.emplace_back("relation_table", model.relation_table().value);
  checkpoint.entities = store.entities();
  checkpoint.relations = store.relations();
  std::string checkpoint_path = (fs::path(config.out_dir()) / "checkpoint.grx").string();
  io::save_checkpoint(checkpoint_path, checkpoint);

  out << "kg-train: " << config.get_text("model") << " d=" << model_config.dim << " epochs="
      << train_config.epochs << " final_loss="
      << (result.epoch_loss.empty() ? 0.f : result.epoch_loss.back()) << " valid_mrr="
      << valid_mrr << " -> " << checkpoint_path << "\n";
  return 0;
}

int cmd_kg_eval(const RunConfig& config, std::ostream& out, std::ostream&) {
  io::Checkpoint checkpoint = io::load_checkpoint(config.get_text("checkpoint"));
  kg::TripletStore store = kg::TripletStore::load_dir(config.get_text("data"));
  require_store_matches(checkpoint, store);
  kg::EmbeddingModel model = model_from_checkpoint(checkpoint);

  std::string split_name = config.get_text("split");
  kg::Split split = split_name == "train"   ? kg::Split::train
                    : split_name == "valid" ? kg::Split::valid
                    : split_name == "test"
                        ? kg::Split::test
                        : throw ConfigError("unknown split \"" + split_name + "\"");
  bool filtered = config.get_flag("filtered");
  kg::EvalReport report = kg::evaluate_split(store, model, split, filtered);

  ReportWriter writer(config, "report.jsonl");
  writer.write(json{{"event", "eval"},
                    {"split", split_name},
                    {"filtered", filtered},
                    {"metrics", report_json(report)},
                    {"triples", report.triple_count}});

  out << "kg-eval " << checkpoint.model_kind << " on " << split_name
      << (filtered ? " (filtered)" : " (raw)") << ", " << report.triple_count << " triples\n";
  out << std::fixed << std::setprecision(4);
  out << "  direction      MR     MRR   hits@1  hits@3  hits@10\n";
  auto row = [&](const char* name, const kg::DirectionMetrics& m) {
    out << "  " << std::left << std::setw(9) << name << std::right << std::setw(8) << m.mr
        << std::setw(8) << m.mrr << std::setw(8) << m.hits1 << std::setw(8) << m.hits3
        << std::setw(9) << m.hits10 << "\n";
  };
  row("head", report.head);
  row("tail", report.tail);
  row("combined", report.combined);
  return 0;
}

int cmd_kg_query(const RunConfig& config, std::ostream& out, std::ostream&) {
  io::Checkpoint checkpoint = io::load_checkpoint(config.get_text("checkpoint"));
  kg::TripletStore store = kg::TripletStore::load_dir(config.get_text("data"));
  require_store_matches(checkpoint, store);
  kg::EmbeddingModel model = model_from_checkpoint(checkpoint);

  std::string head = config.get_text("head");
  std::string relation = config.get_text("relation");
  auto results = kg::query_topk(store, model, head, relation, config.get_int("k"),
                                config.get_flag("include_known"));

  json entries = json::array();
  out << "kg-query (" << head << ", " << relation << ", ?) top " << results.size() << "\n";
  out << std::fixed << std::setprecision(4);
  for (size_t i = 0; i < results.size(); ++i) {
    const std::string& name = store.entity_name(results[i].entity);
    entries.push_back(json{{"entity", name}, {"score", results[i].score}});
    out << "  " << std::setw(3) << i + 1 << ". " << std::left << std::setw(24) << name
        << std::right << results[i].score << "\n";
  }
  ReportWriter writer(config, "report.jsonl");
  writer.write(json{{"event", "query"},
                    {"head", head},
                    {"relation", relation},
                    {"results", entries}});
  return 0;
}

int cmd_prop_train(const RunConfig& config, std::ostream& out, std::ostream&) {
  io::CsvLoadStats stats;
  gnn::PropertyDataset dataset =
      io::load_property_csv(config.get_text("data"), config.get_text("label"), &stats);
  if (dataset.size() == 0) throw ConfigError("dataset has no usable rows");

  gnn::PropertyConfig model_config;
  model_config.layer = gnn::layer_kind_from_string(config.get_text("layer"));
  model_config.num_layers = config.get_int("layers");
  model_config.hidden = config.get_int("hidden");
  model_config.readout = gnn::readout_kind_from_string(config.get_text("readout"));
  model_config.task = gnn::task_kind_from_string(config.get_text("task"));
  model_config.seed = config.seed();
  gnn::PropertyModel model(model_config);

  gnn::SplitSpec split_spec;
  split_spec.kind = gnn::split_kind_from_string(config.get_text("split"));
  split_spec.train_fraction = config.get_real("train_fraction");
  split_spec.valid_fraction = config.get_real("valid_fraction");
  split_spec.test_fraction = config.get_real("test_fraction");
  split_spec.seed = config.seed();
  gnn::SplitIndices split = gnn::split_dataset(dataset, split_spec);

  ReportWriter metrics(config, "metrics.jsonl");
  if (stats.missing_label + stats.parse_failures > 0)
    metrics.write(json{{"event", "warnings"},
                       {"missing_label", stats.missing_label},
                       {"parse_failures", stats.parse_failures},
                       {"first_errors", stats.first_errors}});

  gnn::PropertyTrainConfig train_config;
  train_config.epochs = config.get_int("epochs");
  train_config.batch_size = config.get_int("batch_size");
  train_config.lr = float(config.get_real("lr"));
  train_config.seed = config.seed();

  gnn::PropertyTrainResult result = gnn::train_property(
      dataset, model, split, train_config, [&](int64_t epoch, const gnn::EpochRecord& record) {
        metrics.write(json{{"event", "property_epoch"},
                           {"epoch", epoch},
                           {"train_loss", record.train_loss},
                           {"valid_metric", record.valid_metric}});
      });

  model.load_state(result.best_state);
  gnn::PropertyMetrics valid_metrics = gnn::evaluate_property(model, dataset, split.valid);
  gnn::PropertyMetrics test_metrics = gnn::evaluate_property(model, dataset, split.test);
  metrics.write(json{{"event", "property_eval"},
                     {"subset", "valid"},
                     {"metrics", property_metrics_json(valid_metrics, model_config.task)},
                     {"count", valid_metrics.count}});
  metrics.write(json{{"event", "property_eval"},
                     {"subset", "test"},
                     {"metrics", property_metrics_json(test_metrics, model_config.task)},
                     {"count", test_metrics.count}});

  io::Checkpoint checkpoint;
  checkpoint.model_kind = "property";
  checkpoint.config = config.echo();
  checkpoint.feature_scheme_version = kFeatureSchemeVersion;
  double best_metric = 0;
  if (model_config.task == gnn::TaskKind::binary_classification)
    best_metric = valid_metrics.auroc.value_or(0.5);
  else
    best_metric = valid_metrics.rmse;
  checkpoint.meta =
      json{{"seed", config.seed()}, {"epoch", result.best_epoch}, {"metric", best_metric}};
  auto params = model.parameters();
  for (Parameter* p : params) checkpoint.tensors.emplace_back(p->name, p->value);
  std::string checkpoint_path = (fs::path(config.out_dir()) / "checkpoint.grx").string();
  io::save_checkpoint(checkpoint_path, checkpoint);

  out << "prop-train: " << gnn::to_string(model_config.layer) << " layers="
      << model_config.num_layers << " hidden=" << model_config.hidden << " best_epoch="
      << result.best_epoch << " valid=" << best_metric << " -> " << checkpoint_path << "\n";
  return 0;
}

int cmd_prop_eval(const RunConfig& config, std::ostream& out, std::ostream&) {
  io::Checkpoint checkpoint = io::load_checkpoint(config.get_text("checkpoint"));
  if (checkpoint.model_kind != "property")
    throw CheckpointError("prop-eval needs a property checkpoint, found \"" +
                          checkpoint.model_kind + "\"");
  if (checkpoint.feature_scheme_version != kFeatureSchemeVersion)
    throw CheckpointError("checkpoint feature scheme version " +
                          std::to_string(checkpoint.feature_scheme_version) +
                          " does not match this build's version " +
                          std::to_string(kFeatureSchemeVersion));

  gnn::PropertyConfig model_config =
      property_config_from(checkpoint.config, checkpoint.meta.value("seed", uint64_t(0)));
  gnn::PropertyModel model(model_config);
  std::vector<Tensor> state;
  state.reserve(checkpoint.tensors.size());
  for (const auto& [name, tensor] : checkpoint.tensors) state.push_back(tensor);
  model.load_state(state);

  std::string label_column = checkpoint.config.at("config").at("label");
  io::CsvLoadStats stats;
  gnn::PropertyDataset dataset =
      io::load_property_csv(config.get_text("data"), label_column, &stats);
  if (dataset.size() == 0) throw ConfigError("dataset has no usable rows");

  std::vector<int64_t> all(static_cast<size_t>(dataset.size()));
  std::iota(all.begin(), all.end(), 0);
  gnn::PropertyMetrics metrics = gnn::evaluate_property(model, dataset, all);

  ReportWriter writer(config, "report.jsonl");
  if (stats.missing_label + stats.parse_failures > 0)
    writer.write(json{{"event", "warnings"},
                      {"missing_label", stats.missing_label},
                      {"parse_failures", stats.parse_failures},
                      {"first_errors", stats.first_errors}});
  writer.write(json{{"event", "property_eval"},
                    {"subset", "all"},
                    {"metrics", property_metrics_json(metrics, model_config.task)},
                    {"count", metrics.count}});

  out << "prop-eval: " << metrics.count << " molecules";
  if (model_config.task == gnn::TaskKind::binary_classification) {
    out << " auroc=";
    if (metrics.auroc.has_value())
      out << *metrics.auroc;
    else
      out << "absent";
    out << " accuracy=" << metrics.accuracy;
  } else {
    out << " rmse=" << metrics.rmse << " mae=" << metrics.mae;
  }
  out << "\n";
  return 0;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"graphrx: graph machine learning for drug discovery workloads"};
  app.require_subcommand(0, 1);
  bool show_version = false;
  app.add_flag("--version", show_version, "print library and format versions");

  struct SubState {
    std::string config_path;
    uint64_t seed = 0;
    std::string out_dir = ".";
    std::vector<std::string> overrides;
  };
  std::map<std::string, SubState> states;
  using Handler = int (*)(const RunConfig&, std::ostream&, std::ostream&);
  const std::pair<const char*, Handler> commands[] = {
      {"mol-parse", cmd_mol_parse}, {"mol-viz", cmd_mol_viz},   {"gen-kg", cmd_gen_kg},
      {"kg-train", cmd_kg_train},   {"kg-eval", cmd_kg_eval},   {"kg-query", cmd_kg_query},
      {"prop-train", cmd_prop_train}, {"prop-eval", cmd_prop_eval},
  };
  for (const auto& [name, handler] : commands) {
    CLI::App* sub = app.add_subcommand(name);
    SubState& state = states[name];
    sub->add_option("--config", state.config_path, "JSON config file");
    sub->add_option("--seed", state.seed, "random seed");
    sub->add_option("--out", state.out_dir, "output directory");
    sub->add_option("overrides", state.overrides, "key=value settings");
  }

  // CLI11 wants argv-style reversed input.
  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    std::stringstream capture;
    int code = app.exit(e, capture, capture);
    (code == 0 ? out : err) << capture.str();
    return code;
  }

  if (show_version) {
    out << version_line() << "\n";
    return 0;
  }

  try {
    for (const auto& [name, handler] : commands) {
      if (app.got_subcommand(name)) {
        const SubState& state = states[name];
        RunConfig config = RunConfig::assemble(name, state.config_path, state.overrides,
                                               state.seed, state.out_dir);
        return handler(config, out, err);
      }
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return 1;
  }
  out << app.help();
  return 0;
}

}  // namespace graphrx::cli
