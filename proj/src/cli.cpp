#include "iopscan/cli.hpp"

#include <algorithm>
#include <csignal>
#include <fstream>
#include <optional>

#include <CLI11.hpp>

#include "iopscan/config.hpp"
#include "iopscan/errors.hpp"
#include "iopscan/pipeline.hpp"
#include "iopscan/service.hpp"
#include "iopscan/synthetic.hpp"

namespace iopscan {

namespace {

struct Options {
  std::string config_path;
  std::vector<std::string> overrides;
  std::string out_dir;
  std::vector<std::string> inputs;

  // serve
  std::optional<std::string> host;
  std::optional<int> port;

  // synth
  std::size_t rogue = 300;
  std::size_t regular = 700;
  std::uint64_t synth_seed = 1;
  std::string synth_output;
  std::string synth_truth;
  std::vector<std::string> synth_drugs;
};

PipelineConfig resolve_config(const Options& o) {
  PipelineConfig c = o.config_path.empty() ? default_config() : load_config(o.config_path);
  for (const auto& s : o.overrides) apply_override(c, s);
  if (!o.out_dir.empty()) c.output_dir = o.out_dir;
  if (!o.inputs.empty()) {
    c.inputs.clear();
    for (const auto& i : o.inputs) c.inputs.emplace_back(i);
  }
  return c;
}

int serve(const PipelineConfig& config, const Options& o, std::ostream& out) {
  auto artifacts = load_topic_artifacts(config);
  ServiceData data;
  data.model = std::move(artifacts.model);
  data.records = std::move(artifacts.records);
  data.doc_dists = std::move(artifacts.doc_dists);
  data.rogue_topics = config.rogue_topics;
  data.sample_tweets = config.sample_tweets;
  data.static_dir = config.static_dir;
  AnnotationStore store(config.resolved_annotation_log());

  // Handle SIGINT/SIGTERM synchronously; server threads inherit the mask.
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  AnnotationService service(std::move(data), store);
  const std::string host = o.host.value_or(config.host);
  const int port = service.start(host, o.port.value_or(config.port));
  out << "serving " << config.output_dir.string() << " on http://" << host << ':' << port << "/\n"
      << "annotations -> " << config.resolved_annotation_log().string() << "\n";
  out.flush();
  int sig = 0;
  sigwait(&signals, &sig);
  service.stop();
  pthread_sigmask(SIG_UNBLOCK, &signals, nullptr);
  out << "stopped\n";
  return kExitOk;
}

int synth(const Options& o, std::ostream& out) {
  if (o.synth_output.empty()) throw ConfigError("synth: --output is required");
  auto corpus = o.synth_drugs.empty() ? synthetic::tweet_corpus(o.rogue, o.regular, o.synth_seed)
                                      : synthetic::tweet_corpus(o.rogue, o.regular, o.synth_seed, o.synth_drugs);
  write_jsonl(o.synth_output, corpus.records);
  if (!o.synth_truth.empty()) {
    std::ofstream truth(o.synth_truth, std::ios::binary | std::ios::trunc);
    if (!truth) throw IoError("cannot write '" + o.synth_truth + "'");
    truth << "tweet_id,label\n";
    for (const auto& r : corpus.records) {
      truth << r.tweet_id << ',' << (corpus.rogue_ids.count(r.tweet_id) ? "Rogue" : "NonRogue") << '\n';
    }
  }
  out << "wrote " << corpus.records.size() << " tweets (" << corpus.rogue_ids.size() << " planted rogue) to "
      << o.synth_output << '\n';
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Detect tweets promoting illicit online pharmacies.", "iopscan"};
  app.require_subcommand(1);
  Options o;
  app.add_option("-c,--config", o.config_path, "Config file (INI-style sections)");
  app.add_option("-s,--set", o.overrides, "Override a config key: section.key=value");
  app.add_option("-o,--out", o.out_dir, "Output directory (output.dir)");

  std::map<std::string, CLI::App*> stages;
  const std::map<std::string, std::string> help = {
      {"ingest", "Read tweet JSONL into a normalized corpus"},
      {"filter", "Keep tweets naming a drug and report volume per drug"},
      {"topics", "Fit the biterm topic model and summarize topics"},
      {"isolate", "Select tweets whose dominant topic is a rogue topic"},
      {"features", "Label tweets and export the 13 metadata features"},
      {"stats", "Class means, Welch t-tests, ratios and account ages"},
      {"train", "Fit logistic regression per drug"},
      {"evaluate", "Repeated 70/30 split evaluation per drug"},
  };
  for (const auto& name : stage_names()) {
    stages[name] = app.add_subcommand(name, help.at(name));
  }
  stages["ingest"]->add_option("-i,--input", o.inputs, "Tweet JSONL files");
  auto* pipeline = app.add_subcommand("pipeline", "Run every stage, pausing at annotation gates");
  pipeline->add_option("-i,--input", o.inputs, "Tweet JSONL files");
  auto* serve_cmd = app.add_subcommand("serve", "Start the annotation service");
  serve_cmd->add_option("--host", o.host, "Bind address");
  serve_cmd->add_option("--port", o.port, "Port (0 picks a free one)");
  auto* synth_cmd = app.add_subcommand("synth", "Write a synthetic tweet corpus with planted rogue tweets");
  synth_cmd->add_option("--rogue", o.rogue, "Rogue tweets");
  synth_cmd->add_option("--regular", o.regular, "Regular tweets");
  synth_cmd->add_option("--seed", o.synth_seed, "Seed");
  synth_cmd->add_option("--drugs", o.synth_drugs, "Drug names to mention");
  synth_cmd->add_option("--output", o.synth_output, "Output JSONL")->required();
  synth_cmd->add_option("--truth", o.synth_truth, "Also write planted labels as tweet_id,label CSV");
  auto* config_cmd = app.add_subcommand("config", "Print the effective configuration");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n" << "run `iopscan --help` for usage\n";
    return kExitUsage;
  }

  try {
    const PipelineConfig config = resolve_config(o);
    if (*synth_cmd) return synth(o, out);
    if (*config_cmd) {
      out << canonical_text(config);
      return kExitOk;
    }
    validate(config);
    if (*serve_cmd) return serve(config, o, out);
    if (*pipeline) {
      run_pipeline(config, out);
      out << "pipeline complete; artifacts in " << config.output_dir.string() << '\n';
      return kExitOk;
    }
    for (const auto& [name, cmd] : stages) {
      if (!*cmd) continue;
      auto outcome = run_stage(name, config);
      out << outcome.summary;
      return kExitOk;
    }
    return kExitUsage;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const GateError& e) {
    err << e.what() << '\n';
    return kExitGate;
  } catch (const SchemaError& e) {
    err << "data error: " << e.what() << '\n';
    return kExitData;
  } catch (const DataError& e) {
    err << "data error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  }
}

}  // namespace iopscan
