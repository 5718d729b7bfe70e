#include "iopscan/pipeline.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include "iopscan/annotation_store.hpp"
#include "iopscan/classifier.hpp"
#include "iopscan/errors.hpp"
#include "iopscan/features.hpp"
#include "iopscan/manifest.hpp"
#include "iopscan/screening.hpp"

namespace iopscan {

namespace fs = std::filesystem;

namespace {

void require(const fs::path& artifact, const std::string& producer) {
  if (!fs::exists(artifact)) {
    throw GateError("missing " + artifact.filename().string() + " in " + artifact.parent_path().string() +
                    "; run `iopscan " + producer + "` first");
  }
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  return out;
}

void write_text(const fs::path& path, const std::string& text) {
  auto out = open_out(path);
  out << text;
  if (!out) throw IoError("error writing '" + path.string() + "'");
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> cells;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string sci(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

// Read-only view of the annotation log; a missing log is an empty one.
AnnotationStore open_store(const PipelineConfig& config) {
  const auto log = config.resolved_annotation_log();
  if (!fs::exists(log)) return AnnotationStore::in_memory();
  return AnnotationStore(log);
}

std::vector<std::string> read_candidate_ids(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  std::string line;
  std::getline(in, line);
  std::vector<std::string> ids;
  while (std::getline(in, line)) {
    if (!line.empty()) ids.push_back(split_csv(line).at(0));
  }
  return ids;
}

// Labeled feature vectors per analysis group: one per keyword with matching
// tweets, then every tweet under kAllDrugs.
std::vector<std::pair<std::string, std::vector<FeatureVector>>> drug_groups(
    const PipelineConfig& config, const std::vector<FeatureVector>& vectors,
    const std::vector<TweetRecord>& records) {
  std::unordered_map<std::string, const TweetRecord*> by_id;
  for (const auto& r : records) by_id.emplace(r.tweet_id, &r);
  std::vector<std::pair<std::string, std::vector<FeatureVector>>> groups;
  for (const auto& drug : config.keywords) {
    std::vector<FeatureVector> members;
    for (const auto& v : vectors) {
      auto it = by_id.find(v.tweet_id);
      if (it != by_id.end() && it->second->matched_keywords.count(drug)) members.push_back(v);
    }
    if (!members.empty()) groups.emplace_back(drug, std::move(members));
  }
  groups.emplace_back(kAllDrugs, vectors);
  return groups;
}

bool has_both_classes(const std::vector<FeatureVector>& vs) {
  bool rogue = false, regular = false;
  for (const auto& v : vs) {
    if (!v.label) continue;
    (*v.label == ClassLabel::Rogue ? rogue : regular) = true;
  }
  return rogue && regular;
}

StageOutcome stage_ingest(const PipelineConfig& config) {
  validate(config, true);
  const Artifacts a(config.output_dir);
  IngestReport report;
  auto records = ingest_files(config.inputs, config.schema_mode, &report);
  write_jsonl(a.corpus(), records);
  StageOutcome o;
  o.inputs = config.inputs;
  o.outputs = {a.corpus()};
  std::ostringstream s;
  s << "ingested " << records.size() << " records from " << config.inputs.size() << " file(s), "
    << report.lines_read << " lines read";
  if (report.skipped_malformed || report.skipped_duplicate) {
    s << "; skipped " << report.skipped_malformed << " malformed, " << report.skipped_duplicate
      << " duplicate";
  }
  s << "\n  -> " << a.corpus().string() << '\n';
  o.summary = s.str();
  return o;
}

StageOutcome stage_filter(const PipelineConfig& config) {
  const Artifacts a(config.output_dir);
  require(a.corpus(), "ingest");
  auto records = ingest_jsonl(a.corpus(), SchemaMode::Strict);
  auto kept = keyword_filter(records, KeywordSet(config.keywords), config.match_mode);
  write_jsonl(a.filtered(), kept);

  std::map<std::string, std::size_t> per_drug;
  for (const auto& k : config.keywords) per_drug[k] = 0;
  std::size_t other = 0;
  for (const auto& r : kept) {
    if (r.matched_keywords.size() == 1) ++per_drug[*r.matched_keywords.begin()];
    else ++other;
  }
  std::ostringstream csv;
  csv << "drug,tweets\n";
  for (const auto& [drug, n] : per_drug) csv << drug << ',' << n << '\n';
  csv << "other," << other << '\n';
  csv << "kept," << kept.size() << '\n';
  csv << "dropped," << records.size() - kept.size() << '\n';
  csv << "total," << records.size() << '\n';
  write_text(a.volume(), csv.str());

  StageOutcome o;
  o.inputs = {a.corpus()};
  o.outputs = {a.filtered(), a.volume()};
  std::ostringstream s;
  s << "kept " << kept.size() << " of " << records.size() << " tweets\n";
  for (const auto& [drug, n] : per_drug) s << "  " << drug << ": " << n << '\n';
  s << "  other (several drugs): " << other << "\n  dropped: " << records.size() - kept.size() << '\n';
  o.summary = s.str();
  return o;
}

StageOutcome stage_topics(const PipelineConfig& config) {
  validate(config);
  const Artifacts a(config.output_dir);
  require(a.filtered(), "filter");
  auto records = ingest_jsonl(a.filtered(), SchemaMode::Strict);
  const auto stopwords = load_stopwords(config.stopwords);
  auto corpus = tokenize_corpus(records, stopwords);
  const auto stats = build_doc_term(corpus.docs, corpus.vocabulary);
  const std::size_t k = config.k ? *config.k : choose_k(stats, config.k_cap);
  auto biterms = extract_biterms(corpus.docs, config.biterm_window);

  BtmConfig btm;
  btm.k = k;
  btm.alpha = config.alpha;
  btm.beta = config.beta;
  btm.iterations = config.iterations;
  btm.seed = config.btm_seed;
  auto model = fit(biterms.all, corpus.vocabulary.terms(), btm);

  std::vector<DocTopicDist> dists;
  dists.reserve(records.size());
  for (std::size_t d = 0; d < records.size(); ++d) {
    dists.push_back(infer_doc(model, records[d].tweet_id, biterms.per_doc[d]));
  }

  save_model(model, a.model());
  write_doc_topics(a.doc_topics(), dists);

  std::ostringstream words;
  words << "topic,rank,word,probability\n";
  for (std::size_t z = 0; z < k; ++z) {
    const auto top = top_words(model, z, std::min<std::size_t>(10, model.vocab_size));
    for (std::size_t r = 0; r < top.size(); ++r) {
      words << z << ',' << r + 1 << ',' << top[r].term << ',' << format_number(top[r].probability) << '\n';
    }
  }
  write_text(a.topic_words(), words.str());

  // Dominant-topic counts per drug.
  std::vector<std::string> drugs(config.keywords.begin(), config.keywords.end());
  std::vector<std::vector<std::size_t>> counts(k, std::vector<std::size_t>(drugs.size() + 1, 0));
  std::size_t degenerate = 0;
  for (std::size_t d = 0; d < records.size(); ++d) {
    if (dists[d].degenerate) {
      ++degenerate;
      continue;
    }
    auto& row = counts[dists[d].dominant_topic];
    for (std::size_t j = 0; j < drugs.size(); ++j) row[j] += records[d].matched_keywords.count(drugs[j]);
    ++row.back();
  }
  std::ostringstream vol;
  vol << "topic";
  for (const auto& d : drugs) vol << ',' << d;
  vol << ',' << kAllDrugs << '\n';
  for (std::size_t z = 0; z < k; ++z) {
    vol << z;
    for (auto n : counts[z]) vol << ',' << n;
    vol << '\n';
  }
  write_text(a.topic_volume(), vol.str());

  std::ostringstream report;
  report << topic_summary_report(model);
  report << "\n# documents: " << records.size() << ", without biterms: " << degenerate
         << ", vocabulary: " << corpus.vocabulary.size() << ", sparsity: " << format_number(stats.sparsity)
         << '\n';
  write_text(a.topics_report(), report.str());

  StageOutcome o;
  o.inputs = {a.filtered(), config.stopwords};
  o.outputs = {a.model(), a.doc_topics(), a.topic_words(), a.topic_volume(), a.topics_report()};
  o.seed = config.btm_seed;
  std::ostringstream s;
  s << "fitted " << k << " topics (" << (config.k ? "fixed" : "chosen from sparsity " + fixed(stats.sparsity, 4))
    << ") over " << biterms.all.size() << " biterms, " << config.iterations << " sweeps\n";
  for (std::size_t z = 0; z < k; ++z) {
    s << "  topic " << z << ":";
    for (const auto& wp : top_words(model, z, std::min<std::size_t>(10, model.vocab_size))) s << ' ' << wp.term;
    s << '\n';
  }
  s << "annotate each topic as Relevant, Irrelevant or NeedsInvestigation (`iopscan serve`)\n";
  o.summary = s.str();
  return o;
}

StageOutcome stage_isolate(const PipelineConfig& config) {
  const Artifacts a(config.output_dir);
  require(a.doc_topics(), "topics");
  require(a.model(), "topics");
  const auto model = load_model(a.model());
  const auto dists = read_doc_topics(a.doc_topics());

  std::set<std::size_t> rogue = config.rogue_topics;
  std::vector<std::size_t> review;
  if (rogue.empty()) {
    auto store = open_store(config);
    std::vector<TopicLabel> consensus;
    try {
      consensus = topic_consensus(store.topic_annotations(), model.k);
    } catch (const CoverageError& e) {
      std::string ids;
      for (const auto& id : e.missing()) ids += (ids.empty() ? "" : ", ") + id;
      throw GateError("topic annotation gate: " + std::to_string(e.missing().size()) + " of " +
                      std::to_string(model.k) + " topics have no annotation (" + ids +
                      "). Label them with `iopscan serve` or append events to " +
                      config.resolved_annotation_log().string() + ", then rerun.");
    }
    rogue = relevant_topics(consensus);
    review = topics_needing_review(consensus);
  } else if (*rogue.rbegin() >= model.k) {
    throw ConfigError("screening.rogue_topics: topic " + std::to_string(*rogue.rbegin()) +
                      " does not exist (model has " + std::to_string(model.k) + ")");
  }

  std::vector<std::string> ids;
  if (!rogue.empty()) ids = isolate_rogue(dists, rogue);
  std::unordered_map<std::string, const DocTopicDist*> by_id;
  for (const auto& d : dists) by_id.emplace(d.tweet_id, &d);
  std::ostringstream csv;
  csv << "tweet_id,dominant_topic,proportion\n";
  for (const auto& id : ids) {
    const auto* d = by_id.at(id);
    csv << id << ',' << d->dominant_topic << ',' << format_number(d->proportions[d->dominant_topic]) << '\n';
  }
  write_text(a.candidates(), csv.str());

  StageOutcome o;
  o.inputs = {a.doc_topics(), a.model()};
  if (config.rogue_topics.empty()) o.inputs.push_back(config.resolved_annotation_log());
  o.outputs = {a.candidates()};
  std::ostringstream s;
  s << "rogue topics:";
  for (auto z : rogue) s << ' ' << z;
  if (rogue.empty()) s << " none";
  s << "\nisolated " << ids.size() << " of " << dists.size() << " tweets\n";
  if (!review.empty()) {
    s << "topics needing another annotation pass:";
    for (auto z : review) s << ' ' << z;
    s << '\n';
  }
  s << "annotate each candidate as Rogue or NonRogue (`iopscan serve`)\n";
  o.summary = s.str();
  return o;
}

StageOutcome stage_features(const PipelineConfig& config) {
  const Artifacts a(config.output_dir);
  require(a.candidates(), "isolate");
  require(a.filtered(), "filter");
  const auto candidates = read_candidate_ids(a.candidates());
  const auto records = ingest_jsonl(a.filtered(), SchemaMode::Strict);
  auto store = open_store(config);
  const auto notes = store.tweet_annotations();

  double precision = 0.0;
  try {
    precision = rogue_precision(candidates, notes);
  } catch (const CoverageError& e) {
    throw GateError("tweet annotation gate: " + std::to_string(e.missing().size()) + " of " +
                    std::to_string(candidates.size()) +
                    " rogue candidates have no annotation. Label them with `iopscan serve` "
                    "(/tweets/rogue-candidates) or append events to " +
                    config.resolved_annotation_log().string() + ", then rerun.");
  }
  const std::set<std::string> isolated(candidates.begin(), candidates.end());
  const auto labels = label_dataset(records, isolated, notes);

  std::vector<FeatureVector> vectors;
  vectors.reserve(records.size());
  std::size_t rogue = 0;
  for (std::size_t i = 0; i < records.size(); ++i) {
    auto v = extract_features(records[i], config.entity_mode);
    v.label = labels[i].label;
    rogue += labels[i].label == ClassLabel::Rogue;
    vectors.push_back(std::move(v));
  }
  write_labels_csv(a.labels(), labels);
  write_features_csv(a.features(), vectors);

  StageOutcome o;
  o.inputs = {a.candidates(), a.filtered(), config.resolved_annotation_log()};
  o.outputs = {a.labels(), a.features()};
  std::ostringstream s;
  s << "labeled " << rogue << " rogue and " << records.size() - rogue << " regular tweets\n";
  if (!candidates.empty()) {
    s << "candidates annotated Rogue: " << fixed(100.0 * precision, 1) << "% of " << candidates.size() << '\n';
  }
  o.summary = s.str();
  return o;
}

StageOutcome stage_stats(const PipelineConfig& config) {
  const Artifacts a(config.output_dir);
  require(a.features(), "features");
  require(a.filtered(), "filter");
  const auto vectors = read_features_csv(a.features());
  const auto records = ingest_jsonl(a.filtered(), SchemaMode::Strict);
  std::unordered_map<std::string, const TweetRecord*> by_id;
  for (const auto& r : records) by_id.emplace(r.tweet_id, &r);

  std::ostringstream csv, txt, age;
  csv << "drug,feature,group,rogue_mean,nonrogue_mean,rogue_n,nonrogue_n,ratio_nonrogue_over_rogue,"
         "t_statistic,df,p_value\n";
  age << "drug,rogue_users,recent_fraction\n";
  txt << "Feature means, rogue vs. non-rogue (ratio = non-rogue / rogue; Welch two-sided p)\n";
  std::vector<std::string> skipped;
  for (const auto& [drug, members] : drug_groups(config, vectors, records)) {
    if (!has_both_classes(members)) {
      skipped.push_back(drug);
      continue;
    }
    const auto summary = group_means(members, drug);
    char head[160];
    std::snprintf(head, sizeof head, "\n[%s]  rogue n=%zu  non-rogue n=%zu\n%-22s %14s %14s %10s %10s\n",
                  drug.c_str(), summary[0].rogue_n, summary[0].nonrogue_n, "feature", "rogue",
                  "non-rogue", "ratio", "p");
    txt << head;
    for (std::size_t f = 0; f < kFeatureCount; ++f) {
      std::vector<double> r, n;
      for (const auto& v : members) (*v.label == ClassLabel::Rogue ? r : n).push_back(v.values[f]);
      std::optional<TTestResult> t;
      try {
        t = welch_ttest(r, n);
      } catch (const UndefinedTestError&) {
      } catch (const std::invalid_argument&) {
      }
      const auto ratio = crossgroup_ratio(summary[f]);
      const auto& sm = summary[f];
      csv << drug << ',' << sm.feature << ',' << to_string(feature_group(static_cast<FeatureIndex>(f))) << ','
          << format_number(sm.rogue_mean) << ',' << format_number(sm.nonrogue_mean) << ',' << sm.rogue_n << ','
          << sm.nonrogue_n << ',' << (ratio ? format_number(*ratio) : "inf") << ','
          << (t ? format_number(t->t_statistic) : "") << ',' << (t ? format_number(t->degrees_of_freedom) : "")
          << ',' << (t ? format_number(t->p_value) : "") << '\n';
      char line[160];
      std::snprintf(line, sizeof line, "%-22s %14s %14s %10s %10s\n", sm.feature.c_str(),
                    fixed(sm.rogue_mean, 4).c_str(), fixed(sm.nonrogue_mean, 4).c_str(),
                    ratio ? fixed(*ratio, 2).c_str() : "inf", t ? sci(t->p_value).c_str() : "n/a");
      txt << line;
    }
    std::vector<TweetRecord> rogue_records;
    for (const auto& v : members) {
      if (*v.label == ClassLabel::Rogue) rogue_records.push_back(*by_id.at(v.tweet_id));
    }
    std::set<std::string> users;
    for (const auto& r : rogue_records) users.insert(r.user_id);
    const double frac = account_age_fraction(rogue_records, config.account_cutoff);
    age << drug << ',' << users.size() << ',' << format_number(frac) << '\n';
    txt << "rogue accounts created on or after " << format_timestamp(config.account_cutoff).substr(0, 10) << ": "
        << fixed(100.0 * frac, 1) << "% of " << users.size() << " users\n";
  }
  if (!skipped.empty()) {
    txt << "\nskipped (one class empty):";
    for (const auto& d : skipped) txt << ' ' << d;
    txt << '\n';
  }
  write_text(a.stats_csv(), csv.str());
  write_text(a.stats_txt(), txt.str());
  write_text(a.account_age(), age.str());

  StageOutcome o;
  o.inputs = {a.features(), a.filtered()};
  o.outputs = {a.stats_csv(), a.stats_txt(), a.account_age()};
  o.summary = txt.str();
  return o;
}

StageOutcome stage_train(const PipelineConfig& config) {
  validate(config);
  const Artifacts a(config.output_dir);
  require(a.features(), "features");
  require(a.filtered(), "filter");
  const auto vectors = read_features_csv(a.features());
  const auto records = ingest_jsonl(a.filtered(), SchemaMode::Strict);
  StageOutcome o;
  o.inputs = {a.features(), a.filtered()};
  o.seed = config.classifier_seed;
  std::ostringstream s;
  for (const auto& [drug, members] : drug_groups(config, vectors, records)) {
    if (!has_both_classes(members)) {
      s << "skipped " << drug << " (one class empty)\n";
      continue;
    }
    auto model = train(members, config.l2_lambda, config.classifier_seed);
    save_logreg(model, a.logreg(drug));
    o.outputs.push_back(a.logreg(drug));
    s << "trained " << drug << " on " << members.size() << " tweets -> " << a.logreg(drug).string() << '\n';
  }
  if (o.outputs.empty()) throw DegenerateError("no drug group has both rogue and regular tweets");
  o.summary = s.str();
  return o;
}

StageOutcome stage_evaluate(const PipelineConfig& config) {
  validate(config);
  const Artifacts a(config.output_dir);
  require(a.features(), "features");
  require(a.filtered(), "filter");
  const auto vectors = read_features_csv(a.features());
  const auto records = ingest_jsonl(a.filtered(), SchemaMode::Strict);
  EvalOptions opt;
  opt.split_fraction = config.split_fraction;
  opt.runs = config.runs;
  opt.seed = config.classifier_seed;
  opt.l2_lambda = config.l2_lambda;

  std::vector<std::pair<std::string, EvalReport>> reports;
  std::vector<std::string> skipped;
  for (const auto& [drug, members] : drug_groups(config, vectors, records)) {
    try {
      reports.emplace_back(drug, evaluate(members, opt));
    } catch (const DegenerateError& e) {
      skipped.push_back(drug + " (" + e.what() + ")");
    }
  }
  if (reports.empty()) throw DegenerateError("no drug group could be evaluated");
  write_text(a.evaluation_csv(), evaluation_csv(reports));
  std::string table = evaluation_table(reports);
  for (const auto& sk : skipped) table += "skipped " + sk + "\n";
  write_text(a.evaluation_txt(), table);
  write_text(a.evaluation_runs(), evaluation_runs_csv(reports));

  StageOutcome o;
  o.inputs = {a.features(), a.filtered()};
  o.outputs = {a.evaluation_csv(), a.evaluation_txt(), a.evaluation_runs()};
  o.seed = config.classifier_seed;
  o.summary = table;
  return o;
}

}  // namespace

const std::vector<std::string>& stage_names() {
  static const std::vector<std::string> names = {"ingest", "filter", "topics", "isolate",
                                                 "features", "stats", "train", "evaluate"};
  return names;
}

StageOutcome run_stage(const std::string& name, const PipelineConfig& config) {
  fs::create_directories(config.output_dir);
  StageOutcome o;
  if (name == "ingest") o = stage_ingest(config);
  else if (name == "filter") o = stage_filter(config);
  else if (name == "topics") o = stage_topics(config);
  else if (name == "isolate") o = stage_isolate(config);
  else if (name == "features") o = stage_features(config);
  else if (name == "stats") o = stage_stats(config);
  else if (name == "train") o = stage_train(config);
  else if (name == "evaluate") o = stage_evaluate(config);
  else throw std::invalid_argument("unknown stage '" + name + "'");
  write_manifest(config, {name, o.inputs, o.outputs, o.seed});
  return o;
}

void run_pipeline(const PipelineConfig& config, std::ostream& out) {
  for (const auto& name : stage_names()) {
    out << "== " << name << " ==\n";
    out.flush();
    try {
      out << run_stage(name, config).summary;
    } catch (const GateError& e) {
      throw GateError("pipeline paused at " + name + ": " + e.what());
    }
  }
}

void write_doc_topics(const fs::path& path, const std::vector<DocTopicDist>& dists) {
  auto out = open_out(path);
  const std::size_t k = dists.empty() ? 0 : dists.front().proportions.size();
  out << "tweet_id,dominant_topic,degenerate";
  for (std::size_t z = 0; z < k; ++z) out << ",p" << z;
  out << '\n';
  for (const auto& d : dists) {
    out << d.tweet_id << ',' << d.dominant_topic << ',' << (d.degenerate ? 1 : 0);
    for (double p : d.proportions) out << ',' << format_number(p);
    out << '\n';
  }
  if (!out) throw IoError("error writing '" + path.string() + "'");
}

std::vector<DocTopicDist> read_doc_topics(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  std::string line;
  if (!std::getline(in, line) || line.rfind("tweet_id,dominant_topic,degenerate", 0) != 0) {
    throw DataError("'" + path.string() + "' lacks the doc-topic header");
  }
  const std::size_t k = split_csv(line).size() - 3;
  std::vector<DocTopicDist> out;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    auto cells = split_csv(line);
    if (cells.size() != k + 3) {
      throw DataError(path.string() + ":" + std::to_string(line_no) + ": expected " + std::to_string(k + 3) +
                      " columns");
    }
    DocTopicDist d;
    d.tweet_id = cells[0];
    try {
      d.dominant_topic = std::stoul(cells[1]);
      d.degenerate = cells[2] == "1";
      for (std::size_t z = 0; z < k; ++z) d.proportions.push_back(std::stod(cells[3 + z]));
    } catch (const std::exception&) {
      throw DataError(path.string() + ":" + std::to_string(line_no) + ": bad number");
    }
    if (d.dominant_topic >= k) throw DataError(path.string() + ":" + std::to_string(line_no) + ": bad topic");
    out.push_back(std::move(d));
  }
  return out;
}

TopicArtifacts load_topic_artifacts(const PipelineConfig& config) {
  const Artifacts a(config.output_dir);
  require(a.model(), "topics");
  require(a.doc_topics(), "topics");
  require(a.filtered(), "filter");
  TopicArtifacts t;
  t.model = load_model(a.model());
  t.records = ingest_jsonl(a.filtered(), SchemaMode::Strict);
  t.doc_dists = read_doc_topics(a.doc_topics());
  if (t.records.size() != t.doc_dists.size()) {
    throw DataError("doc_topics.csv does not match filtered.jsonl; rerun `iopscan topics`");
  }
  for (std::size_t i = 0; i < t.records.size(); ++i) {
    if (t.records[i].tweet_id != t.doc_dists[i].tweet_id) {
      throw DataError("doc_topics.csv does not match filtered.jsonl; rerun `iopscan topics`");
    }
  }
  return t;
}

}  // namespace iopscan
