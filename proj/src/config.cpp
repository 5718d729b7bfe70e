#include "iopscan/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "iopscan/errors.hpp"

namespace iopscan {

namespace fs = std::filesystem;

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

template <typename T>
T parse_unsigned(const std::string& key, const std::string& v) {
  T out{};
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size()) {
    throw ConfigError(key + ": expected a nonnegative integer, got '" + v + "'");
  }
  return out;
}

double parse_real(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    double d = std::stod(v, &used);
    if (used == v.size()) return d;
  } catch (const std::exception&) {
  }
  throw ConfigError(key + ": expected a number, got '" + v + "'");
}

std::string fmt_real(double v) {
  char buf[40];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, p);
}

fs::path resolve(const fs::path& base, const std::string& v) {
  fs::path p(v);
  return p.is_relative() && !base.empty() ? base / p : p;
}

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (const auto& s : items) out += (out.empty() ? "" : ",") + s;
  return out;
}

struct Key {
  std::function<void(PipelineConfig&, const std::string&, const fs::path&)> set;
  std::function<std::string(const PipelineConfig&)> get;
};

using Registry = std::vector<std::pair<std::string, Key>>;

const Registry& registry() {
  static const Registry keys = [] {
    Registry r;
    auto add = [&r](std::string name, Key k) { r.emplace_back(std::move(name), std::move(k)); };

    add("input.files", {[](PipelineConfig& c, const std::string& v, const fs::path& base) {
                          c.inputs.clear();
                          for (const auto& s : split_list(v)) c.inputs.push_back(resolve(base, s));
                        },
                        [](const PipelineConfig& c) {
                          std::vector<std::string> s;
                          for (const auto& p : c.inputs) s.push_back(p.string());
                          return join(s);
                        }});
    add("input.schema", {[](PipelineConfig& c, const std::string& v, const fs::path&) {
                           if (v == "strict") c.schema_mode = SchemaMode::Strict;
                           else if (v == "lenient") c.schema_mode = SchemaMode::Lenient;
                           else throw ConfigError("input.schema: expected strict or lenient, got '" + v + "'");
                         },
                         [](const PipelineConfig& c) {
                           return std::string(c.schema_mode == SchemaMode::Strict ? "strict" : "lenient");
                         }});
    add("filter.keywords", {[](PipelineConfig& c, const std::string& v, const fs::path&) {
                              auto items = split_list(v);
                              std::set<std::string> names(items.begin(), items.end());
                              try {
                                KeywordSet check(names);
                              } catch (const std::invalid_argument& e) {
                                throw ConfigError(std::string("filter.keywords: ") + e.what());
                              }
                              c.keywords = std::move(names);
                            },
                            [](const PipelineConfig& c) {
                              return join(std::vector<std::string>(c.keywords.begin(), c.keywords.end()));
                            }});
    add("filter.match", {[](PipelineConfig& c, const std::string& v, const fs::path&) {
                           if (v == "token") c.match_mode = MatchMode::Token;
                           else if (v == "substring") c.match_mode = MatchMode::Substring;
                           else throw ConfigError("filter.match: expected token or substring, got '" + v + "'");
                         },
                         [](const PipelineConfig& c) {
                           return std::string(c.match_mode == MatchMode::Token ? "token" : "substring");
                         }});
    add("tokenizer.stopwords", {[](PipelineConfig& c, const std::string& v, const fs::path& base) {
                                  c.stopwords = resolve(base, v);
                                },
                                [](const PipelineConfig& c) { return c.stopwords.string(); }});
    add("tokenizer.biterm_window",
        {[](PipelineConfig& c, const std::string& v, const fs::path&) {
           if (v == "none" || v.empty()) {
             c.biterm_window.reset();
             return;
           }
           c.biterm_window = parse_unsigned<std::size_t>("tokenizer.biterm_window", v);
         },
         [](const PipelineConfig& c) {
           return c.biterm_window ? std::to_string(*c.biterm_window) : std::string("none");
         }});
    add("btm.k", {[](PipelineConfig& c, const std::string& v, const fs::path&) {
                    if (v == "auto" || v.empty()) c.k.reset();
                    else c.k = parse_unsigned<std::size_t>("btm.k", v);
                  },
                  [](const PipelineConfig& c) { return c.k ? std::to_string(*c.k) : std::string("auto"); }});
    add("btm.k_cap", {[](PipelineConfig& c, const std::string& v, const fs::path&) {
                        c.k_cap = parse_unsigned<std::size_t>("btm.k_cap", v);
                      },
                      [](const PipelineConfig& c) { return std::to_string(c.k_cap); }});
    add("btm.alpha", {[](PipelineConfig& c, const std::string& v, const fs::path&) {
                        if (v == "auto" || v.empty()) c.alpha.reset();
                        else c.alpha = parse_real("btm.alpha", v);
                      },
                      [](const PipelineConfig& c) { return c.alpha ? fmt_real(*c.alpha) : std::string("auto"); }});
    add("btm.beta", {[](PipelineConfig& c, const std::string& v, const fs::path&) {
                       c.beta = parse_real("btm.beta", v);
                     },
                     [](const PipelineConfig& c) { return fmt_real(c.beta); }});
    add("btm.iterations", {[](PipelineConfig& c, const std::string& v, const fs::path&) {
                             c.iterations = parse_unsigned<std::size_t>("btm.iterations", v);
                           },
                           [](const PipelineConfig& c) { return std::to_string(c.iterations); }});
    add("btm.seed", {[](PipelineConfig& c, const std::string& v, const fs::path&) {
                       c.btm_seed = parse_unsigned<std::uint64_t>("btm.seed", v);
                     },
                     [](const PipelineConfig& c) { return std::to_string(c.btm_seed); }});
    add("screening.annotation_log", {[](PipelineConfig& c, const std::string& v, const fs::path& base) {
                                       c.annotation_log = v.empty() ? fs::path() : resolve(base, v);
                                     },
                                     [](const PipelineConfig& c) { return c.annotation_log.string(); }});
    add("screening.rogue_topics",
        {[](PipelineConfig& c, const std::string& v, const fs::path&) {
           c.rogue_topics.clear();
           if (v == "annotations") return;
           for (const auto& s : split_list(v)) {
             c.rogue_topics.insert(parse_unsigned<std::size_t>("screening.rogue_topics", s));
           }
         },
         [](const PipelineConfig& c) {
           if (c.rogue_topics.empty()) return std::string("annotations");
           std::vector<std::string> s;
           for (auto t : c.rogue_topics) s.push_back(std::to_string(t));
           return join(s);
         }});
    add("features.entities", {[](PipelineConfig& c, const std::string& v, const fs::path&) {
                                if (v == "presence") c.entity_mode = EntityMode::Presence;
                                else if (v == "count") c.entity_mode = EntityMode::Count;
                                else throw ConfigError("features.entities: expected presence or count, got '" + v + "'");
                              },
                              [](const PipelineConfig& c) {
                                return std::string(c.entity_mode == EntityMode::Presence ? "presence" : "count");
                              }});
    add("features.account_cutoff", {[](PipelineConfig& c, const std::string& v, const fs::path&) {
                                      auto ts = parse_timestamp(v.size() == 10 ? v + "T00:00:00Z" : v);
                                      if (!ts) throw ConfigError("features.account_cutoff: bad date '" + v + "'");
                                      c.account_cutoff = *ts;
                                    },
                                    [](const PipelineConfig& c) { return format_timestamp(c.account_cutoff); }});
    add("classifier.lambda", {[](PipelineConfig& c, const std::string& v, const fs::path&) {
                                c.l2_lambda = parse_real("classifier.lambda", v);
                              },
                              [](const PipelineConfig& c) { return fmt_real(c.l2_lambda); }});
    add("classifier.split", {[](PipelineConfig& c, const std::string& v, const fs::path&) {
                               c.split_fraction = parse_real("classifier.split", v);
                             },
                             [](const PipelineConfig& c) { return fmt_real(c.split_fraction); }});
    add("classifier.runs", {[](PipelineConfig& c, const std::string& v, const fs::path&) {
                              c.runs = parse_unsigned<std::size_t>("classifier.runs", v);
                            },
                            [](const PipelineConfig& c) { return std::to_string(c.runs); }});
    add("classifier.seed", {[](PipelineConfig& c, const std::string& v, const fs::path&) {
                              c.classifier_seed = parse_unsigned<std::uint64_t>("classifier.seed", v);
                            },
                            [](const PipelineConfig& c) { return std::to_string(c.classifier_seed); }});
    add("service.host", {[](PipelineConfig& c, const std::string& v, const fs::path&) { c.host = v; },
                         [](const PipelineConfig& c) { return c.host; }});
    add("service.port", {[](PipelineConfig& c, const std::string& v, const fs::path&) {
                           auto p = parse_unsigned<unsigned>("service.port", v);
                           if (p > 65535) throw ConfigError("service.port: " + v + " is not a port");
                           c.port = static_cast<int>(p);
                         },
                         [](const PipelineConfig& c) { return std::to_string(c.port); }});
    add("service.sample_tweets", {[](PipelineConfig& c, const std::string& v, const fs::path&) {
                                    c.sample_tweets = parse_unsigned<std::size_t>("service.sample_tweets", v);
                                  },
                                  [](const PipelineConfig& c) { return std::to_string(c.sample_tweets); }});
    add("service.static_dir", {[](PipelineConfig& c, const std::string& v, const fs::path& base) {
                                 c.static_dir = v.empty() ? fs::path() : resolve(base, v);
                               },
                               [](const PipelineConfig& c) { return c.static_dir.string(); }});
    add("output.dir", {[](PipelineConfig& c, const std::string& v, const fs::path& base) {
                         c.output_dir = resolve(base, v);
                       },
                       [](const PipelineConfig& c) { return c.output_dir.string(); }});
    return r;
  }();
  return keys;
}

const Key* find_key(const std::string& name) {
  for (const auto& [k, v] : registry()) {
    if (k == name) return &v;
  }
  return nullptr;
}

}  // namespace

PipelineConfig default_config() {
  PipelineConfig c;
#ifdef IOPSCAN_DATA_DIR
  c.stopwords = fs::path(IOPSCAN_DATA_DIR) / "stopwords_en.txt";
  c.static_dir = fs::path(IOPSCAN_DATA_DIR) / "ui";
#endif
  return c;
}

std::vector<std::string> config_keys() {
  std::vector<std::string> out;
  for (const auto& [k, v] : registry()) out.push_back(k);
  return out;
}

void set_value(PipelineConfig& config, const std::string& key, const std::string& value,
               const fs::path& base_dir) {
  const Key* k = find_key(key);
  if (!k) throw ConfigError("unknown config key '" + key + "'");
  k->set(config, value, base_dir);
}

void apply_override(PipelineConfig& config, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) {
    throw ConfigError("override '" + assignment + "' is not of the form section.key=value");
  }
  set_value(config, trim(assignment.substr(0, eq)), trim(assignment.substr(eq + 1)));
}

PipelineConfig parse_config(const std::string& text, const fs::path& base_dir) {
  PipelineConfig config = default_config();
  std::istringstream in(text);
  std::string line, section;
  std::size_t line_no = 0;
  std::vector<std::string> problems;
  while (std::getline(in, line)) {
    ++line_no;
    auto t = trim(line);
    if (t.empty() || t[0] == '#' || t[0] == ';') continue;
    const std::string where = "line " + std::to_string(line_no) + ": ";
    if (t.front() == '[') {
      if (t.back() != ']') {
        problems.push_back(where + "unterminated section header");
        continue;
      }
      section = trim(t.substr(1, t.size() - 2));
      continue;
    }
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      problems.push_back(where + "expected key = value");
      continue;
    }
    const std::string key = section.empty() ? trim(t.substr(0, eq)) : section + "." + trim(t.substr(0, eq));
    try {
      set_value(config, key, trim(t.substr(eq + 1)), base_dir);
    } catch (const ConfigError& e) {
      problems.push_back(where + e.what());
    }
  }
  if (!problems.empty()) {
    std::string msg = "invalid config:";
    for (const auto& p : problems) msg += "\n  " + p;
    throw ConfigError(msg);
  }
  return config;
}

PipelineConfig load_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return parse_config(ss.str(), path.parent_path());
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

void validate(const PipelineConfig& c, bool need_inputs) {
  std::vector<std::string> problems;
  if (need_inputs && c.inputs.empty()) problems.push_back("input.files: no input files given");
  for (const auto& p : c.inputs) {
    if (!fs::exists(p)) problems.push_back("input.files: '" + p.string() + "' does not exist");
  }
  if (c.stopwords.empty() || !fs::exists(c.stopwords)) {
    problems.push_back("tokenizer.stopwords: '" + c.stopwords.string() + "' does not exist");
  }
  if (c.biterm_window && *c.biterm_window < 2) problems.push_back("tokenizer.biterm_window: must be >= 2");
  if (c.k && *c.k < 2) problems.push_back("btm.k: must be >= 2");
  if (c.k_cap < 2) problems.push_back("btm.k_cap: must be >= 2");
  if (c.alpha && !(*c.alpha > 0.0)) problems.push_back("btm.alpha: must be > 0");
  if (!(c.beta > 0.0)) problems.push_back("btm.beta: must be > 0");
  if (c.iterations < 1) problems.push_back("btm.iterations: must be >= 1");
  if (!(c.l2_lambda >= 0.0)) problems.push_back("classifier.lambda: must be >= 0");
  if (!(c.split_fraction > 0.0 && c.split_fraction < 1.0)) {
    problems.push_back("classifier.split: must lie in (0, 1)");
  }
  if (c.runs < 1) problems.push_back("classifier.runs: must be >= 1");
  if (c.sample_tweets < 1) problems.push_back("service.sample_tweets: must be >= 1");
  if (c.output_dir.empty()) problems.push_back("output.dir: must not be empty");
  if (!problems.empty()) {
    std::string msg = "invalid config:";
    for (const auto& p : problems) msg += "\n  " + p;
    throw ConfigError(msg);
  }
}

std::string canonical_text(const PipelineConfig& config) {
  std::string out;
  for (const auto& [k, v] : registry()) out += k + " = " + v.get(config) + "\n";
  return out;
}

}  // namespace iopscan
