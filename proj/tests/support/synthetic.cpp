#include "synthetic.hpp"

#include "craic/rng.hpp"

#include <algorithm>
#include <fstream>
#include <optional>

namespace craic::testing {

namespace {

const std::vector<std::string> kNouns = {
    "price",   "total",  "order",   "customer", "account", "balance", "invoice", "item",
    "stock",   "window", "buffer",  "cache",    "record",  "session", "token",   "user",
    "report",  "queue",  "message", "channel",  "file",    "path",    "node",    "tree",
    "graph",   "edge",   "color",   "shape",    "point",   "vector",  "matrix",  "score",
    "limit",   "offset", "retry",   "timeout",  "config",  "option",  "header",  "payload"};

struct Verb {
  std::string name;
  std::vector<std::string> templates;  // "{}" is replaced by the noun phrase
};

const std::vector<Verb> kVerbs = {
    {"get", {"Returns the {}.", "Gets the current {}."}},
    {"set", {"Sets the {}.", "Sets a new {}."}},
    {"compute", {"Computes the {}.", "Calculates the {}."}},
    {"load", {"Loads the {}.", "Reads the {} from storage."}},
    {"find", {"Finds the {}.", "Looks up the {}."}},
    {"update", {"Updates the {}.", "Refreshes the {}."}},
    {"remove", {"Removes the {}.", "Deletes the {}."}},
    {"create", {"Creates a new {}.", "Builds the {}."}},
    {"check", {"Checks the {}.", "Validates the {}."}},
    {"reset", {"Resets the {}.", "Clears the {}."}},
};

const std::vector<std::string> kNoise = {
    "legacy",   "behaviour", "kept",     "for",      "the",      "billing",   "team",     "until",
    "migration", "finishes", "do",       "not",      "call",     "from",      "ui",       "thread",
    "this",     "was",       "added",    "after",    "incident", "review",    "see",      "ticket",
    "in",       "tracker",   "vendor",   "library",  "quirk",    "requires",  "manual",   "cleanup",
    "when",     "running",   "under",    "load",     "tests",    "nightly",   "job",      "depends",
    "on",       "ordering",  "please",   "ask",      "platform", "owners",    "before",   "changing",
    "hack",     "around",    "driver",   "bug",      "fixed",    "upstream",  "soon",     "we",
    "should",   "revisit",   "design",   "later",    "performance", "matters", "here",    "because",
    "customers", "noticed",  "slow",     "pages",    "last",     "quarter",   "temporary", "workaround",
    "security", "audit",     "flagged",  "older",    "version",  "internal",  "only",     "experimental",
    "feature",  "flag",      "controls", "rollout",  "region",   "specific",  "rules",    "apply",
    "compatibility", "with", "android",  "devices",  "older",    "firmware",  "beta",     "customers"};

std::string capitalize(std::string s) {
  if (!s.empty()) s[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(s[0])));
  return s;
}

template <typename T>
const T& pick(Rng& rng, const std::vector<T>& items) {
  return items[rng.below(items.size())];
}

std::string noiseSentence(Rng& rng) {
  const std::size_t n = 5 + rng.below(6);
  std::string s;
  for (std::size_t i = 0; i < n; ++i) {
    if (i) s += ' ';
    s += pick(rng, kNoise);
  }
  return capitalize(s) + ".";
}

int lineCount(const std::string& s) { return static_cast<int>(std::count(s.begin(), s.end(), '\n')); }

struct FileBuilder {
  std::string name;
  std::string text;
  std::vector<GeneratedMethod> methods;

  FileBuilder(std::string fileName, std::size_t index) : name(std::move(fileName)) {
    text = "package synthetic;\n\nimport java.util.List;\n\npublic class Gen" + std::to_string(index) + " {\n";
  }

  /// Appends a commented method; `signature` is one line, `body` indented lines.
  void add(const std::string& comment, const std::string& signature, const std::vector<std::string>& body,
           const std::string& methodName, bool planted) {
    text += "\n  /** " + comment + " */\n";
    methods.push_back({name, lineCount(text) + 1, methodName, planted});
    text += "  " + signature + " {\n";
    for (const auto& line : body) text += "    " + line + "\n";
    text += "  }\n";
  }

  JavaFile finish() { return {name, text + "}\n"}; }
};

class CorpusBuilder {
 public:
  explicit CorpusBuilder(std::size_t perFile) : perFile_(perFile) {}

  FileBuilder& current() {
    if (!file_ || file_->methods.size() >= perFile_) {
      flush();
      file_.emplace("Gen" + std::to_string(index_) + ".java", index_);
      ++index_;
    }
    return *file_;
  }

  GeneratedCorpus finish() {
    flush();
    return std::move(out_);
  }

 private:
  void flush() {
    if (!file_) return;
    out_.methods.insert(out_.methods.end(), file_->methods.begin(), file_->methods.end());
    out_.files.push_back(file_->finish());
    file_.reset();
  }

  std::size_t perFile_;
  std::size_t index_ = 0;
  std::optional<FileBuilder> file_;
  GeneratedCorpus out_;
};

struct MethodShape {
  std::string name;
  std::string signature;
  std::vector<std::string> body;
  std::string phrase;  // noun phrase, space separated
  const Verb* verb = nullptr;
};

MethodShape randomMethod(Rng& rng) {
  MethodShape m;
  m.verb = &pick(rng, kVerbs);
  std::vector<std::string> nouns = {pick(rng, kNouns)};
  if (rng.bernoulli(0.5)) nouns.push_back(pick(rng, kNouns));
  std::string field;
  for (const auto& n : nouns) {
    m.phrase += (m.phrase.empty() ? "" : " ") + n;
    field += field.empty() ? n : capitalize(n);
  }
  m.name = m.verb->name + capitalize(field);
  static const std::vector<std::string> types = {"int", "long", "double", "String", "boolean"};
  const std::string type = pick(rng, types);
  const std::string param = pick(rng, kNouns);
  const bool takesArg = m.verb->name == "set" || rng.bernoulli(0.4);
  m.signature = "public " + (m.verb->name == "set" ? std::string("void") : type) + " " + m.name + "(" +
                (takesArg ? type + " " + param : "") + ")";
  const std::size_t filler = rng.below(4);
  for (std::size_t i = 0; i < filler; ++i) {
    static const std::vector<std::string> stmts = {"log.debug(\"step\");", "counter++;", "lock.acquire();",
                                                   "validate();", "metrics.mark(\"call\");"};
    m.body.push_back(pick(rng, stmts));
  }
  if (m.verb->name == "set") {
    m.body.push_back("this." + field + " = " + param + ";");
  } else {
    m.body.push_back("return " + field + (takesArg ? " + " + param : "") + ";");
  }
  return m;
}

}  // namespace

GeneratedCorpus paraphraseCorpus(std::size_t methods, double noiseFraction, std::uint64_t seed) {
  Rng rng(seed);
  CorpusBuilder builder(25);
  for (std::size_t i = 0; i < methods; ++i) {
    const auto m = randomMethod(rng);
    const bool noise = rng.uniform() < noiseFraction;
    std::string comment = noise ? noiseSentence(rng) : pick(rng, m.verb->templates);
    if (!noise) comment.replace(comment.find("{}"), 2, m.phrase);
    builder.current().add(comment, m.signature, m.body, m.name, !noise);
  }
  return builder.finish();
}

GeneratedCorpus plantedCorpus(std::size_t restatements, std::size_t unrelated, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<bool> planted(restatements, true);
  planted.resize(restatements + unrelated, false);
  rng.shuffle(planted);
  CorpusBuilder builder(25);
  for (std::size_t i = 0; i < planted.size(); ++i) {
    const auto m = randomMethod(rng);
    builder.current().add(planted[i] ? m.signature : noiseSentence(rng), m.signature, m.body, m.name, planted[i]);
  }
  return builder.finish();
}

GeneratedCorpus repeatedSentenceCorpus(std::size_t methods, const std::string& sentence) {
  Rng rng(1);
  CorpusBuilder builder(25);
  for (std::size_t i = 0; i < methods; ++i) {
    const auto m = randomMethod(rng);
    builder.current().add(sentence, m.signature, m.body, m.name, true);
  }
  return builder.finish();
}

void writeCorpus(const GeneratedCorpus& corpus, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  for (const auto& f : corpus.files) {
    std::ofstream out(dir / f.name, std::ios::binary | std::ios::trunc);
    out << f.source;
  }
}

}  // namespace craic::testing
