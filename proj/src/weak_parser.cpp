// Base-parser implementations: the built-in PCFG learner (binarized
// relative-frequency grammar, smoothed lexicon, Viterbi CKY with unary
// chains) and the external-command adapter.

#include "parsemble/weak_parser.hpp"

#include <sys/wait.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "parsemble/errors.hpp"
#include "parsemble/util.hpp"

namespace parsemble {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

std::vector<std::optional<ParseTree>> Learner::parse_batch(
    const LearnerModel& model, const std::vector<std::vector<Token>>& sentences,
    int jobs) {
    std::vector<std::optional<ParseTree>> out(sentences.size());
    parallel_for(sentences.size(), jobs,
                 [&](std::size_t i) { out[i] = parse(model, sentences[i]); });
    return out;
}

// ---------------------------------------------------------------------------
// PCFG training.

int PcfgModel::label_id(const std::string& label) const {
    auto it = label_ids.find(label);
    return it == label_ids.end() ? -1 : it->second;
}

namespace {

// Synthetic chain label introduced by right-factored binarization; carries
// the parent label so debinarization can splice it back.
std::string synthetic_label(const std::string& parent) { return "@" + parent; }

bool is_synthetic(const std::string& label) {
    return !label.empty() && label[0] == '@';
}

struct TrainingCounts {
    std::map<std::string, std::int64_t> internal_total;  // lhs -> rule uses
    std::map<std::string, std::int64_t> lexical_total;   // label -> emissions
    std::map<std::tuple<std::string, std::string, std::string>, std::int64_t> binary;
    std::map<std::pair<std::string, std::string>, std::int64_t> unary;
    std::map<std::pair<std::string, std::string>, std::int64_t> emissions;
    std::map<std::string, std::int64_t> roots;
    std::set<std::string> vocabulary;
    std::int64_t tree_count = 0;
};

void count_node(const ParseTree& node, TrainingCounts& tc) {
    if (is_synthetic(node.label))
        throw DataError("training labels may not start with '@': " + node.label);
    if (node.is_preterminal()) {
        ++tc.emissions[{node.label, node.word}];
        ++tc.lexical_total[node.label];
        tc.vocabulary.insert(node.word);
        return;
    }
    if (node.children.empty())
        throw DataError("training tree has a leafless internal node: " + node.label);
    const std::size_t n = node.children.size();
    if (n == 1) {
        ++tc.unary[{node.label, node.children[0].label}];
        ++tc.internal_total[node.label];
    } else if (n == 2) {
        ++tc.binary[{node.label, node.children[0].label, node.children[1].label}];
        ++tc.internal_total[node.label];
    } else {
        // Right-factored: (L c1 c2 .. cn) uses L -> c1 @L, @L -> ci @L for
        // the middle children, and @L -> c(n-1) cn to close the chain.
        const std::string syn = synthetic_label(node.label);
        ++tc.binary[{node.label, node.children[0].label, syn}];
        ++tc.internal_total[node.label];
        for (std::size_t i = 1; i + 2 < n; ++i) {
            ++tc.binary[{syn, node.children[i].label, syn}];
            ++tc.internal_total[syn];
        }
        ++tc.binary[{syn, node.children[n - 2].label, node.children[n - 1].label}];
        ++tc.internal_total[syn];
    }
    for (const ParseTree& child : node.children) count_node(child, tc);
}

}  // namespace

ModelPtr PcfgLearner::train(const std::vector<ParseTree>& corpus) {
    if (corpus.empty()) throw DataError("cannot train a grammar on an empty corpus");
    TrainingCounts tc;
    for (const ParseTree& tree : corpus) {
        ++tc.roots[tree.label];
        ++tc.tree_count;
        count_node(tree, tc);
    }

    auto model = std::make_shared<PcfgModel>();
    auto intern = [&](const std::string& label) {
        auto [it, fresh] = model->label_ids.emplace(label, int(model->labels.size()));
        if (fresh) model->labels.push_back(label);
        return it->second;
    };
    for (const auto& [label, n] : tc.internal_total) intern(label);
    for (const auto& [label, n] : tc.lexical_total) intern(label);

    // A label can both emit words and expand by rules; its expansions share
    // one distribution, so every per-label total mixes both kinds of use.
    auto total_for = [&](const std::string& label) {
        double total = 0.0;
        if (auto it = tc.internal_total.find(label); it != tc.internal_total.end())
            total += double(it->second);
        if (auto it = tc.lexical_total.find(label); it != tc.lexical_total.end())
            total += double(it->second);
        return total;
    };

    for (const auto& [sig, count] : tc.binary) {
        const auto& [lhs, left, right] = sig;
        model->binary.push_back(PcfgModel::BinaryRule{
            intern(lhs), intern(left), intern(right),
            std::log(double(count) / total_for(lhs))});
    }
    for (const auto& [sig, count] : tc.unary) {
        const auto& [lhs, child] = sig;
        model->unary.push_back(PcfgModel::UnaryRule{
            intern(lhs), intern(child), std::log(double(count) / total_for(lhs))});
    }

    // Lexicon: add-one smoothing over the training vocabulary plus a single
    // unknown-word type, scaled by the label's share of lexical use. Any word
    // a label never emitted (in-vocabulary or not) scores like the unknown.
    const double vocab_slots = double(tc.vocabulary.size()) + 1.0;
    model->vocabulary_size = tc.vocabulary.size();
    for (const auto& [label, lex_total] : tc.lexical_total) {
        const int id = intern(label);
        const double mass = double(lex_total) / total_for(label);
        const double denom = double(lex_total) + vocab_slots;
        model->unknown_logp[id] = std::log(mass / denom);
    }
    for (const auto& [sig, count] : tc.emissions) {
        const auto& [label, word] = sig;
        const int id = intern(label);
        const double mass = double(tc.lexical_total.at(label)) / total_for(label);
        const double denom = double(tc.lexical_total.at(label)) + vocab_slots;
        model->emission_logp[{id, word}] =
            std::log(mass * (double(count) + 1.0) / denom);
    }

    model->root_logp.assign(model->labels.size(), kNegInf);
    for (const auto& [label, count] : tc.roots) {
        model->root_logp[std::size_t(intern(label))] =
            std::log(double(count) / double(tc.tree_count));
    }
    if (model->root_logp.size() < model->labels.size())
        model->root_logp.resize(model->labels.size(), kNegInf);

    // A stable rule order makes the parser's tie-breaking reproducible.
    auto binary_sig = [&](const PcfgModel::BinaryRule& r) {
        return std::tie(model->labels[std::size_t(r.lhs)],
                        model->labels[std::size_t(r.left)],
                        model->labels[std::size_t(r.right)]);
    };
    std::sort(model->binary.begin(), model->binary.end(),
              [&](const auto& a, const auto& b) { return binary_sig(a) < binary_sig(b); });
    auto unary_sig = [&](const PcfgModel::UnaryRule& r) {
        return std::tie(model->labels[std::size_t(r.lhs)],
                        model->labels[std::size_t(r.child)]);
    };
    std::sort(model->unary.begin(), model->unary.end(),
              [&](const auto& a, const auto& b) { return unary_sig(a) < unary_sig(b); });
    return model;
}

// ---------------------------------------------------------------------------
// CKY parsing.

namespace {

struct BackPointer {
    enum Kind : std::uint8_t { none, lexical, unary, binary } kind = none;
    int rule = -1;   // index into model.unary / model.binary
    int split = -1;  // binary only
};

struct Chart {
    int n = 0;
    std::size_t labels = 0;
    std::vector<double> score;     // [(cell, label)] -> log prob
    std::vector<BackPointer> back;

    Chart(int n_, std::size_t labels_) : n(n_), labels(labels_) {
        const std::size_t cells = std::size_t(n) * std::size_t(n + 1);
        score.assign(cells * labels, kNegInf);
        back.assign(cells * labels, BackPointer{});
    }
    std::size_t at(int i, int j, int label) const {
        return (std::size_t(i) * std::size_t(n + 1) + std::size_t(j)) * labels +
               std::size_t(label);
    }
};

// Applies unary rules inside one cell to a fixed point. Rules are iterated in
// signature order and only strictly better scores replace an entry, so equal
// derivations resolve to the earliest rule.
void apply_unaries(const PcfgModel& m, Chart& chart, int i, int j) {
    const std::size_t max_passes = m.labels.size() + 1;
    for (std::size_t pass = 0; pass < max_passes; ++pass) {
        bool changed = false;
        for (std::size_t r = 0; r < m.unary.size(); ++r) {
            const auto& rule = m.unary[r];
            const double child = chart.score[chart.at(i, j, rule.child)];
            if (child == kNegInf) continue;
            const double cand = rule.logp + child;
            const std::size_t slot = chart.at(i, j, rule.lhs);
            if (cand > chart.score[slot]) {
                chart.score[slot] = cand;
                chart.back[slot] = BackPointer{BackPointer::unary, int(r), -1};
                changed = true;
            }
        }
        if (!changed) break;
    }
}

ParseTree build_tree(const PcfgModel& m, const Chart& chart,
                     const std::vector<Token>& tokens, int i, int j, int label) {
    const BackPointer& bp = chart.back[chart.at(i, j, label)];
    ParseTree node;
    node.label = m.labels[std::size_t(label)];
    switch (bp.kind) {
        case BackPointer::lexical:
            node.word = tokens[std::size_t(i)].word;
            return node;
        case BackPointer::unary:
            node.children.push_back(
                build_tree(m, chart, tokens, i, j, m.unary[std::size_t(bp.rule)].child));
            return node;
        case BackPointer::binary: {
            const auto& rule = m.binary[std::size_t(bp.rule)];
            node.children.push_back(build_tree(m, chart, tokens, i, bp.split, rule.left));
            node.children.push_back(build_tree(m, chart, tokens, bp.split, j, rule.right));
            return node;
        }
        case BackPointer::none: break;
    }
    throw std::logic_error("chart entry without a derivation");
}

// Splices synthetic chain nodes back into their parents.
ParseTree debinarize(const ParseTree& node) {
    ParseTree out;
    out.label = node.label;
    out.word = node.word;
    for (const ParseTree& child : node.children) {
        ParseTree cooked = debinarize(child);
        if (is_synthetic(cooked.label)) {
            for (ParseTree& grand : cooked.children)
                out.children.push_back(std::move(grand));
        } else {
            out.children.push_back(std::move(cooked));
        }
    }
    return out;
}

}  // namespace

std::optional<ParseTree> PcfgLearner::parse(const LearnerModel& model,
                                            const std::vector<Token>& tokens) {
    const auto& m = dynamic_cast<const PcfgModel&>(model);
    const int n = int(tokens.size());
    if (n == 0) return std::nullopt;
    Chart chart(n, m.labels.size());

    for (int i = 0; i < n; ++i) {
        for (const auto& [id, logp] : m.unknown_logp) {
            auto it = m.emission_logp.find({id, tokens[std::size_t(i)].word});
            const double score = it != m.emission_logp.end() ? it->second : logp;
            const std::size_t slot = chart.at(i, i + 1, id);
            chart.score[slot] = score;
            chart.back[slot] = BackPointer{BackPointer::lexical, -1, -1};
        }
        apply_unaries(m, chart, i, i + 1);
    }

    for (int width = 2; width <= n; ++width) {
        for (int i = 0; i + width <= n; ++i) {
            const int j = i + width;
            for (std::size_t r = 0; r < m.binary.size(); ++r) {
                const auto& rule = m.binary[r];
                for (int split = i + 1; split < j; ++split) {
                    const double left = chart.score[chart.at(i, split, rule.left)];
                    if (left == kNegInf) continue;
                    const double right = chart.score[chart.at(split, j, rule.right)];
                    if (right == kNegInf) continue;
                    const double cand = rule.logp + left + right;
                    const std::size_t slot = chart.at(i, j, rule.lhs);
                    bool better = cand > chart.score[slot];
                    if (!better && cand == chart.score[slot]) {
                        // Exact ties prefer the earlier rule signature, then
                        // the earlier split point.
                        const BackPointer& cur = chart.back[slot];
                        better = cur.kind == BackPointer::binary &&
                                 std::make_pair(int(r), split) <
                                     std::make_pair(cur.rule, cur.split);
                    }
                    if (better) {
                        chart.score[slot] = cand;
                        chart.back[slot] = BackPointer{BackPointer::binary, int(r), split};
                    }
                }
            }
            apply_unaries(m, chart, i, j);
        }
    }

    int best = -1;
    double best_score = kNegInf;
    for (std::size_t id = 0; id < m.labels.size(); ++id) {
        if (m.root_logp[id] == kNegInf) continue;
        const double inside = chart.score[chart.at(0, n, int(id))];
        if (inside == kNegInf) continue;
        const double score = m.root_logp[id] + inside;
        if (score > best_score ||
            (score == best_score && best >= 0 &&
             m.labels[id] < m.labels[std::size_t(best)])) {
            best_score = score;
            best = int(id);
        }
    }
    if (best < 0) return std::nullopt;
    return debinarize(build_tree(m, chart, tokens, 0, n, best));
}

void PcfgLearner::save_model(const LearnerModel& model, const std::string& path) {
    const auto& m = dynamic_cast<const PcfgModel&>(model);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write model file: " + path);
    out << m.to_text();
    if (!out) throw DataError("write failed: " + path);
}

// ---------------------------------------------------------------------------
// Model serialization.

std::string PcfgModel::to_text() const {
    std::ostringstream out;
    out << "parsemble-pcfg 1\n";
    out << "labels " << labels.size() << "\n";
    for (const std::string& label : labels) out << label << "\n";
    std::size_t root_count = 0;
    for (double lp : root_logp)
        if (lp != kNegInf) ++root_count;
    out << "roots " << root_count << "\n";
    for (std::size_t id = 0; id < root_logp.size(); ++id)
        if (root_logp[id] != kNegInf)
            out << id << " " << format_double(root_logp[id]) << "\n";
    out << "binary " << binary.size() << "\n";
    for (const auto& r : binary)
        out << r.lhs << " " << r.left << " " << r.right << " "
            << format_double(r.logp) << "\n";
    out << "unary " << unary.size() << "\n";
    for (const auto& r : unary)
        out << r.lhs << " " << r.child << " " << format_double(r.logp) << "\n";
    out << "emissions " << emission_logp.size() << "\n";
    for (const auto& [sig, lp] : emission_logp)
        out << sig.first << " " << sig.second << " " << format_double(lp) << "\n";
    out << "unknown " << unknown_logp.size() << "\n";
    for (const auto& [id, lp] : unknown_logp)
        out << id << " " << format_double(lp) << "\n";
    out << "vocabulary " << vocabulary_size << "\n";
    return out.str();
}

PcfgModel PcfgModel::from_text(const std::string& text) {
    std::istringstream in(text);
    std::string magic;
    int version = 0;
    if (!(in >> magic >> version) || magic != "parsemble-pcfg")
        throw DataError("not a grammar file (bad magic)");
    if (version != 1)
        throw DataError("unsupported grammar version " + std::to_string(version));

    PcfgModel m;
    std::string section;
    std::size_t count = 0;
    auto expect = [&](const char* name) {
        if (!(in >> section >> count) || section != name)
            throw DataError(std::string("grammar file: expected section ") + name);
    };
    expect("labels");
    m.labels.resize(count);
    for (std::size_t i = 0; i < count; ++i) {
        if (!(in >> m.labels[i])) throw DataError("grammar file: truncated labels");
        m.label_ids[m.labels[i]] = int(i);
    }
    const auto check_id = [&](long long id) {
        if (id < 0 || std::size_t(id) >= m.labels.size())
            throw DataError("grammar file: label id out of range");
        return int(id);
    };
    expect("roots");
    m.root_logp.assign(m.labels.size(), kNegInf);
    for (std::size_t i = 0; i < count; ++i) {
        long long id;
        double lp;
        if (!(in >> id >> lp)) throw DataError("grammar file: truncated roots");
        m.root_logp[std::size_t(check_id(id))] = lp;
    }
    expect("binary");
    m.binary.resize(count);
    for (std::size_t i = 0; i < count; ++i) {
        long long a, b, c;
        double lp;
        if (!(in >> a >> b >> c >> lp)) throw DataError("grammar file: truncated binary rules");
        m.binary[i] = BinaryRule{check_id(a), check_id(b), check_id(c), lp};
    }
    expect("unary");
    m.unary.resize(count);
    for (std::size_t i = 0; i < count; ++i) {
        long long a, b;
        double lp;
        if (!(in >> a >> b >> lp)) throw DataError("grammar file: truncated unary rules");
        m.unary[i] = UnaryRule{check_id(a), check_id(b), lp};
    }
    expect("emissions");
    for (std::size_t i = 0; i < count; ++i) {
        long long id;
        std::string word;
        double lp;
        if (!(in >> id >> word >> lp)) throw DataError("grammar file: truncated emissions");
        m.emission_logp[{check_id(id), word}] = lp;
    }
    expect("unknown");
    for (std::size_t i = 0; i < count; ++i) {
        long long id;
        double lp;
        if (!(in >> id >> lp)) throw DataError("grammar file: truncated unknown entries");
        m.unknown_logp[check_id(id)] = lp;
    }
    expect("vocabulary");
    m.vocabulary_size = count;
    return m;
}

// ---------------------------------------------------------------------------
// External-command adapter.

namespace {

struct TempDir {
    std::filesystem::path path;
    TempDir() {
        std::string tmpl =
            (std::filesystem::temp_directory_path() / "parsemble-XXXXXX").string();
        if (!::mkdtemp(tmpl.data()))
            throw DataError("could not create a temporary directory");
        path = tmpl;
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;
};

struct ExternalModel : LearnerModel {
    std::shared_ptr<TempDir> dir;
    std::string model_path;
};

std::string substitute(const std::string& tmpl,
                       const std::vector<std::pair<std::string, std::string>>& vars) {
    std::string out = tmpl;
    for (const auto& [key, value] : vars) {
        const std::string token = "{" + key + "}";
        std::size_t pos = 0;
        while ((pos = out.find(token, pos)) != std::string::npos) {
            out.replace(pos, token.size(), value);
            pos += value.size();
        }
    }
    return out;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot read file: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::filesystem::path& path, const std::string& data) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write file: " + path.string());
    out << data;
    if (!out) throw DataError("write failed: " + path.string());
}

void run_command(const std::string& command, const std::filesystem::path& log_path) {
    const std::string wrapped =
        "( " + command + " ) >" + log_path.string() + " 2>&1";
    const int status = std::system(wrapped.c_str());
    const bool ok = status != -1 && WIFEXITED(status) && WEXITSTATUS(status) == 0;
    if (!ok) {
        std::string log;
        try {
            log = read_file(log_path);
        } catch (const DataError&) {
        }
        if (log.size() > 2048) log = "..." + log.substr(log.size() - 2048);
        throw DataError("external command failed: " + command +
                        (log.empty() ? "" : "\n--- captured output ---\n" + log));
    }
}

void require_placeholders(const std::string& tmpl, const std::string& what,
                          std::initializer_list<const char*> names) {
    for (const char* name : names) {
        if (tmpl.find("{" + std::string(name) + "}") == std::string::npos)
            throw UsageError(what + " command must use the {" + name +
                             "} placeholder");
    }
}

}  // namespace

ExternalLearner::ExternalLearner(ExternalCommandConfig config)
    : config_(std::move(config)) {
    require_placeholders(config_.train_command, "train", {"corpus", "model"});
    require_placeholders(config_.parse_command, "parse", {"model", "input", "output"});
}

ModelPtr ExternalLearner::train(const std::vector<ParseTree>& corpus) {
    auto model = std::make_shared<ExternalModel>();
    model->dir = std::make_shared<TempDir>();
    const auto corpus_path = model->dir->path / "corpus.mrg";
    const auto model_path = model->dir->path / "model";
    write_file(corpus_path, write_trees(corpus));
    run_command(substitute(config_.train_command, {{"corpus", corpus_path.string()},
                                                   {"model", model_path.string()}}),
                model->dir->path / "train.log");
    if (!std::filesystem::exists(model_path))
        throw DataError("external trainer did not produce a model file");
    model->model_path = model_path.string();
    return model;
}

std::optional<ParseTree> ExternalLearner::parse(const LearnerModel& model,
                                                const std::vector<Token>& tokens) {
    return parse_batch(model, {tokens}, 1)[0];
}

std::vector<std::optional<ParseTree>> ExternalLearner::parse_batch(
    const LearnerModel& model, const std::vector<std::vector<Token>>& sentences,
    int /*jobs*/) {
    const auto& m = dynamic_cast<const ExternalModel&>(model);
    TempDir dir;

    // Sentences travel as flat one-level trees, one per line, so both sides
    // speak the same bracket format.
    std::vector<ParseTree> flat(sentences.size());
    for (std::size_t i = 0; i < sentences.size(); ++i) {
        if (sentences[i].empty()) throw DataError("cannot parse an empty sentence");
        flat[i].label = "SENT";
        for (const Token& tok : sentences[i]) {
            ParseTree leaf;
            leaf.label = tok.pos.empty() ? "XX" : tok.pos;
            leaf.word = tok.word;
            flat[i].children.push_back(std::move(leaf));
        }
    }
    const auto input_path = dir.path / "input.mrg";
    const auto output_path = dir.path / "output.mrg";
    write_file(input_path, write_trees(flat));
    run_command(substitute(config_.parse_command, {{"model", m.model_path},
                                                   {"input", input_path.string()},
                                                   {"output", output_path.string()}}),
                dir.path / "parse.log");

    const std::string raw = read_file(output_path);
    std::vector<std::string> lines;
    std::istringstream in(raw);
    for (std::string line; std::getline(in, line);) lines.push_back(line);
    if (lines.size() != sentences.size())
        throw DataError("external parser returned " + std::to_string(lines.size()) +
                        " lines for " + std::to_string(sentences.size()) +
                        " sentences");

    std::vector<std::optional<ParseTree>> out(sentences.size());
    for (std::size_t i = 0; i < lines.size(); ++i) {
        std::string line = lines[i];
        const auto begin = line.find_first_not_of(" \t\r");
        const auto end = line.find_last_not_of(" \t\r");
        line = begin == std::string::npos ? "" : line.substr(begin, end - begin + 1);
        if (line == "-") continue;  // declared failure for this sentence
        std::vector<ParseTree> trees = read_trees(line);
        if (trees.size() != 1)
            throw DataError("external parser line " + std::to_string(i + 1) +
                            " does not hold exactly one tree");
        out[i] = std::move(trees[0]);
    }
    return out;
}

void ExternalLearner::save_model(const LearnerModel& model, const std::string& path) {
    const auto& m = dynamic_cast<const ExternalModel&>(model);
    std::error_code ec;
    std::filesystem::copy_file(m.model_path, path,
                               std::filesystem::copy_options::overwrite_existing, ec);
    if (ec) throw DataError("cannot copy model file to " + path + ": " + ec.message());
}

std::unique_ptr<Learner> make_learner(const std::string& spec) {
    if (spec == "pcfg") return std::make_unique<PcfgLearner>();
    const std::string prefix = "cmd:";
    if (spec.rfind(prefix, 0) == 0) {
        ExternalCommandConfig config;
        std::istringstream in(spec.substr(prefix.size()));
        for (std::string part; std::getline(in, part, ';');) {
            if (part == "nondeterministic") {
                config.deterministic = false;
                continue;
            }
            const auto eq = part.find('=');
            if (eq == std::string::npos)
                throw UsageError("bad learner option (expected key=value): " + part);
            const std::string key = part.substr(0, eq);
            const std::string value = part.substr(eq + 1);
            if (key == "train") {
                config.train_command = value;
            } else if (key == "parse") {
                config.parse_command = value;
            } else {
                throw UsageError("unknown learner option: " + key);
            }
        }
        if (config.train_command.empty() || config.parse_command.empty())
            throw UsageError("external learner needs both train= and parse= commands");
        return std::make_unique<ExternalLearner>(config);
    }
    throw UsageError("unknown learner spec: " + spec +
                     " (use \"pcfg\" or \"cmd:train=...;parse=...\")");
}

}  // namespace parsemble
