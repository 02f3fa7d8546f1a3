// parsemble: evaluate, combine, align, and ensemble-train constituency
// parsers from bracketed-tree files, with reproducible CSV/TSV reports.

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "parsemble/alignment.hpp"
#include "parsemble/combiner.hpp"
#include "parsemble/ensemble.hpp"
#include "parsemble/errors.hpp"
#include "parsemble/metrics.hpp"
#include "parsemble/report.hpp"
#include "parsemble/treebank.hpp"
#include "parsemble/weak_parser.hpp"

namespace fs = std::filesystem;
using namespace parsemble;

namespace {

// ---------------------------------------------------------------------------
// Common plumbing.

int default_jobs() {
    if (const char* env = std::getenv("PARSEMBLE_JOBS")) {
        const int n = std::atoi(env);
        if (n >= 1) return n;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw ? int(hw) : 1;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot read file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_output(const std::string& path, const std::string& content) {
    if (path == "-") {
        std::cout << content;
        return;
    }
    const fs::path p(path);
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::binary);
    if (!out) throw DataError("cannot write file: " + path);
    out << content;
    if (!out) throw DataError("write failed: " + path);
}

// A corpus file is either bracketed trees (one per line) or a constituent
// forest (TSV lines: id, length, start:end:label fields).
struct LoadedCorpus {
    std::string path;
    std::string content;
    bool has_trees = false;
    std::vector<ParseTree> trees;     // only when has_trees
    std::vector<ConstituentSet> sets; // always (trees are normalized for scoring)
};

Constituent parse_constituent_field(const std::string& field, const std::string& path) {
    const auto p1 = field.find(':');
    const auto p2 = p1 == std::string::npos ? std::string::npos : field.find(':', p1 + 1);
    if (p2 == std::string::npos || p2 + 1 >= field.size())
        throw DataError(path + ": bad constituent field '" + field + "'");
    Constituent c;
    try {
        c.start = std::stoi(field.substr(0, p1));
        c.end = std::stoi(field.substr(p1 + 1, p2 - p1 - 1));
    } catch (const std::exception&) {
        throw DataError(path + ": bad constituent field '" + field + "'");
    }
    c.label = field.substr(p2 + 1);
    return c;
}

LoadedCorpus load_corpus(const std::string& path) {
    LoadedCorpus out;
    out.path = path;
    out.content = read_file(path);

    // Sniff: first significant line starting with '(' means trees.
    std::istringstream sniff(out.content);
    bool found = false;
    for (std::string line; !found && std::getline(sniff, line);) {
        const auto pos = line.find_first_not_of(" \t\r");
        if (pos == std::string::npos || line[pos] == '#') continue;
        out.has_trees = line[pos] == '(';
        found = true;
    }
    if (!found) throw DataError(path + ": no sentences found");

    if (out.has_trees) {
        try {
            out.trees = read_trees(out.content);
        } catch (const TreeParseError& e) {
            throw DataError(path + ": " + e.what());
        }
        out.sets.reserve(out.trees.size());
        for (std::size_t i = 0; i < out.trees.size(); ++i) {
            ConstituentSet set = evalb_transform(out.trees[i]).set;
            set.sentence_id = int(i);
            out.sets.push_back(std::move(set));
        }
        return out;
    }

    std::istringstream in(out.content);
    for (std::string line; std::getline(in, line);) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const auto pos = line.find_first_not_of(" \t");
        if (pos == std::string::npos || line[pos] == '#') continue;
        std::vector<std::string> fields;
        std::istringstream split(line);
        for (std::string f; std::getline(split, f, '\t');) fields.push_back(f);
        if (fields.size() < 2)
            throw DataError(path + ": forest line needs id and length fields");
        ConstituentSet set;
        try {
            set.sentence_id = std::stoi(fields[0]);
            set.length = std::stoi(fields[1]);
        } catch (const std::exception&) {
            throw DataError(path + ": bad forest line '" + line + "'");
        }
        for (std::size_t i = 2; i < fields.size(); ++i) {
            if (fields[i].empty()) continue;
            set.insert(parse_constituent_field(fields[i], path));
        }
        set.normalize();
        out.sets.push_back(std::move(set));
    }
    if (out.sets.empty()) throw DataError(path + ": no sentences found");
    return out;
}

std::string forest_body(const std::vector<ConstituentSet>& sets) {
    std::ostringstream out;
    for (const ConstituentSet& set : sets) {
        out << set.sentence_id << '\t' << set.length;
        for (const Constituent& c : set.items)
            out << '\t' << c.start << ':' << c.end << ':' << c.label;
        out << '\n';
    }
    return out.str();
}

// Loads several line-aligned candidate files and pivots them per sentence.
struct CandidateFiles {
    std::vector<LoadedCorpus> files;
    std::vector<std::vector<ConstituentSet>> by_sentence;  // [sentence][parser]
    std::size_t sentences = 0;
    bool all_trees = true;
};

CandidateFiles load_candidates(const std::vector<std::string>& paths) {
    if (paths.empty()) throw UsageError("at least one parser file is required");
    CandidateFiles out;
    for (const std::string& path : paths) {
        out.files.push_back(load_corpus(path));
        out.all_trees = out.all_trees && out.files.back().has_trees;
        if (out.files.size() == 1) {
            out.sentences = out.files.back().sets.size();
        } else if (out.files.back().sets.size() != out.sentences) {
            throw DataError(path + ": holds " +
                            std::to_string(out.files.back().sets.size()) +
                            " sentences, expected " + std::to_string(out.sentences));
        }
    }
    out.by_sentence.resize(out.sentences);
    for (std::size_t s = 0; s < out.sentences; ++s) {
        for (const LoadedCorpus& file : out.files)
            out.by_sentence[s].push_back(file.sets[s]);
    }
    return out;
}

void note_inputs(Report& report, const CandidateFiles& candidates) {
    for (std::size_t i = 0; i < candidates.files.size(); ++i)
        report.note_input("input " + std::to_string(i), candidates.files[i].path,
                          candidates.files[i].content);
    report.note("sentences", static_cast<long long>(candidates.sentences));
}

std::string optional_number(const std::optional<double>& v) {
    return v ? format_number(*v) : "";
}

void score_rows(Report& report, const ScoreReport& scores, bool per_label,
                bool per_parent) {
    report.row({"scope", "label", "matched", "spurious", "missed", "precision",
                "recall", "mean", "f", "exact"});
    const CountTable& t = scores.totals;
    report.row({"overall", "", std::to_string(t.a), std::to_string(t.b),
                std::to_string(t.c), format_number(scores.precision),
                format_number(scores.recall), format_number(scores.mean),
                format_number(scores.f_measure), format_number(scores.exact)});
    auto breakdown = [&](const char* scope,
                         const std::map<std::string, CountTable>& cells) {
        for (const auto& [label, cell] : cells) {
            report.row({scope, label, std::to_string(cell.a), std::to_string(cell.b),
                        std::to_string(cell.c),
                        format_number(safe_ratio(double(cell.a), double(cell.a + cell.b))),
                        format_number(safe_ratio(double(cell.a), double(cell.a + cell.c))),
                        "", "", ""});
        }
    };
    if (per_label) breakdown("label", scores.per_label);
    if (per_parent) breakdown("parent", scores.per_parent);
}

// Writes trees when every input held trees (picking the original parse), a
// forest otherwise.
void write_selection(const std::string& out_path, const CandidateFiles& candidates,
                     const std::vector<SwitchDecision>& decisions, Report& manifest) {
    if (candidates.all_trees) {
        std::vector<ParseTree> chosen;
        chosen.reserve(decisions.size());
        for (std::size_t s = 0; s < decisions.size(); ++s)
            chosen.push_back(candidates.files[decisions[s].chosen].trees[s]);
        write_output(out_path, write_trees(chosen));
        return;
    }
    std::vector<ConstituentSet> chosen;
    chosen.reserve(decisions.size());
    for (std::size_t s = 0; s < decisions.size(); ++s)
        chosen.push_back(candidates.by_sentence[s][decisions[s].chosen]);
    write_output(out_path, manifest.str() + forest_body(chosen));
}

void write_switch_report(const std::string& path, Report& report,
                         const std::vector<SwitchDecision>& decisions) {
    if (path.empty()) return;
    std::vector<std::string> header{"sentence", "chosen", "tie"};
    if (!decisions.empty())
        for (std::size_t i = 0; i < decisions[0].scores.size(); ++i)
            header.push_back("score_" + std::to_string(i));
    report.row(header);
    for (std::size_t s = 0; s < decisions.size(); ++s) {
        std::vector<std::string> row{std::to_string(s),
                                     std::to_string(decisions[s].chosen),
                                     decisions[s].tie ? "1" : "0"};
        for (double score : decisions[s].scores) row.push_back(format_number(score));
        report.row(row);
    }
    write_output(path, report.str());
}

// ---------------------------------------------------------------------------
// eval

struct EvalOpts {
    std::string guess, gold, out = "-";
    bool per_label = false, per_parent = false, multiset = false;
};

void run_eval(const EvalOpts& o) {
    const LoadedCorpus guess = load_corpus(o.guess);
    const LoadedCorpus gold = load_corpus(o.gold);
    if (guess.sets.size() != gold.sets.size())
        throw DataError("guess has " + std::to_string(guess.sets.size()) +
                        " sentences, gold has " + std::to_string(gold.sets.size()));
    const ScoreReport scores = evaluate(guess.sets, gold.sets, o.multiset);

    Report report;
    report.note("command", "eval");
    report.note_input("guess", guess.path, guess.content);
    report.note_input("gold", gold.path, gold.content);
    report.note("multiset", o.multiset ? "true" : "false");
    report.note("sentences", static_cast<long long>(gold.sets.size()));
    score_rows(report, scores, o.per_label, o.per_parent);
    write_output(o.out, report.str());
}

// ---------------------------------------------------------------------------
// combine

struct CombineOpts {
    std::vector<std::string> files;
    std::string mode;
    int threshold = 0;  // 0: strict majority
    double lambda = 1.0;
    std::string kind = "plain";
    std::string context;
    std::string gold, model_in, model_out;
    std::string out = "-";
};

std::vector<ContextFeature> parse_context_list(const std::string& spec) {
    std::vector<ContextFeature> out;
    std::istringstream in(spec);
    for (std::string name; std::getline(in, name, ',');) {
        if (!name.empty()) out.push_back(parse_context_feature(name));
    }
    return out;
}

BayesKind parse_bayes_kind(const std::string& name) {
    if (name == "plain") return BayesKind::plain;
    if (name == "coprediction") return BayesKind::coprediction;
    if (name == "independent") return BayesKind::independent_context;
    throw UsageError("unknown Bayes model kind: " + name);
}

void run_combine(const CombineOpts& o) {
    const CandidateFiles candidates = load_candidates(o.files);
    const int k = int(candidates.files.size());

    Report manifest;
    manifest.note("command", "combine");
    manifest.note("mode", o.mode);
    note_inputs(manifest, candidates);

    std::vector<ConstituentSet> combined(candidates.sentences);
    if (o.mode == "vote") {
        VoteConfig cfg;
        cfg.k = k;
        cfg.threshold = o.threshold > 0 ? o.threshold : k / 2 + 1;
        manifest.note("threshold", cfg.threshold);
        for (std::size_t s = 0; s < candidates.sentences; ++s)
            combined[s] = constituent_vote(candidates.by_sentence[s], cfg);
    } else if (o.mode == "bayes-hybrid") {
        BayesModel model;
        if (!o.model_in.empty()) {
            if (!o.gold.empty())
                throw UsageError("give either --model-in or --gold, not both");
            model = BayesModel::from_text(read_file(o.model_in));
            if (model.k != k)
                throw DataError("model was trained for " + std::to_string(model.k) +
                                " parsers, got " + std::to_string(k));
            manifest.note_input("model", o.model_in, read_file(o.model_in));
        } else if (!o.gold.empty()) {
            const LoadedCorpus gold = load_corpus(o.gold);
            if (gold.sets.size() != candidates.sentences)
                throw DataError("gold sentence count does not match parser files");
            manifest.note_input("gold", gold.path, gold.content);
            model = bayes_train(candidates.by_sentence, gold.sets, o.lambda,
                                parse_bayes_kind(o.kind), parse_context_list(o.context));
        } else {
            throw UsageError("bayes-hybrid needs --model-in or --gold");
        }
        manifest.note("kind", o.kind);
        manifest.note("lambda", format_number(o.lambda));
        if (!o.context.empty()) manifest.note("context", o.context);
        if (!o.model_out.empty()) write_output(o.model_out, model.to_text());
        for (std::size_t s = 0; s < candidates.sentences; ++s)
            combined[s] = bayes_hybrid(model, candidates.by_sentence[s]);
    } else {
        throw UsageError("unknown combine mode: " + o.mode);
    }
    write_output(o.out, manifest.str() + forest_body(combined));
}

// ---------------------------------------------------------------------------
// switch

struct SwitchOpts {
    std::vector<std::string> files;
    std::string mode;
    std::string model_in;
    std::string out = "-";
    std::string report_path;
};

void run_switch(const SwitchOpts& o) {
    const CandidateFiles candidates = load_candidates(o.files);

    Report manifest;
    manifest.note("command", "switch");
    manifest.note("mode", o.mode);
    note_inputs(manifest, candidates);

    BayesModel model;
    if (o.mode == "bayes") {
        if (o.model_in.empty()) throw UsageError("switch --mode bayes needs --model-in");
        model = BayesModel::from_text(read_file(o.model_in));
        if (model.k != int(candidates.files.size()))
            throw DataError("model was trained for " + std::to_string(model.k) +
                            " parsers, got " + std::to_string(candidates.files.size()));
        manifest.note_input("model", o.model_in, read_file(o.model_in));
    } else if (o.mode != "similarity" && o.mode != "distance") {
        throw UsageError("unknown switch mode: " + o.mode);
    }

    std::vector<SwitchDecision> decisions(candidates.sentences);
    for (std::size_t s = 0; s < candidates.sentences; ++s) {
        const auto& sets = candidates.by_sentence[s];
        if (o.mode == "similarity") {
            decisions[s] = similarity_switch(sets);
        } else if (o.mode == "distance") {
            decisions[s] = distance_switch(sets);
        } else {
            decisions[s] = bayes_switch(model, sets);
        }
    }
    write_selection(o.out, candidates, decisions, manifest);
    Report report;
    report.note("command", "switch report");
    report.note("mode", o.mode);
    write_switch_report(o.report_path, report, decisions);
}

// ---------------------------------------------------------------------------
// align

struct AlignOpts {
    std::vector<std::string> files;
    std::string distance;
    std::string mode;
    double threshold = -1.0;  // <0: default for the distance and k
    std::string out = "-";
    std::string report_path;
};

void run_align(const AlignOpts& o) {
    const EditDistanceKind kind = parse_distance_kind(o.distance);
    const CandidateFiles candidates = load_candidates(o.files);

    Report manifest;
    manifest.note("command", "align");
    manifest.note("mode", o.mode);
    manifest.note("distance", distance_kind_name(kind));
    note_inputs(manifest, candidates);

    if (o.mode == "dump") {
        if (candidates.files.size() != 2)
            throw UsageError("align --mode dump needs exactly two parser files");
        manifest.row({"sentence", "left", "right", "left_constituent",
                      "right_constituent", "weight"});
        for (std::size_t s = 0; s < candidates.sentences; ++s) {
            const ConstituentSet& a = candidates.by_sentence[s][0];
            const ConstituentSet& b = candidates.by_sentence[s][1];
            const Alignment alignment = align(a, b, kind);
            for (const AlignedPair& p : alignment.pairs) {
                manifest.row({std::to_string(s),
                              p.left >= 0 ? std::to_string(p.left) : "-",
                              p.right >= 0 ? std::to_string(p.right) : "-",
                              p.left >= 0 ? a.items[std::size_t(p.left)].str() : "-",
                              p.right >= 0 ? b.items[std::size_t(p.right)].str() : "-",
                              format_number(p.weight)});
            }
        }
        write_output(o.out, manifest.str());
        return;
    }

    if (o.mode == "switch") {
        std::vector<SwitchDecision> decisions(candidates.sentences);
        for (std::size_t s = 0; s < candidates.sentences; ++s)
            decisions[s] = alignment_switch(candidates.by_sentence[s], kind);
        write_selection(o.out, candidates, decisions, manifest);
        Report report;
        report.note("command", "align switch report");
        report.note("distance", distance_kind_name(kind));
        write_switch_report(o.report_path, report, decisions);
        return;
    }

    if (o.mode == "consensus") {
        const double t =
            o.threshold >= 0.0
                ? o.threshold
                : default_consensus_threshold(kind, int(candidates.files.size()));
        manifest.note("threshold", format_number(t));
        std::vector<ConstituentSet> consensus(candidates.sentences);
        for (std::size_t s = 0; s < candidates.sentences; ++s) {
            consensus[s] = consensus_parse(candidates.by_sentence[s], kind, t);
            consensus[s].sentence_id = int(s);
        }
        write_output(o.out, manifest.str() + forest_body(consensus));
        return;
    }
    throw UsageError("unknown align mode: " + o.mode);
}

// ---------------------------------------------------------------------------
// bag / boost shared plumbing

std::vector<ParseTree> load_tree_corpus(const std::string& path, std::string* content) {
    const std::string text = read_file(path);
    if (content) *content = text;
    std::vector<ParseTree> trees;
    try {
        trees = read_trees(text);
    } catch (const TreeParseError& e) {
        throw DataError(path + ": " + e.what());
    }
    if (trees.empty()) throw DataError(path + ": no trees found");
    return trees;
}

std::string member_file_name(int iteration) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "member_%03d.model", iteration);
    return buf;
}

// Parses the test sentences with every usable member, votes with the given
// weights, writes the hypotheses forest, and optionally scores ensemble and
// members against a gold file.
void run_ensemble_test(Learner& learner, const std::vector<EnsembleMember>& members,
                       VoteWeight vote_scheme, const std::string& test_path,
                       const std::string& gold_path, const fs::path& out_dir,
                       int jobs, Report base_manifest) {
    std::string test_content;
    const std::vector<ParseTree> test_trees = load_tree_corpus(test_path, &test_content);
    std::vector<std::vector<Token>> sentences(test_trees.size());
    for (std::size_t s = 0; s < test_trees.size(); ++s)
        sentences[s] = test_trees[s].tokens();

    std::vector<std::size_t> active;
    for (std::size_t i = 0; i < members.size(); ++i)
        if (!members[i].discarded) active.push_back(i);
    if (active.empty()) throw DataError("no usable ensemble members");
    const std::vector<double> all_weights = vote_weights(members, vote_scheme);

    std::vector<std::vector<ConstituentSet>> member_sets(active.size());
    for (std::size_t m = 0; m < active.size(); ++m) {
        const auto parses =
            learner.parse_batch(*members[active[m]].model, sentences, jobs);
        member_sets[m].resize(sentences.size());
        for (std::size_t s = 0; s < sentences.size(); ++s) {
            ConstituentSet set;
            if (parses[s]) set = evalb_transform(*parses[s]).set;
            set.sentence_id = int(s);
            set.length = int(sentences[s].size());
            member_sets[m][s] = std::move(set);
        }
    }

    std::vector<double> weights;
    for (std::size_t i : active) weights.push_back(all_weights[i]);
    std::vector<ConstituentSet> voted(sentences.size());
    for (std::size_t s = 0; s < sentences.size(); ++s) {
        std::vector<ConstituentSet> outputs;
        for (std::size_t m = 0; m < active.size(); ++m)
            outputs.push_back(member_sets[m][s]);
        voted[s] = weighted_constituent_vote(outputs, weights);
    }

    Report hyp_manifest = base_manifest;
    hyp_manifest.note_input("test", test_path, test_content);
    hyp_manifest.note("vote weight", vote_weight_name(vote_scheme));
    write_output((out_dir / "hypotheses.tsv").string(),
                 hyp_manifest.str() + forest_body(voted));

    if (gold_path.empty()) return;
    const LoadedCorpus gold = load_corpus(gold_path);
    if (gold.sets.size() != sentences.size())
        throw DataError("gold sentence count does not match test file");

    Report score_report = base_manifest;
    score_report.note_input("test", test_path, test_content);
    score_report.note_input("gold", gold.path, gold.content);
    score_report.row({"system", "matched", "spurious", "missed", "precision",
                      "recall", "f", "exact"});
    auto add_row = [&](const std::string& name, const ScoreReport& s) {
        score_report.row({name, std::to_string(s.totals.a), std::to_string(s.totals.b),
                          std::to_string(s.totals.c), format_number(s.precision),
                          format_number(s.recall), format_number(s.f_measure),
                          format_number(s.exact)});
    };
    add_row("ensemble", evaluate(voted, gold.sets));
    for (std::size_t m = 0; m < active.size(); ++m)
        add_row("member_" + std::to_string(members[active[m]].iteration),
                evaluate(member_sets[m], gold.sets));
    write_output((out_dir / "score.csv").string(), score_report.str());
}

// ---------------------------------------------------------------------------
// bag

struct BagOpts {
    std::string corpus;
    int k = 11;
    std::string scheme = "uniform";
    std::uint64_t seed = 0;
    std::string learner = "pcfg";
    std::size_t replicate_size = 0;
    std::string out_dir;
    std::string test, gold;
    int jobs = default_jobs();
};

void run_bag(const BagOpts& o) {
    std::string corpus_content;
    const std::vector<ParseTree> corpus = load_tree_corpus(o.corpus, &corpus_content);
    const std::unique_ptr<Learner> learner = make_learner(o.learner);

    BagConfig cfg;
    cfg.members = o.k;
    cfg.scheme = parse_weight_scheme(o.scheme);
    cfg.replicate_size = o.replicate_size;
    cfg.seed = o.seed;
    cfg.jobs = o.jobs;
    const BagResult result = bag(corpus, *learner, cfg);

    const fs::path out_dir(o.out_dir);
    fs::create_directories(out_dir);

    Report manifest;
    manifest.note("command", "bag");
    manifest.note_input("corpus", o.corpus, corpus_content);
    manifest.note("members", o.k);
    manifest.note("scheme", weight_scheme_name(cfg.scheme));
    manifest.note("seed", static_cast<long long>(o.seed));
    manifest.note("learner", o.learner);
    manifest.note("replicate size",
                  static_cast<long long>(cfg.replicate_size ? cfg.replicate_size
                                                            : corpus.size()));
    manifest.note("jobs", o.jobs);

    Report members_report = manifest;
    members_report.row({"member", "iteration", "alpha", "model_file", "unique_types"});
    for (std::size_t i = 0; i < result.members.size(); ++i) {
        const EnsembleMember& m = result.members[i];
        const std::string file = member_file_name(m.iteration);
        learner->save_model(*m.model, (out_dir / file).string());
        members_report.row({std::to_string(i), std::to_string(m.iteration),
                            format_number(m.alpha), file,
                            std::to_string(result.replicate_types[i])});
    }
    write_output((out_dir / "members.csv").string(), members_report.str());

    if (!o.test.empty())
        run_ensemble_test(*learner, result.members, VoteWeight::alpha, o.test,
                          o.gold, out_dir, o.jobs, manifest);
}

// ---------------------------------------------------------------------------
// boost

struct BoostOpts {
    std::string corpus;
    int rounds = 5;
    std::string alpha = "f";
    bool backoff = false;
    std::string scheme = "uniform";
    std::uint64_t seed = 0;
    std::string learner = "pcfg";
    std::size_t replicate_size = 0;
    std::string vote_weight = "alpha";
    std::string out_dir;
    std::string test, gold;
    int jobs = default_jobs();
};

void run_boost(const BoostOpts& o) {
    std::string corpus_content;
    const std::vector<ParseTree> corpus = load_tree_corpus(o.corpus, &corpus_content);
    const std::unique_ptr<Learner> learner = make_learner(o.learner);

    BoostConfig cfg;
    cfg.rounds = o.rounds;
    cfg.mode = parse_alpha_mode(o.alpha);
    cfg.scheme = parse_weight_scheme(o.scheme);
    cfg.backoff = o.backoff;
    cfg.replicate_size = o.replicate_size;
    cfg.seed = o.seed;
    cfg.jobs = o.jobs;
    const BoostResult result = boost(corpus, *learner, cfg);

    const fs::path out_dir(o.out_dir);
    fs::create_directories(out_dir);

    Report manifest;
    manifest.note("command", "boost");
    manifest.note_input("corpus", o.corpus, corpus_content);
    manifest.note("rounds", o.rounds);
    manifest.note("alpha mode", alpha_mode_name(cfg.mode));
    manifest.note("backoff", o.backoff ? "true" : "false");
    manifest.note("scheme", weight_scheme_name(cfg.scheme));
    manifest.note("seed", static_cast<long long>(o.seed));
    manifest.note("learner", o.learner);
    manifest.note("vote weight", o.vote_weight);
    manifest.note("jobs", o.jobs);

    Report members_report = manifest;
    members_report.row({"member", "iteration", "alpha_raw", "alpha", "log_inv_alpha",
                        "discarded", "model_file"});
    for (std::size_t i = 0; i < result.members.size(); ++i) {
        const EnsembleMember& m = result.members[i];
        const std::string file = member_file_name(m.iteration);
        learner->save_model(*m.model, (out_dir / file).string());
        members_report.row({std::to_string(i), std::to_string(m.iteration),
                            format_number(m.alpha_raw), format_number(m.alpha),
                            m.discarded ? "" : format_number(std::log(1.0 / m.alpha)),
                            m.discarded ? "1" : "0", file});
    }
    write_output((out_dir / "members.csv").string(), members_report.str());

    Report iter_report = manifest;
    iter_report.row({"iteration", "alpha_raw", "alpha", "error", "violation",
                     "discarded", "reset", "degenerate"});
    for (const IterationRecord& r : result.ledger.iterations) {
        iter_report.row({std::to_string(r.iteration), format_number(r.alpha_raw),
                         format_number(r.alpha), format_number(r.error),
                         r.violation ? "1" : "0", r.discarded ? "1" : "0",
                         r.reset ? "1" : "0", r.degenerate ? "1" : "0"});
    }
    write_output((out_dir / "iterations.csv").string(), iter_report.str());

    Report ledger_report = manifest;
    ledger_report.row({"snapshot", "sample", "weight"});
    for (std::size_t s = 0; s < result.ledger.snapshots.size(); ++s) {
        const auto& snapshot = result.ledger.snapshots[s];
        for (std::size_t i = 0; i < snapshot.size(); ++i) {
            char buf[64];
            std::snprintf(buf, sizeof(buf), "%.17g", snapshot[i]);
            ledger_report.row({std::to_string(s), std::to_string(i), buf});
        }
    }
    write_output((out_dir / "ledger.csv").string(), ledger_report.str());

    Report up_report = manifest;
    up_report.row({"sample", "up_weight_rounds"});
    for (std::size_t i = 0; i < result.ledger.up_weight_counts.size(); ++i)
        up_report.row({std::to_string(i),
                       std::to_string(result.ledger.up_weight_counts[i])});
    write_output((out_dir / "upweights.csv").string(), up_report.str());

    if (!o.test.empty())
        run_ensemble_test(*learner, result.members, parse_vote_weight(o.vote_weight),
                          o.test, o.gold, out_dir, o.jobs, manifest);
}

// ---------------------------------------------------------------------------
// diagnose

struct DiagnoseOpts {
    std::string mode = "weights";
    std::string ledger_path;
    std::size_t bins = 20;
    std::size_t top = 100;
    std::string corpus;
    std::string learner = "pcfg";
    int replication = 10;
    std::string trimmed_out;
    std::string out = "-";
    int jobs = default_jobs();
};

WeightLedger read_ledger_csv(const std::string& path, std::string* content) {
    const std::string text = read_file(path);
    if (content) *content = text;
    std::map<std::size_t, std::map<std::size_t, double>> table;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#' || line.rfind("snapshot,", 0) == 0) continue;
        std::istringstream split(line);
        std::string s_field, i_field, w_field;
        if (!std::getline(split, s_field, ',') || !std::getline(split, i_field, ',') ||
            !std::getline(split, w_field, ','))
            throw DataError(path + ": bad ledger line '" + line + "'");
        try {
            table[std::stoul(s_field)][std::stoul(i_field)] = std::stod(w_field);
        } catch (const std::exception&) {
            throw DataError(path + ": bad ledger line '" + line + "'");
        }
    }
    if (table.empty()) throw DataError(path + ": no ledger rows found");
    WeightLedger ledger;
    std::size_t expected = 0;
    for (const auto& [snapshot, weights] : table) {
        if (snapshot != ledger.snapshots.size())
            throw DataError(path + ": snapshot indices are not contiguous");
        std::vector<double> dist;
        for (const auto& [sample, weight] : weights) {
            if (sample != dist.size())
                throw DataError(path + ": sample indices are not contiguous");
            dist.push_back(weight);
        }
        if (ledger.snapshots.empty()) {
            expected = dist.size();
        } else if (dist.size() != expected) {
            throw DataError(path + ": snapshots differ in sample count");
        }
        ledger.snapshots.push_back(std::move(dist));
    }
    return ledger;
}

void run_diagnose(const DiagnoseOpts& o) {
    if (o.mode == "weights") {
        if (o.ledger_path.empty())
            throw UsageError("diagnose --mode weights needs --ledger");
        std::string ledger_content;
        const WeightLedger ledger = read_ledger_csv(o.ledger_path, &ledger_content);
        std::vector<ParseTree> corpus;
        if (!o.corpus.empty()) {
            corpus = load_tree_corpus(o.corpus, nullptr);
            if (corpus.size() != ledger.snapshots[0].size())
                throw DataError("corpus size does not match the ledger");
        }
        const WeightDiagnostics diag = diagnose_weights(ledger, o.bins, o.top);

        Report report;
        report.note("command", "diagnose weights");
        report.note_input("ledger", o.ledger_path, ledger_content);
        report.note("bins", static_cast<long long>(o.bins));
        report.note("top", static_cast<long long>(o.top));
        report.row({"kind", "snapshot", "bin", "size", "mean_weight", "sample",
                    "weight", "tree"});
        for (const WeightBinRow& row : diag.rows) {
            report.row({"bin", std::to_string(row.snapshot), std::to_string(row.bin),
                        std::to_string(row.size), format_number(row.mean_weight), "",
                        "", ""});
        }
        for (const HeavySample& heavy : diag.heaviest) {
            report.row({"heavy", "", "", "", "", std::to_string(heavy.sample),
                        format_number(heavy.weight),
                        heavy.sample < corpus.size() ? write_tree(corpus[heavy.sample])
                                                     : ""});
        }
        write_output(o.out, report.str());
        return;
    }

    if (o.mode == "memorize") {
        if (o.corpus.empty()) throw UsageError("diagnose --mode memorize needs --corpus");
        std::string corpus_content;
        const std::vector<ParseTree> corpus = load_tree_corpus(o.corpus, &corpus_content);
        const std::unique_ptr<Learner> learner = make_learner(o.learner);
        const MemorizationReport result =
            memorization_check(corpus, *learner, o.replication, o.jobs);

        Report report;
        report.note("command", "diagnose memorize");
        report.note_input("corpus", o.corpus, corpus_content);
        report.note("learner", o.learner);
        report.note("replication", o.replication);
        report.note("unlearnable", static_cast<long long>(result.unlearnable.size()));
        report.row({"sample", "status", "sentence"});
        std::set<std::size_t> bad(result.unlearnable.begin(), result.unlearnable.end());
        for (std::size_t i = 0; i < corpus.size(); ++i) {
            std::ostringstream sentence;
            for (const Token& tok : corpus[i].tokens()) {
                if (tok.index) sentence << ' ';
                sentence << tok.word;
            }
            report.row({std::to_string(i), bad.count(i) ? "unlearnable" : "learnable",
                        sentence.str()});
        }
        write_output(o.out, report.str());
        if (!o.trimmed_out.empty())
            write_output(o.trimmed_out, write_trees(result.trimmed));
        return;
    }
    throw UsageError("unknown diagnose mode: " + o.mode);
}

// ---------------------------------------------------------------------------
// simulate

struct SimulateOpts {
    int rounds = 6;
    std::string out = "-";
};

void run_simulate(const SimulateOpts& o) {
    const std::vector<SimulationRow> rows = simulate_contradiction(o.rounds);
    Report report;
    report.note("command", "simulate");
    report.note("rounds", o.rounds);
    report.row({"round", "weight_1", "weight_2", "weight_3", "starred", "epsilon",
                "multiplier"});
    auto wide = [](double v) {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%.12g", v);
        return std::string(buf);
    };
    for (std::size_t t = 0; t < rows.size(); ++t) {
        report.row({std::to_string(t + 1), wide(rows[t].weights[0]),
                    wide(rows[t].weights[1]), wide(rows[t].weights[2]),
                    std::to_string(rows[t].starred), wide(rows[t].epsilon),
                    wide(rows[t].multiplier)});
    }
    write_output(o.out, report.str());
}

// ---------------------------------------------------------------------------
// oracle

struct OracleOpts {
    std::vector<std::string> files;
    std::string mode;
    std::string gold;
    std::string context = "none";
    std::string out = "-";
};

IsolatedContext parse_isolated_context(const std::string& name) {
    if (name == "none") return IsolatedContext::none;
    if (name == "label") return IsolatedContext::label;
    if (name == "parent") return IsolatedContext::parent;
    if (name == "span-length") return IsolatedContext::span_length;
    if (name == "sentence-length") return IsolatedContext::sentence_length;
    throw UsageError("unknown context: " + name);
}

void run_oracle(const OracleOpts& o) {
    const CandidateFiles candidates = load_candidates(o.files);
    const LoadedCorpus gold = load_corpus(o.gold);
    if (gold.sets.size() != candidates.sentences)
        throw DataError("gold sentence count does not match parser files");

    Report report;
    report.note("command", "oracle");
    report.note("mode", o.mode);
    note_inputs(report, candidates);
    report.note_input("gold", gold.path, gold.content);

    if (o.mode == "switch") {
        score_rows(report, parser_switch_oracle(candidates.by_sentence, gold.sets),
                   false, false);
    } else if (o.mode == "max-precision") {
        // Per-label rows carry the recall-error breakdown of the pooled
        // constituents.
        score_rows(report, max_precision_oracle(candidates.by_sentence, gold.sets),
                   true, false);
    } else if (o.mode == "isolated") {
        const IsolatedContext context = parse_isolated_context(o.context);
        report.note("context", o.context);
        report.row({"parser", "context", "isolated", "correct", "precision"});
        for (std::size_t p = 0; p < candidates.files.size(); ++p) {
            const auto cells =
                isolated_precision(candidates.by_sentence, gold.sets, p, context);
            for (const auto& [value, cell] : cells) {
                report.row({std::to_string(p), value, std::to_string(cell.isolated),
                            std::to_string(cell.correct),
                            optional_number(cell.precision())});
            }
        }
    } else {
        throw UsageError("unknown oracle mode: " + o.mode);
    }
    write_output(o.out, report.str());
}

}  // namespace

// ---------------------------------------------------------------------------

int main(int argc, char** argv) {
    CLI::App app{"parser evaluation, combination, and ensemble training"};
    app.require_subcommand(1);

    auto eval_opts = std::make_shared<EvalOpts>();
    auto* eval_cmd = app.add_subcommand("eval", "score a parser run against a gold file");
    eval_cmd->add_option("--guess", eval_opts->guess, "parser output (trees or forest)")
        ->required();
    eval_cmd->add_option("--gold", eval_opts->gold, "reference file")->required();
    eval_cmd->add_flag("--per-label", eval_opts->per_label, "add per-label rows");
    eval_cmd->add_flag("--per-parent", eval_opts->per_parent, "add per-parent rows");
    eval_cmd->add_flag("--multiset", eval_opts->multiset,
                       "count repeated (span, label) pairs separately");
    eval_cmd->add_option("--out", eval_opts->out, "report file ('-': stdout)");
    eval_cmd->callback([eval_opts] { run_eval(*eval_opts); });

    auto combine_opts = std::make_shared<CombineOpts>();
    auto* combine_cmd =
        app.add_subcommand("combine", "merge parser outputs into one hypothesis set");
    combine_cmd->add_option("files", combine_opts->files, "parser output files")
        ->required()
        ->expected(-1);
    combine_cmd->add_option("--mode", combine_opts->mode, "vote | bayes-hybrid")
        ->required();
    combine_cmd->add_option("--threshold", combine_opts->threshold,
                            "votes required (default: strict majority)");
    combine_cmd->add_option("--lambda", combine_opts->lambda,
                            "additive smoothing constant (> 0)");
    combine_cmd->add_option("--kind", combine_opts->kind,
                            "plain | coprediction | independent");
    combine_cmd->add_option("--context", combine_opts->context,
                            "comma list of tag,parenttag,clength,slength");
    combine_cmd->add_option("--gold", combine_opts->gold, "training reference file");
    combine_cmd->add_option("--model-in", combine_opts->model_in, "load a trained model");
    combine_cmd->add_option("--model-out", combine_opts->model_out,
                            "save the trained model");
    combine_cmd->add_option("--out", combine_opts->out, "forest file ('-': stdout)");
    combine_cmd->callback([combine_opts] { run_combine(*combine_opts); });

    auto switch_opts = std::make_shared<SwitchOpts>();
    auto* switch_cmd =
        app.add_subcommand("switch", "pick one parser's output per sentence");
    switch_cmd->add_option("files", switch_opts->files, "parser output files")
        ->required()
        ->expected(-1);
    switch_cmd->add_option("--mode", switch_opts->mode, "similarity | distance | bayes")
        ->required();
    switch_cmd->add_option("--model-in", switch_opts->model_in,
                           "trained model (bayes mode)");
    switch_cmd->add_option("--out", switch_opts->out, "selected parses ('-': stdout)");
    switch_cmd->add_option("--report", switch_opts->report_path,
                           "per-sentence decision report (CSV)");
    switch_cmd->callback([switch_opts] { run_switch(*switch_opts); });

    auto align_opts = std::make_shared<AlignOpts>();
    auto* align_cmd =
        app.add_subcommand("align", "align parses by edit distance; switch or build consensus");
    align_cmd->add_option("files", align_opts->files, "parser output files")
        ->required()
        ->expected(-1);
    align_cmd
        ->add_option("--distance", align_opts->distance,
                     "kronecker | piecewise | looselabel | linear | stringent")
        ->required();
    align_cmd->add_option("--mode", align_opts->mode, "dump | switch | consensus")
        ->required();
    align_cmd->add_option("--threshold", align_opts->threshold,
                          "consensus acceptance threshold (default per distance)");
    align_cmd->add_option("--out", align_opts->out, "output file ('-': stdout)");
    align_cmd->add_option("--report", align_opts->report_path,
                          "per-sentence decision report (CSV)");
    align_cmd->callback([align_opts] { run_align(*align_opts); });

    auto bag_opts = std::make_shared<BagOpts>();
    auto* bag_cmd = app.add_subcommand("bag", "train a bagged parser ensemble");
    bag_cmd->add_option("--corpus", bag_opts->corpus, "training treebank")->required();
    bag_cmd->add_option("--k", bag_opts->k, "number of members");
    bag_cmd->add_option("--scheme", bag_opts->scheme,
                        "uniform | length | possibilities | inverse");
    bag_cmd->add_option("--seed", bag_opts->seed, "RNG seed");
    bag_cmd->add_option("--learner", bag_opts->learner,
                        "pcfg | cmd:train=...;parse=...");
    bag_cmd->add_option("--replicate-size", bag_opts->replicate_size,
                        "samples per replicate (default: corpus size)");
    bag_cmd->add_option("--out-dir", bag_opts->out_dir, "output directory")->required();
    bag_cmd->add_option("--test", bag_opts->test, "sentences to parse with the ensemble");
    bag_cmd->add_option("--gold", bag_opts->gold, "reference for scoring --test");
    bag_cmd->add_option("--jobs", bag_opts->jobs, "worker cap (env PARSEMBLE_JOBS)");
    bag_cmd->callback([bag_opts] { run_bag(*bag_opts); });

    auto boost_opts = std::make_shared<BoostOpts>();
    auto* boost_cmd = app.add_subcommand("boost", "train a boosted parser ensemble");
    boost_cmd->add_option("--corpus", boost_opts->corpus, "training treebank")->required();
    boost_cmd->add_option("--T", boost_opts->rounds, "number of rounds");
    boost_cmd->add_option("--alpha", boost_opts->alpha,
                          "precision | recall | f | const-acc");
    boost_cmd->add_flag("--backoff", boost_opts->backoff,
                        "discard members that violate the weak-learner bound");
    boost_cmd->add_option("--scheme", boost_opts->scheme,
                          "initial distribution: uniform | length | possibilities | inverse");
    boost_cmd->add_option("--seed", boost_opts->seed, "RNG seed");
    boost_cmd->add_option("--learner", boost_opts->learner,
                          "pcfg | cmd:train=...;parse=...");
    boost_cmd->add_option("--replicate-size", boost_opts->replicate_size,
                          "samples per replicate (default: corpus size)");
    boost_cmd->add_option("--vote-weight", boost_opts->vote_weight,
                          "alpha | log-inv-alpha");
    boost_cmd->add_option("--out-dir", boost_opts->out_dir, "output directory")
        ->required();
    boost_cmd->add_option("--test", boost_opts->test,
                          "sentences to parse with the ensemble");
    boost_cmd->add_option("--gold", boost_opts->gold, "reference for scoring --test");
    boost_cmd->add_option("--jobs", boost_opts->jobs, "worker cap (env PARSEMBLE_JOBS)");
    boost_cmd->callback([boost_opts] { run_boost(*boost_opts); });

    auto diagnose_opts = std::make_shared<DiagnoseOpts>();
    auto* diagnose_cmd =
        app.add_subcommand("diagnose", "inspect boosting weights or corpus learnability");
    diagnose_cmd->add_option("--mode", diagnose_opts->mode, "weights | memorize");
    diagnose_cmd->add_option("--ledger", diagnose_opts->ledger_path,
                             "ledger.csv from a boost run");
    diagnose_cmd->add_option("--bins", diagnose_opts->bins, "weight bins per snapshot");
    diagnose_cmd->add_option("--top", diagnose_opts->top, "heaviest samples to list");
    diagnose_cmd->add_option("--corpus", diagnose_opts->corpus, "training treebank");
    diagnose_cmd->add_option("--learner", diagnose_opts->learner,
                             "pcfg | cmd:train=...;parse=...");
    diagnose_cmd->add_option("--replication", diagnose_opts->replication,
                             "copies of each sentence for memorization training");
    diagnose_cmd->add_option("--trimmed-out", diagnose_opts->trimmed_out,
                             "write the learnable subset here");
    diagnose_cmd->add_option("--out", diagnose_opts->out, "report file ('-': stdout)");
    diagnose_cmd->add_option("--jobs", diagnose_opts->jobs,
                             "worker cap (env PARSEMBLE_JOBS)");
    diagnose_cmd->callback([diagnose_opts] { run_diagnose(*diagnose_opts); });

    auto simulate_opts = std::make_shared<SimulateOpts>();
    auto* simulate_cmd = app.add_subcommand(
        "simulate", "run the three-sample contradiction weight trajectory");
    simulate_cmd->add_option("--rounds", simulate_opts->rounds, "rounds to run");
    simulate_cmd->add_option("--out", simulate_opts->out, "report file ('-': stdout)");
    simulate_cmd->callback([simulate_opts] { run_simulate(*simulate_opts); });

    auto oracle_opts = std::make_shared<OracleOpts>();
    auto* oracle_cmd =
        app.add_subcommand("oracle", "upper-bound and isolation analyses");
    oracle_cmd->add_option("files", oracle_opts->files, "parser output files")
        ->required()
        ->expected(-1);
    oracle_cmd
        ->add_option("--mode", oracle_opts->mode, "switch | max-precision | isolated")
        ->required();
    oracle_cmd->add_option("--gold", oracle_opts->gold, "reference file")->required();
    oracle_cmd->add_option("--context", oracle_opts->context,
                           "none | label | parent | span-length | sentence-length");
    oracle_cmd->add_option("--out", oracle_opts->out, "report file ('-': stdout)");
    oracle_cmd->callback([oracle_opts] { run_oracle(*oracle_opts); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const DataError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
