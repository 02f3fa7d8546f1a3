// Trainable base parsers for the resampling ensembles: a common learner
// interface, a self-contained PCFG learner (right-factored binarization,
// relative-frequency rules, Laplace-smoothed lexicon with a single unknown
// token, Viterbi CKY), and an adapter that drives an external parser through
// shell commands and bracket files.

#ifndef PARSEMBLE_WEAK_PARSER_HPP
#define PARSEMBLE_WEAK_PARSER_HPP

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "parsemble/treebank.hpp"

namespace parsemble {

// Opaque trained model; concrete learners define their own subclass.
struct LearnerModel {
    virtual ~LearnerModel() = default;
};

using ModelPtr = std::shared_ptr<const LearnerModel>;

class Learner {
public:
    virtual ~Learner() = default;

    // Trains on a treebank (throws DataError on unusable input).
    virtual ModelPtr train(const std::vector<ParseTree>& corpus) = 0;

    // Parses one sentence; std::nullopt means the parser failed or abstained.
    virtual std::optional<ParseTree> parse(const LearnerModel& model,
                                           const std::vector<Token>& tokens) = 0;

    // Parses many sentences, up to `jobs` in parallel; output order matches
    // input order.
    virtual std::vector<std::optional<ParseTree>> parse_batch(
        const LearnerModel& model,
        const std::vector<std::vector<Token>>& sentences, int jobs);

    // Persists a model this learner produced to `path` (learner-specific
    // format).
    virtual void save_model(const LearnerModel& model, const std::string& path) = 0;

    // True when identical training data and inputs always reproduce the same
    // models and parses.
    virtual bool deterministic() const = 0;
};

// ---------------------------------------------------------------------------
// Built-in PCFG learner.

struct PcfgModel : LearnerModel {
    struct BinaryRule {
        int lhs, left, right;
        double logp;
    };
    struct UnaryRule {
        int lhs, child;
        double logp;
    };

    std::vector<std::string> labels;  // id -> label (includes synthetic "@..." labels)
    std::map<std::string, int> label_ids;
    std::vector<BinaryRule> binary;              // sorted by signature
    std::vector<UnaryRule> unary;                // sorted by signature
    std::map<std::pair<int, std::string>, double> emission_logp;
    std::map<int, double> unknown_logp;          // per emitting label
    std::vector<double> root_logp;               // per label, -inf when not a root
    std::size_t vocabulary_size = 0;

    int label_id(const std::string& label) const;  // -1 when absent

    // Versioned text round-trip (probabilities serialized losslessly).
    std::string to_text() const;
    static PcfgModel from_text(const std::string& text);
};

class PcfgLearner : public Learner {
public:
    ModelPtr train(const std::vector<ParseTree>& corpus) override;
    std::optional<ParseTree> parse(const LearnerModel& model,
                                   const std::vector<Token>& tokens) override;
    void save_model(const LearnerModel& model, const std::string& path) override;
    bool deterministic() const override { return true; }
};

// ---------------------------------------------------------------------------
// External-command learner.
//
// Command templates may use the placeholders {corpus}, {model}, {input},
// {output}; files exchanged with the external program hold one tree per line.
// Parse input sentences are written as flat trees (every token a child of a
// single root) and a bare "-" output line marks a failed sentence. A mismatch
// between input and output line counts is a data error.
struct ExternalCommandConfig {
    std::string train_command;  // uses {corpus} and {model}
    std::string parse_command;  // uses {model}, {input} and {output}
    bool deterministic = true;  // caller's promise about the external program
};

class ExternalLearner : public Learner {
public:
    explicit ExternalLearner(ExternalCommandConfig config);
    ModelPtr train(const std::vector<ParseTree>& corpus) override;
    std::optional<ParseTree> parse(const LearnerModel& model,
                                   const std::vector<Token>& tokens) override;
    std::vector<std::optional<ParseTree>> parse_batch(
        const LearnerModel& model,
        const std::vector<std::vector<Token>>& sentences, int jobs) override;
    void save_model(const LearnerModel& model, const std::string& path) override;
    bool deterministic() const override { return config_.deterministic; }

private:
    ExternalCommandConfig config_;
};

// Builds a learner from a CLI spec: "pcfg", or
// "cmd:train=<template>;parse=<template>[;nondeterministic]".
std::unique_ptr<Learner> make_learner(const std::string& spec);

}  // namespace parsemble

#endif  // PARSEMBLE_WEAK_PARSER_HPP
