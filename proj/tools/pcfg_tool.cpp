// Standalone trainer/parser for the built-in grammar learner. Exists so the
// external-command adapter has a real program to drive in tests and so models
// can be inspected or reused outside the ensemble commands.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "parsemble/errors.hpp"
#include "parsemble/treebank.hpp"
#include "parsemble/weak_parser.hpp"

using namespace parsemble;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot read file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write file: " + path);
    out << content;
    if (!out) throw DataError("write failed: " + path);
}

void run_train(const std::string& corpus_path, const std::string& model_out) {
    const std::vector<ParseTree> corpus = read_trees(read_file(corpus_path));
    if (corpus.empty()) throw DataError(corpus_path + ": no trees found");
    PcfgLearner learner;
    const ModelPtr model = learner.train(corpus);
    learner.save_model(*model, model_out);
}

void run_parse(const std::string& model_path, const std::string& input_path,
               const std::string& out_path) {
    const PcfgModel model = PcfgModel::from_text(read_file(model_path));
    const std::vector<ParseTree> sentences = read_trees(read_file(input_path));
    PcfgLearner learner;

    std::vector<std::vector<Token>> tokens(sentences.size());
    for (std::size_t i = 0; i < sentences.size(); ++i)
        tokens[i] = sentences[i].tokens();
    const auto parses = learner.parse_batch(model, tokens, 1);

    std::ostringstream out;
    for (const auto& parse : parses) {
        if (parse)
            out << write_tree(*parse) << '\n';
        else
            out << "-\n";  // declared failure, one line per input sentence
    }
    write_file(out_path, out.str());
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"train and run the built-in treebank grammar parser"};
    app.require_subcommand(1);

    std::string corpus_path, model_out;
    auto* train_cmd = app.add_subcommand("train", "estimate a grammar from a treebank");
    train_cmd->add_option("--corpus", corpus_path, "training treebank")->required();
    train_cmd->add_option("--model-out", model_out, "model file to write")->required();
    train_cmd->callback([&] { run_train(corpus_path, model_out); });

    std::string model_path, input_path, out_path;
    auto* parse_cmd = app.add_subcommand("parse", "parse sentences with a saved model");
    parse_cmd->add_option("--model", model_path, "model file")->required();
    parse_cmd->add_option("--input", input_path, "sentences as flat bracketed lines")
        ->required();
    parse_cmd->add_option("--out", out_path, "parses, one line per sentence")
        ->required();
    parse_cmd->callback([&] { run_parse(model_path, input_path, out_path); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    } catch (const DataError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
