// Tree data model, bracketed I/O, scoring normalization and its inverse.

#include "parsemble/treebank.hpp"

#include <algorithm>
#include <array>
#include <cassert>
#include <sstream>

#include <json.hpp>

namespace parsemble {

namespace {

void collect_tokens(const ParseTree& node, std::vector<Token>& out) {
    if (node.is_preterminal()) {
        out.push_back(Token{static_cast<int>(out.size()), node.word, node.label});
        return;
    }
    for (const ParseTree& child : node.children) collect_tokens(child, out);
}

}  // namespace

std::vector<Token> ParseTree::tokens() const {
    std::vector<Token> out;
    collect_tokens(*this, out);
    return out;
}

int ParseTree::token_count() const {
    if (is_preterminal()) return 1;
    int n = 0;
    for (const ParseTree& child : children) n += child.token_count();
    return n;
}

std::string Constituent::str() const {
    return "(" + std::to_string(start) + "," + std::to_string(end) + "," + label + ")";
}

bool ConstituentSet::contains(const Constituent& c) const {
    return std::binary_search(items.begin(), items.end(), c);
}

void ConstituentSet::insert(const Constituent& c) {
    auto it = std::lower_bound(items.begin(), items.end(), c);
    if (it != items.end() && *it == c) return;
    items.insert(it, c);
}

void ConstituentSet::normalize() {
    std::sort(items.begin(), items.end());
    items.erase(std::unique(items.begin(), items.end()), items.end());
}

bool is_punctuation_pos(const std::string& pos) {
    static const std::array<const char*, 5> kPunct = {",", ":", "``", "''", "."};
    return std::any_of(kPunct.begin(), kPunct.end(),
                       [&](const char* p) { return pos == p; });
}

bool is_trace_pos(const std::string& pos) { return pos == "-NONE-"; }

// --- Reading ---------------------------------------------------------------

namespace {

struct LineParser {
    const std::string& text;
    size_t pos = 0;
    int line;

    explicit LineParser(const std::string& t, int line_no) : text(t), line(line_no) {}

    void skip_space() {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    }
    bool at_end() {
        skip_space();
        return pos >= text.size();
    }
    char peek() {
        skip_space();
        if (pos >= text.size()) throw TreeParseError(line, "unexpected end of input");
        return text[pos];
    }
    std::string atom() {
        skip_space();
        size_t start = pos;
        while (pos < text.size() && !std::isspace(static_cast<unsigned char>(text[pos])) &&
               text[pos] != '(' && text[pos] != ')')
            ++pos;
        if (pos == start) throw TreeParseError(line, "expected a label or word");
        return text.substr(start, pos - start);
    }

    ParseTree node() {
        if (peek() != '(') throw TreeParseError(line, "expected '('");
        ++pos;
        ParseTree t;
        t.label = atom();
        if (peek() == '(') {
            while (peek() == '(') t.children.push_back(node());
            if (peek() != ')') throw TreeParseError(line, "expected ')' after children");
            ++pos;
        } else if (peek() == ')') {
            throw TreeParseError(line, "node '" + t.label + "' has no word or children");
        } else {
            t.word = atom();
            if (peek() != ')')
                throw TreeParseError(line, "expected ')' after word '" + t.word + "'");
            ++pos;
        }
        return t;
    }
};

}  // namespace

std::vector<ParseTree> read_trees(const std::string& text,
                                  std::vector<std::string>* warnings) {
    std::vector<ParseTree> trees;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        bool blank = std::all_of(line.begin(), line.end(), [](unsigned char c) {
            return std::isspace(c);
        });
        if (blank) {
            if (warnings)
                warnings->push_back("line " + std::to_string(line_no) + ": empty line skipped");
            continue;
        }
        LineParser p(line, line_no);
        trees.push_back(p.node());
        if (!p.at_end())
            throw TreeParseError(line_no, "trailing content after tree: '" +
                                              line.substr(p.pos) + "'");
    }
    return trees;
}

// --- Writing ---------------------------------------------------------------

namespace {

void check_atom(const std::string& s, const char* what, bool allow_empty = false) {
    if (s.empty() && !allow_empty) throw DataError(std::string(what) + " is empty");
    for (char c : s)
        if (std::isspace(static_cast<unsigned char>(c)) || c == '(' || c == ')')
            throw DataError(std::string(what) + " '" + s +
                            "' contains whitespace or parentheses");
}

void write_node(const ParseTree& t, std::string& out) {
    check_atom(t.label, "label");
    out += '(';
    out += t.label;
    if (t.is_preterminal()) {
        check_atom(t.word, "word");
        out += ' ';
        out += t.word;
    } else {
        for (const ParseTree& child : t.children) {
            out += ' ';
            write_node(child, out);
        }
    }
    out += ')';
}

}  // namespace

std::string write_tree(const ParseTree& tree) {
    std::string out;
    write_node(tree, out);
    return out;
}

std::string write_trees(const std::vector<ParseTree>& trees) {
    std::string out;
    for (const ParseTree& t : trees) {
        out += write_tree(t);
        out += '\n';
    }
    return out;
}

// --- Scoring normalization -------------------------------------------------

namespace {

// Rebuilds `node` without trace and punctuation leaves, appending removed
// terminals to `record` and surviving ones to `kept`. Returns nothing when
// the whole subtree vanishes (the repeated empty-span prune).
std::optional<ParseTree> prune_node(const ParseTree& node, int& original_index,
                                    std::vector<PrunedToken>& removed,
                                    std::vector<Token>& kept) {
    if (node.is_preterminal()) {
        int index = original_index++;
        if (is_trace_pos(node.label) || is_punctuation_pos(node.label)) {
            removed.push_back(PrunedToken{index, node.word, node.label,
                                          static_cast<int>(kept.size()),
                                          is_trace_pos(node.label)});
            return std::nullopt;
        }
        kept.push_back(Token{static_cast<int>(kept.size()), node.word, node.label});
        ParseTree copy;
        copy.label = node.label;
        copy.word = node.word;
        return copy;
    }
    ParseTree copy;
    copy.label = node.label;
    for (const ParseTree& child : node.children) {
        auto pruned = prune_node(child, original_index, removed, kept);
        if (pruned) copy.children.push_back(std::move(*pruned));
    }
    if (copy.children.empty()) return std::nullopt;  // spans zero surviving tokens
    return copy;
}

// Collects (start, end, label) spans of internal nodes; the root itself is
// skipped. Returns the number of terminals under `node`.
int collect_spans(const ParseTree& node, int start, bool is_root,
                  std::vector<Constituent>& out) {
    if (node.is_preterminal()) return 1;
    int pos = start;
    for (const ParseTree& child : node.children)
        pos += collect_spans(child, pos, false, out);
    if (!is_root) out.push_back(Constituent{start, pos, node.label});
    return pos - start;
}

}  // namespace

EvalbResult evalb_transform(const ParseTree& tree) {
    EvalbResult result;
    result.record.root_label = tree.label;
    int original_index = 0;
    auto pruned =
        prune_node(tree, original_index, result.record.removed, result.tokens);
    result.record.original_token_count = original_index;
    result.set.length = static_cast<int>(result.tokens.size());
    if (!pruned || result.tokens.empty()) {
        result.empty_after_pruning = true;
        return result;
    }
    std::vector<Constituent> spans;
    collect_spans(*pruned, 0, true, spans);
    std::sort(spans.begin(), spans.end());
    for (const Constituent& c : spans) {
        if (!result.set.items.empty() && result.set.items.back() == c)
            result.set.duplicates.push_back(c);
        else
            result.set.items.push_back(c);
    }
    return result;
}

// --- Inverse ---------------------------------------------------------------

namespace {

ParseTree make_preterminal(const Token& tok) {
    ParseTree t;
    t.label = tok.pos;
    t.word = tok.word;
    return t;
}

// Orders same-start constituents widest-first so parents precede children;
// same-span entries (unary chains) are nested in label order.
struct BuildOrder {
    bool operator()(const Constituent& a, const Constituent& b) const {
        if (a.start != b.start) return a.start < b.start;
        if (a.end != b.end) return a.end > b.end;
        return a.label < b.label;
    }
};

ParseTree build_span(const std::vector<Constituent>& cs, size_t& idx,
                     const std::string& label, int start, int end,
                     const std::vector<Token>& tokens) {
    ParseTree node;
    node.label = label;
    int pos = start;
    while (pos < end) {
        if (idx < cs.size() && cs[idx].start == pos) {
            assert(cs[idx].end <= end && "crossing constituent slipped past validation");
            Constituent c = cs[idx++];
            node.children.push_back(build_span(cs, idx, c.label, c.start, c.end, tokens));
            pos = c.end;
        } else {
            node.children.push_back(make_preterminal(tokens[pos]));
            ++pos;
        }
    }
    return node;
}

// True for leaves the scoring normalization would remove again.
bool is_removed_leaf(const ParseTree& t) {
    return t.is_preterminal() && (is_trace_pos(t.label) || is_punctuation_pos(t.label));
}

// Number of scorable (surviving) terminals under `node`.
int surviving_count(const ParseTree& node) {
    if (node.is_preterminal()) return is_removed_leaf(node) ? 0 : 1;
    int n = 0;
    for (const ParseTree& child : node.children) n += surviving_count(child);
    return n;
}

// Inserts `leaf` next to the surviving terminal at pruned position
// `neighbor`: directly after it when `after` is true, else directly before.
// The insertion lands in the deepest internal node containing that terminal,
// which places the leaf inside exactly the constituents the terminal is in.
void insert_at_neighbor(ParseTree& node, int neighbor, bool after, ParseTree leaf) {
    int pos = 0;
    for (size_t i = 0; i < node.children.size(); ++i) {
        ParseTree& child = node.children[i];
        int n = surviving_count(child);
        if (neighbor < pos + n) {
            if (!child.is_preterminal()) {
                insert_at_neighbor(child, neighbor - pos, after, std::move(leaf));
                return;
            }
            size_t at = after ? i + 1 : i;
            if (after) {
                // Keep original order among several leaves glued to the same
                // neighbor: skip leaves inserted earlier.
                while (at < node.children.size() && is_removed_leaf(node.children[at]))
                    ++at;
            }
            node.children.insert(node.children.begin() + at, std::move(leaf));
            return;
        }
        pos += n;
    }
    assert(false && "neighbor terminal not found");
}

}  // namespace

ParseTree inverse_evalb(const ConstituentSet& set, const PunctuationRecord& record,
                        const std::vector<Token>& tokens) {
    // Validate: no crossing pairs.
    std::vector<Constituent> cs = set.items;
    std::sort(cs.begin(), cs.end(), BuildOrder{});
    for (size_t i = 0; i < cs.size(); ++i)
        for (size_t j = i + 1; j < cs.size(); ++j)
            if (cs[i].crosses(cs[j]))
                throw DataError("crossing brackets: " + cs[i].str() + " and " +
                                cs[j].str());
    for (const Constituent& c : cs)
        if (c.start < 0 || c.end > set.length || c.start >= c.end)
            throw DataError("constituent " + c.str() + " outside sentence of length " +
                            std::to_string(set.length));

    std::vector<Token> toks = tokens;
    if (toks.empty()) {
        for (int i = 0; i < set.length; ++i)
            toks.push_back(Token{i, "w" + std::to_string(i), "XX"});
    }
    if (static_cast<int>(toks.size()) != set.length)
        throw DataError("token count " + std::to_string(toks.size()) +
                        " does not match sentence length " + std::to_string(set.length));
    for (const Token& t : toks)
        if (is_punctuation_pos(t.pos) || is_trace_pos(t.pos))
            throw DataError("surviving token '" + t.word +
                            "' carries a pruned tag '" + t.pos + "'");

    size_t idx = 0;
    ParseTree root = build_span(cs, idx, record.root_label, 0, set.length, toks);

    // Splice removed terminals back, in original surface order.
    std::vector<PrunedToken> removed = record.removed;
    std::sort(removed.begin(), removed.end(),
              [](const PrunedToken& a, const PrunedToken& b) {
                  return a.original_index < b.original_index;
              });
    for (const PrunedToken& r : removed) {
        ParseTree leaf;
        leaf.label = r.pos;
        leaf.word = r.word;
        if (r.pruned_position < 0 || r.pruned_position > set.length)
            throw DataError("pruned token '" + r.word + "' has position " +
                            std::to_string(r.pruned_position) +
                            " outside sentence of length " + std::to_string(set.length));
        if (set.length == 0) {
            root.children.push_back(std::move(leaf));
        } else if (r.pruned_position > 0) {
            insert_at_neighbor(root, r.pruned_position - 1, /*after=*/true,
                               std::move(leaf));
        } else {
            insert_at_neighbor(root, 0, /*after=*/false, std::move(leaf));
        }
    }
    if (root.children.empty()) throw DataError("cannot rebuild an empty tree");
    return root;
}

// --- Exhaustive enumeration -------------------------------------------------

namespace {

// Child count of every implied node must lie in [2, max_branching]. Walks the
// implied tree (chosen spans + implicit root + free tokens) reusing the same
// nesting logic as the tree builder.
bool branching_ok(const std::vector<Constituent>& sorted, size_t& idx, int start,
                  int end, int max_branching) {
    int children = 0;
    int pos = start;
    while (pos < end) {
        if (idx < sorted.size() && sorted[idx].start == pos && sorted[idx].end <= end) {
            Constituent c = sorted[idx++];
            if (!branching_ok(sorted, idx, c.start, c.end, max_branching)) return false;
            pos = c.end;
        } else {
            ++pos;
        }
        ++children;
    }
    return children >= 2 && children <= max_branching;
}

struct Enumerator {
    int length;
    const std::vector<std::string>& labels;
    int max_branching;
    const std::function<bool(const ConstituentSet&)>& sink;
    std::vector<Constituent> spans;   // candidate spans, sorted
    std::vector<Constituent> chosen;  // current prefix (span order, one label each)
    bool stopped = false;

    bool crosses_chosen(const Constituent& c) const {
        return std::any_of(chosen.begin(), chosen.end(),
                           [&](const Constituent& x) { return x.crosses(c); });
    }

    void emit() {
        ConstituentSet set;
        set.length = length;
        set.items = chosen;
        set.normalize();
        // A one-token sentence is a bare leaf: no implied internal node
        // exists, so there is nothing for the branching bound to constrain.
        if (max_branching >= 2 && length > 1) {
            std::vector<Constituent> ordered = set.items;
            std::sort(ordered.begin(), ordered.end(), BuildOrder{});
            size_t idx = 0;
            if (!branching_ok(ordered, idx, 0, length, max_branching)) return;
        }
        if (!sink(set)) stopped = true;
    }

    void walk(size_t span_idx) {
        if (stopped) return;
        if (span_idx == spans.size()) {
            emit();
            return;
        }
        walk(span_idx + 1);  // skip this span
        if (stopped) return;
        Constituent c = spans[span_idx];
        if (crosses_chosen(c)) return;
        for (const std::string& l : labels) {
            c.label = l;
            chosen.push_back(c);
            walk(span_idx + 1);
            chosen.pop_back();
            if (stopped) return;
        }
    }
};

}  // namespace

void enumerate_parses(int length, const std::vector<std::string>& labels,
                      int max_branching,
                      const std::function<bool(const ConstituentSet&)>& sink) {
    if (length < 1 || length > 5)
        throw UsageError("enumerate_parses: length must be 1..5, got " +
                         std::to_string(length));
    if (labels.empty() || labels.size() > 3)
        throw UsageError("enumerate_parses: need 1..3 labels, got " +
                         std::to_string(labels.size()));
    if (max_branching == 1 || max_branching < 0)
        throw UsageError("enumerate_parses: max_branching must be 0 (off) or >= 2");
    Enumerator e{length, labels, max_branching, sink, {}, {}, false};
    for (int s = 0; s < length; ++s)
        for (int t = s + 1; t <= length; ++t)
            if (!(s == 0 && t == length))
                e.spans.push_back(Constituent{s, t, ""});
    e.walk(0);
}

std::vector<ConstituentSet> enumerate_parses(int length,
                                             const std::vector<std::string>& labels,
                                             int max_branching) {
    std::vector<ConstituentSet> out;
    enumerate_parses(length, labels, max_branching, [&](const ConstituentSet& s) {
        out.push_back(s);
        return true;
    });
    return out;
}

// --- Pruned-token record serialization --------------------------------------

std::string PunctuationRecord::to_json() const {
    nlohmann::json j;
    j["format"] = "parsemble-pruned-tokens";
    j["version"] = 1;
    j["root_label"] = root_label;
    j["original_token_count"] = original_token_count;
    j["removed"] = nlohmann::json::array();
    for (const PrunedToken& t : removed) {
        j["removed"].push_back({{"original_index", t.original_index},
                                {"word", t.word},
                                {"pos", t.pos},
                                {"pruned_position", t.pruned_position},
                                {"is_trace", t.is_trace}});
    }
    return j.dump(2);
}

PunctuationRecord PunctuationRecord::from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("bad pruned-token record: ") + e.what());
    }
    if (j.value("format", "") != "parsemble-pruned-tokens")
        throw DataError("not a pruned-token record");
    PunctuationRecord r;
    r.root_label = j.value("root_label", "TOP");
    r.original_token_count = j.value("original_token_count", 0);
    for (const auto& e : j.value("removed", nlohmann::json::array())) {
        r.removed.push_back(PrunedToken{e.at("original_index").get<int>(),
                                        e.at("word").get<std::string>(),
                                        e.at("pos").get<std::string>(),
                                        e.at("pruned_position").get<int>(),
                                        e.value("is_trace", false)});
    }
    return r;
}

}  // namespace parsemble
