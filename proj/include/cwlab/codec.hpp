#pragma once

// Text codec for weighing strategies.
//
// Input grammar (one strategy per document):
//
//   L. c1 c2 ... v d1 d2 ... : act, act, act.  [sym]
//
// where an action is one of "=> N" / "-> N" / the arrow glyph, "(a)",
// "(a,b)", "{a,...}", "()", or "sym".  Line numbers follow the 3L+1..3L+3
// child scheme; a trailing or in-place "sym" marks the third child as the
// pan-swapped mirror of the second.  Blank lines, "#" comments and
// "First weighing:"-style headers are ignored.  A single line of the form
// "0. (a,b)." encodes a weighing-free tree (documented extension).
//
// The interchange format is JSON under the schema name "cwlab-tree/1".

#include <cctype>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "cwlab/core.hpp"

namespace cwlab {

struct ParseError : std::runtime_error {
    enum class Kind { Syntax, DanglingGoto, PanSizeMismatch, DuplicateLine, CoinOutOfRange };
    Kind kind;
    int line;    // 1-based source line (0 when not tied to a source position)
    int column;  // 1-based source column (0 when unknown)

    ParseError(Kind k, int ln, int col, const std::string& msg)
        : std::runtime_error(format(k, ln, col, msg)), kind(k), line(ln), column(col) {}

    static std::string format(Kind k, int ln, int col, const std::string& msg) {
        std::string head;
        switch (k) {
            case Kind::Syntax: head = "syntax error"; break;
            case Kind::DanglingGoto: head = "dangling goto"; break;
            case Kind::PanSizeMismatch: head = "pan size mismatch"; break;
            case Kind::DuplicateLine: head = "duplicate line"; break;
            case Kind::CoinOutOfRange: head = "coin out of range"; break;
        }
        std::string loc;
        if (ln > 0) {
            loc = " at line " + std::to_string(ln);
            if (col > 0) loc += ", column " + std::to_string(col);
        }
        return head + loc + ": " + msg;
    }
};

struct SchemaError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {

struct Action {
    enum class Tag { Goto, LeafOut, Sym } tag = Tag::Sym;
    long long target = -1;  // Goto
    Leaf leaf;              // LeafOut
};

struct CodeLine {
    long long number = 0;
    Weighing weighing;
    std::array<Action, 3> actions;
    bool sym_flag = false;
    bool terminal_only = false;  // "0. (a,b)."
    Leaf terminal_leaf;
    int src_line = 0;
};

class LineLexer {
  public:
    LineLexer(std::string_view text, int src_line) : s_(text), src_(src_line) {}

    void skip_ws() {
        while (pos_ < s_.size() && (s_[pos_] == ' ' || s_[pos_] == '\t')) ++pos_;
    }
    bool eof() {
        skip_ws();
        return pos_ >= s_.size();
    }
    int column() const { return static_cast<int>(pos_) + 1; }

    [[noreturn]] void fail(const std::string& msg) {
        throw ParseError(ParseError::Kind::Syntax, src_, column(), msg);
    }

    bool peek_char(char c) {
        skip_ws();
        return pos_ < s_.size() && s_[pos_] == c;
    }
    bool accept_char(char c) {
        if (peek_char(c)) {
            ++pos_;
            return true;
        }
        return false;
    }
    void expect_char(char c, const char* what) {
        if (!accept_char(c)) fail(std::string("expected '") + c + "' (" + what + ")");
    }

    bool peek_digit() {
        skip_ws();
        return pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]));
    }

    long long read_number() {
        skip_ws();
        if (!peek_digit()) fail("expected a number");
        long long v = 0;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
            v = v * 10 + (s_[pos_] - '0');
            ++pos_;
        }
        return v;
    }

    // "=>", "->", or the UTF-8 arrow.
    bool accept_arrow() {
        skip_ws();
        if (pos_ + 1 < s_.size() &&
            ((s_[pos_] == '=' && s_[pos_ + 1] == '>') || (s_[pos_] == '-' && s_[pos_ + 1] == '>'))) {
            pos_ += 2;
            return true;
        }
        static constexpr std::string_view kArrow = "\xe2\x87\x92";  // U+21D2
        if (s_.substr(pos_).starts_with(kArrow)) {
            pos_ += kArrow.size();
            return true;
        }
        return false;
    }

    bool accept_word(std::string_view word) {
        skip_ws();
        if (!s_.substr(pos_).starts_with(word)) return false;
        size_t end = pos_ + word.size();
        if (end < s_.size() && std::isalnum(static_cast<unsigned char>(s_[end]))) return false;
        pos_ = end;
        return true;
    }

  private:
    std::string_view s_;
    size_t pos_ = 0;
    int src_;
};

inline bool is_ignorable_line(std::string_view line) {
    size_t i = 0;
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i == line.size()) return true;
    if (line[i] == '#') return true;
    // Header such as "First weighing:" — words only, ending in a colon.
    size_t j = line.size();
    while (j > i && std::isspace(static_cast<unsigned char>(line[j - 1]))) --j;
    if (line[j - 1] != ':') return false;
    for (size_t k = i; k + 1 < j; ++k) {
        char c = line[k];
        if (!std::isalpha(static_cast<unsigned char>(c)) && c != ' ') return false;
    }
    return true;
}

inline Action parse_action(LineLexer& lex, int n_coins, int src_line) {
    Action a;
    if (lex.accept_arrow()) {
        a.tag = Action::Tag::Goto;
        a.target = lex.read_number();
        return a;
    }
    if (lex.accept_word("sym")) {
        a.tag = Action::Tag::Sym;
        return a;
    }
    auto read_coin = [&]() {
        int col = lex.column();
        long long c = lex.read_number();
        if (c < 1 || c > n_coins)
            throw ParseError(ParseError::Kind::CoinOutOfRange, src_line, col,
                             "coin " + std::to_string(c) + " outside 1.." + std::to_string(n_coins));
        return static_cast<Coin>(c);
    };
    if (lex.accept_char('(')) {
        a.tag = Action::Tag::LeafOut;
        if (lex.accept_char(')')) {
            a.leaf = Leaf::impossible();
            return a;
        }
        Coin first = read_coin();
        if (lex.accept_char(')')) {
            a.leaf = Leaf::output1(first);
            return a;
        }
        lex.expect_char(',', "two-coin output");
        Coin second = read_coin();
        lex.expect_char(')', "output close");
        if (first == second)
            throw ParseError(ParseError::Kind::Syntax, src_line, lex.column(),
                             "two-coin output must name distinct coins");
        a.leaf = Leaf::output2(first, second);
        return a;
    }
    if (lex.accept_char('{')) {
        a.tag = Action::Tag::LeafOut;
        std::vector<Coin> coins;
        coins.push_back(read_coin());
        while (lex.accept_char(',')) coins.push_back(read_coin());
        lex.expect_char('}', "fake-set close");
        try {
            a.leaf = Leaf::fake_set(std::move(coins));
        } catch (const TreeError& e) {
            throw ParseError(ParseError::Kind::Syntax, src_line, lex.column(), e.what());
        }
        return a;
    }
    lex.fail("expected an action (goto, output, or sym)");
}

inline CodeLine parse_code_line(std::string_view text, int n_coins, int src_line) {
    CodeLine out;
    out.src_line = src_line;
    LineLexer lex(text, src_line);

    out.number = lex.read_number();
    lex.expect_char('.', "line number terminator");

    // Terminal-only extension: "0. (a,b)."
    if (lex.peek_char('(') || lex.peek_char('{')) {
        Action a = parse_action(lex, n_coins, src_line);
        lex.expect_char('.', "line terminator");
        if (!lex.eof()) lex.fail("unexpected trailing text");
        out.terminal_only = true;
        out.terminal_leaf = a.leaf;
        return out;
    }

    std::vector<Coin> left, right;
    auto read_pan = [&](std::vector<Coin>& pan) {
        while (lex.peek_digit()) {
            int col = lex.column();
            long long c = lex.read_number();
            if (c < 1 || c > n_coins)
                throw ParseError(ParseError::Kind::CoinOutOfRange, src_line, col,
                                 "coin " + std::to_string(c) + " outside 1.." +
                                     std::to_string(n_coins));
            pan.push_back(static_cast<Coin>(c));
        }
    };
    read_pan(left);
    if (!lex.accept_word("v"))
        lex.fail("expected 'v' between the pans");
    read_pan(right);
    lex.expect_char(':', "weighing terminator");

    if (left.size() != right.size() || left.empty())
        throw ParseError(ParseError::Kind::PanSizeMismatch, src_line, 1,
                         "pans hold " + std::to_string(left.size()) + " and " +
                             std::to_string(right.size()) + " coins");
    try {
        out.weighing = Weighing(std::move(left), std::move(right));
    } catch (const TreeError& e) {
        throw ParseError(ParseError::Kind::Syntax, src_line, 1, e.what());
    }

    for (int i = 0; i < 3; ++i) {
        out.actions[i] = parse_action(lex, n_coins, src_line);
        if (i < 2) lex.expect_char(',', "action separator");
    }
    lex.expect_char('.', "line terminator");
    bool trailing_sym = lex.accept_word("sym");
    if (!lex.eof()) lex.fail("unexpected trailing text");

    if (out.actions[0].tag == Action::Tag::Sym || out.actions[1].tag == Action::Tag::Sym)
        throw ParseError(ParseError::Kind::Syntax, src_line, 1,
                         "sym is only legal as the third action");
    out.sym_flag = out.actions[2].tag == Action::Tag::Sym;
    if (trailing_sym) {
        if (out.actions[2].tag == Action::Tag::LeafOut)
            throw ParseError(ParseError::Kind::Syntax, src_line, 1,
                             "trailing sym cannot override an explicit output");
        out.sym_flag = true;
    }
    return out;
}

// Pan-swap transposition of a weighing: i-th left coin <-> i-th right coin.
inline std::vector<Coin> pan_swap_map(const Weighing& w, int n_coins) {
    std::vector<Coin> map(static_cast<size_t>(n_coins) + 1);
    for (int c = 0; c <= n_coins; ++c) map[c] = c;
    for (size_t i = 0; i < w.left.size(); ++i) {
        map[w.left[i]] = w.right[i];
        map[w.right[i]] = w.left[i];
    }
    return map;
}

struct Expander {
    const std::map<long long, CodeLine>& lines;
    int n_coins;
    std::set<long long> used;

    NodePtr expand(long long number) {
        auto it = lines.find(number);
        if (it == lines.end())
            throw ParseError(ParseError::Kind::DanglingGoto, 0, 0,
                             "line " + std::to_string(number) + " is referenced but absent");
        used.insert(number);
        const CodeLine& ln = it->second;
        std::array<NodePtr, 3> kids;
        for (int i = 0; i < 3; ++i) {
            const Action& a = ln.actions[i];
            if (i == 2 && ln.sym_flag) {
                if (a.tag == Action::Tag::Goto) {
                    if (a.target != 3 * ln.number + 3)
                        throw ParseError(ParseError::Kind::Syntax, ln.src_line, 1,
                                         "goto target must be 3L+3 for the third action");
                    if (lines.count(a.target))
                        throw ParseError(ParseError::Kind::DuplicateLine, ln.src_line, 1,
                                         "line " + std::to_string(a.target) +
                                             " is both written and declared symmetric");
                }
                auto map = pan_swap_map(ln.weighing, n_coins);
                kids[2] = relabel(kids[1], map);
                continue;
            }
            switch (a.tag) {
                case Action::Tag::Goto: {
                    if (a.target != 3 * ln.number + 1 + i)
                        throw ParseError(ParseError::Kind::Syntax, ln.src_line, 1,
                                         "goto target " + std::to_string(a.target) +
                                             " does not match position (expected " +
                                             std::to_string(3 * ln.number + 1 + i) + ")");
                    kids[i] = expand(a.target);
                    break;
                }
                case Action::Tag::LeafOut:
                    kids[i] = Node::terminal(a.leaf);
                    break;
                case Action::Tag::Sym:
                    throw ParseError(ParseError::Kind::Syntax, ln.src_line, 1,
                                     "sym is only legal as the third action");
            }
        }
        return Node::decision(ln.weighing, std::move(kids));
    }
};

}  // namespace detail

// Parse a strategy document.  Unreferenced lines are reported in `warnings`
// when provided.
inline StrategyTree parse(std::string_view text, int n_coins,
                          std::vector<std::string>* warnings = nullptr) {
    if (n_coins < 2)
        throw ParseError(ParseError::Kind::Syntax, 0, 0, "n_coins must be at least 2");
    std::map<long long, detail::CodeLine> lines;
    int src_line = 0;
    size_t start = 0;
    while (start <= text.size()) {
        size_t end = text.find('\n', start);
        std::string_view raw = text.substr(
            start, end == std::string_view::npos ? std::string_view::npos : end - start);
        ++src_line;
        if (!detail::is_ignorable_line(raw)) {
            detail::CodeLine ln = detail::parse_code_line(raw, n_coins, src_line);
            if (lines.count(ln.number))
                throw ParseError(ParseError::Kind::DuplicateLine, src_line, 1,
                                 "line " + std::to_string(ln.number) + " appears twice");
            lines.emplace(ln.number, std::move(ln));
        }
        if (end == std::string_view::npos) break;
        start = end + 1;
    }
    if (lines.empty())
        throw ParseError(ParseError::Kind::Syntax, src_line, 0, "no strategy lines found");
    auto root_it = lines.find(0);
    if (root_it == lines.end())
        throw ParseError(ParseError::Kind::DanglingGoto, 0, 0, "line 0 (the root) is absent");

    StrategyTree tree;
    tree.n_coins = n_coins;
    if (root_it->second.terminal_only) {
        if (lines.size() > 1)
            throw ParseError(ParseError::Kind::Syntax, root_it->second.src_line, 1,
                             "a weighing-free root must be the only line");
        tree.root = Node::terminal(root_it->second.terminal_leaf);
        return tree;
    }
    for (const auto& [num, ln] : lines)
        if (ln.terminal_only)
            throw ParseError(ParseError::Kind::Syntax, ln.src_line, 1,
                             "output-only lines are only legal at the root");

    detail::Expander ex{lines, n_coins, {}};
    tree.root = ex.expand(0);
    if (warnings) {
        for (const auto& [num, ln] : lines)
            if (!ex.used.count(num))
                warnings->push_back("line " + std::to_string(num) + " is never referenced");
    }
    validate_tree(tree);
    return tree;
}

// ---------------------------------------------------------------------------
// Text serialization: canonical numbering (root 0, children 3L+1..3L+3),
// fully expanded, one line per decision node in breadth-first order.

namespace detail {
inline std::string format_pan(const std::vector<Coin>& pan) {
    std::string s;
    for (size_t i = 0; i < pan.size(); ++i) {
        if (i) s += ' ';
        s += std::to_string(pan[i]);
    }
    return s;
}
}  // namespace detail

inline std::string serialize_text(const StrategyTree& t) {
    validate_tree(t);
    if (!t.root->is_decision()) return "0. " + t.root->leaf->to_string() + ".\n";

    std::string out;
    std::vector<std::pair<long long, NodePtr>> queue{{0, t.root}};
    for (size_t i = 0; i < queue.size(); ++i) {
        auto [number, node] = queue[i];
        out += std::to_string(number) + ". " + detail::format_pan(node->weighing->left) + " v " +
               detail::format_pan(node->weighing->right) + " : ";
        for (int k = 0; k < 3; ++k) {
            if (k) out += ", ";
            const NodePtr& child = node->children[k];
            if (child->is_decision()) {
                long long target = 3 * number + 1 + k;
                out += "=> " + std::to_string(target);
                queue.emplace_back(target, child);
            } else {
                out += child->leaf->to_string();
            }
        }
        out += ".\n";
    }
    return out;
}

// ---------------------------------------------------------------------------
// Interchange format (JSON), schema "cwlab-tree/1".

inline constexpr const char* kTreeSchema = "cwlab-tree/1";

namespace detail {

inline nlohmann::json node_to_json(const NodePtr& node) {
    nlohmann::json j;
    if (node->is_decision()) {
        j["weighing"] = {{"left", node->weighing->left}, {"right", node->weighing->right}};
        nlohmann::json kids = nlohmann::json::array();
        for (const auto& c : node->children) kids.push_back(node_to_json(c));
        j["children"] = std::move(kids);
    } else {
        const char* kind = nullptr;
        switch (node->leaf->kind) {
            case LeafKind::Output1: kind = "output1"; break;
            case LeafKind::Output2: kind = "output2"; break;
            case LeafKind::FakeSet: kind = "fake_set"; break;
            case LeafKind::Impossible: kind = "impossible"; break;
        }
        j["leaf"] = {{"kind", kind}, {"coins", node->leaf->coins}};
    }
    return j;
}

inline NodePtr node_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw SchemaError("tree node must be an object");
    if (j.contains("leaf")) {
        const auto& l = j.at("leaf");
        std::string kind = l.at("kind").get<std::string>();
        std::vector<Coin> coins = l.value("coins", std::vector<Coin>{});
        try {
            if (kind == "output1") {
                if (coins.size() != 1) throw SchemaError("output1 takes one coin");
                return Node::terminal(Leaf::output1(coins[0]));
            }
            if (kind == "output2") {
                if (coins.size() != 2) throw SchemaError("output2 takes two coins");
                return Node::terminal(Leaf::output2(coins[0], coins[1]));
            }
            if (kind == "fake_set") return Node::terminal(Leaf::fake_set(coins));
            if (kind == "impossible") {
                if (!coins.empty()) throw SchemaError("impossible takes no coins");
                return Node::terminal(Leaf::impossible());
            }
        } catch (const TreeError& e) {
            throw SchemaError(e.what());
        }
        throw SchemaError("unknown leaf kind '" + kind + "'");
    }
    if (!j.contains("weighing") || !j.contains("children"))
        throw SchemaError("decision node needs 'weighing' and 'children'");
    const auto& w = j.at("weighing");
    std::vector<Coin> left = w.at("left").get<std::vector<Coin>>();
    std::vector<Coin> right = w.at("right").get<std::vector<Coin>>();
    const auto& kids = j.at("children");
    if (!kids.is_array() || kids.size() != 3)
        throw SchemaError("decision node needs exactly three children");
    std::array<NodePtr, 3> children;
    for (int i = 0; i < 3; ++i) children[i] = node_from_json(kids[i]);
    try {
        return Node::decision(Weighing(std::move(left), std::move(right)), std::move(children));
    } catch (const TreeError& e) {
        throw SchemaError(e.what());
    }
}

}  // namespace detail

inline nlohmann::json serialize_interchange(const StrategyTree& t) {
    validate_tree(t);
    return {{"schema", kTreeSchema}, {"n_coins", t.n_coins}, {"root", detail::node_to_json(t.root)}};
}

inline StrategyTree parse_interchange(const nlohmann::json& doc) {
    if (!doc.is_object()) throw SchemaError("document must be an object");
    if (doc.value("schema", std::string{}) != kTreeSchema)
        throw SchemaError("unsupported schema (want cwlab-tree/1)");
    if (!doc.contains("n_coins") || !doc.at("n_coins").is_number_integer())
        throw SchemaError("n_coins must be an integer");
    StrategyTree t;
    t.n_coins = doc.at("n_coins").get<int>();
    if (!doc.contains("root")) throw SchemaError("missing root node");
    t.root = detail::node_from_json(doc.at("root"));
    try {
        validate_tree(t);
    } catch (const TreeError& e) {
        throw SchemaError(e.what());
    }
    return t;
}

}  // namespace cwlab
