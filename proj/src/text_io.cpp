#include "sirup/graph.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>
#include <tuple>

namespace sirup {

namespace {

bool ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

class Lexer {
public:
    explicit Lexer(std::string_view text) : text_(text) {}

    void skip_space() {
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (c == '\n') {
                ++line_;
                ++pos_;
            } else if (c == '#') {
                while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                ++pos_;
            } else {
                break;
            }
        }
    }

    bool done() {
        skip_space();
        return pos_ >= text_.size();
    }

    std::string ident() {
        skip_space();
        std::size_t start = pos_;
        while (pos_ < text_.size() && ident_char(text_[pos_])) ++pos_;
        if (start == pos_) fail("expected identifier");
        return std::string(text_.substr(start, pos_ - start));
    }

    bool peek(char c) {
        skip_space();
        return pos_ < text_.size() && text_[pos_] == c;
    }

    void expect(char c) {
        if (!peek(c)) fail(std::string("expected '") + c + "'");
        ++pos_;
    }

    [[noreturn]] void fail(const std::string& what) const {
        std::string found = pos_ < text_.size() ? std::string(1, text_[pos_]) : "end of input";
        throw Error(ErrorKind::syntax,
                    "line " + std::to_string(line_) + ": " + what + ", found " + found);
    }

    int line() const { return line_; }

private:
    std::string_view text_;
    std::size_t pos_ = 0;
    int line_ = 1;
};

} // namespace

LabelledGraph parse(std::string_view text) {
    LabelledGraph g;
    std::map<std::string, std::pair<int, int>> arity; // pred -> (arity, first line)
    Lexer lx(text);
    while (!lx.done()) {
        int line = lx.line();
        std::string pred = lx.ident();
        lx.expect('(');
        std::vector<std::string> args{lx.ident()};
        if (lx.peek(',')) {
            lx.expect(',');
            args.push_back(lx.ident());
        }
        lx.expect(')');
        lx.expect('.');
        int n = static_cast<int>(args.size());
        auto [it, fresh] = arity.emplace(pred, std::make_pair(n, line));
        if (!fresh && it->second.first != n)
            throw Error(ErrorKind::arity,
                        "line " + std::to_string(line) + ": predicate " + pred + " used with arity " +
                            std::to_string(n) + " but had arity " +
                            std::to_string(it->second.first) + " on line " +
                            std::to_string(it->second.second));
        if (n == 1) {
            g.add_label(g.add_node(args[0]), pred);
        } else {
            int a = g.add_node(args[0]);
            int b = g.add_node(args[1]);
            g.add_edge(a, b, pred);
        }
    }
    return g;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::io, "cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::io, "cannot write " + path);
    out << content;
}

LabelledGraph parse_file(const std::string& path) {
    return parse(read_file(path));
}

std::string serialize(const LabelledGraph& g) {
    std::vector<std::pair<std::string, std::string>> unary;
    std::vector<std::tuple<std::string, std::string, std::string>> binary;
    for (int v = 0; v < static_cast<int>(g.size()); ++v)
        for (const auto& l : g.labels(v)) unary.emplace_back(l, g.name(v));
    for (const auto& e : g.edges()) binary.emplace_back(e.pred, g.name(e.src), g.name(e.dst));
    std::sort(unary.begin(), unary.end());
    std::sort(binary.begin(), binary.end());
    std::string out;
    for (const auto& [p, x] : unary) out += p + "(" + x + ").\n";
    for (const auto& [p, x, y] : binary) out += p + "(" + x + "," + y + ").\n";
    return out;
}

} // namespace sirup
