#include <cctype>
#include <functional>
#include <sstream>

#include "sirup/gadget.hpp"

namespace sirup {

GatePtr var(int i) {
    if (i < 1) throw Error(ErrorKind::precondition, "formula: variables are numbered from 1");
    auto g = std::make_shared<Gate>();
    g->kind = Gate::Kind::var;
    g->var = i;
    return g;
}

GatePtr neg(GatePtr a) {
    auto g = std::make_shared<Gate>();
    g->kind = Gate::Kind::neg;
    g->a = std::move(a);
    return g;
}

GatePtr conj(GatePtr a, GatePtr b) {
    auto g = std::make_shared<Gate>();
    g->kind = Gate::Kind::conj;
    g->a = std::move(a);
    g->b = std::move(b);
    return g;
}

GatePtr disj(GatePtr a, GatePtr b) { return neg(conj(neg(std::move(a)), neg(std::move(b)))); }

namespace {

int max_var(const Gate& g) {
    switch (g.kind) {
    case Gate::Kind::var: return g.var;
    case Gate::Kind::neg: return max_var(*g.a);
    case Gate::Kind::conj: return std::max(max_var(*g.a), max_var(*g.b));
    }
    return 0;
}

bool eval_gate(const Gate& g, const std::vector<int>& bits) {
    switch (g.kind) {
    case Gate::Kind::var: return bits.at(g.var - 1) != 0;
    case Gate::Kind::neg: return !eval_gate(*g.a, bits);
    case Gate::Kind::conj: return eval_gate(*g.a, bits) && eval_gate(*g.b, bits);
    }
    return false;
}

int count_gates(const Gate& g) {
    switch (g.kind) {
    case Gate::Kind::var: return 0;
    case Gate::Kind::neg: return 1 + count_gates(*g.a);
    case Gate::Kind::conj: return 1 + count_gates(*g.a) + count_gates(*g.b);
    }
    return 0;
}

std::string gate_str(const Gate& g) {
    switch (g.kind) {
    case Gate::Kind::var: return "y" + std::to_string(g.var);
    case Gate::Kind::neg: return "not(" + gate_str(*g.a) + ")";
    case Gate::Kind::conj: return "and(" + gate_str(*g.a) + "," + gate_str(*g.b) + ")";
    }
    return {};
}

GatePtr literal(int i, int bit) { return bit ? var(i) : neg(var(i)); }

// Conjunction of fixed bits (1-based position -> bit); null if empty.
GatePtr term(const std::vector<std::pair<int, int>>& lits) {
    GatePtr out;
    for (auto it = lits.rbegin(); it != lits.rend(); ++it)
        out = out ? conj(literal(it->first, it->second), out) : literal(it->first, it->second);
    return out;
}

GatePtr contradiction() { return conj(var(1), neg(var(1))); }

} // namespace

void Formula::validate() const {
    if (!root) throw Error(ErrorKind::precondition, "formula: empty");
    if (root->kind == Gate::Kind::var) throw Error(ErrorKind::precondition, "formula: the root must be a gate");
    if (max_var(*root) > arity)
        throw Error(ErrorKind::precondition, "formula: variable y" + std::to_string(max_var(*root)) +
                                                 " exceeds the arity " + std::to_string(arity));
    int total = 0;
    for (const auto& t : inputs) {
        if (t.length < 1) throw Error(ErrorKind::precondition, "formula: input tuple of length < 1");
        total += t.length;
    }
    if (total != arity)
        throw Error(ErrorKind::precondition, "formula: input-type lengths add up to " + std::to_string(total) +
                                                 ", arity is " + std::to_string(arity));
}

bool Formula::eval(const std::vector<int>& bits) const {
    if (static_cast<int>(bits.size()) != arity) throw Error(ErrorKind::precondition, "formula: wrong input length");
    return eval_gate(*root, bits);
}

int Formula::gates() const { return root ? count_gates(*root) : 0; }

std::string Formula::str() const { return root ? gate_str(*root) : std::string{}; }

Formula gen_good(int d) {
    if (d < 1) throw Error(ErrorKind::precondition, "gen_good: d must be >= 1");
    const int n = 4 * d + 11;
    GatePtr out;
    for (int p = 1; p + 3 <= n; ++p) {
        GatePtr no_factor = neg(term({{p + 1, 1}, {p + 2, 0}, {p + 3, 0}}));
        out = out ? conj(out, no_factor) : no_factor;
    }
    return {out, n, {{InputType::up, n}}};
}

Formula gen_mustbranch(int k, int d) {
    if (d < 1) throw Error(ErrorKind::precondition, "gen_mustbranch: d must be >= 1");
    if (k < 4 || k > 4 * d + 11)
        throw Error(ErrorKind::precondition, "gen_mustbranch: k must lie in [4, " + std::to_string(4 * d + 11) + "]");
    // Shapes over {0,1,*} read forwards; the input is their reverse.
    std::vector<std::string> shapes;
    if (k == 4) shapes.push_back("001*");
    if (k >= 7 && (k - 7) % 4 == 0) {
        int l = (k - 7) / 4;
        std::string block;
        for (int i = 0; i < l; ++i) block += "111*";
        shapes.push_back("001*" + block + "001");
        if (l < d - 1) shapes.push_back("001*" + block + "111");
    }
    GatePtr out;
    for (const auto& s : shapes) {
        std::vector<std::pair<int, int>> lits;
        for (int m = 1; m <= k; ++m) {
            char c = s[k - m];
            if (c != '*') lits.push_back({m, c == '1'});
        }
        GatePtr t = term(lits);
        out = out ? disj(out, t) : t;
    }
    if (!out) out = contradiction();
    return {out, k, {{InputType::up, k}}};
}

namespace {

class GateParser {
public:
    explicit GateParser(const std::string& s) : s_(s) {}

    GatePtr parse(int& arity) {
        arity_ = 0;
        GatePtr g = expr();
        skip();
        if (pos_ != s_.size()) fail("trailing input");
        arity = arity_;
        return g;
    }

private:
    [[noreturn]] void fail(const std::string& msg) const {
        throw Error(ErrorKind::syntax, "formula: " + msg + " at offset " + std::to_string(pos_));
    }
    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    void expect(char c) {
        skip();
        if (pos_ >= s_.size() || s_[pos_] != c) fail(std::string("expected '") + c + "'");
        ++pos_;
    }
    bool accept(char c) {
        skip();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }
    std::string word() {
        skip();
        std::size_t start = pos_;
        while (pos_ < s_.size() && std::isalpha(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        return s_.substr(start, pos_ - start);
    }
    int number() {
        skip();
        std::size_t start = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        if (start == pos_) fail("expected a number");
        return std::stoi(s_.substr(start, pos_ - start));
    }

    GatePtr expr() {
        std::string w = word();
        if (w == "y") {
            int i = number();
            if (i < 1) fail("variables are numbered from 1");
            arity_ = std::max(arity_, i);
            return var(i);
        }
        if (w == "not") {
            expect('(');
            GatePtr a = expr();
            expect(')');
            return neg(a);
        }
        if (w == "and" || w == "or") {
            expect('(');
            GatePtr a = expr();
            expect(',');
            GatePtr b = expr();
            expect(')');
            return w == "and" ? conj(a, b) : disj(a, b);
        }
        if (w == "good" || w == "mustbranch") {
            expect('(');
            int k = number();
            int d = 1;
            if (accept(',')) d = number();
            expect(')');
            Formula f = w == "good" ? gen_good(k) : gen_mustbranch(k, d);
            arity_ = std::max(arity_, f.arity);
            return f.root;
        }
        fail(w.empty() ? "expected an expression" : "unknown operator '" + w + "'");
    }

    const std::string& s_;
    std::size_t pos_ = 0;
    int arity_ = 0;
};

} // namespace

GatePtr parse_gate(const std::string& text, int& arity_out) { return GateParser(text).parse(arity_out); }

const char* to_string(FrameType f) {
    switch (f) {
    case FrameType::AT: return "AT";
    case FrameType::TA: return "TA";
    case FrameType::AA: return "AA";
    }
    return "?";
}

FrameType parse_frame(const std::string& s) {
    if (s == "AT") return FrameType::AT;
    if (s == "TA") return FrameType::TA;
    if (s == "AA") return FrameType::AA;
    throw Error(ErrorKind::syntax, "unknown frame type '" + s + "' (expected AT, TA or AA)");
}

std::vector<GadgetSpec> parse_gadget_file(const std::string& text) {
    std::vector<GadgetSpec> out;
    std::vector<bool> has_inputs;
    std::istringstream lines(text);
    std::string line;
    int lineno = 0;
    auto fail = [&](const std::string& msg) {
        throw Error(ErrorKind::syntax, "line " + std::to_string(lineno) + ": " + msg);
    };
    while (std::getline(lines, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream in(line);
        std::string key;
        if (!(in >> key)) continue;
        if (key == "gadget") {
            std::string frame;
            if (!(in >> frame)) fail("gadget needs a frame type");
            out.push_back({});
            has_inputs.push_back(false);
            out.back().frame = parse_frame(frame);
            continue;
        }
        if (out.empty()) fail("'" + key + "' before the first gadget line");
        if (key == "inputs") {
            std::string tok;
            while (in >> tok) {
                auto colon = tok.find(':');
                if (colon == std::string::npos) fail("expected up:<n> or down:<n>");
                std::string kind = tok.substr(0, colon);
                if (kind != "up" && kind != "down") fail("unknown input type '" + kind + "'");
                int n = 0;
                try {
                    n = std::stoi(tok.substr(colon + 1));
                } catch (const std::exception&) {
                    fail("bad tuple length in '" + tok + "'");
                }
                out.back().formula.inputs.push_back({kind == "up" ? InputType::up : InputType::down, n});
            }
            has_inputs.back() = true;
        } else if (key == "formula") {
            std::string rest;
            std::getline(in, rest);
            int arity = 0;
            out.back().formula.root = parse_gate(rest, arity);
            out.back().formula.arity = arity;
        } else {
            fail("unknown key '" + key + "'");
        }
    }
    for (std::size_t g = 0; g < out.size(); ++g) {
        auto& f = out[g].formula;
        if (!f.root) throw Error(ErrorKind::syntax, "gadget " + std::to_string(g + 1) + " has no formula");
        if (!has_inputs[g]) f.inputs = {{InputType::up, f.arity}};
        int total = 0;
        for (const auto& t : f.inputs) total += t.length;
        // Variables that never occur still get a slot in the inputs.
        if (total > f.arity) f.arity = total;
        f.validate();
    }
    return out;
}

} // namespace sirup
