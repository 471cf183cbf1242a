#include <filesystem>
#include <fstream>
#include <sstream>

#include "hgl/ht.hpp"
#include "hgl/lexer.hpp"

namespace hgl {

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

HtRule parse_rule_body(Lexer& lx, std::string name) {
    HtRule r;
    r.name = std::move(name);
    r.lhs = parse_hgr_statements(lx);
    lx.expect("=>");
    lx.end_statement();
    r.rhs = parse_hgr_statements(lx);
    r.validate();
    return r;
}

std::vector<Symbol> parse_selector_list(Lexer& lx) {
    std::vector<Symbol> out;
    lx.expect("{");
    while (!lx.at("}")) {
        out.emplace_back(lx.expect_ident("selector").text);
        if (!lx.accept(",")) break;
    }
    lx.expect("}");
    return out;
}

void render_type(std::ostringstream& os, const char* kw, const Alphabet& a) {
    for (const auto& [l, sels] : a.types) {
        os << kw << ' ' << l << " {";
        for (std::size_t i = 0; i < sels.size(); ++i) os << (i ? ", " : " ") << sels[i];
        os << (sels.empty() ? "}" : " }") << '\n';
    }
}

void indent(std::ostringstream& os, const std::string& block) {
    std::istringstream in(block);
    for (std::string line; std::getline(in, line);) os << "  " << line << '\n';
}

}  // namespace

std::vector<HtRule> parse_htr(const std::string& text, const std::string& default_name) {
    Lexer lx(text);
    lx.skip_newlines();
    std::vector<HtRule> rules;
    if (!lx.at("rule")) {
        rules.push_back(parse_rule_body(lx, default_name));
    } else {
        while (lx.accept("rule")) {
            std::string name = lx.expect_ident("rule name").text;
            lx.end_statement();
            rules.push_back(parse_rule_body(lx, name));
        }
    }
    if (!lx.at_end()) lx.fail("unexpected " + describe(lx.peek()));
    return rules;
}

std::string render_htr(const std::vector<HtRule>& rules) {
    std::ostringstream os;
    for (const auto& r : rules) {
        os << "rule " << r.name << '\n' << render_hgr(r.lhs) << "=>\n" << render_hgr(r.rhs) << '\n';
    }
    return os.str();
}

HtSystem parse_hts(const std::string& text, const std::string& base_dir) {
    HtSystem sys;
    bool have_start = false;
    Lexer lx(text);
    lx.skip_newlines();
    while (!lx.at_end()) {
        Token kw = lx.expect_ident("nonterminal, terminal, start, rule or include");
        if (kw.text == "nonterminal" || kw.text == "terminal") {
            Token l = lx.expect_ident("label");
            Alphabet& a = kw.text == "terminal" ? sys.terminals : sys.nonterminals;
            if (a.contains(Symbol(l.text))) Lexer::fail("label '" + l.text + "' declared twice", l);
            a.add(Symbol(l.text), parse_selector_list(lx));
            lx.end_statement();
        } else if (kw.text == "start") {
            if (have_start) Lexer::fail("second start graph", kw);
            lx.end_statement();
            sys.start = parse_hgr_statements(lx);
            lx.expect("end");
            lx.end_statement();
            have_start = true;
        } else if (kw.text == "rule") {
            std::string name = lx.expect_ident("rule name").text;
            lx.end_statement();
            sys.rules.push_back(parse_rule_body(lx, name));
            lx.expect("end");
            lx.end_statement();
        } else if (kw.text == "include") {
            std::string file = lx.expect_ident("file name").text;
            while (lx.accept(".")) file += "." + lx.expect_ident("file name").text;
            lx.end_statement();
            std::filesystem::path p = std::filesystem::path(base_dir) / file;
            for (auto& r : parse_htr(read_file(p.string()), p.stem().string())) sys.rules.push_back(std::move(r));
        } else {
            Lexer::fail("unknown declaration '" + kw.text + "'", kw);
        }
    }
    if (!have_start) throw Error("system has no start graph");
    sys.validate();
    return sys;
}

std::string render_hts(const HtSystem& sys) {
    std::ostringstream os;
    render_type(os, "nonterminal", sys.nonterminals);
    render_type(os, "terminal", sys.terminals);
    os << "start\n";
    indent(os, render_hgr(sys.start));
    os << "end\n";
    for (const auto& r : sys.rules) {
        os << "rule " << r.name << '\n';
        indent(os, render_hgr(r.lhs));
        os << "  =>\n";
        indent(os, render_hgr(r.rhs));
        os << "end\n";
    }
    return os.str();
}

std::string derivation_dot(const Derivation& d) {
    std::ostringstream os;
    os << "digraph derivation {\n  rankdir=LR;\n";
    auto cluster = [&](std::size_t k, const Hypergraph& h, const std::string& title) {
        std::string body = to_dot(h, title);
        std::string prefix = "\"" + std::to_string(k) + ":";
        std::string out;
        for (std::size_t i = 0; i < body.size(); ++i) {
            if (body[i] == '"' && i + 2 < body.size() && (body[i + 1] == 'n' || body[i + 1] == 'e') &&
                body[i + 2] == ':') {
                out += prefix;
                continue;
            }
            out += body[i];
        }
        // drop the digraph header and closing brace
        std::size_t first_nl = out.find('\n');
        std::size_t last = out.rfind('}');
        os << "  subgraph cluster_" << k << " {\n    label=\"" << title << "\";\n";
        std::istringstream in(out.substr(first_nl + 1, last - first_nl - 1));
        for (std::string line; std::getline(in, line);)
            if (!line.empty()) os << "  " << line << '\n';
        os << "  }\n";
    };
    cluster(0, d.start, "start");
    for (std::size_t i = 0; i < d.steps.size(); ++i)
        cluster(i + 1, d.steps[i].result, std::to_string(i + 1) + ": " + d.steps[i].rule.name);
    os << "}\n";
    return os.str();
}

}  // namespace hgl
