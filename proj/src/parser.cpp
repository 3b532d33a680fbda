#include "cncsynth/parser.hpp"

#include <cctype>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace cncsynth {

namespace {

std::string render(const std::vector<Diagnostic>& diagnostics) {
    std::string out;
    for (const auto& d : diagnostics) {
        if (!out.empty()) out += '\n';
        out += d.span.file + ":" + std::to_string(d.span.line) + ":" + std::to_string(d.span.column) + ": " + d.message;
    }
    return out;
}

enum class Tok { Ident, Int, Punct, End };

struct Token {
    Tok kind;
    std::string text;
    SourceSpan span;
};

std::vector<Token> lex(const std::string& text, const std::string& file) {
    std::vector<Token> tokens;
    int line = 1, col = 1;
    std::size_t i = 0;
    auto advance = [&](std::size_t n) {
        for (std::size_t k = 0; k < n; ++k, ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
    };
    auto error = [&](const std::string& message, int length) {
        throw ParseError({Diagnostic{SourceSpan{file, line, col, length}, message}});
    };
    static const char* const two_char[] = {"->", "&&", "||", "<<", ">>"};

    while (i < text.size()) {
        const char c = text[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            advance(1);
            continue;
        }
        if (c == '/' && i + 1 < text.size() && text[i + 1] == '/') {
            while (i < text.size() && text[i] != '\n') advance(1);
            continue;
        }
        SourceSpan span{file, line, col, 0};
        std::size_t start = i;
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t j = i;
            while (j < text.size()) {
                const char d = text[j];
                if (std::isalnum(static_cast<unsigned char>(d)) || d == '_') {
                    ++j;
                } else if (d == '-' && j + 1 < text.size() &&
                           (std::isalpha(static_cast<unsigned char>(text[j + 1])) || text[j + 1] == '_')) {
                    ++j;
                } else {
                    break;
                }
            }
            span.length = static_cast<int>(j - start);
            tokens.push_back({Tok::Ident, text.substr(start, j - start), span});
            advance(j - start);
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t j = i;
            while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
            if (j < text.size() && (std::isalpha(static_cast<unsigned char>(text[j])) || text[j] == '_'))
                error("identifiers cannot start with a digit", static_cast<int>(j - i + 1));
            span.length = static_cast<int>(j - start);
            tokens.push_back({Tok::Int, text.substr(start, j - start), span});
            advance(j - start);
            continue;
        }
        bool matched = false;
        for (const char* op : two_char) {
            if (text.compare(i, 2, op) == 0) {
                span.length = 2;
                tokens.push_back({Tok::Punct, op, span});
                advance(2);
                matched = true;
                break;
            }
        }
        if (matched) continue;
        if (std::string("{}()[];,.:=?!").find(c) != std::string::npos) {
            span.length = 1;
            tokens.push_back({Tok::Punct, std::string(1, c), span});
            advance(1);
            continue;
        }
        error(std::string("unexpected character '") + c + "'", 1);
    }
    tokens.push_back({Tok::End, "", SourceSpan{file, line, col, 0}});
    return tokens;
}

class Parser {
public:
    Parser(const std::string& text, const std::string& file) : tokens_(lex(text, file)), file_(file) {}

protected:
    const Token& peek(std::size_t ahead = 0) const { return tokens_[std::min(pos_ + ahead, tokens_.size() - 1)]; }
    const Token& next() {
        const Token& t = peek();
        if (t.kind != Tok::End) ++pos_;
        return t;
    }
    bool at_end() const { return peek().kind == Tok::End; }

    bool is(const std::string& text) const {
        const auto& t = peek();
        return (t.kind == Tok::Punct || t.kind == Tok::Ident) && t.text == text;
    }
    bool accept(const std::string& text) {
        if (!is(text)) return false;
        next();
        return true;
    }
    const Token& expect(const std::string& text) {
        if (!is(text)) fail(peek(), "expected '" + text + "'" + found());
        return next();
    }
    /// An identifier that is not a hyphenated keyword.
    const Token& name(const std::string& what) {
        const auto& t = peek();
        if (t.kind != Tok::Ident) fail(t, "expected " + what + found());
        if (t.text.find('-') != std::string::npos) fail(t, "'" + t.text + "' is not a valid " + what);
        return next();
    }
    int integer(const std::string& what) {
        const auto& t = peek();
        if (t.kind != Tok::Int) fail(t, "expected " + what + found());
        next();
        try {
            return std::stoi(t.text);
        } catch (const std::out_of_range&) {
            fail(t, what + " is too large");
        }
    }

    std::string found() const {
        const auto& t = peek();
        return t.kind == Tok::End ? ", found end of input" : ", found '" + t.text + "'";
    }

    [[noreturn]] void fail(const Token& at, const std::string& message) const { fail(at.span, message); }
    [[noreturn]] void fail(const SourceSpan& span, const std::string& message) const {
        throw ParseError({Diagnostic{span, message}});
    }

    SourceSpan file_span() const { return SourceSpan{file_, 1, 1, 0}; }

    std::vector<Token> tokens_;
    std::size_t pos_ = 0;
    std::string file_;
};

// ---------------------------------------------------------------------------
// Models

class ModelParser : public Parser {
public:
    using Parser::Parser;

    CncModel parse(const ParseOptions& options) {
        if (at_end()) fail(peek(), "expected 'component'" + found());
        while (!at_end()) {
            if (is("connect")) {
                connect();
                continue;
            }
            expect("component");
            component(std::nullopt);
        }
        CncModel model;
        for (const auto& name : order_) model.components.push_back(std::move(components_.at(name)));
        model.connectors = std::move(connectors_);
        model.refresh_types();

        ValidationOptions vo;
        vo.allow_multiple_tops = options.allow_multiple_tops;
        auto report = validate_model(model, vo);
        if (!report.empty()) {
            std::vector<Diagnostic> diagnostics;
            for (const auto& v : report) diagnostics.push_back({span_for(v), v.message});
            throw ParseError(std::move(diagnostics));
        }
        return model;
    }

private:
    Component& declare(const Token& id) {
        auto [it, inserted] = components_.try_emplace(id.text, Component{id.text, {}, {}});
        if (inserted) {
            order_.push_back(id.text);
            spans_[id.text] = id.span;
        }
        return it->second;
    }

    void component(const std::optional<std::string>& parent) {
        const Token& id = name("component name");
        declare(id);
        if (parent) {
            auto& subs = components_.at(*parent).subcomponents;
            if (std::find(subs.begin(), subs.end(), id.text) != subs.end())
                fail(id, "component '" + id.text + "' is already a subcomponent of '" + *parent + "'");
            subs.push_back(id.text);
        }
        if (accept(";")) return;
        expect("{");
        if (!defined_.insert(id.text).second) fail(id, "component '" + id.text + "' is defined twice");
        while (!accept("}")) element(id.text);
        accept(";");
    }

    void element(const std::string& owner) {
        if (accept("port")) {
            Port p;
            const Token& dir = peek();
            if (accept("in")) p.direction = Direction::In;
            else if (accept("out")) p.direction = Direction::Out;
            else fail(dir, "expected 'in' or 'out'" + found());
            if (is("?")) fail(peek(), "port types cannot be unknown in a model");
            p.type = name("port type").text;
            if (is("?")) fail(peek(), "port names cannot be unknown in a model");
            const Token& pname = name("port name");
            p.name = pname.text;
            expect(";");
            spans_.emplace(owner + "." + p.name, pname.span);
            components_.at(owner).ports.push_back(std::move(p));
        } else if (accept("component")) {
            component(owner);
        } else if (is("connect")) {
            connect();
        } else {
            fail(peek(), "expected 'port', 'component', 'connect' or '}'" + found());
        }
    }

    void connect() {
        const Token& kw = next();
        Connector c;
        c.source = endpoint();
        expect("->");
        c.target = endpoint();
        expect(";");
        const auto label = to_string(c.source) + " -> " + to_string(c.target);
        spans_.emplace(label, kw.span);
        if (!incoming_.insert(to_string(c.target)).second) spans_.emplace("incoming " + to_string(c.target), kw.span);
        connectors_.push_back(std::move(c));
    }

    PortRef endpoint() {
        const Token& comp = name("component name");
        if (!accept(".")) fail(peek(), "connector endpoints in a model must name a port" + found());
        return PortRef{comp.text, name("port name").text};
    }

    SourceSpan span_for(const Violation& v) const {
        if (v.kind == ViolationKind::MultipleIncoming)
            if (auto it = spans_.find("incoming " + v.subject); it != spans_.end()) return it->second;
        if (auto it = spans_.find(v.subject); it != spans_.end()) return it->second;
        return file_span();
    }

    std::map<std::string, Component> components_;
    std::vector<std::string> order_;
    std::set<std::string> defined_;
    std::vector<Connector> connectors_;
    std::set<std::string> incoming_;
    std::map<std::string, SourceSpan> spans_;
};

// ---------------------------------------------------------------------------
// Views

class ViewParser : public Parser {
public:
    using Parser::Parser;

    CncView parse() {
        expect("view");
        view_.name = name("view name").text;
        expect("{");
        while (!accept("}")) element(std::nullopt);
        accept(";");
        if (!at_end()) fail(peek(), "expected end of input after the view" + found());

        for (auto& ac : view_.connectors) {
            ac.source_type = port_type(ac.source_component, ac.source_port);
            ac.target_type = port_type(ac.target_component, ac.target_port);
        }
        view_.refresh_types();
        auto report = validate_view(view_);
        if (!report.empty()) {
            std::vector<Diagnostic> diagnostics;
            for (const auto& v : report) {
                auto it = spans_.find(v.subject);
                diagnostics.push_back({it == spans_.end() ? file_span() : it->second, v.message});
            }
            throw ParseError(std::move(diagnostics));
        }
        return view_;
    }

private:
    ViewComponent& get(const std::string& component) {
        for (auto& c : view_.components)
            if (c.name == component) return c;
        throw InternalError("view component '" + component + "' vanished");
    }

    void declare(const Token& id) {
        if (view_.find(id.text)) return;
        view_.components.push_back(ViewComponent{id.text, {}, {}, false});
        spans_[id.text] = id.span;
    }

    void element(const std::optional<std::string>& parent) {
        bool stereotype = false;
        if (accept("<<")) {
            const Token& s = peek();
            if (!accept("interface-complete")) fail(s, "unknown stereotype" + found());
            expect(">>");
            stereotype = true;
            if (!is("component")) fail(peek(), "the interface-complete stereotype applies to components" + found());
        }
        if (accept("component")) {
            const Token& id = name("component name");
            declare(id);
            if (stereotype) get(id.text).interface_complete = true;
            if (parent) {
                auto& subs = get(*parent).subcomponents;
                if (std::find(subs.begin(), subs.end(), id.text) == subs.end()) subs.push_back(id.text);
            }
            if (accept(";")) return;
            expect("{");
            while (!accept("}")) element(id.text);
            accept(";");
        } else if (is("port")) {
            const Token& kw = next();
            if (!parent) fail(kw, "ports must be declared inside a component");
            ViewPort p;
            const Token& dir = peek();
            if (accept("in")) p.direction = Direction::In;
            else if (accept("out")) p.direction = Direction::Out;
            else fail(dir, "expected 'in' or 'out'" + found());
            if (!accept("?")) p.type = name("port type").text;
            if (!accept("?")) {
                const Token& pname = name("port name");
                p.name = pname.text;
                spans_.emplace(*parent + "." + pname.text, pname.span);
            }
            expect(";");
            get(*parent).ports.push_back(std::move(p));
        } else if (accept("connect")) {
            AbstractConnector ac;
            std::tie(ac.source_component, ac.source_port) = endpoint();
            expect("->");
            std::tie(ac.target_component, ac.target_port) = endpoint();
            expect(";");
            view_.connectors.push_back(std::move(ac));
        } else {
            fail(peek(), "expected 'component', 'port', 'connect' or '}'" + found());
        }
    }

    std::pair<std::string, std::optional<std::string>> endpoint() {
        const Token& comp = name("component name");
        if (!spans_.count(comp.text)) spans_[comp.text] = comp.span;
        std::optional<std::string> port;
        if (accept(".")) port = name("port name").text;
        return {comp.text, port};
    }

    std::optional<std::string> port_type(const std::string& component, const std::optional<std::string>& port) const {
        if (!port) return std::nullopt;
        const auto* c = view_.find(component);
        const auto* p = c ? c->find_port(*port) : nullptr;
        return p ? p->type : std::nullopt;
    }

    CncView view_;
    std::map<std::string, SourceSpan> spans_;
};

// ---------------------------------------------------------------------------
// Specifications

class SpecParser : public Parser {
public:
    using Parser::Parser;

    ViewSpec parse() {
        expect("spec");
        spec_.name = name("specification name").text;
        const Token& open = expect("{");
        bool have_views = false;
        while (!accept("}")) {
            const Token& kw = peek();
            if (accept("views")) {
                if (have_views) fail(kw, "duplicate views block");
                have_views = true;
                expect("{");
                if (!is("}")) {
                    do spec_.view_names.push_back(name("view name").text);
                    while (accept(","));
                }
                expect("}");
            } else if (accept("formula")) {
                if (spec_.formula) fail(kw, "duplicate formula");
                expect(":");
                if (is(";")) fail(kw, "formula required");
                spec_.formula = disjunction();
                expect(";");
            } else if (accept("patterns")) {
                patterns();
            } else if (accept("library")) {
                library();
            } else if (accept("style")) {
                style(kw);
                expect(";");
            } else if (accept("scope")) {
                scope();
            } else {
                fail(kw, "expected 'views', 'formula', 'patterns', 'library', 'style', 'scope' or '}'" + found());
            }
        }
        accept(";");
        if (!at_end()) fail(peek(), "expected end of input after the specification" + found());
        if (!have_views) fail(open, "views block required");
        if (!spec_.formula) fail(open, "formula required");
        return spec_;
    }

    StyleConfig parse_style() {
        const Token& first = peek();
        if (!accept("none")) style(first);
        accept(";");
        if (!at_end()) fail(peek(), "expected end of input after the style" + found());
        return spec_.style;
    }

private:
    Formula disjunction() {
        std::vector<Formula> terms{conjunction()};
        while (accept("||")) terms.push_back(conjunction());
        return Formula::any_of(std::move(terms));
    }
    Formula conjunction() {
        std::vector<Formula> factors{factor()};
        while (accept("&&")) factors.push_back(factor());
        return Formula::all_of(std::move(factors));
    }
    Formula factor() {
        if (accept("!")) return Formula::negate(factor());
        if (accept("(")) {
            auto f = disjunction();
            expect(")");
            return f;
        }
        return Formula::var(name("view name").text);
    }

    void patterns() {
        expect("{");
        while (!accept("}")) {
            const Token& kw = peek();
            Pattern p;
            if (accept("alt")) p.kind = PatternKind::Alt;
            else if (accept("xalt")) p.kind = PatternKind::Xalt;
            else if (accept("imp")) p.kind = PatternKind::Imp;
            else if (accept("nocomp")) p.kind = PatternKind::NoComp;
            else fail(kw, "expected 'alt', 'xalt', 'imp' or 'nocomp'" + found());
            expect("(");
            if (p.kind == PatternKind::NoComp) {
                p.args.push_back(name("component name").text);
            } else if (p.kind == PatternKind::Imp) {
                p.args.push_back(name("view name").text);
                expect(",");
                p.negate_consequent = accept("!");
                p.args.push_back(name("view name").text);
            } else {
                p.args.push_back(name("view name").text);
                expect(",");
                do p.args.push_back(name("view name").text);
                while (accept(","));
            }
            expect(")");
            expect(";");
            spec_.patterns.push_back(std::move(p));
        }
    }

    void library() {
        expect("{");
        while (!accept("}")) {
            expect("component");
            LibraryDecl decl;
            decl.component = name("component name").text;
            expect("{");
            while (!accept("}")) {
                expect("port");
                Port p;
                const Token& dir = peek();
                if (accept("in")) p.direction = Direction::In;
                else if (accept("out")) p.direction = Direction::Out;
                else fail(dir, "expected 'in' or 'out'" + found());
                if (is("?")) fail(peek(), "library ports need a type");
                p.type = name("port type").text;
                if (is("?")) fail(peek(), "library ports need a name");
                p.name = name("port name").text;
                expect(";");
                decl.interface.push_back(std::move(p));
            }
            accept(";");
            spec_.library.push_back(std::move(decl));
        }
    }

    std::vector<std::string> name_list(const std::string& what) {
        std::vector<std::string> names{name(what).text};
        while (accept(",")) names.push_back(name(what).text);
        return names;
    }

    void style(const Token& kw) {
        if (spec_.style.kind != StyleKind::None) fail(kw, "duplicate style");
        const Token& which = peek();
        if (accept("hierarchical")) {
            spec_.style.kind = StyleKind::Hierarchical;
        } else if (accept("client-server")) {
            spec_.style.kind = StyleKind::ClientServer;
            expect("(");
            expect("server");
            expect("=");
            spec_.style.server = name("component name").text;
            expect(",");
            expect("clients");
            expect("=");
            spec_.style.clients = name_list("component name");
            expect(")");
        } else if (accept("layered")) {
            spec_.style.kind = StyleKind::Layered;
            expect("(");
            do {
                expect("[");
                spec_.style.layers.push_back(name_list("component name"));
                expect("]");
            } while (accept(";"));
            expect(")");
            if (spec_.style.layers.size() < 2) fail(which, "a layered style needs at least two layers");
        } else {
            fail(which, "expected 'hierarchical', 'client-server' or 'layered'" + found());
        }
    }


    void scope() {
        expect("{");
        while (!accept("}")) {
            const Token& key = peek();
            std::optional<int>* slot = nullptr;
            if (accept("ports")) slot = &spec_.scope.ports;
            else if (accept("extra-names")) slot = &spec_.scope.extra_names;
            else if (accept("extra-types")) slot = &spec_.scope.extra_types;
            else fail(key, "expected 'ports', 'extra-names' or 'extra-types'" + found());
            expect("=");
            *slot = integer("scope bound");
            expect(";");
        }
    }

    ViewSpec spec_;
};

// ---------------------------------------------------------------------------
// Printing

void indent(std::ostringstream& out, int depth) { out << std::string(static_cast<std::size_t>(depth) * 4, ' '); }

std::string name_or_unknown(const std::optional<std::string>& s) { return s ? *s : "?"; }

void print_model_component(std::ostringstream& out, const CncModel& m, const Component& c, int depth,
                           const std::vector<Connector>* connectors) {
    indent(out, depth);
    if (c.ports.empty() && c.subcomponents.empty() && !connectors) {
        out << "component " << c.name << ";\n";
        return;
    }
    out << "component " << c.name << " {\n";
    for (const auto& p : c.ports) {
        indent(out, depth + 1);
        out << "port " << to_string(p.direction) << ' ' << p.type << ' ' << p.name << ";\n";
    }
    for (const auto& s : c.subcomponents) print_model_component(out, m, m.at(s), depth + 1, nullptr);
    if (connectors)
        for (const auto& con : *connectors) {
            indent(out, depth + 1);
            out << "connect " << to_string(con.source) << " -> " << to_string(con.target) << ";\n";
        }
    indent(out, depth);
    out << "}\n";
}

void print_view_component(std::ostringstream& out, const CncView& v, const ViewComponent& c, int depth,
                          std::set<std::string>& printed) {
    indent(out, depth);
    if (c.interface_complete) out << "<<interface-complete>> ";
    out << "component " << c.name;
    if (!printed.insert(c.name).second) {
        out << ";\n";
        return;
    }
    if (c.ports.empty() && c.subcomponents.empty()) {
        out << ";\n";
        return;
    }
    out << " {\n";
    for (const auto& p : c.ports) {
        indent(out, depth + 1);
        out << "port " << to_string(p.direction) << ' ' << name_or_unknown(p.type) << ' ' << name_or_unknown(p.name)
            << ";\n";
    }
    for (const auto& s : c.subcomponents) print_view_component(out, v, *v.find(s), depth + 1, printed);
    indent(out, depth);
    out << "}\n";
}

std::string dot_quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out + '"';
}

void dot_component(std::ostringstream& out, const CncModel& m, const Component& c, int depth) {
    indent(out, depth);
    out << "subgraph " << dot_quote("cluster_" + c.name) << " {\n";
    indent(out, depth + 1);
    out << "label=" << dot_quote(c.name) << ";\n";
    indent(out, depth + 1);
    out << dot_quote(c.name) << " [shape=point, style=invis];\n";
    for (const auto& p : c.ports) {
        indent(out, depth + 1);
        out << dot_quote(c.name + "." + p.name) << " [label=" << dot_quote(p.name + " : " + p.type)
            << ", shape=" << (p.direction == Direction::In ? "invhouse" : "house") << "];\n";
    }
    for (const auto& s : c.subcomponents) dot_component(out, m, m.at(s), depth + 1);
    indent(out, depth);
    out << "}\n";
}

}  // namespace

ParseError::ParseError(std::vector<Diagnostic> diagnostics)
    : Error(render(diagnostics)), diagnostics_(std::move(diagnostics)) {}

CncModel parse_model(const std::string& text, const ParseOptions& options) {
    return ModelParser(text, options.file).parse(options);
}

CncView parse_view(const std::string& text, const ParseOptions& options) { return ViewParser(text, options.file).parse(); }

ViewSpec parse_spec(const std::string& text, const ParseOptions& options) { return SpecParser(text, options.file).parse(); }

StyleConfig parse_style(const std::string& text, const ParseOptions& options) {
    return SpecParser(text, options.file).parse_style();
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError({Diagnostic{SourceSpan{path, 1, 1, 0}, "cannot read file"}});
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

CncModel load_model(const std::string& path, bool allow_multiple_tops) {
    ParseOptions options;
    options.file = path;
    options.allow_multiple_tops = allow_multiple_tops;
    return parse_model(read_file(path), options);
}

CncView load_view(const std::string& path) {
    ParseOptions options;
    options.file = path;
    return parse_view(read_file(path), options);
}

ViewSpec load_spec(const std::string& path) {
    ParseOptions options;
    options.file = path;
    auto spec = parse_spec(read_file(path), options);
    const auto dir = std::filesystem::path(path).parent_path();
    std::vector<Diagnostic> problems;
    for (const auto& name : spec.view_names) {
        if (spec.views.count(name)) continue;
        const auto view_path = (dir / (name + ".cncview")).string();
        if (!std::filesystem::exists(view_path)) {
            problems.push_back({SourceSpan{path, 1, 1, 0}, "view file '" + view_path + "' not found"});
            continue;
        }
        auto view = load_view(view_path);
        if (view.name != name)
            problems.push_back({SourceSpan{view_path, 1, 1, 0}, "file defines view '" + view.name + "', expected '" + name + "'"});
        spec.views.emplace(name, std::move(view));
    }
    if (!problems.empty()) throw ParseError(std::move(problems));
    return spec;
}

std::string print_model(const CncModel& model) {
    std::ostringstream out;
    const auto tops = model.tops();
    const bool single = tops.size() == 1;
    for (std::size_t i = 0; i < tops.size(); ++i) {
        if (i) out << '\n';
        print_model_component(out, model, model.at(tops[i]), 0, single ? &model.connectors : nullptr);
    }
    if (!single && !model.connectors.empty()) {
        out << '\n';
        for (const auto& con : model.connectors)
            out << "connect " << to_string(con.source) << " -> " << to_string(con.target) << ";\n";
    }
    return out.str();
}

std::string print_view(const CncView& view) {
    std::set<std::string> contained;
    for (const auto& c : view.components) contained.insert(c.subcomponents.begin(), c.subcomponents.end());
    std::ostringstream out;
    out << "view " << view.name << " {\n";
    std::set<std::string> printed;
    for (const auto& c : view.components)
        if (!contained.count(c.name)) print_view_component(out, view, c, 1, printed);
    for (const auto& ac : view.connectors) {
        indent(out, 1);
        out << "connect " << ac.source_component << (ac.source_port ? "." + *ac.source_port : "") << " -> "
            << ac.target_component << (ac.target_port ? "." + *ac.target_port : "") << ";\n";
    }
    out << "}\n";
    return out.str();
}

std::string print_spec(const ViewSpec& spec) {
    std::ostringstream out;
    out << "spec " << spec.name << " {\n    views {";
    for (std::size_t i = 0; i < spec.view_names.size(); ++i) out << (i ? ", " : " ") << spec.view_names[i];
    out << " }\n";
    if (spec.formula) out << "    formula: " << spec.formula->to_string() << ";\n";
    if (!spec.patterns.empty()) {
        out << "    patterns {\n";
        for (const auto& p : spec.patterns) {
            out << "        ";
            switch (p.kind) {
                case PatternKind::Alt: out << "alt("; break;
                case PatternKind::Xalt: out << "xalt("; break;
                case PatternKind::Imp: out << "imp("; break;
                case PatternKind::NoComp: out << "nocomp("; break;
            }
            for (std::size_t i = 0; i < p.args.size(); ++i) {
                if (i) out << ", ";
                if (i == 1 && p.kind == PatternKind::Imp && p.negate_consequent) out << '!';
                out << p.args[i];
            }
            out << ");\n";
        }
        out << "    }\n";
    }
    if (!spec.library.empty()) {
        out << "    library {\n";
        for (const auto& decl : spec.library) {
            out << "        component " << decl.component << " {\n";
            for (const auto& p : decl.interface)
                out << "            port " << to_string(p.direction) << ' ' << p.type << ' ' << p.name << ";\n";
            out << "        }\n";
        }
        out << "    }\n";
    }
    auto join = [](const std::vector<std::string>& names) {
        std::string s;
        for (const auto& n : names) s += (s.empty() ? "" : ", ") + n;
        return s;
    };
    switch (spec.style.kind) {
        case StyleKind::None: break;
        case StyleKind::Hierarchical: out << "    style hierarchical;\n"; break;
        case StyleKind::ClientServer:
            out << "    style client-server(server = " << spec.style.server << ", clients = " << join(spec.style.clients)
                << ");\n";
            break;
        case StyleKind::Layered: {
            out << "    style layered(";
            for (std::size_t i = 0; i < spec.style.layers.size(); ++i)
                out << (i ? "; [" : "[") << join(spec.style.layers[i]) << ']';
            out << ");\n";
            break;
        }
    }
    const auto& s = spec.scope;
    if (s.ports || s.extra_names || s.extra_types) {
        out << "    scope {";
        if (s.ports) out << " ports = " << *s.ports << ';';
        if (s.extra_names) out << " extra-names = " << *s.extra_names << ';';
        if (s.extra_types) out << " extra-types = " << *s.extra_types << ';';
        out << " }\n";
    }
    out << "}\n";
    return out.str();
}

std::string export_dot(const CncModel& model) {
    std::ostringstream out;
    out << "digraph model {\n    compound=true;\n    rankdir=LR;\n";
    for (const auto& top : model.tops()) dot_component(out, model, model.at(top), 1);
    for (const auto& c : model.connectors)
        out << "    " << dot_quote(to_string(c.source)) << " -> " << dot_quote(to_string(c.target)) << ";\n";
    out << "}\n";
    return out.str();
}

}  // namespace cncsynth
