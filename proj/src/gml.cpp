#include "citenet/gml.hpp"

#include <charconv>
#include <cmath>
#include <optional>
#include <unordered_map>

#include <fmt/format.h>

#include "citenet/error.hpp"
#include "citenet/io.hpp"

namespace citenet {

namespace {

constexpr std::string_view kReserved[] = {"id", "label", "source", "target", "weight", "directed", "graphics"};

std::string format_double(double v)
{
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    std::string s(buf, ptr);
    if (s.find_first_of(".eE") == std::string::npos) {
        s += ".0";
    }
    return s;
}

std::string quote(std::string_view s)
{
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') {
            out.push_back('"');
        }
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

std::string format_value(const AttrValue& v, const std::string& node, const std::string& key)
{
    if (const auto* i = std::get_if<std::int64_t>(&v)) {
        return std::to_string(*i);
    }
    if (const auto* d = std::get_if<double>(&v)) {
        if (!std::isfinite(*d)) {
            throw SerializationError(fmt::format("node '{}': attribute '{}' is not a finite number", node, key));
        }
        return format_double(*d);
    }
    return quote(std::get<std::string>(v));
}

// ---- reader ---------------------------------------------------------------

struct Value;
using List = std::vector<std::pair<std::string, Value>>;

struct Value {
    std::variant<std::int64_t, double, std::string, List> data;
};

class Parser {
public:
    explicit Parser(std::string_view text) : text_(text) {}

    List parse_document()
    {
        List items = parse_list(false);
        skip_ws();
        if (pos_ != text_.size()) {
            fail("trailing content");
        }
        return items;
    }

private:
    [[noreturn]] void fail(std::string_view what) const
    {
        std::size_t line = 1;
        for (std::size_t i = 0; i < pos_ && i < text_.size(); ++i) {
            line += text_[i] == '\n';
        }
        throw DecodeError(fmt::format("gml: {} at line {}", what, line));
    }

    void skip_ws()
    {
        while (pos_ < text_.size()) {
            const char c = text_[pos_];
            if (c == '#') {
                while (pos_ < text_.size() && text_[pos_] != '\n') {
                    ++pos_;
                }
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                ++pos_;
            } else {
                break;
            }
        }
    }

    List parse_list(bool nested)
    {
        List items;
        while (true) {
            skip_ws();
            if (pos_ >= text_.size()) {
                if (nested) {
                    fail("unterminated list");
                }
                return items;
            }
            if (text_[pos_] == ']') {
                if (!nested) {
                    fail("unexpected ']'");
                }
                ++pos_;
                return items;
            }
            std::string key = parse_key();
            skip_ws();
            items.emplace_back(std::move(key), parse_value());
        }
    }

    std::string parse_key()
    {
        const std::size_t start = pos_;
        while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
            ++pos_;
        }
        if (start == pos_) {
            fail("expected a key");
        }
        return std::string(text_.substr(start, pos_ - start));
    }

    Value parse_value()
    {
        if (pos_ >= text_.size()) {
            fail("missing value");
        }
        const char c = text_[pos_];
        if (c == '[') {
            ++pos_;
            return Value{parse_list(true)};
        }
        if (c == '"') {
            return Value{parse_string()};
        }
        return parse_number();
    }

    std::string parse_string()
    {
        ++pos_;
        std::string out;
        while (true) {
            if (pos_ >= text_.size()) {
                fail("unterminated string");
            }
            const char c = text_[pos_++];
            if (c == '"') {
                if (pos_ < text_.size() && text_[pos_] == '"') {
                    out.push_back('"');
                    ++pos_;
                    continue;
                }
                return out;
            }
            if (c == '&') {
                decode_entity(out);
                continue;
            }
            out.push_back(c);
        }
    }

    // Called just past an '&'. Unknown or unterminated entities stay literal.
    void decode_entity(std::string& out)
    {
        const std::size_t semi = text_.find(';', pos_);
        if (semi == std::string_view::npos || semi - pos_ > 10) {
            out.push_back('&');
            return;
        }
        const std::string_view name = text_.substr(pos_, semi - pos_);
        std::optional<std::uint32_t> code;
        if (name == "quot") {
            code = '"';
        } else if (name == "amp") {
            code = '&';
        } else if (name == "lt") {
            code = '<';
        } else if (name == "gt") {
            code = '>';
        } else if (name == "apos") {
            code = '\'';
        } else if (name.size() > 1 && name[0] == '#') {
            const bool hex = name[1] == 'x' || name[1] == 'X';
            const std::string_view digits = name.substr(hex ? 2 : 1);
            std::uint32_t v = 0;
            auto [p, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), v, hex ? 16 : 10);
            if (ec == std::errc{} && p == digits.data() + digits.size() && !digits.empty() && v <= 0x10FFFF) {
                code = v;
            }
        }
        if (!code) {
            out.push_back('&');
            return;
        }
        append_utf8(out, *code);
        pos_ = semi + 1;
    }

    static void append_utf8(std::string& out, std::uint32_t cp)
    {
        if (cp < 0x80) {
            out.push_back(static_cast<char>(cp));
        } else if (cp < 0x800) {
            out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
            out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
        } else if (cp < 0x10000) {
            out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
            out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
            out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
        } else {
            out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
            out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
            out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
            out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
        }
    }

    Value parse_number()
    {
        const std::size_t start = pos_;
        while (pos_ < text_.size() && !std::isspace(static_cast<unsigned char>(text_[pos_])) && text_[pos_] != ']' &&
               text_[pos_] != '[') {
            ++pos_;
        }
        std::string_view tok = text_.substr(start, pos_ - start);
        if (tok.empty()) {
            fail("expected a value");
        }
        const bool is_float = tok.find_first_of(".eEnN") != std::string_view::npos;
        if (!is_float) {
            std::int64_t v = 0;
            auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
            if (ec == std::errc{} && p == tok.data() + tok.size()) {
                return Value{v};
            }
        }
        std::string owned(tok);
        if (owned == "INF" || owned == "+INF" || owned == "-INF" || owned == "NAN") {
            fail("non-finite number");
        }
        char* end = nullptr;
        const double d = std::strtod(owned.c_str(), &end);
        if (end != owned.c_str() + owned.size()) {
            fail(fmt::format("malformed number '{}'", owned));
        }
        return Value{d};
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

const Value* find(const List& list, std::string_view key)
{
    for (const auto& [k, v] : list) {
        if (k == key) {
            return &v;
        }
    }
    return nullptr;
}

std::string scalar_as_string(const Value& v)
{
    if (const auto* s = std::get_if<std::string>(&v.data)) {
        return *s;
    }
    if (const auto* i = std::get_if<std::int64_t>(&v.data)) {
        return std::to_string(*i);
    }
    if (const auto* d = std::get_if<double>(&v.data)) {
        return format_double(*d);
    }
    throw DecodeError("gml: expected a scalar");
}

double as_number(const Value& v, std::string_view what)
{
    if (const auto* i = std::get_if<std::int64_t>(&v.data)) {
        return static_cast<double>(*i);
    }
    if (const auto* d = std::get_if<double>(&v.data)) {
        return *d;
    }
    throw DecodeError(fmt::format("gml: {} must be numeric", what));
}

} // namespace

bool is_gml_safe_key(std::string_view key)
{
    if (key.empty() || !std::isalpha(static_cast<unsigned char>(key[0]))) {
        return false;
    }
    for (char c : key) {
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') {
            return false;
        }
    }
    for (auto r : kReserved) {
        if (key == r) {
            return false;
        }
    }
    return true;
}

std::string to_gml(const Graph& graph)
{
    std::string out = "graph [\n";
    out += fmt::format("  directed {}\n", graph.directed() ? 1 : 0);
    for (std::size_t i = 0; i < graph.node_count(); ++i) {
        const auto& n = graph.node(i);
        out += "  node [\n";
        out += fmt::format("    id {}\n", i);
        out += fmt::format("    label {}\n", quote(n.id));
        for (const auto& [key, value] : n.attrs) {
            if (!is_gml_safe_key(key)) {
                throw SerializationError(fmt::format("node '{}': attribute key '{}' is not GML-safe", n.id, key));
            }
            out += fmt::format("    {} {}\n", key, format_value(value, n.id, key));
        }
        out += "  ]\n";
    }
    for (const auto& e : graph.edges()) {
        out += "  edge [\n";
        out += fmt::format("    source {}\n", e.source);
        out += fmt::format("    target {}\n", e.target);
        if (graph.weighted()) {
            if (!std::isfinite(e.weight)) {
                throw SerializationError(fmt::format("edge '{}'-'{}': weight is not finite",
                                                     graph.node(e.source).id, graph.node(e.target).id));
            }
            out += fmt::format("    weight {}\n", format_double(e.weight));
        }
        out += "  ]\n";
    }
    out += "]\n";
    return out;
}

void write_gml(const Graph& graph, const std::filesystem::path& path)
{
    write_file_atomic(path, to_gml(graph));
}

Graph parse_gml(std::string_view text)
{
    const List doc = Parser(text).parse_document();
    const Value* g = find(doc, "graph");
    if (!g || !std::holds_alternative<List>(g->data)) {
        throw DecodeError("gml: no graph block");
    }
    const List& items = std::get<List>(g->data);

    bool directed = false;
    if (const Value* d = find(items, "directed")) {
        directed = as_number(*d, "directed") != 0.0;
    }
    bool weighted = false;
    for (const auto& [k, v] : items) {
        if (k == "edge" && std::holds_alternative<List>(v.data) && find(std::get<List>(v.data), "weight")) {
            weighted = true;
            break;
        }
    }

    Graph graph(directed, weighted);
    std::unordered_map<std::string, std::size_t> by_gml_id;
    for (const auto& [k, v] : items) {
        if (k != "node") {
            continue;
        }
        if (!std::holds_alternative<List>(v.data)) {
            throw DecodeError("gml: node must be a list");
        }
        const List& fields = std::get<List>(v.data);
        const Value* id = find(fields, "id");
        if (!id) {
            throw DecodeError("gml: node without id");
        }
        const std::string gml_id = scalar_as_string(*id);
        const Value* label = find(fields, "label");
        const std::string node_id = label ? scalar_as_string(*label) : gml_id;
        Attributes attrs;
        for (const auto& [fk, fv] : fields) {
            if (fk == "id" || fk == "label" || std::holds_alternative<List>(fv.data)) {
                continue;
            }
            std::visit(
                [&](const auto& x) {
                    using T = std::decay_t<decltype(x)>;
                    if constexpr (!std::is_same_v<T, List>) {
                        attrs[fk] = x;
                    }
                },
                fv.data);
        }
        if (graph.has_node(node_id)) {
            throw DecodeError(fmt::format("gml: duplicate node '{}'", node_id));
        }
        const std::size_t idx = graph.add_node(node_id, std::move(attrs));
        if (!by_gml_id.emplace(gml_id, idx).second) {
            throw DecodeError(fmt::format("gml: duplicate node id {}", gml_id));
        }
    }
    for (const auto& [k, v] : items) {
        if (k != "edge") {
            continue;
        }
        if (!std::holds_alternative<List>(v.data)) {
            throw DecodeError("gml: edge must be a list");
        }
        const List& fields = std::get<List>(v.data);
        const Value* s = find(fields, "source");
        const Value* t = find(fields, "target");
        if (!s || !t) {
            throw DecodeError("gml: edge without source/target");
        }
        auto si = by_gml_id.find(scalar_as_string(*s));
        auto ti = by_gml_id.find(scalar_as_string(*t));
        if (si == by_gml_id.end() || ti == by_gml_id.end()) {
            throw DecodeError("gml: edge refers to an unknown node");
        }
        double w = 1.0;
        if (const Value* wv = find(fields, "weight")) {
            w = as_number(*wv, "weight");
        }
        if (graph.weighted() && graph.has_edge(si->second, ti->second)) {
            graph.increment_edge(si->second, ti->second, w);
        } else {
            graph.add_edge(si->second, ti->second, w);
        }
    }
    return graph;
}

Graph read_gml(const std::filesystem::path& path)
{
    return parse_gml(read_file(path));
}

} // namespace citenet
