#include "adbdiff/html.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cstdint>
#include <unordered_set>

#include "adbdiff/url.hpp"

namespace adbdiff::html {

namespace {

const std::unordered_set<std::string>& void_elements() {
    static const std::unordered_set<std::string> tags = {
        "area", "base", "br", "col", "embed", "hr", "img", "input",
        "link", "meta", "param", "source", "track", "wbr",
    };
    return tags;
}

const std::unordered_set<std::string>& raw_text_elements() {
    static const std::unordered_set<std::string> tags = {"script", "style", "textarea", "title"};
    return tags;
}

// Tags that belong in head when they appear before any body content.
const std::unordered_set<std::string>& head_tags() {
    static const std::unordered_set<std::string> tags = {"title", "meta", "link", "base",
                                                         "style", "script"};
    return tags;
}

bool is_ascii_space(char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f';
}

bool all_space(std::string_view s) {
    return std::all_of(s.begin(), s.end(), is_ascii_space);
}

void append_utf8(std::string& out, uint32_t cp) {
    if (cp == 0 || cp > 0x10FFFF) cp = 0xFFFD;
    if (cp < 0x80) {
        out += static_cast<char>(cp);
    } else if (cp < 0x800) {
        out += static_cast<char>(0xC0 | (cp >> 6));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    } else if (cp < 0x10000) {
        out += static_cast<char>(0xE0 | (cp >> 12));
        out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    } else {
        out += static_cast<char>(0xF0 | (cp >> 18));
        out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
        out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    }
}

std::string decode_entities(std::string_view in) {
    std::string out;
    out.reserve(in.size());
    size_t i = 0;
    while (i < in.size()) {
        if (in[i] != '&') {
            out += in[i++];
            continue;
        }
        size_t semi = in.find(';', i + 1);
        if (semi == std::string_view::npos || semi - i > 10) {
            out += in[i++];
            continue;
        }
        std::string_view name = in.substr(i + 1, semi - i - 1);
        if (name == "amp") {
            out += '&';
        } else if (name == "lt") {
            out += '<';
        } else if (name == "gt") {
            out += '>';
        } else if (name == "quot") {
            out += '"';
        } else if (name == "apos") {
            out += '\'';
        } else if (name == "nbsp") {
            append_utf8(out, 0xA0);
        } else if (!name.empty() && name[0] == '#') {
            uint32_t cp = 0;
            bool ok = name.size() > 1;
            if (name.size() > 2 && (name[1] == 'x' || name[1] == 'X')) {
                for (size_t k = 2; k < name.size() && ok; ++k) {
                    char c = name[k];
                    if (!std::isxdigit(static_cast<unsigned char>(c))) ok = false;
                    cp = cp * 16 + (std::isdigit(static_cast<unsigned char>(c))
                                        ? c - '0'
                                        : (std::tolower(c) - 'a' + 10));
                    if (cp > 0x10FFFF) cp = 0x10FFFF + 1;
                }
            } else {
                for (size_t k = 1; k < name.size() && ok; ++k) {
                    if (!std::isdigit(static_cast<unsigned char>(name[k]))) ok = false;
                    cp = cp * 10 + (name[k] - '0');
                    if (cp > 0x10FFFF) cp = 0x10FFFF + 1;
                }
            }
            if (!ok) {
                out += in[i++];
                continue;
            }
            append_utf8(out, cp);
        } else {
            // Unknown entity, keep it verbatim.
            out += in[i++];
            continue;
        }
        i = semi + 1;
    }
    return out;
}

struct Attr {
    std::string name;
    std::string value;
};

class Builder {
public:
    Builder() {
        doc_.root = std::make_unique<Node>();
        doc_.root->type = NodeType::Document;
    }

    Document take() { return std::move(doc_); }

    void doctype(std::string text) {
        auto node = std::make_unique<Node>();
        node->type = NodeType::Doctype;
        node->text = std::move(text);
        attach(doc_.root.get(), std::move(node));
    }

    void comment(std::string text) {
        auto node = std::make_unique<Node>();
        node->type = NodeType::Comment;
        node->text = std::move(text);
        attach(insertion_point_or_root(), std::move(node));
    }

    void text(std::string value) {
        if (stack_.empty() && all_space(value)) return;  // stray whitespace outside body
        Node* target = stack_.empty() ? ensure_body() : stack_.back();
        if (!target->children.empty() && target->children.back()->type == NodeType::Text) {
            target->children.back()->text += value;
            return;
        }
        auto node = std::make_unique<Node>();
        node->type = NodeType::Text;
        node->text = std::move(value);
        attach(target, std::move(node));
    }

    // Returns the new element if it was left open, nullptr otherwise.
    Node* start_tag(const std::string& name, std::vector<Attr> attrs, bool self_closing) {
        if (name == "html") {
            merge_attrs(ensure_html(), attrs);
            return nullptr;
        }
        if (name == "head") {
            if (body_ != nullptr) return nullptr;
            Node* head = ensure_head();
            merge_attrs(head, attrs);
            if (stack_.empty() || stack_.back() != head) stack_.push_back(head);
            return nullptr;
        }
        if (name == "body") {
            merge_attrs(ensure_body(), attrs);
            return nullptr;
        }

        Node* target;
        if (body_ == nullptr && head_tags().contains(name)) {
            target = ensure_head();
        } else {
            if (stack_.empty() || body_ == nullptr) ensure_body();  // also closes head
            implicit_close(name);
            target = stack_.back();
        }

        auto node = std::make_unique<Node>();
        node->type = NodeType::Element;
        node->name = name;
        for (auto& a : attrs) node->attrs.emplace_back(std::move(a.name), std::move(a.value));
        Node* raw = node.get();
        attach(target, std::move(node));
        if (self_closing || is_void_element(name)) return nullptr;
        stack_.push_back(raw);
        return raw;
    }

    void end_tag(const std::string& name) {
        if (name == "html" || name == "body") return;  // kept open until EOF
        for (size_t i = stack_.size(); i-- > 0;) {
            Node* open = stack_[i];
            if (open->name == name) {
                stack_.resize(i);
                return;
            }
            if (open == head_ || open->name == "body") return;
        }
    }

private:
    Node* ensure_html() {
        if (html_ == nullptr) {
            auto node = std::make_unique<Node>();
            node->type = NodeType::Element;
            node->name = "html";
            html_ = node.get();
            attach(doc_.root.get(), std::move(node));
        }
        return html_;
    }

    Node* ensure_head() {
        ensure_html();
        if (head_ == nullptr) {
            auto node = std::make_unique<Node>();
            node->type = NodeType::Element;
            node->name = "head";
            head_ = node.get();
            attach(html_, std::move(node));
        }
        return head_;
    }

    Node* ensure_body() {
        ensure_html();
        ensure_head();  // head always precedes body in the normalized tree
        if (body_ == nullptr) {
            while (!stack_.empty()) stack_.pop_back();
            auto node = std::make_unique<Node>();
            node->type = NodeType::Element;
            node->name = "body";
            body_ = node.get();
            attach(html_, std::move(node));
            stack_.push_back(body_);
        }
        return body_;
    }

    Node* insertion_point_or_root() {
        if (!stack_.empty()) return stack_.back();
        return html_ != nullptr ? html_ : doc_.root.get();
    }

    void implicit_close(const std::string& name) {
        static const std::unordered_set<std::string> boundaries = {
            "body", "div", "section", "article", "table", "ul", "ol", "select", "html"};
        std::unordered_set<std::string> group;
        if (name == "p") group = {"p"};
        else if (name == "li") group = {"li"};
        else if (name == "td" || name == "th") group = {"td", "th"};
        else if (name == "tr") group = {"tr"};
        else if (name == "option") group = {"option"};
        else return;
        for (size_t i = stack_.size(); i-- > 0;) {
            if (group.contains(stack_[i]->name)) {
                stack_.resize(i);
                return;
            }
            if (boundaries.contains(stack_[i]->name) || stack_[i] == head_) return;
        }
    }

    static void merge_attrs(Node* node, const std::vector<Attr>& attrs) {
        for (const auto& a : attrs) {
            if (node->attr(a.name) == nullptr) node->attrs.emplace_back(a.name, a.value);
        }
    }

    static void attach(Node* parent, std::unique_ptr<Node> child) {
        child->parent = parent;
        parent->children.push_back(std::move(child));
    }

    Document doc_;
    Node* html_ = nullptr;
    Node* head_ = nullptr;
    Node* body_ = nullptr;
    std::vector<Node*> stack_;
};

struct Tokenizer {
    std::string_view in;
    size_t pos = 0;
    Builder& builder;

    void run() {
        std::string pending_text;
        auto flush_text = [&] {
            if (!pending_text.empty()) {
                builder.text(decode_entities(pending_text));
                pending_text.clear();
            }
        };
        while (pos < in.size()) {
            if (in[pos] != '<') {
                size_t next = in.find('<', pos);
                if (next == std::string_view::npos) next = in.size();
                pending_text.append(in.substr(pos, next - pos));
                pos = next;
                continue;
            }
            if (pos + 1 >= in.size()) {
                pending_text += '<';
                ++pos;
                continue;
            }
            char c = in[pos + 1];
            if (c == '!' ) {
                flush_text();
                markup_declaration();
            } else if (c == '/') {
                flush_text();
                end_tag();
            } else if (c == '?') {
                flush_text();
                bogus_comment(pos + 1);
            } else if (std::isalpha(static_cast<unsigned char>(c))) {
                flush_text();
                start_tag();
            } else {
                pending_text += '<';
                ++pos;
            }
        }
        flush_text();
    }

    void markup_declaration() {
        if (in.compare(pos, 4, "<!--") == 0) {
            size_t end = in.find("-->", pos + 4);
            std::string text(in.substr(pos + 4, end == std::string_view::npos
                                                    ? std::string_view::npos
                                                    : end - (pos + 4)));
            builder.comment(std::move(text));
            pos = end == std::string_view::npos ? in.size() : end + 3;
            return;
        }
        // <!doctype ...> or any other <!...> declaration
        size_t end = in.find('>', pos + 2);
        std::string body(in.substr(pos + 2, end == std::string_view::npos
                                                ? std::string_view::npos
                                                : end - (pos + 2)));
        pos = end == std::string_view::npos ? in.size() : end + 1;
        std::string lowered = to_lower(body);
        if (lowered.rfind("doctype", 0) == 0) {
            builder.doctype(std::move(body));
        } else {
            builder.comment(std::move(body));
        }
    }

    void bogus_comment(size_t content_start) {
        size_t end = in.find('>', content_start);
        builder.comment(std::string(in.substr(
            content_start, end == std::string_view::npos ? std::string_view::npos
                                                         : end - content_start)));
        pos = end == std::string_view::npos ? in.size() : end + 1;
    }

    void end_tag() {
        size_t name_start = pos + 2;
        size_t i = name_start;
        while (i < in.size() && (std::isalnum(static_cast<unsigned char>(in[i])) ||
                                 in[i] == '-' || in[i] == ':'))
            ++i;
        std::string name = to_lower(in.substr(name_start, i - name_start));
        size_t end = in.find('>', i);
        pos = end == std::string_view::npos ? in.size() : end + 1;
        if (!name.empty()) builder.end_tag(name);
    }

    void start_tag() {
        size_t i = pos + 1;
        size_t name_start = i;
        while (i < in.size() && (std::isalnum(static_cast<unsigned char>(in[i])) ||
                                 in[i] == '-' || in[i] == ':'))
            ++i;
        std::string name = to_lower(in.substr(name_start, i - name_start));

        std::vector<Attr> attrs;
        bool self_closing = false;
        while (i < in.size() && in[i] != '>') {
            while (i < in.size() && is_ascii_space(in[i])) ++i;
            if (i < in.size() && in[i] == '/') {
                self_closing = true;
                ++i;
                continue;
            }
            if (i >= in.size() || in[i] == '>') break;
            size_t attr_start = i;
            while (i < in.size() && !is_ascii_space(in[i]) && in[i] != '=' && in[i] != '>' &&
                   in[i] != '/')
                ++i;
            std::string attr_name = to_lower(in.substr(attr_start, i - attr_start));
            std::string value;
            while (i < in.size() && is_ascii_space(in[i])) ++i;
            if (i < in.size() && in[i] == '=') {
                ++i;
                while (i < in.size() && is_ascii_space(in[i])) ++i;
                if (i < in.size() && (in[i] == '"' || in[i] == '\'')) {
                    char quote = in[i++];
                    size_t vstart = i;
                    while (i < in.size() && in[i] != quote) ++i;
                    value = decode_entities(in.substr(vstart, i - vstart));
                    if (i < in.size()) ++i;
                } else {
                    size_t vstart = i;
                    while (i < in.size() && !is_ascii_space(in[i]) && in[i] != '>') ++i;
                    value = decode_entities(in.substr(vstart, i - vstart));
                }
            }
            if (!attr_name.empty()) attrs.push_back({std::move(attr_name), std::move(value)});
        }
        pos = (i < in.size()) ? i + 1 : in.size();
        if (name.empty()) return;

        Node* opened = builder.start_tag(name, std::move(attrs), self_closing);
        if (opened != nullptr && raw_text_elements().contains(name)) {
            read_raw_text(name);
        }
    }

    void read_raw_text(const std::string& name) {
        std::string needle = "</" + name;
        std::string lowered = to_lower(in.substr(pos));
        size_t end = std::string::npos;
        size_t search = 0;
        while (true) {
            size_t hit = lowered.find(needle, search);
            if (hit == std::string::npos) break;
            size_t after = hit + needle.size();
            char next = after < lowered.size() ? lowered[after] : '>';
            if (next == '>' || next == '/' || is_ascii_space(next)) {
                end = hit;
                break;
            }
            search = hit + 1;
        }
        std::string_view raw = in.substr(pos, end == std::string::npos
                                                  ? std::string_view::npos
                                                  : end);
        if (!raw.empty()) {
            // script/style bodies stay byte-exact; title/textarea decode refs
            std::string text = (name == "script" || name == "style")
                                   ? std::string(raw)
                                   : decode_entities(raw);
            builder.text(std::move(text));
        }
        if (end == std::string::npos) {
            pos = in.size();
            builder.end_tag(name);
            return;
        }
        size_t close = in.find('>', pos + end);
        pos = close == std::string_view::npos ? in.size() : close + 1;
        builder.end_tag(name);
    }
};

void escape_text(const std::string& in, std::string& out) {
    for (char c : in) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            default: out += c;
        }
    }
}

void escape_attr(const std::string& in, std::string& out) {
    for (char c : in) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
}

void serialize_node(const Node& node, std::string& out) {
    switch (node.type) {
        case NodeType::Document:
            for (const auto& child : node.children) serialize_node(*child, out);
            return;
        case NodeType::Doctype:
            out += "<!" + node.text + ">";
            return;
        case NodeType::Comment:
            out += "<!--" + node.text + "-->";
            return;
        case NodeType::Text: {
            const Node* p = node.parent;
            if (p != nullptr && raw_text_elements().contains(p->name) && p->name != "title" &&
                p->name != "textarea") {
                out += node.text;
            } else {
                escape_text(node.text, out);
            }
            return;
        }
        case NodeType::Element:
            break;
    }
    out += "<" + node.name;
    for (const auto& [name, value] : node.attrs) {
        out += " " + name + "=\"";
        escape_attr(value, out);
        out += "\"";
    }
    out += ">";
    if (is_void_element(node.name)) return;
    for (const auto& child : node.children) serialize_node(*child, out);
    out += "</" + node.name + ">";
}

}  // namespace

bool is_void_element(std::string_view tag) {
    return void_elements().contains(std::string(tag));
}

const std::string* Node::attr(std::string_view attr_name) const {
    for (const auto& [name, value] : attrs) {
        if (name == attr_name) return &value;
    }
    return nullptr;
}

bool Node::has_class(std::string_view cls) const {
    const std::string* value = attr("class");
    if (value == nullptr) return false;
    size_t i = 0;
    while (i < value->size()) {
        while (i < value->size() && is_ascii_space((*value)[i])) ++i;
        size_t start = i;
        while (i < value->size() && !is_ascii_space((*value)[i])) ++i;
        if (i > start && std::string_view(*value).substr(start, i - start) == cls) return true;
    }
    return false;
}

Node* Document::html_element() const {
    for (const auto& child : root->children) {
        if (child->type == NodeType::Element && child->name == "html") return child.get();
    }
    return nullptr;
}

Node* Document::body() const {
    Node* html = html_element();
    if (html == nullptr) return nullptr;
    for (const auto& child : html->children) {
        if (child->type == NodeType::Element && child->name == "body") return child.get();
    }
    return nullptr;
}

Document parse(std::string_view input) {
    Builder builder;
    Tokenizer tokenizer{input, 0, builder};
    tokenizer.run();
    return builder.take();
}

std::string serialize(const Node& node) {
    std::string out;
    serialize_node(node, out);
    return out;
}

std::string serialize(const Document& doc) {
    return serialize(*doc.root);
}

void for_each_element(Node& node, const std::function<bool(Node&)>& fn) {
    if (node.type == NodeType::Element && !fn(node)) return;
    for (auto& child : node.children) for_each_element(*child, fn);
}

void for_each_element(const Node& node, const std::function<bool(const Node&)>& fn) {
    if (node.type == NodeType::Element && !fn(node)) return;
    for (const auto& child : node.children)
        for_each_element(static_cast<const Node&>(*child), fn);
}

Selector parse_selector(std::string_view text) {
    Selector sel;
    sel.raw = std::string(text);
    size_t i = 0;
    auto read_name = [&]() -> std::string {
        size_t start = i;
        while (i < text.size() &&
               (std::isalnum(static_cast<unsigned char>(text[i])) || text[i] == '-' ||
                text[i] == '_'))
            ++i;
        return std::string(text.substr(start, i - start));
    };
    if (i < text.size() && std::isalpha(static_cast<unsigned char>(text[i]))) {
        sel.tag = to_lower(read_name());
        if (sel.tag.empty()) return sel;
    }
    while (i < text.size()) {
        char c = text[i];
        if (c == '.') {
            ++i;
            std::string cls = read_name();
            if (cls.empty()) return sel;
            sel.classes.push_back(std::move(cls));
        } else if (c == '#') {
            ++i;
            std::string id = read_name();
            if (id.empty()) return sel;
            sel.id = std::move(id);
        } else {
            return sel;  // combinators, attributes, pseudo-classes: unsupported
        }
    }
    sel.supported = !sel.tag.empty() || !sel.id.empty() || !sel.classes.empty();
    return sel;
}

bool matches(const Node& element, const Selector& selector) {
    if (!selector.supported || element.type != NodeType::Element) return false;
    if (!selector.tag.empty() && element.name != selector.tag) return false;
    if (!selector.id.empty()) {
        const std::string* id = element.attr("id");
        if (id == nullptr || *id != selector.id) return false;
    }
    for (const auto& cls : selector.classes) {
        if (!element.has_class(cls)) return false;
    }
    return true;
}

namespace {

int remove_matching_in(Node& node, const Selector& selector) {
    int removed = 0;
    auto& children = node.children;
    for (size_t i = 0; i < children.size();) {
        if (children[i]->type == NodeType::Element && matches(*children[i], selector)) {
            children.erase(children.begin() + static_cast<long>(i));
            ++removed;
        } else {
            removed += remove_matching_in(*children[i], selector);
            ++i;
        }
    }
    return removed;
}

}  // namespace

int remove_matching(Document& doc, const Selector& selector) {
    return remove_matching_in(*doc.root, selector);
}

}  // namespace adbdiff::html
