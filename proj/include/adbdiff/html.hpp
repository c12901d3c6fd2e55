#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace adbdiff::html {

// Error-tolerant HTML parser with a deterministic, documented normalization:
//  - html/head/body are always synthesized when missing; head-only tags
//    (title, meta, link, base, style) seen before body content land in head
//  - tag and attribute names are lowercased
//  - script/style/textarea/title capture raw text up to their close tag
//  - an end tag closes the nearest matching open element, or is dropped
//  - a new p/li/td/th/tr/option implicitly closes an open element of its
//    group (search stops at body/div/section/article/table/ul/ol/select)
//  - void elements (br, img, meta, ...) never take children
//  - basic character references (&amp; &lt; &gt; &quot; &apos; &nbsp;
//    and numeric forms) are decoded in text and attribute values
// Invalid UTF-8 is carried through byte-for-byte; callers that need scalar
// counts decode with replacement (see features module).

enum class NodeType { Document, Element, Text, Comment, Doctype };

struct Node {
    NodeType type = NodeType::Element;
    std::string name;  // lowercased tag name, empty for non-elements
    std::vector<std::pair<std::string, std::string>> attrs;
    std::string text;  // Text/Comment/Doctype payload
    std::vector<std::unique_ptr<Node>> children;
    Node* parent = nullptr;

    const std::string* attr(std::string_view attr_name) const;
    bool has_class(std::string_view cls) const;
};

struct Document {
    std::unique_ptr<Node> root;  // NodeType::Document

    Node* html_element() const;
    Node* body() const;
};

Document parse(std::string_view input);

std::string serialize(const Node& node);
std::string serialize(const Document& doc);

// Pre-order walk over element nodes. Return false from fn to skip that
// element's children; siblings still get visited.
void for_each_element(Node& node, const std::function<bool(Node&)>& fn);
void for_each_element(const Node& node, const std::function<bool(const Node&)>& fn);

// Compound selector subset: tag, #id, .class and conjunctions thereof
// (e.g. "div.ad-banner", "#overlay", "div#x.a.b"). Anything else parses
// with supported=false and matches nothing.
struct Selector {
    std::string raw;
    std::string tag;      // empty = any
    std::string id;       // empty = any
    std::vector<std::string> classes;
    bool supported = false;
};

Selector parse_selector(std::string_view text);
bool matches(const Node& element, const Selector& selector);

// Removes every element matched by the selector, subtree included.
// Returns the number of elements removed (nested matches inside a removed
// subtree are not double-counted).
int remove_matching(Document& doc, const Selector& selector);

bool is_void_element(std::string_view tag);

}  // namespace adbdiff::html
