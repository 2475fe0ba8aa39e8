#pragma once

// Minimal element tree on top of expat. Only elements and attributes are
// kept; URDF carries no meaningful character data.

#include <expat.h>

#include <cstddef>
#include <algorithm>
#include <memory>
#include <string>
#include <string_view>
#include <type_traits>
#include <utility>
#include <vector>

#include "urdf_inspect/detail/strings.hpp"
#include "urdf_inspect/result.hpp"

namespace urdf_inspect::detail {

struct XmlElement {
    std::string name;
    std::vector<std::pair<std::string, std::string>> attributes;
    std::vector<XmlElement> children;
    std::size_t line = 0;
    std::size_t column = 0;

    [[nodiscard]] const std::string* attribute(std::string_view key) const {
        for (const auto& [k, v] : attributes) {
            if (k == key) return &v;
        }
        return nullptr;
    }

    [[nodiscard]] const XmlElement* first_child(std::string_view tag) const {
        for (const auto& c : children) {
            if (c.name == tag) return &c;
        }
        return nullptr;
    }
};

struct XmlError {
    std::string message;
    std::size_t line = 0;
    std::size_t column = 0;
};

inline constexpr std::size_t kMaxXmlDepth = 256;

namespace xml_impl {

struct BuildState {
    XML_Parser parser = nullptr;
    std::vector<XmlElement> stack;
    std::unique_ptr<XmlElement> root;
    std::string abort_reason;
    std::size_t abort_line = 0;
    std::size_t abort_column = 0;

    void abort(std::string reason) {
        if (abort_reason.empty()) {
            abort_reason = std::move(reason);
            abort_line = XML_GetCurrentLineNumber(parser);
            abort_column = XML_GetCurrentColumnNumber(parser) + 1;
        }
        XML_StopParser(parser, XML_FALSE);
    }
};

inline void on_start(void* user, const XML_Char* name, const XML_Char** attrs) {
    auto* st = static_cast<BuildState*>(user);
    if (st->stack.size() >= kMaxXmlDepth) {
        st->abort("element nesting deeper than " + std::to_string(kMaxXmlDepth));
        return;
    }
    XmlElement el;
    el.name = name;
    el.line = XML_GetCurrentLineNumber(st->parser);
    el.column = XML_GetCurrentColumnNumber(st->parser) + 1;
    for (std::size_t i = 0; attrs[i] != nullptr; i += 2) {
        el.attributes.emplace_back(attrs[i], attrs[i + 1]);
    }
    st->stack.push_back(std::move(el));
}

inline void on_end(void* user, const XML_Char* /*name*/) {
    auto* st = static_cast<BuildState*>(user);
    if (st->stack.empty()) return;
    XmlElement done = std::move(st->stack.back());
    st->stack.pop_back();
    if (st->stack.empty()) {
        st->root = std::make_unique<XmlElement>(std::move(done));
    } else {
        st->stack.back().children.push_back(std::move(done));
    }
}

inline void on_decl(void* user, const XML_Char* /*version*/, const XML_Char* encoding,
                    int /*standalone*/) {
    auto* st = static_cast<BuildState*>(user);
    if (encoding != nullptr && !iequals(encoding, "utf-8")) {
        st->abort(std::string("unsupported document encoding '") + encoding + "'");
    }
}

}  // namespace xml_impl

// Parses a UTF-8 document (optional BOM) into an element tree. Any other
// declared encoding is rejected.
inline Result<XmlElement, XmlError> parse_xml(std::string_view text) {
    using namespace xml_impl;
    std::unique_ptr<std::remove_pointer_t<XML_Parser>, decltype(&XML_ParserFree)> parser(
        XML_ParserCreate("UTF-8"), &XML_ParserFree);
    if (!parser) return XmlError{"could not allocate XML parser", 0, 0};

    BuildState st;
    st.parser = parser.get();
    XML_SetUserData(parser.get(), &st);
    XML_SetElementHandler(parser.get(), on_start, on_end);
    XML_SetXmlDeclHandler(parser.get(), on_decl);

    constexpr std::size_t kChunk = 1u << 20;
    std::size_t offset = 0;
    bool ok = true;
    do {
        std::size_t n = std::min(kChunk, text.size() - offset);
        bool last = offset + n == text.size();
        if (XML_Parse(parser.get(), text.data() + offset, static_cast<int>(n),
                      last ? XML_TRUE : XML_FALSE) != XML_STATUS_OK) {
            ok = false;
            break;
        }
        offset += n;
    } while (offset < text.size());

    if (!st.abort_reason.empty()) {
        return XmlError{st.abort_reason, st.abort_line, st.abort_column};
    }
    if (!ok) {
        return XmlError{XML_ErrorString(XML_GetErrorCode(parser.get())),
                        XML_GetCurrentLineNumber(parser.get()),
                        XML_GetCurrentColumnNumber(parser.get()) + 1};
    }
    if (!st.root) return XmlError{"document has no root element", 1, 1};
    return std::move(*st.root);
}

}  // namespace urdf_inspect::detail
