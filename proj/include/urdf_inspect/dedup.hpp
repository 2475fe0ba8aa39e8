#pragma once

// Identical-file detection in the style of fdupes: group by size, then MD5,
// then confirm byte by byte. Text files are normalized first (spaces and
// tabs removed, every line break rewritten as CRLF).

#include <openssl/evp.h>

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdio>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "urdf_inspect/bundle_scan.hpp"
#include "urdf_inspect/detail/parallel.hpp"
#include "urdf_inspect/detail/strings.hpp"

namespace urdf_inspect {

// Deletes 0x20 and 0x09, rewrites LF, CR and CRLF as CRLF. Binary content
// is returned unchanged.
inline std::string normalize(std::string_view content, bool is_text) {
    if (!is_text) return std::string(content);
    std::string out;
    out.reserve(content.size() + content.size() / 16);
    for (std::size_t i = 0; i < content.size(); ++i) {
        char c = content[i];
        if (c == ' ' || c == '\t') continue;
        if (c == '\r') {
            if (i + 1 < content.size() && content[i + 1] == '\n') ++i;
            out += "\r\n";
        } else if (c == '\n') {
            out += "\r\n";
        } else {
            out.push_back(c);
        }
    }
    return out;
}

// Text by extension; .stl only when it is ASCII STL ("solid" prefix, no
// NUL in the first 1024 bytes).
inline bool is_text_file(const fs::path& path, std::string_view head) {
    static const std::set<std::string, std::less<>> text_exts{"urdf", "xacro", "dae", "obj", "mtl",
                                                              "xml",  "json",  "txt", "md"};
    auto ext = detail::extension_of(path.string());
    if (text_exts.contains(ext)) return true;
    if (ext == "stl") {
        auto probe = head.substr(0, 1024);
        auto trimmed = detail::trim(probe);
        return trimmed.substr(0, 5) == "solid" && probe.find('\0') == std::string_view::npos;
    }
    return false;
}

inline std::string md5_hex(std::string_view data) {
    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(),
                                                                &EVP_MD_CTX_free);
    std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
    unsigned int len = 0;
    if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_md5(), nullptr) != 1 ||
        EVP_DigestUpdate(ctx.get(), data.data(), data.size()) != 1 ||
        EVP_DigestFinal_ex(ctx.get(), digest.data(), &len) != 1) {
        throw std::runtime_error("MD5 digest failed");
    }
    std::string hex;
    hex.reserve(2 * len);
    constexpr char digits[] = "0123456789abcdef";
    for (unsigned int i = 0; i < len; ++i) {
        hex.push_back(digits[digest[i] >> 4]);
        hex.push_back(digits[digest[i] & 0x0f]);
    }
    return hex;
}

// Reads and normalizes one file for comparison.
inline std::string normalized_content(const fs::path& path) {
    std::string raw = read_file(path);
    bool text = is_text_file(path, raw);
    return normalize(raw, text);
}

struct DuplicateGroup {
    std::vector<fs::path> members;  // sorted, >= 2
    std::size_t size = 0;           // bytes after normalization
    std::string digest;             // MD5 hex of the normalized content
};

struct FileError {
    fs::path path;
    std::string message;
};

struct DedupResult {
    std::vector<DuplicateGroup> groups;
    std::vector<FileError> errors;
};

// Groups files whose normalized content is byte-identical. Output is
// independent of input order: groups sorted by (size desc, first path).
inline DedupResult find_duplicates(std::vector<fs::path> paths,
                                   std::size_t jobs = detail::default_jobs()) {
    std::sort(paths.begin(), paths.end());
    paths.erase(std::unique(paths.begin(), paths.end()), paths.end());

    struct Fingerprint {
        std::size_t size = 0;
        std::string digest;
        std::optional<std::string> error;
    };
    std::vector<Fingerprint> prints(paths.size());
    detail::parallel_for(paths.size(), jobs, [&](std::size_t i) {
        try {
            std::string content = normalized_content(paths[i]);
            prints[i].size = content.size();
            prints[i].digest = md5_hex(content);
        } catch (const std::exception& e) {
            prints[i].error = e.what();
        }
    });

    DedupResult result;
    std::map<std::size_t, std::vector<std::size_t>> by_size;
    for (std::size_t i = 0; i < paths.size(); ++i) {
        if (prints[i].error) {
            result.errors.push_back({paths[i], *prints[i].error});
        } else {
            by_size[prints[i].size].push_back(i);
        }
    }

    for (const auto& [size, same_size] : by_size) {
        if (same_size.size() < 2) continue;
        std::map<std::string, std::vector<std::size_t>> by_digest;
        for (auto i : same_size) by_digest[prints[i].digest].push_back(i);
        for (const auto& [digest, candidates] : by_digest) {
            if (candidates.size() < 2) continue;
            // Byte-by-byte confirmation: split candidates into classes of
            // truly identical content.
            std::vector<std::pair<std::string, std::vector<std::size_t>>> classes;
            for (auto i : candidates) {
                std::string content;
                try {
                    content = normalized_content(paths[i]);
                } catch (const std::exception& e) {
                    result.errors.push_back({paths[i], e.what()});
                    continue;
                }
                auto it = std::find_if(classes.begin(), classes.end(),
                                       [&](const auto& c) { return c.first == content; });
                if (it == classes.end()) {
                    classes.emplace_back(std::move(content), std::vector<std::size_t>{i});
                } else {
                    it->second.push_back(i);
                }
            }
            for (const auto& [content, members] : classes) {
                if (members.size() < 2) continue;
                DuplicateGroup g;
                g.size = size;
                g.digest = digest;
                for (auto i : members) g.members.push_back(paths[i]);
                result.groups.push_back(std::move(g));
            }
        }
    }

    std::sort(result.groups.begin(), result.groups.end(),
              [](const DuplicateGroup& a, const DuplicateGroup& b) {
                  if (a.size != b.size) return a.size > b.size;
                  return a.members.front() < b.members.front();
              });
    std::sort(result.errors.begin(), result.errors.end(),
              [](const FileError& a, const FileError& b) { return a.path < b.path; });
    return result;
}

}  // namespace urdf_inspect
