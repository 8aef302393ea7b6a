// core/include/lpopt/kvfile.hpp
//
// Minimal reader/writer for the structured text files used by instances and
// experiment configs: "[section]" headers followed by "key = value" lines.
// Keys may repeat within a section (used for grid rows, catalog types and
// inventory entries); order is preserved. '#' starts a comment.

#pragma once

#include <optional>
#include <string>
#include <vector>

namespace lpopt {

struct KvEntry {
    std::string key;
    std::string value;
};

struct KvSection {
    std::string name;
    std::vector<KvEntry> entries;

    std::optional<std::string> get(const std::string& key) const;
    std::string get_or(const std::string& key, const std::string& fallback) const;
    std::vector<std::string> get_all(const std::string& key) const;
    bool has(const std::string& key) const;

    double get_double(const std::string& key) const;
    double get_double_or(const std::string& key, double fallback) const;
    long get_int(const std::string& key) const;
    long get_int_or(const std::string& key, long fallback) const;
    bool get_bool_or(const std::string& key, bool fallback) const;
};

class KvFile {
public:
    KvFile() = default;

    static KvFile parse(const std::string& text);
    static KvFile load(const std::string& path);

    const KvSection* find(const std::string& name) const;
    const KvSection& require(const std::string& name) const;
    bool has(const std::string& name) const;

    KvSection& add_section(const std::string& name);
    std::string to_text() const;
    void save(const std::string& path) const;

    const std::vector<KvSection>& sections() const { return sections_; }

private:
    std::vector<KvSection> sections_;
};

// Whitespace-token split helper shared by parsers of multi-field values.
std::vector<std::string> split_tokens(const std::string& text);
// Comma- or whitespace-separated list (used for seed lists and similar).
std::vector<std::string> split_list(const std::string& text);

}  // namespace lpopt
