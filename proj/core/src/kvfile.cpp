#include "lpopt/kvfile.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace lpopt {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return {};
    const auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

}  // namespace

std::optional<std::string> KvSection::get(const std::string& key) const {
    for (const auto& e : entries)
        if (e.key == key) return e.value;
    return std::nullopt;
}

std::string KvSection::get_or(const std::string& key, const std::string& fallback) const {
    auto v = get(key);
    return v ? *v : fallback;
}

std::vector<std::string> KvSection::get_all(const std::string& key) const {
    std::vector<std::string> out;
    for (const auto& e : entries)
        if (e.key == key) out.push_back(e.value);
    return out;
}

bool KvSection::has(const std::string& key) const { return get(key).has_value(); }

double KvSection::get_double(const std::string& key) const {
    auto v = get(key);
    if (!v) throw std::runtime_error("[" + name + "] missing key '" + key + "'");
    return std::stod(*v);
}

double KvSection::get_double_or(const std::string& key, double fallback) const {
    auto v = get(key);
    return v ? std::stod(*v) : fallback;
}

long KvSection::get_int(const std::string& key) const {
    auto v = get(key);
    if (!v) throw std::runtime_error("[" + name + "] missing key '" + key + "'");
    return std::stol(*v);
}

long KvSection::get_int_or(const std::string& key, long fallback) const {
    auto v = get(key);
    return v ? std::stol(*v) : fallback;
}

bool KvSection::get_bool_or(const std::string& key, bool fallback) const {
    auto v = get(key);
    if (!v) return fallback;
    if (*v == "true" || *v == "1" || *v == "yes" || *v == "on") return true;
    if (*v == "false" || *v == "0" || *v == "no" || *v == "off") return false;
    throw std::runtime_error("[" + name + "] key '" + key + "': not a boolean: " + *v);
}

KvFile KvFile::parse(const std::string& text) {
    KvFile file;
    KvSection* current = nullptr;
    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const auto hash = raw.find('#');
        if (hash != std::string::npos) raw.erase(hash);
        const std::string line = trim(raw);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw std::runtime_error("line " + std::to_string(line_no) + ": unterminated section header");
            current = &file.add_section(trim(line.substr(1, line.size() - 2)));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("line " + std::to_string(line_no) + ": expected 'key = value'");
        if (!current)
            throw std::runtime_error("line " + std::to_string(line_no) + ": entry outside any [section]");
        current->entries.push_back({trim(line.substr(0, eq)), trim(line.substr(eq + 1))});
    }
    return file;
}

KvFile KvFile::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse(buf.str());
}

const KvSection* KvFile::find(const std::string& name) const {
    for (const auto& s : sections_)
        if (s.name == name) return &s;
    return nullptr;
}

const KvSection& KvFile::require(const std::string& name) const {
    const KvSection* s = find(name);
    if (!s) throw std::runtime_error("missing required section [" + name + "]");
    return *s;
}

bool KvFile::has(const std::string& name) const { return find(name) != nullptr; }

KvSection& KvFile::add_section(const std::string& name) {
    sections_.push_back(KvSection{name, {}});
    return sections_.back();
}

std::string KvFile::to_text() const {
    std::ostringstream out;
    for (const auto& s : sections_) {
        out << '[' << s.name << "]\n";
        for (const auto& e : s.entries) out << e.key << " = " << e.value << '\n';
        out << '\n';
    }
    return out.str();
}

void KvFile::save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    out << to_text();
}

std::vector<std::string> split_tokens(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    std::string tok;
    while (in >> tok) out.push_back(tok);
    return out;
}

std::vector<std::string> split_list(const std::string& text) {
    std::string normalized = text;
    for (auto& c : normalized)
        if (c == ',') c = ' ';
    return split_tokens(normalized);
}

}  // namespace lpopt
