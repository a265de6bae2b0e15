#pragma once

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "subdiff/common.hpp"

// Flat [section] key = value configuration files.  '#' and ';' start
// comments, lists are comma separated, preset values use name:arg,arg.
// Every diagnostic carries the file, line, section, and key so a bad config
// can be fixed without guessing.

namespace subdiff {

class Config {
  public:
    struct Entry {
        std::string value;
        int line = 0;
        mutable bool used = false;
    };

    static Config parse_string(const std::string& text,
                               const std::string& origin = "<config>") {
        Config cfg;
        cfg.origin_ = origin;
        std::istringstream in(text);
        std::string line, section;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            const auto cut = line.find_first_of("#;");
            if (cut != std::string::npos) line.erase(cut);
            const std::string s = trim(line);
            if (s.empty()) continue;
            if (s.front() == '[') {
                if (s.back() != ']' || s.size() < 3)
                    throw config_error(cfg.where(lineno) +
                                       ": malformed section header '" + s + "'");
                section = trim(s.substr(1, s.size() - 2));
                continue;
            }
            const auto eq = s.find('=');
            if (eq == std::string::npos)
                throw config_error(cfg.where(lineno) +
                                   ": expected 'key = value', got '" + s + "'");
            const std::string key = trim(s.substr(0, eq));
            const std::string value = trim(s.substr(eq + 1));
            if (key.empty())
                throw config_error(cfg.where(lineno) + ": empty key");
            auto& sec = cfg.data_[section];
            if (auto it = sec.find(key); it != sec.end())
                throw config_error(cfg.where(lineno) + ": key '" + key +
                                   "' in [" + section + "] repeats line " +
                                   std::to_string(it->second.line));
            sec[key] = Entry{value, lineno, false};
        }
        return cfg;
    }

    static Config parse_file(const std::string& path) {
        std::ifstream in(path);
        if (!in)
            throw config_error("cannot open config file '" + path + "'");
        std::ostringstream buf;
        buf << in.rdbuf();
        return parse_string(buf.str(), path);
    }

    bool has(const std::string& section, const std::string& key) const {
        const auto* e = find(section, key);
        return e != nullptr;
    }

    std::string get_string(const std::string& section, const std::string& key,
                           const std::string& fallback) const {
        const auto* e = find(section, key);
        return e ? e->value : fallback;
    }

    std::string require_string(const std::string& section,
                               const std::string& key) const {
        const auto* e = find(section, key);
        if (!e)
            throw config_error(origin_ + ": missing required key '" + key +
                               "' in [" + section + "]");
        return e->value;
    }

    double get_double(const std::string& section, const std::string& key,
                      double fallback) const {
        const auto* e = find(section, key);
        return e ? to_double(section, key, *e) : fallback;
    }

    double require_double(const std::string& section,
                          const std::string& key) const {
        const auto* e = find(section, key);
        if (!e)
            throw config_error(origin_ + ": missing required key '" + key +
                               "' in [" + section + "]");
        return to_double(section, key, *e);
    }

    int get_int(const std::string& section, const std::string& key,
                int fallback) const {
        const auto* e = find(section, key);
        if (!e) return fallback;
        const double v = to_double(section, key, *e);
        const int i = (int)v;
        if (double(i) != v)
            throw config_error(where(e->line) + ": [" + section + "] " + key +
                               ": expected an integer, got '" + e->value + "'");
        return i;
    }

    std::vector<double> get_double_list(const std::string& section,
                                        const std::string& key,
                                        std::vector<double> fallback) const {
        const auto* e = find(section, key);
        if (!e) return fallback;
        std::vector<double> out;
        for (const auto& piece : split(e->value, ','))
            out.push_back(parse_double_or_throw(section, key, e->line, piece));
        return out;
    }

    std::vector<std::string> get_string_list(const std::string& section,
                                             const std::string& key,
                                             std::vector<std::string> fallback) const {
        const auto* e = find(section, key);
        if (!e) return fallback;
        std::vector<std::string> out;
        for (const auto& piece : split(e->value, ',')) out.push_back(piece);
        return out;
    }

    // Reject keys that no reader consumed: catches typos like 'aplha'.
    void require_all_consumed() const {
        for (const auto& [section, entries] : data_)
            for (const auto& [key, e] : entries)
                if (!e.used)
                    throw config_error(where(e.line) + ": key '" + key +
                                       "' in [" + section +
                                       "] is not recognized here");
    }

    const std::string& origin() const { return origin_; }

    static std::string trim(const std::string& s) {
        std::size_t a = 0, b = s.size();
        while (a < b && std::isspace((unsigned char)s[a])) ++a;
        while (b > a && std::isspace((unsigned char)s[b - 1])) --b;
        return s.substr(a, b - a);
    }

    static std::vector<std::string> split(const std::string& s, char sep) {
        std::vector<std::string> out;
        std::string cur;
        std::istringstream in(s);
        while (std::getline(in, cur, sep)) out.push_back(trim(cur));
        if (!s.empty() && s.back() == sep) out.push_back("");
        return out;
    }

  private:
    const Entry* find(const std::string& section, const std::string& key) const {
        const auto sec = data_.find(section);
        if (sec == data_.end()) return nullptr;
        const auto it = sec->second.find(key);
        if (it == sec->second.end()) return nullptr;
        it->second.used = true;
        return &it->second;
    }

    std::string where(int line) const {
        return origin_ + " line " + std::to_string(line);
    }

    double to_double(const std::string& section, const std::string& key,
                     const Entry& e) const {
        return parse_double_or_throw(section, key, e.line, e.value);
    }

    double parse_double_or_throw(const std::string& section,
                                 const std::string& key, int line,
                                 const std::string& text) const {
        if (text == "inf") return inf;
        const char* begin = text.c_str();
        char* end = nullptr;
        const double v = std::strtod(begin, &end);
        if (end == begin || *end != '\0')
            throw config_error(where(line) + ": [" + section + "] " + key +
                               ": cannot parse '" + text + "' as a number");
        return v;
    }

    std::map<std::string, std::map<std::string, Entry>> data_;
    std::string origin_;
};

} // namespace subdiff
