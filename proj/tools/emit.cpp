#include "emit.hpp"

#include <cstdio>
#include <fstream>

#include "qmarket/errors.hpp"

namespace qmarket::cli {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string to_csv(const Table& table) {
    std::string out;
    for (size_t i = 0; i < table.header.size(); ++i) {
        if (i) out += ',';
        out += table.header[i];
    }
    out += '\n';
    for (const auto& row : table.rows) {
        for (size_t i = 0; i < row.size(); ++i) {
            if (i) out += ',';
            out += row[i];
        }
        out += '\n';
    }
    return out;
}

std::string json_string(const std::string& s) {
    std::string out = "\"";
    for (const char c : s) {
        switch (c) {
        case '"': out += "\\\""; break;
        case '\\': out += "\\\\"; break;
        case '\n': out += "\\n"; break;
        case '\t': out += "\\t"; break;
        case '\r': out += "\\r"; break;
        default: out += c;
        }
    }
    out += '"';
    return out;
}

JsonObject& JsonObject::add_raw(const std::string& key, const std::string& fragment) {
    entries_.emplace_back(key, fragment);
    return *this;
}

JsonObject& JsonObject::add_number(const std::string& key, double v) {
    return add_raw(key, format_double(v));
}

JsonObject& JsonObject::add_int(const std::string& key, long long v) {
    return add_raw(key, std::to_string(v));
}

JsonObject& JsonObject::add_bool(const std::string& key, bool v) {
    return add_raw(key, v ? "true" : "false");
}

JsonObject& JsonObject::add_string(const std::string& key, const std::string& v) {
    return add_raw(key, json_string(v));
}

std::string JsonObject::str() const {
    std::string out = "{";
    for (size_t i = 0; i < entries_.size(); ++i) {
        if (i) out += ',';
        out += json_string(entries_[i].first);
        out += ':';
        out += entries_[i].second;
    }
    out += '}';
    return out;
}

JsonArray& JsonArray::push_raw(const std::string& fragment) {
    entries_.push_back(fragment);
    return *this;
}

JsonArray& JsonArray::push_number(double v) { return push_raw(format_double(v)); }

std::string JsonArray::str() const {
    std::string out = "[";
    for (size_t i = 0; i < entries_.size(); ++i) {
        if (i) out += ',';
        out += entries_[i];
    }
    out += ']';
    return out;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw IoError("cannot open for writing: " + path);
    os.write(content.data(), static_cast<std::streamsize>(content.size()));
    os.flush();
    if (!os.good()) throw IoError("write failed: " + path);
}

} // namespace qmarket::cli
