#pragma once

#include <string>
#include <utility>
#include <vector>

// Output artifact writers. CSV carries a mandatory header line; JSON keeps
// insertion key order. Floating-point values are serialized with 17
// significant digits so a re-parse reproduces the exact double.

namespace qmarket::cli {

std::string format_double(double v);

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    void add_row(std::vector<std::string> row) { rows.push_back(std::move(row)); }
};

std::string to_csv(const Table& table);

std::string json_string(const std::string& s);

class JsonObject {
public:
    JsonObject& add_raw(const std::string& key, const std::string& fragment);
    JsonObject& add_number(const std::string& key, double v);
    JsonObject& add_int(const std::string& key, long long v);
    JsonObject& add_bool(const std::string& key, bool v);
    JsonObject& add_string(const std::string& key, const std::string& v);
    std::string str() const;

private:
    std::vector<std::pair<std::string, std::string>> entries_;
};

class JsonArray {
public:
    JsonArray& push_raw(const std::string& fragment);
    JsonArray& push_number(double v);
    std::string str() const;

private:
    std::vector<std::string> entries_;
};

// Writes content byte-for-byte; throws IoError with the path on failure.
void write_file(const std::string& path, const std::string& content);

} // namespace qmarket::cli
