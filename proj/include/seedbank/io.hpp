#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

namespace seedbank {

// All numeric CSV output goes through this: 17 significant digits, enough to
// round-trip a double exactly.
std::string format_number(double x);
std::string format_number(std::uint64_t x);
std::string format_number(std::int64_t x);

// CSV file with '#'-prefixed header lines (resolved config echo + seed) before
// the column row.
class CsvWriter {
public:
    CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header_lines,
              const std::vector<std::string>& columns);
    void row(const std::vector<std::string>& cells);
    ~CsvWriter();

private:
    std::ofstream out_;
};

void write_json_file(const std::filesystem::path& path, const nlohmann::ordered_json& value);

} // namespace seedbank
