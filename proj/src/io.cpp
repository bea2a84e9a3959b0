#include "seedbank/io.hpp"

#include <cstdio>

#include "seedbank/errors.hpp"

namespace seedbank {

std::string format_number(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

std::string format_number(std::uint64_t x) { return std::to_string(x); }
std::string format_number(std::int64_t x) { return std::to_string(x); }

CsvWriter::CsvWriter(const std::filesystem::path& path,
                     const std::vector<std::string>& header_lines,
                     const std::vector<std::string>& columns) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    out_.open(path, std::ios::binary); // binary: byte-identical output everywhere
    if (!out_) throw resource_error("cannot open output file: " + path.string());
    for (const std::string& line : header_lines) out_ << "# " << line << "\n";
    for (std::size_t i = 0; i < columns.size(); ++i)
        out_ << columns[i] << (i + 1 < columns.size() ? "," : "");
    out_ << "\n";
}

void CsvWriter::row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i)
        out_ << cells[i] << (i + 1 < cells.size() ? "," : "");
    out_ << "\n";
}

CsvWriter::~CsvWriter() = default;

void write_json_file(const std::filesystem::path& path, const nlohmann::ordered_json& value) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw resource_error("cannot open output file: " + path.string());
    out << value.dump(2) << "\n";
}

} // namespace seedbank
