// SPDX-License-Identifier: Apache-2.0
#include "airgnn/harness/csv.hpp"

#include <sstream>
#include <stdexcept>

#include "airgnn/format.hpp"

namespace airgnn::harness {

CsvWriter::CsvWriter(const std::filesystem::path &path, const std::vector<std::string> &header)
    : os_(path), path_(path), columns_(header.size())
{
    if (!os_)
        throw std::runtime_error("cannot open " + path.string() + " for writing");
    for (const auto &h : header)
        cell(h);
    end_row();
}

CsvWriter &CsvWriter::cell(const std::string &v)
{
    if (in_row_ == columns_)
        throw std::logic_error("csv " + path_.string() + ": too many cells in row");
    if (in_row_++)
        os_ << ',';
    if (v.find_first_of(",\"\n") != std::string::npos) {
        os_ << '"';
        for (char c : v)
            os_ << (c == '"' ? "\"\"" : std::string(1, c));
        os_ << '"';
    } else {
        os_ << v;
    }
    return *this;
}

CsvWriter &CsvWriter::cell(double v) { return cell(format_double(v)); }
CsvWriter &CsvWriter::cell(long long v) { return cell(std::to_string(v)); }
CsvWriter &CsvWriter::cell(std::uint64_t v) { return cell(std::to_string(v)); }

void CsvWriter::end_row()
{
    if (in_row_ != columns_)
        throw std::logic_error("csv " + path_.string() + ": row has " + std::to_string(in_row_) + " cells, expected " +
                               std::to_string(columns_));
    os_ << '\n';
    in_row_ = 0;
}

void CsvWriter::close()
{
    os_.close();
    if (!os_)
        throw std::runtime_error("write failed for " + path_.string());
}

std::size_t CsvTable::column(const std::string &name) const
{
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == name)
            return i;
    throw std::out_of_range("csv has no column \"" + name + "\"");
}

double CsvTable::number(std::size_t row, const std::string &name) const
{
    return std::stod(rows.at(row).at(column(name)));
}

CsvTable read_csv(const std::filesystem::path &path)
{
    std::ifstream is(path);
    if (!is)
        throw std::runtime_error("cannot open " + path.string());
    CsvTable t;
    std::string line;
    bool first = true;
    while (std::getline(is, line)) {
        std::vector<std::string> cells;
        std::string cur;
        bool quoted = false;
        for (std::size_t i = 0; i < line.size(); ++i) {
            const char c = line[i];
            if (quoted) {
                if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                    cur += '"';
                    ++i;
                } else if (c == '"') {
                    quoted = false;
                } else {
                    cur += c;
                }
            } else if (c == '"') {
                quoted = true;
            } else if (c == ',') {
                cells.push_back(std::move(cur));
                cur.clear();
            } else {
                cur += c;
            }
        }
        cells.push_back(std::move(cur));
        if (first) {
            t.header = std::move(cells);
            first = false;
        } else {
            t.rows.push_back(std::move(cells));
        }
    }
    return t;
}

} // namespace airgnn::harness
