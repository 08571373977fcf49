// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

namespace airgnn::harness {

/// CSV with a header row; numbers use 17 significant digits and '.' as separator.
class CsvWriter {
public:
    CsvWriter(const std::filesystem::path &path, const std::vector<std::string> &header);

    CsvWriter &cell(double v);
    CsvWriter &cell(long long v);
    CsvWriter &cell(int v) { return cell(static_cast<long long>(v)); }
    CsvWriter &cell(std::uint64_t v);
    CsvWriter &cell(const std::string &v);
    CsvWriter &cell(const char *v) { return cell(std::string(v)); }
    void end_row();

    void close();

private:
    std::ofstream os_;
    std::filesystem::path path_;
    std::size_t columns_;
    std::size_t in_row_ = 0;
};

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    /// Index of a header column; throws if absent.
    std::size_t column(const std::string &name) const;
    double number(std::size_t row, const std::string &name) const;
};

CsvTable read_csv(const std::filesystem::path &path);

} // namespace airgnn::harness
