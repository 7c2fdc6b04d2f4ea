#include "distdicho/dataset.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <stdexcept>

namespace distdicho::cli {

namespace {

// One CSV record; handles quoted fields with embedded commas/quotes.
std::vector<std::string> split_record(const std::string& line)
{
    std::vector<std::string> out;
    std::string field;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                field += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            out.push_back(field);
            field.clear();
        } else if (c != '\r') {
            field += c;
        }
    }
    out.push_back(field);
    return out;
}

bool parse_number(const std::string& text, double& out)
{
    const char* begin = text.c_str();
    char* end = nullptr;
    out = std::strtod(begin, &end);
    if (end == begin)
        return false;
    while (*end == ' ' || *end == '\t')
        ++end;
    return *end == '\0';
}

std::string trimmed(const std::string& s)
{
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && (s[b] == ' ' || s[b] == '\t'))
        ++b;
    while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t'))
        --e;
    return s.substr(b, e - b);
}

} // namespace

Dataset Dataset::from_csv(std::istream& in)
{
    std::string line;
    if (!std::getline(in, line))
        throw std::runtime_error("csv: empty input");

    // Strip a UTF-8 BOM if present.
    if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0)
        line.erase(0, 3);

    Dataset ds;
    for (const std::string& name : split_record(line)) {
        Column col;
        col.name = trimmed(name);
        ds.columns_.push_back(std::move(col));
    }

    std::size_t row = 0;
    while (std::getline(in, line)) {
        if (line.empty() && in.eof())
            break;
        ++row;
        const std::vector<std::string> fields = split_record(line);
        if (fields.size() != ds.columns_.size())
            throw std::runtime_error("csv: row " + std::to_string(row + 1) + " has "
                                     + std::to_string(fields.size()) + " fields, expected "
                                     + std::to_string(ds.columns_.size()));
        for (std::size_t j = 0; j < fields.size(); ++j) {
            const std::string cell = trimmed(fields[j]);
            const bool is_missing = cell.empty() || cell == "NA";
            ds.columns_[j].raw.push_back(is_missing ? "" : cell);
            ds.columns_[j].missing.push_back(is_missing);
        }
    }
    ds.rows_ = row;

    for (Column& col : ds.columns_) {
        col.numeric = true;
        col.values.assign(ds.rows_, std::numeric_limits<double>::quiet_NaN());
        for (std::size_t i = 0; i < ds.rows_; ++i) {
            if (col.missing[i])
                continue;
            double v;
            if (parse_number(col.raw[i], v))
                col.values[i] = v;
            else
                col.numeric = false;
        }
        if (!col.numeric)
            col.values.assign(ds.rows_, std::numeric_limits<double>::quiet_NaN());
    }
    return ds;
}

Dataset Dataset::from_csv_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open '" + path + "'");
    return from_csv(in);
}

bool Dataset::has_column(const std::string& name) const
{
    for (const Column& col : columns_)
        if (col.name == name)
            return true;
    return false;
}

const Column& Dataset::column(const std::string& name) const
{
    for (const Column& col : columns_)
        if (col.name == name)
            return col;
    throw std::runtime_error("unknown column '" + name + "'");
}

} // namespace distdicho::cli
