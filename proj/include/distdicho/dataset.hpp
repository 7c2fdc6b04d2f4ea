#pragma once

#include <iosfwd>
#include <string>
#include <vector>

// Rectangular CSV dataset: first row headers, comma separated, '.' decimal
// separator, UTF-8. Empty cells and "NA" are recorded as missing, never
// imputed. A column is numeric when every non-missing cell parses as a
// number.

namespace distdicho::cli {

struct Column {
    std::string name;
    bool numeric = false;
    std::vector<std::string> raw;     // cell text, "" for missing
    std::vector<double> values;       // parsed, NaN when missing/non-numeric
    std::vector<bool> missing;
};

class Dataset {
public:
    static Dataset from_csv(std::istream& in);
    static Dataset from_csv_file(const std::string& path);

    std::size_t row_count() const { return rows_; }
    const std::vector<Column>& columns() const { return columns_; }
    bool has_column(const std::string& name) const;
    const Column& column(const std::string& name) const;

private:
    std::size_t rows_ = 0;
    std::vector<Column> columns_;
};

} // namespace distdicho::cli
