#include "distdicho/formula.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace distdicho::cli {

namespace {

[[noreturn]] void syntax_error(std::size_t offset, const std::string& what)
{
    throw std::invalid_argument("formula syntax error at byte " + std::to_string(offset) + ": "
                                + what);
}

bool ident_start(char c)
{
    return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || c == '_';
}

bool ident_char(char c)
{
    return ident_start(c) || (c >= '0' && c <= '9') || c == '.';
}

struct Scanner {
    std::string_view text;
    std::size_t pos = 0;

    void skip_ws()
    {
        while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t'))
            ++pos;
    }

    std::string identifier()
    {
        skip_ws();
        if (pos >= text.size() || !ident_start(text[pos]))
            syntax_error(pos, "expected identifier");
        const std::size_t begin = pos;
        while (pos < text.size() && ident_char(text[pos]))
            ++pos;
        return std::string(text.substr(begin, pos - begin));
    }

    bool accept(char c)
    {
        skip_ws();
        if (pos < text.size() && text[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }
};

} // namespace

Formula parse_formula(std::string_view text)
{
    if (text.empty())
        syntax_error(0, "empty formula");

    Scanner sc{text};
    Formula f;
    f.response = sc.identifier();
    if (!sc.accept('~'))
        syntax_error(sc.pos, "expected '~'");
    f.terms.push_back(sc.identifier());
    while (sc.accept('+'))
        f.terms.push_back(sc.identifier());
    sc.skip_ws();
    if (sc.pos != text.size())
        syntax_error(sc.pos, "unexpected character '" + std::string(1, text[sc.pos]) + "'");

    std::set<std::string> seen;
    for (const std::string& term : f.terms) {
        if (term == f.response)
            throw std::invalid_argument("formula: response '" + f.response
                                        + "' reused as a term");
        if (!seen.insert(term).second)
            throw std::invalid_argument("formula: duplicate term '" + term + "'");
    }
    return f;
}

DesignMatrix build_design(const Dataset& data, const Formula& formula,
                          const std::string& group_var, const std::string& reference)
{
    if (!data.has_column(formula.response))
        throw std::runtime_error("unknown column '" + formula.response + "'");
    for (const std::string& term : formula.terms)
        if (!data.has_column(term))
            throw std::runtime_error("unknown column '" + term + "'");
    if (!group_var.empty()
        && std::find(formula.terms.begin(), formula.terms.end(), group_var)
            == formula.terms.end())
        throw std::runtime_error("group variable '" + group_var
                                 + "' does not appear in the formula");

    const Column& response_col = data.column(formula.response);
    if (!response_col.numeric)
        throw std::runtime_error("response '" + formula.response + "' is not numeric");

    // Listwise deletion over response + all terms.
    std::vector<std::size_t> rows;
    for (std::size_t i = 0; i < data.row_count(); ++i) {
        bool keep = !response_col.missing[i];
        for (const std::string& term : formula.terms)
            keep = keep && !data.column(term).missing[i];
        if (keep)
            rows.push_back(i);
    }

    DesignMatrix out;
    out.n_dropped = static_cast<long>(data.row_count() - rows.size());
    out.response.reserve(rows.size());
    for (std::size_t r : rows)
        out.response.push_back(response_col.values[r]);

    out.columns.emplace_back(rows.size(), 1.0);
    out.labels.emplace_back("(Intercept)");

    for (const std::string& term : formula.terms) {
        const Column& col = data.column(term);
        const bool categorical = term == group_var || !col.numeric;
        if (!categorical) {
            std::vector<double> values;
            values.reserve(rows.size());
            for (std::size_t r : rows)
                values.push_back(col.values[r]);
            out.columns.push_back(std::move(values));
            out.labels.push_back(term);
            continue;
        }

        std::set<std::string> levels;
        for (std::size_t r : rows)
            levels.insert(col.raw[r]);
        if (levels.size() < 2)
            throw std::runtime_error("categorical term '" + term
                                     + "' has fewer than 2 levels");

        std::string ref = *levels.begin();
        if (term == group_var && !reference.empty()) {
            if (levels.count(reference) == 0)
                throw std::runtime_error("reference level '" + reference
                                         + "' not found in '" + term + "'");
            ref = reference;
        }

        for (const std::string& level : levels) {
            if (level == ref)
                continue;
            std::vector<double> dummy;
            dummy.reserve(rows.size());
            for (std::size_t r : rows)
                dummy.push_back(col.raw[r] == level ? 1.0 : 0.0);
            out.columns.push_back(std::move(dummy));
            out.labels.push_back(term + "=" + level);
        }

        if (term == group_var) {
            out.reference_level = ref;
            for (std::size_t r : rows)
                ++out.group_level_counts[col.raw[r]];
        }
    }
    return out;
}

} // namespace distdicho::cli
