//---------------------------------------------------------------------------//
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file experiments/table.cpp
//---------------------------------------------------------------------------//
#include <charconv>
#include <cmath>
#include <cstdio>

#include "blmix/experiments.hpp"

namespace blmix
{
namespace
{
std::string format_int(std::int64_t v)
{
    char buf[24];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::string format_double(double v)
{
    if (std::isnan(v))
    {
        return "nan";
    }
    if (std::isinf(v))
    {
        return v > 0 ? "inf" : "-inf";
    }
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    std::string out(buf);
    if (out.find_first_of(".e") == std::string::npos)
    {
        out += ".0";
    }
    return out;
}

bool needs_quotes(std::string_view s)
{
    return s.find_first_of(",\"\r\n") != std::string_view::npos;
}

void append_field(std::string& out, std::string const& field, bool is_string)
{
    // Strings that would read back as numbers are quoted too
    if (is_string
        && (needs_quotes(field) || !std::holds_alternative<std::string>(infer_cell(field))))
    {
        out += '"';
        for (char c : field)
        {
            if (c == '"')
            {
                out += '"';
            }
            out += c;
        }
        out += '"';
    }
    else
    {
        out += field;
    }
}

struct CsvField
{
    std::string text;
    bool quoted{false};
};

// RFC 4180 records; accepts LF or CRLF line endings
std::vector<std::vector<CsvField>> parse_csv(std::string_view text)
{
    std::vector<std::vector<CsvField>> records;
    std::vector<CsvField> record;
    CsvField field;
    std::size_t i = 0;
    bool at_field_start = true;
    auto end_field = [&] {
        record.push_back(std::move(field));
        field = {};
        at_field_start = true;
    };
    auto end_record = [&] {
        end_field();
        records.push_back(std::move(record));
        record.clear();
    };
    while (i < text.size())
    {
        char const c = text[i];
        if (at_field_start && c == '"')
        {
            field.quoted = true;
            at_field_start = false;
            ++i;
            while (true)
            {
                if (i >= text.size())
                {
                    throw ConfigError("unterminated quoted CSV field");
                }
                if (text[i] == '"')
                {
                    if (i + 1 < text.size() && text[i + 1] == '"')
                    {
                        field.text += '"';
                        i += 2;
                        continue;
                    }
                    ++i;
                    break;
                }
                field.text += text[i++];
            }
            continue;
        }
        at_field_start = false;
        if (c == ',')
        {
            end_field();
            ++i;
        }
        else if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n')
        {
            end_record();
            i += 2;
        }
        else if (c == '\n')
        {
            end_record();
            ++i;
        }
        else
        {
            field.text += c;
            ++i;
        }
    }
    if (!at_field_start || !record.empty())
    {
        end_record();
    }
    return records;
}

}  // namespace

//---------------------------------------------------------------------------//
std::string format_cell(Cell const& cell)
{
    if (auto const* i = std::get_if<std::int64_t>(&cell))
    {
        return format_int(*i);
    }
    if (auto const* d = std::get_if<double>(&cell))
    {
        return format_double(*d);
    }
    return std::get<std::string>(cell);
}

Cell infer_cell(std::string_view text)
{
    std::int64_t i = 0;
    auto ri = std::from_chars(text.data(), text.data() + text.size(), i);
    if (ri.ec == std::errc{} && ri.ptr == text.data() + text.size() && format_int(i) == text)
    {
        return i;
    }
    double d = 0;
    auto rd = std::from_chars(text.data(), text.data() + text.size(), d);
    if (rd.ec == std::errc{} && rd.ptr == text.data() + text.size() && std::isfinite(d)
        && format_double(d) == text)
    {
        return d;
    }
    return std::string(text);
}

//---------------------------------------------------------------------------//
Table::Table(std::vector<std::string> columns) : columns_(std::move(columns)) {}

void Table::add_row(std::vector<Cell> row)
{
    if (row.size() != columns_.size())
    {
        throw std::logic_error("row width " + std::to_string(row.size())
                               + " does not match " + std::to_string(columns_.size())
                               + " columns");
    }
    for (auto& cell : row)
    {
        // Non-finite values have no JSON number form
        if (auto const* d = std::get_if<double>(&cell); d && !std::isfinite(*d))
        {
            cell = format_double(*d);
        }
    }
    rows_.push_back(std::move(row));
}

void Table::append_column(std::string name, Cell const& value)
{
    columns_.push_back(std::move(name));
    for (auto& row : rows_)
    {
        row.push_back(value);
    }
}

std::string Table::to_csv() const
{
    std::string out;
    for (std::size_t c = 0; c < columns_.size(); ++c)
    {
        if (c > 0)
        {
            out += ',';
        }
        append_field(out, columns_[c], true);
    }
    out += '\n';
    for (auto const& row : rows_)
    {
        for (std::size_t c = 0; c < row.size(); ++c)
        {
            if (c > 0)
            {
                out += ',';
            }
            append_field(out, format_cell(row[c]),
                         std::holds_alternative<std::string>(row[c]));
        }
        out += '\n';
    }
    return out;
}

nlohmann::ordered_json Table::to_json() const
{
    auto doc = nlohmann::ordered_json::array();
    for (auto const& row : rows_)
    {
        nlohmann::ordered_json obj = nlohmann::ordered_json::object();
        for (std::size_t c = 0; c < row.size(); ++c)
        {
            std::visit([&](auto const& v) { obj[columns_[c]] = v; }, row[c]);
        }
        doc.push_back(std::move(obj));
    }
    return doc;
}

std::string Table::to_json_text() const
{
    return this->to_json().dump(2) + "\n";
}

Table Table::from_csv(std::string_view text)
{
    auto records = parse_csv(text);
    if (records.empty())
    {
        throw ConfigError("CSV has no header row");
    }
    std::vector<std::string> header;
    for (auto& f : records.front())
    {
        header.push_back(std::move(f.text));
    }
    Table table(std::move(header));
    for (std::size_t r = 1; r < records.size(); ++r)
    {
        if (records[r].size() != table.columns_.size())
        {
            throw ConfigError("CSV row " + std::to_string(r) + " has "
                              + std::to_string(records[r].size()) + " fields, expected "
                              + std::to_string(table.columns_.size()));
        }
        std::vector<Cell> row;
        for (auto& f : records[r])
        {
            row.push_back(f.quoted ? Cell{std::move(f.text)} : infer_cell(f.text));
        }
        table.rows_.push_back(std::move(row));
    }
    return table;
}

Table Table::from_json(nlohmann::ordered_json const& doc)
{
    if (!doc.is_array())
    {
        throw ConfigError("result JSON must be an array of objects");
    }
    Table table;
    for (std::size_t r = 0; r < doc.size(); ++r)
    {
        auto const& obj = doc[r];
        if (!obj.is_object())
        {
            throw ConfigError("result JSON entries must be objects");
        }
        if (r == 0)
        {
            for (auto const& item : obj.items())
            {
                table.columns_.push_back(item.key());
            }
        }
        if (obj.size() != table.columns_.size())
        {
            throw ConfigError("result JSON row " + std::to_string(r)
                              + " has a different set of fields");
        }
        std::vector<Cell> row;
        for (auto const& name : table.columns_)
        {
            if (!obj.contains(name))
            {
                throw ConfigError("result JSON row " + std::to_string(r) + " lacks '"
                                  + name + "'");
            }
            auto const& v = obj.at(name);
            if (v.is_number_integer())
            {
                row.emplace_back(v.get<std::int64_t>());
            }
            else if (v.is_number_float())
            {
                row.emplace_back(v.get<double>());
            }
            else if (v.is_string())
            {
                row.emplace_back(v.get<std::string>());
            }
            else
            {
                throw ConfigError("result JSON field '" + name + "' is not a scalar");
            }
        }
        table.rows_.push_back(std::move(row));
    }
    return table;
}

}  // namespace blmix
