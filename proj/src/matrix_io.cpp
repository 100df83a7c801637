#include "micropat/matrix_io.hpp"

#include <fstream>
#include <sstream>

#include <fmt/format.h>

namespace micropat {

namespace {

const std::vector<std::string_view> kMetaColumns = {"name", "file_path", "compiler_version", "kind"};

std::string csv_field(const std::string& s)
{
    if (s.find_first_of(",\"\r\n") == std::string::npos)
        return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"')
            out += '"';
        out += c;
    }
    return out + "\"";
}

struct Record {
    std::vector<std::string> fields;
    std::size_t line = 0;
};

std::vector<Record> parse_csv(std::string_view text)
{
    std::vector<Record> records;
    std::size_t line = 1;
    std::size_t i = 0;
    while (i < text.size()) {
        Record rec;
        rec.line = line;
        std::string field;
        bool end_of_record = false;
        while (!end_of_record) {
            field.clear();
            if (i < text.size() && text[i] == '"') {
                ++i;
                while (true) {
                    if (i >= text.size())
                        throw MatrixFormatError("unterminated quoted field", rec.line);
                    char c = text[i++];
                    if (c == '"') {
                        if (i < text.size() && text[i] == '"') {
                            field += '"';
                            ++i;
                        } else {
                            break;
                        }
                    } else {
                        if (c == '\n')
                            ++line;
                        field += c;
                    }
                }
                if (i < text.size() && text[i] != ',' && text[i] != '\n' && text[i] != '\r')
                    throw MatrixFormatError("unexpected character after quoted field", line);
            } else {
                while (i < text.size() && text[i] != ',' && text[i] != '\n' && text[i] != '\r') {
                    if (text[i] == '"')
                        throw MatrixFormatError("stray quote in unquoted field", line);
                    field += text[i++];
                }
            }
            rec.fields.push_back(field);
            if (i >= text.size()) {
                end_of_record = true;
            } else if (text[i] == ',') {
                ++i;
            } else {
                if (text[i] == '\r')
                    ++i;
                if (i < text.size() && text[i] == '\n')
                    ++i;
                ++line;
                end_of_record = true;
            }
        }
        records.push_back(std::move(rec));
    }
    return records;
}

}  // namespace

std::string matrix_csv_header()
{
    std::string h;
    for (auto c : kMetaColumns) {
        if (!h.empty())
            h += ',';
        h += c;
    }
    for (PatternId id : all_patterns())
        h += fmt::format(",{}", pattern_name(id));
    return h;
}

std::string write_matrix_csv(const PatternMatrix& matrix)
{
    std::string out = matrix_csv_header() + "\n";
    for (const auto& row : matrix.rows) {
        out += csv_field(row.name) + "," + csv_field(row.file_path) + "," + csv_field(row.compiler_version) + ","
             + std::string(to_string(row.kind));
        for (std::size_t k = 0; k < kPatternCount; ++k)
            out += row.skipped ? ",-" : (row.patterns[k] ? ",1" : ",0");
        out += "\n";
    }
    return out;
}

PatternMatrix read_matrix_csv(std::string_view text)
{
    auto records = parse_csv(text);
    if (records.empty())
        throw MatrixFormatError("missing header", 1);
    const Record& header = records.front();
    std::size_t expected = kMetaColumns.size() + kPatternCount;
    for (std::size_t c = 0; c < header.fields.size(); ++c) {
        const std::string& name = header.fields[c];
        if (c < kMetaColumns.size()) {
            if (name != kMetaColumns[c])
                throw MatrixFormatError(fmt::format("expected column '{}', found '{}'", kMetaColumns[c], name), 1);
            continue;
        }
        auto id = pattern_from_name(name);
        if (!id || name != pattern_name(*id))
            throw MatrixFormatError(fmt::format("unknown pattern column '{}'", name), 1);
        if (c - kMetaColumns.size() >= kPatternCount || all_patterns()[c - kMetaColumns.size()] != *id)
            throw MatrixFormatError(fmt::format("pattern column '{}' out of catalog order", name), 1);
    }
    if (header.fields.size() != expected)
        throw MatrixFormatError(fmt::format("header has {} columns, expected {}", header.fields.size(), expected), 1);

    PatternMatrix m;
    for (std::size_t r = 1; r < records.size(); ++r) {
        const Record& rec = records[r];
        if (rec.fields.size() != expected)
            throw MatrixFormatError(
                fmt::format("line {}: {} fields, expected {}", rec.line, rec.fields.size(), expected), rec.line);
        MatrixRow row;
        row.name = rec.fields[0];
        row.file_path = rec.fields[1];
        row.compiler_version = rec.fields[2];
        auto kind = entity_kind_from_string(rec.fields[3]);
        if (!kind)
            throw MatrixFormatError(fmt::format("line {}: unknown kind '{}'", rec.line, rec.fields[3]), rec.line);
        row.kind = *kind;
        row.skipped = rec.fields[4] == "-";
        for (std::size_t k = 0; k < kPatternCount; ++k) {
            const std::string& cell = rec.fields[kMetaColumns.size() + k];
            if (row.skipped ? cell != "-" : (cell != "0" && cell != "1"))
                throw MatrixFormatError(fmt::format("line {}: bad cell '{}' in column {}", rec.line, cell,
                                                    pattern_name(all_patterns()[k])),
                                        rec.line);
            row.patterns[k] = cell == "1";
        }
        m.rows.push_back(std::move(row));
    }
    return m;
}

nlohmann::ordered_json matrix_to_json(const PatternMatrix& matrix)
{
    nlohmann::ordered_json j;
    j["columns"] = nlohmann::ordered_json::array();
    for (PatternId id : all_patterns())
        j["columns"].push_back(std::string(pattern_name(id)));
    j["rows"] = nlohmann::ordered_json::array();
    for (const auto& row : matrix.rows) {
        nlohmann::ordered_json r;
        r["name"] = row.name;
        r["file_path"] = row.file_path;
        r["compiler_version"] = row.compiler_version;
        r["kind"] = std::string(to_string(row.kind));
        r["skipped"] = row.skipped;
        if (row.skipped) {
            r["patterns"] = nullptr;
        } else {
            for (PatternId id : all_patterns())
                r["patterns"][std::string(pattern_name(id))] = row.patterns[index_of(id)];
        }
        j["rows"].push_back(std::move(r));
    }
    return j;
}

PatternMatrix matrix_from_json(const nlohmann::json& j)
{
    PatternMatrix m;
    if (!j.is_object() || !j.contains("rows") || !j["rows"].is_array())
        throw MatrixFormatError("expected an object with a 'rows' array", 1);
    std::size_t index = 0;
    for (const auto& r : j["rows"]) {
        ++index;
        try {
            MatrixRow row;
            row.name = r.at("name").get<std::string>();
            row.file_path = r.at("file_path").get<std::string>();
            row.compiler_version = r.at("compiler_version").get<std::string>();
            auto kind = entity_kind_from_string(r.at("kind").get<std::string>());
            if (!kind)
                throw MatrixFormatError(fmt::format("row {}: unknown kind", index), index);
            row.kind = *kind;
            row.skipped = r.value("skipped", false);
            if (!row.skipped) {
                const auto& p = r.at("patterns");
                for (auto it = p.begin(); it != p.end(); ++it)
                    if (!pattern_from_name(it.key()) || it.key() != pattern_name(*pattern_from_name(it.key())))
                        throw MatrixFormatError(fmt::format("row {}: unknown pattern '{}'", index, it.key()), index);
                for (PatternId id : all_patterns())
                    row.patterns[index_of(id)] = p.at(std::string(pattern_name(id))).get<bool>();
            }
            m.rows.push_back(std::move(row));
        } catch (const nlohmann::json::exception& e) {
            throw MatrixFormatError(fmt::format("row {}: {}", index, e.what()), index);
        }
    }
    return m;
}

std::string write_matrix_json(const PatternMatrix& matrix)
{
    return matrix_to_json(matrix).dump(2) + "\n";
}

PatternMatrix read_matrix_json(std::string_view text)
{
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw MatrixFormatError(e.what(), 1);
    }
    return matrix_from_json(j);
}

PatternMatrix load_matrix(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error(fmt::format("cannot read {}", path.string()));
    std::ostringstream ss;
    ss << in.rdbuf();
    std::string text = ss.str();
    auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '{')
        return read_matrix_json(text);
    return read_matrix_csv(text);
}

}  // namespace micropat
