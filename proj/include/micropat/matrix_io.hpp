#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "micropat/detectors.hpp"

namespace micropat {

class MatrixFormatError : public std::runtime_error {
public:
    MatrixFormatError(const std::string& what, std::size_t line)
        : std::runtime_error(what), line_(line)
    {
    }
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

// `name,file_path,compiler_version,kind,Ownable,...,Muted`
std::string matrix_csv_header();

// 0/1 cells; skipped rows carry "-" in every pattern cell. LF line endings,
// RFC 4180 quoting where needed.
std::string write_matrix_csv(const PatternMatrix& matrix);
PatternMatrix read_matrix_csv(std::string_view text);

nlohmann::ordered_json matrix_to_json(const PatternMatrix& matrix);
PatternMatrix matrix_from_json(const nlohmann::json& j);
std::string write_matrix_json(const PatternMatrix& matrix);
PatternMatrix read_matrix_json(std::string_view text);

// Reads either format; JSON is recognized by a leading '{'.
PatternMatrix load_matrix(const std::filesystem::path& path);

}  // namespace micropat
