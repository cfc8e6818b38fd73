/*
   Copyright 2026 The rotasde Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#pragma once

#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace rotasde::runner {

/// Shortest round-trip form with at most 17 significant digits (std::to_chars, general).
std::string format_double(double v);

/// Line-oriented CSV file. Fields are written verbatim; callers format numbers with
/// format_double. Throws IoError when the file cannot be opened or a write fails.
class CsvWriter {
public:
    CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header);

    CsvWriter& field(std::string_view text);
    CsvWriter& field(double v) { return field(format_double(v)); }
    CsvWriter& field(long long v) { return field(std::to_string(v)); }
    CsvWriter& field(unsigned long long v) { return field(std::to_string(v)); }
    void end_row();
    void close();

    const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
    std::ofstream out_;
    std::string line_;
    bool first_ = true;
};

void write_json_file(const std::filesystem::path& path, const nlohmann::json& doc);

/// Lower-case hex SHA-256 of the file contents.
std::string sha256_file(const std::filesystem::path& path);

}  // namespace rotasde::runner
