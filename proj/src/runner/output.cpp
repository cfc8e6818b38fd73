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

#include <array>
#include <charconv>
#include <cstdio>

#include <openssl/evp.h>

#include "rotasde/errors.hpp"
#include "rotasde/runner/output.hpp"

namespace rotasde::runner {

std::string format_double(double v)
{
    std::array<char, 32> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v,
                                   std::chars_format::general, 17);
    return std::string(buf.data(), res.ptr);
}

CsvWriter::CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header)
    : path_(path), out_(path, std::ios::binary | std::ios::trunc)
{
    if (!out_) {
        throw IoError("cannot open '" + path.string() + "' for writing");
    }
    for (const auto& h : header) {
        field(h);
    }
    end_row();
}

CsvWriter& CsvWriter::field(std::string_view text)
{
    if (!first_) {
        line_.push_back(',');
    }
    line_.append(text);
    first_ = false;
    return *this;
}

void CsvWriter::end_row()
{
    line_.push_back('\n');
    out_ << line_;
    if (!out_) {
        throw IoError("write to '" + path_.string() + "' failed");
    }
    line_.clear();
    first_ = true;
}

void CsvWriter::close()
{
    out_.close();
    if (out_.fail()) {
        throw IoError("closing '" + path_.string() + "' failed");
    }
}

void write_json_file(const std::filesystem::path& path, const nlohmann::json& doc)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot open '" + path.string() + "' for writing");
    }
    out << doc.dump(2) << '\n';
    out.close();
    if (out.fail()) {
        throw IoError("write to '" + path.string() + "' failed");
    }
}

std::string sha256_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot read '" + path.string() + "'");
    }
    EVP_MD_CTX* ctx = EVP_MD_CTX_new();
    if (ctx == nullptr || EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr) != 1) {
        EVP_MD_CTX_free(ctx);
        throw IoError("SHA-256 initialisation failed");
    }
    std::array<char, 1 << 16> buf{};
    while (in) {
        in.read(buf.data(), static_cast<std::streamsize>(buf.size()));
        if (in.gcount() > 0) {
            EVP_DigestUpdate(ctx, buf.data(), static_cast<std::size_t>(in.gcount()));
        }
    }
    std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
    unsigned int len = 0;
    EVP_DigestFinal_ex(ctx, digest.data(), &len);
    EVP_MD_CTX_free(ctx);

    std::string hex;
    hex.reserve(2 * len);
    for (unsigned int i = 0; i < len; ++i) {
        std::array<char, 3> b{};
        std::snprintf(b.data(), b.size(), "%02x", digest[i]);
        hex.append(b.data(), 2);
    }
    return hex;
}

}  // namespace rotasde::runner
