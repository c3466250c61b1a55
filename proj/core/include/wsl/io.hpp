#pragma once

#include <string>
#include <vector>

namespace wsl::io {

/// Fixed-format float text (%.12g, C locale) so identical runs produce
/// identical bytes.
std::string fmt(double v);

class CsvWriter {
  public:
    explicit CsvWriter(std::vector<std::string> header);
    void row(const std::vector<std::string>& cells);
    const std::string& text() const { return text_; }

  private:
    std::string text_;
    std::size_t columns_;
};

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);
void write_bytes(const std::string& path, const std::vector<unsigned char>& bytes);
void ensure_dir(const std::string& path);

std::string sha256_hex(const std::string& data);

/// {"config_sha256", "tool_version", "started", "elapsed_s", "files": [...]}
std::string manifest_json(const std::string& config_text, const std::string& started_iso,
                          double elapsed_s, const std::vector<std::string>& files);

std::string now_iso8601();

} // namespace wsl::io
