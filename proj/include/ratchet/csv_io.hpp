#pragma once

#include <cstdint>
#include <fstream>
#include <string>
#include <utility>
#include <vector>

#include "ratchet/params.hpp"

namespace ratchet {

// %.17g -- round-trips doubles exactly and is platform-stable.
std::string format_g17(double v);

// Flat `key = value` text; doubles as both run manifest and config format.
class Manifest {
  public:
    void set(const std::string& key, const std::string& value);
    void set(const std::string& key, const char* value);
    void set(const std::string& key, double value);
    void set(const std::string& key, long long value);
    void set(const std::string& key, std::uint64_t value);
    // params, seed, RNG algorithm name and tool version, the fields every
    // artifact must carry.
    void set_common(const RatchetParams& p, std::uint64_t seed);

    const std::vector<std::pair<std::string, std::string>>& entries() const {
        return entries_;
    }
    std::string text() const;
    void write(const std::string& path) const;

  private:
    std::vector<std::pair<std::string, std::string>> entries_;
};

// CSV writer: comma separators, single header row, LF endings, reals at 17
// significant digits. Optionally embeds a manifest reference as a leading
// `# manifest = <path>` comment line.
class CsvWriter {
  public:
    explicit CsvWriter(const std::string& path, const std::string& manifest_ref = "");

    void header(const std::vector<std::string>& cols);

    CsvWriter& field(double v);
    CsvWriter& field(long long v);
    CsvWriter& field(std::uint64_t v);
    CsvWriter& field(const std::string& v);
    void end_row();

  private:
    std::ofstream out_;
    bool row_started_ = false;
};

struct CsvTable {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;  // numeric view; non-numeric -> NaN

    int column_index(const std::string& name) const;  // -1 if absent
    std::vector<double> column(const std::string& name) const;
};

CsvTable read_csv(const std::string& path);

}  // namespace ratchet
