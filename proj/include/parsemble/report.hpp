// Report assembly: CSV bodies behind a '#'-prefixed manifest header that
// echoes the run configuration and input fingerprints, with no timestamps, so
// identical inputs and configuration produce byte-identical files.

#ifndef PARSEMBLE_REPORT_HPP
#define PARSEMBLE_REPORT_HPP

#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include "parsemble/util.hpp"

namespace parsemble {

inline constexpr const char* kToolName = "parsemble";
inline constexpr const char* kToolVersion = "0.1.0";

// Quotes a CSV field when it holds a delimiter, quote, or newline.
inline std::string csv_field(const std::string& value) {
    if (value.find_first_of(",\"\n\r") == std::string::npos) return value;
    std::string out = "\"";
    for (char c : value) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

inline std::string format_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

class Report {
public:
    Report() { note("tool", std::string(kToolName) + " " + kToolVersion); }

    void note(const std::string& key, const std::string& value) {
        manifest_.push_back("# " + key + ": " + value);
    }
    void note(const std::string& key, long long value) {
        note(key, std::to_string(value));
    }
    // Fingerprints an input file's content so reruns are comparable.
    void note_input(const std::string& key, const std::string& path,
                    const std::string& content) {
        char sum[32];
        std::snprintf(sum, sizeof(sum), "%016llx",
                      static_cast<unsigned long long>(fnv1a64(content)));
        note(key, path + " fnv1a64=" + sum);
    }

    void row(const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) body_ += ',';
            body_ += csv_field(cells[i]);
        }
        body_ += '\n';
    }

    std::string str() const {
        std::string out;
        for (const std::string& line : manifest_) {
            out += line;
            out += '\n';
        }
        out += body_;
        return out;
    }

private:
    std::vector<std::string> manifest_;
    std::string body_;
};

}  // namespace parsemble

#endif  // PARSEMBLE_REPORT_HPP
