#pragma once

#include <cstdint>
#include <map>
#include <mutex>
#include <string>

namespace ppxgb {

// Structured event logger with a deliberately narrow surface: events carry
// only short identifiers and numeric metadata. Query contents, feature
// names, thresholds and ciphertext material never reach a log line; the
// leakage profile is an enumerated surface and logs must not widen it.
class Logger {
public:
    // Empty path logs to stderr; "off" disables output entirely.
    explicit Logger(std::string path = "");
    ~Logger();

    void event(const std::string& name, const std::map<std::string, std::string>& fields = {});
    void event(const std::string& name, const std::map<std::string, int64_t>& fields);

private:
    void write_line(const std::string& line);

    std::mutex mu_;
    std::string path_;
    void* file_ = nullptr;  // FILE*, kept opaque here
};

// Identifiers appearing in logs are clamped to a short, filesystem-safe
// alphabet; anything else is replaced so arbitrary strings cannot smuggle
// payloads into log lines.
std::string sanitize_log_id(const std::string& raw);

}  // namespace ppxgb
