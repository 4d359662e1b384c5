#include "ppxgb/log.hpp"

#include <chrono>
#include <cstdio>

#include "ppxgb/errors.hpp"

namespace ppxgb {

std::string sanitize_log_id(const std::string& raw) {
    std::string out;
    const std::size_t limit = raw.size() < 24 ? raw.size() : 24;
    for (std::size_t i = 0; i < limit; ++i) {
        const char c = raw[i];
        const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                        (c >= '0' && c <= '9') || c == '-' || c == '_';
        out.push_back(ok ? c : '?');
    }
    if (raw.size() > limit) out += "~";
    return out;
}

Logger::Logger(std::string path) : path_(std::move(path)) {
    if (path_.empty() || path_ == "off") return;
    FILE* f = std::fopen(path_.c_str(), "a");
    if (!f) throw IoError("cannot open log file: " + path_);
    file_ = f;
}

Logger::~Logger() {
    if (file_) std::fclose(static_cast<FILE*>(file_));
}

void Logger::write_line(const std::string& line) {
    std::lock_guard<std::mutex> lock(mu_);
    if (path_ == "off") return;
    FILE* f = file_ ? static_cast<FILE*>(file_) : stderr;
    std::fputs(line.c_str(), f);
    std::fputc('\n', f);
    std::fflush(f);
}

void Logger::event(const std::string& name, const std::map<std::string, std::string>& fields) {
    const auto now = std::chrono::system_clock::now().time_since_epoch();
    const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(now).count();
    std::string line = "ts=" + std::to_string(ms) + " event=" + sanitize_log_id(name);
    for (const auto& [k, v] : fields)
        line += " " + sanitize_log_id(k) + "=" + sanitize_log_id(v);
    write_line(line);
}

void Logger::event(const std::string& name, const std::map<std::string, int64_t>& fields) {
    std::map<std::string, std::string> text;
    for (const auto& [k, v] : fields) text[k] = std::to_string(v);
    event(name, text);
}

}  // namespace ppxgb
