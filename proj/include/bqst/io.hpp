#pragma once

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace bqst {

/// Shortest decimal representation that parses back to the same double,
/// capped at 12 significant digits. Keeps emitted files byte-stable across
/// runs and platforms while exceeding every acceptance tolerance.
inline std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (v == 0.0) return "0";
    char buf[40];
    for (int prec = 1; prec <= 12; ++prec) {
        std::snprintf(buf, sizeof buf, "%.*g", prec, v);
        if (std::strtod(buf, nullptr) == v) return buf;
    }
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

/// CSV with a header row, LF line endings, and '#' comment lines for run
/// metadata.
class CsvWriter {
public:
    explicit CsvWriter(std::ostream& os) : os_(os) {}

    void comment(std::string_view text) { os_ << "# " << text << "\n"; }
    void row(const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) os_ << ',';
            os_ << cells[i];
        }
        os_ << '\n';
    }

private:
    std::ostream& os_;
};

/// Minimal streaming JSON emitter. Key order follows call order and numbers
/// go through format_double, so output is deterministic byte for byte.
class JsonWriter {
public:
    explicit JsonWriter(std::ostream& os) : os_(os) {}

    JsonWriter& begin_object() {
        separate();
        os_ << '{';
        fresh_.push_back(true);
        return *this;
    }
    JsonWriter& end_object() {
        os_ << '}';
        fresh_.pop_back();
        return *this;
    }
    JsonWriter& begin_array() {
        separate();
        os_ << '[';
        fresh_.push_back(true);
        return *this;
    }
    JsonWriter& end_array() {
        os_ << ']';
        fresh_.pop_back();
        return *this;
    }
    JsonWriter& key(std::string_view k) {
        separate();
        write_string(k);
        os_ << ':';
        after_key_ = true;
        return *this;
    }
    JsonWriter& value(double v) {
        separate();
        os_ << (std::isfinite(v) ? format_double(v) : "null");
        return *this;
    }
    JsonWriter& value(long long v) {
        separate();
        os_ << v;
        return *this;
    }
    JsonWriter& value(int v) { return value(static_cast<long long>(v)); }
    JsonWriter& value(bool v) {
        separate();
        os_ << (v ? "true" : "false");
        return *this;
    }
    JsonWriter& value(std::string_view s) {
        separate();
        write_string(s);
        return *this;
    }
    JsonWriter& value(const char* s) { return value(std::string_view(s)); }

private:
    void separate() {
        if (after_key_) {
            after_key_ = false;
            return;
        }
        if (!fresh_.empty()) {
            if (!fresh_.back()) os_ << ',';
            fresh_.back() = false;
        }
    }
    void write_string(std::string_view s) {
        os_ << '"';
        for (char c : s) {
            switch (c) {
                case '"': os_ << "\\\""; break;
                case '\\': os_ << "\\\\"; break;
                case '\n': os_ << "\\n"; break;
                case '\t': os_ << "\\t"; break;
                case '\r': os_ << "\\r"; break;
                default:
                    if (static_cast<unsigned char>(c) < 0x20) {
                        char esc[8];
                        std::snprintf(esc, sizeof esc, "\\u%04x", c);
                        os_ << esc;
                    } else {
                        os_ << c;
                    }
            }
        }
        os_ << '"';
    }

    std::ostream& os_;
    std::vector<bool> fresh_;
    bool after_key_ = false;
};

}  // namespace bqst
