#pragma once
#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

namespace spindle {

/// CSV emission with 17 significant digits (round-trip exact for doubles).
class CsvWriter {
public:
    explicit CsvWriter(std::ostream& out) : out_(out) {}

    void header(const std::vector<std::string>& cols) {
        for (std::size_t i = 0; i < cols.size(); ++i) {
            if (i) out_ << ',';
            out_ << cols[i];
        }
        out_ << '\n';
    }

    void field(double v) {
        sep();
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", v);
        out_ << buf;
    }
    void field(long v) { sep(); out_ << v; }
    void field(int v) { sep(); out_ << v; }
    void field(bool v) { sep(); out_ << (v ? 1 : 0); }
    void field(const std::string& v) { sep(); out_ << v; }

    void end_row() {
        out_ << '\n';
        first_ = true;
    }

    template <typename... Ts>
    void row(const Ts&... vs) {
        (field(vs), ...);
        end_row();
    }

private:
    void sep() {
        if (!first_) out_ << ',';
        first_ = false;
    }
    std::ostream& out_;
    bool first_ = true;
};

}  // namespace spindle
