#ifndef DECOH_CSVIO_HPP
#define DECOH_CSVIO_HPP

#include <charconv>
#include <cmath>
#include <fstream>
#include <string>
#include <system_error>
#include <vector>

#include "errors.hpp"

namespace decoh {

// Shortest decimal string that round-trips the exact double. Locale-free and
// platform-stable, so identical inputs give byte-identical files.
inline std::string format_double(double v) {
    if (!std::isfinite(v))
        throw Error("refusing to write non-finite value to output");
    if (v == 0.0) v = 0.0; // normalize -0
    char buf[32];
    const std::to_chars_result res = std::to_chars(buf, buf + sizeof buf, v);
    if (res.ec != std::errc())
        throw Error("number formatting failed");
    return std::string(buf, res.ptr);
}

class CsvWriter {
public:
    explicit CsvWriter(const std::string& path)
        : m_out(path, std::ios::binary | std::ios::trunc) {
        if (!m_out) throw Error("cannot open output file: " + path);
    }

    void header(const std::vector<std::string>& names) {
        for (std::size_t i = 0; i < names.size(); ++i) {
            if (i) m_out << ',';
            m_out << names[i];
        }
        m_out << '\n';
    }

    void row(const std::vector<double>& values) {
        for (std::size_t i = 0; i < values.size(); ++i) {
            if (i) m_out << ',';
            m_out << format_double(values[i]);
        }
        m_out << '\n';
    }

    void close() {
        m_out.close();
        if (m_out.fail()) throw Error("failed writing output file");
    }

private:
    std::ofstream m_out;
};

} // namespace decoh

#endif
